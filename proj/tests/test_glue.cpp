#include <doctest.h>

#include "bfz/glue.hpp"

using namespace bfz;

namespace {

LabeledGraph path_graph(int r) {
    std::vector<int> vs;
    std::vector<Edge> es;
    for (int i = 1; i <= r; ++i) vs.push_back(i);
    for (int i = 1; i < r; ++i) es.push_back({i, i + 1});
    return LabeledGraph(vs, es);
}

LabeledGraph d4_star() { return LabeledGraph({1, 2, 3, 4}, {{1, 3}, {2, 3}, {4, 3}}); }

std::set<std::pair<int, int>> arrow_set(const Quiver& q) {
    std::set<std::pair<int, int>> out;
    for (const auto& [st, m] : q.arrows) out.insert(st);
    return out;
}

} // namespace

TEST_CASE("published gluing example on A3") {
    auto a3 = path_graph(3);
    Word u{1, 2, 1, 3}, v{2, 3, 2, 1};
    auto bottom = build_quiver(a3, u, {});
    auto top = build_quiver(a3, {}, v);

    // The two halves match their published drawings.
    CHECK(arrow_set(bottom.completed) ==
          std::set<std::pair<int, int>>{{-1, 1}, {1, 3}, {-2, 2}, {-3, 4}, {1, -2}, {2, 1},
                                        {2, -3}, {-2, -1}, {3, 2}, {-3, -2}, {4, 2}});
    CHECK(arrow_set(top.completed) ==
          std::set<std::pair<int, int>>{{1, -2}, {3, 1}, {4, -1}, {2, -3}, {-1, 3}, {1, 2},
                                        {-3, 1}, {-2, -1}, {3, 4}, {-2, -3}, {2, 3}});

    auto glued = glue(bottom, top);
    auto direct = build_quiver(a3, u, v);
    CHECK(glued.quiver == direct.completed);

    // Frozen drawing of the glued quiver, 18 arrows.
    std::set<std::pair<int, int>> fig{{-1, 1}, {1, 3},  {-2, 2}, {8, 3},  {5, 2},  {7, 5},
                                      {3, 7},  {7, 8},  {1, -2}, {2, 1},  {-2, -1}, {-3, 4},
                                      {6, 4},  {2, -3}, {-3, -2}, {4, 5}, {5, 6},  {6, 7}};
    CHECK(arrow_set(glued.quiver) == fig);

    // Renaming map: top prefix lands on the bottom's string tops.
    CHECK(glued.top_renaming.at(-1) == 3);
    CHECK(glued.top_renaming.at(-2) == 2);
    CHECK(glued.top_renaming.at(-3) == 4);
    CHECK(glued.top_renaming.at(1) == 5);
}

TEST_CASE("gluing with the empty word is the identity") {
    auto a3 = path_graph(3);
    Word u{3, 2, 1, 2, 3};
    auto bottom = build_quiver(a3, u, {});
    auto top = build_quiver(a3, {}, {});
    auto glued = glue(bottom, top);
    CHECK(glued.quiver == bottom.completed);

    auto bottom_e = build_quiver(a3, {}, {});
    auto top_v = build_quiver(a3, {}, u);
    auto glued2 = glue(bottom_e, top_v);
    CHECK(glued2.quiver == top_v.completed);
}

TEST_CASE("graph mismatch is rejected") {
    auto bottom = build_quiver(path_graph(3), {1}, {});
    auto top = build_quiver(path_graph(2), {}, {1});
    CHECK_THROWS_AS(glue(bottom, top), InvalidInput);
}

TEST_CASE("letters missing from one side still glue correctly") {
    auto a2 = path_graph(2);
    // Degenerate cases worked out by hand.
    for (auto [u, v] : std::vector<std::pair<Word, Word>>{
             {{1}, {1, 2}}, {{1}, {2}}, {{1, 2}, {1}}, {{2}, {2}}, {{1}, {1}}, {{}, {1, 2}}}) {
        auto glued = glue(build_quiver(a2, u, {}), build_quiver(a2, {}, v));
        auto direct = build_quiver(a2, u, v);
        CAPTURE(u);
        CAPTURE(v);
        CHECK(glued.quiver == direct.completed);
    }
}

TEST_CASE("randomized gluing oracle on A3 and D4") {
    auto a3 = path_graph(3);
    auto d4 = d4_star();
    std::mt19937_64 rng(4242);
    for (int iter = 0; iter < 60; ++iter) {
        const LabeledGraph& g = (iter % 2 == 0) ? a3 : d4;
        CartanData c(g);
        Word u = random_reduced_word(g, c, 5, rng);
        Word v = random_reduced_word(g, c, 5, rng);
        auto glued = glue(build_quiver(g, u, {}), build_quiver(g, {}, v));
        auto direct = build_quiver(g, u, v);
        CAPTURE(u);
        CAPTURE(v);
        CHECK(glued.quiver == direct.completed);
        // Identical quivers carry identical face multisets.
        auto glued_emb = embed(glued.quiver, g, direct.decomp);
        auto glued_faces = faces(glued.quiver, glued_emb);
        std::multiset<std::vector<int>> fg, fd;
        for (const auto& f : glued_faces) fg.insert(f.vertex_cycle);
        for (const auto& f : direct.face_list) fd.insert(f.vertex_cycle);
        CHECK(fg == fd);
    }
}

TEST_CASE("one-sided quivers: opposite and reversal isomorphisms") {
    auto a3 = path_graph(3);
    auto d4 = d4_star();
    std::mt19937_64 rng(7);
    for (int iter = 0; iter < 30; ++iter) {
        const LabeledGraph& g = (iter % 2 == 0) ? a3 : d4;
        CartanData c(g);
        Word v = random_reduced_word(g, c, 6, rng);
        auto ev = build_quiver(g, {}, v);
        auto ve = build_quiver(g, v, {});
        // Same word on the other side reverses every arrow.
        CHECK(opposite(ev.completed) == ve.completed);

        // Flipping the cylinder upside down sends (e, v) to (reverse(v), e):
        // each string reverses, so vertex j of the chain maps to the mirror
        // position of the reversed-word quiver.
        Word rv(v.rbegin(), v.rend());
        auto rev = build_quiver(g, rv, {});
        std::map<int, int> phi;
        int n = static_cast<int>(v.size());
        for (int a = 1; a <= g.rank(); ++a) phi[-a] = rev.embedding.strings.at(a).back();
        for (int j = 1; j <= n; ++j) {
            // Position j in v is position n+1-j in reverse(v).
            phi[j] = n + 1 - j;
        }
        // The mirror must send the prefix of (e,v) to the top of each string
        // of (reverse(v), e); shuffle positions map through n+1-j, except
        // that the top of each string in (e,v) maps to the prefix.
        for (int a = 1; a <= g.rank(); ++a) {
            const auto& sv = ev.embedding.strings.at(a);
            const auto& sr = rev.embedding.strings.at(a);
            REQUIRE(sv.size() == sr.size());
            for (size_t i = 0; i < sv.size(); ++i)
                phi[sv[i]] = sr[sr.size() - 1 - i];
        }
        CHECK(rename_vertices(ev.completed, phi) == rev.completed);
    }
}
