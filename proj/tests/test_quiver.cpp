#include <doctest.h>

#include <fstream>

#include "bfz/pipeline.hpp"

using namespace bfz;

namespace {

LabeledGraph path_graph(int r) {
    std::vector<int> vs;
    std::vector<Edge> es;
    for (int i = 1; i <= r; ++i) vs.push_back(i);
    for (int i = 1; i < r; ++i) es.push_back({i, i + 1});
    return LabeledGraph(vs, es);
}

std::set<std::pair<int, int>> arrow_set(const Quiver& q) {
    std::set<std::pair<int, int>> out;
    for (const auto& [st, m] : q.arrows) out.insert(st);
    return out;
}

} // namespace

TEST_CASE("exchange matrix golden: SL4 example") {
    auto a3 = path_graph(3);
    CartanData c(a3);
    auto w = shuffle(a3, c, {3, 2, 1, 2, 3}, {});
    auto s = successor_map(w);
    auto m = exchange_matrix(w, s, c);

    CHECK(m.row_labels == std::vector<int>{-3, -2, -1, 1, 2, 3, 4, 5});
    CHECK(m.col_labels == std::vector<int>{1, 2});
    std::vector<int> col1, col2;
    for (const auto& row : m.entries) {
        col1.push_back(row[0]);
        col2.push_back(row[1]);
    }
    CHECK(col1 == std::vector<int>{1, -1, 0, 0, 0, 0, 1, -1});
    CHECK(col2 == std::vector<int>{0, 1, -1, 0, 0, 1, -1, 0});
}

TEST_CASE("exchange matrix trace golden") {
    auto a3 = path_graph(3);
    CartanData c(a3);
    auto w = shuffle(a3, c, {3, 2, 1, 2, 3}, {});
    auto s = successor_map(w);
    auto trace = format_trace(exchange_matrix_trace(w, s, c));

    std::ifstream in(std::string(BFZ_TEST_DATA_DIR) + "/sl4_trace.csv");
    REQUIRE(in.good());
    std::string want((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(trace == want);
}

TEST_CASE("derived single-column example: A2 u=(1,2,1)") {
    auto a2 = path_graph(2);
    CartanData c(a2);
    auto w = shuffle(a2, c, {1, 2, 1}, {});
    auto s = successor_map(w);
    auto m = exchange_matrix(w, s, c);
    CHECK(m.col_labels == std::vector<int>{1});
    std::vector<int> col;
    for (const auto& row : m.entries) col.push_back(row[0]);
    CHECK(m.row_labels == std::vector<int>{-2, -1, 1, 2, 3});
    CHECK(col == std::vector<int>{-1, 1, 0, 1, -1});
}

TEST_CASE("empty words give an empty matrix and no arrows") {
    auto a3 = path_graph(3);
    CartanData c(a3);
    auto w = shuffle(a3, c, {}, {});
    auto s = successor_map(w);
    auto m = exchange_matrix(w, s, c);
    CHECK(m.col_labels.empty());
    auto q = quiver_direct(w, s, c);
    CHECK(q.arrows.empty());
    CHECK(q.vertices.size() == 3);
    for (const auto& [k, rec] : q.vertices) CHECK(rec.frozen);
}

TEST_CASE("direct construction golden: SL4 edge rules") {
    auto a3 = path_graph(3);
    CartanData c(a3);
    auto w = shuffle(a3, c, {3, 2, 1, 2, 3}, {});
    auto s = successor_map(w);
    auto q = quiver_direct(w, s, c);

    std::set<std::pair<int, int>> want{{-3, 1}, {-2, 2}, {1, 5}, {2, 4},
                                       {1, -2}, {4, 1}, {2, -1}, {3, 2}};
    CHECK(arrow_set(q) == want);
    CHECK_FALSE(q.vertices.at(1).frozen);
    CHECK_FALSE(q.vertices.at(2).frozen);
    for (int k : {-3, -2, -1, 3, 4, 5}) CHECK(q.vertices.at(k).frozen);
    // Levels: shuffle position for k >= 1, j-r-1 for prefix -j.
    CHECK(q.vertices.at(4).level == 4);
    CHECK(q.vertices.at(-3).level == -1);
    CHECK(q.vertices.at(-1).level == -3);
}

TEST_CASE("matrix and direct construction agree on randomized input") {
    auto a3 = path_graph(3);
    CartanData ca3(a3);
    LabeledGraph d4({1, 2, 3, 4}, {{1, 3}, {2, 3}, {4, 3}});
    CartanData cd4(d4);
    std::mt19937_64 rng(2024);

    auto check_one = [](const LabeledGraph&, const CartanData& c, const ShuffledWord& w) {
        auto s = successor_map(w);
        auto m = exchange_matrix(w, s, c);
        auto q = quiver_direct(w, s, c);
        // Every arrow with an exchangeable endpoint appears in the matrix with
        // matching sign and multiplicity, and vice versa.
        for (size_t i = 0; i < m.row_labels.size(); ++i)
            for (size_t j = 0; j < m.col_labels.size(); ++j) {
                int k = m.row_labels[i], l = m.col_labels[j];
                if (k == l) continue;
                int b = m.entries[i][j];
                CHECK(q.multiplicity(k, l) == (b > 0 ? b : 0));
                CHECK(q.multiplicity(l, k) == (b < 0 ? -b : 0));
            }
        for (const auto& [st, mult] : q.arrows) {
            int k = st.first, l = st.second;
            bool ke = s.exchangeable.count(k) > 0, le = s.exchangeable.count(l) > 0;
            CHECK((ke || le));
            if (le) CHECK(m.at(k, l) == mult);
            if (ke) CHECK(m.at(l, k) == -mult);
            // Only vertical or graph-adjacent connections occur.
            int a = w.letter(k), b2 = w.letter(l);
            CHECK((a == b2 || c.at(a, b2) < 0));
            CHECK(q.vertices.at(k).frozen == !ke);
        }
        // Skew-symmetry on e(i) x e(i).
        for (int k : s.exchangeable)
            for (int l : s.exchangeable) CHECK(m.at(k, l) == -m.at(l, k));
    };

    for (int iter = 0; iter < 60; ++iter) {
        for (auto gp : {std::pair<const LabeledGraph*, const CartanData*>{&a3, &ca3}, {&d4, &cd4}}) {
            Word u = random_reduced_word(*gp.first, *gp.second, 5, rng);
            Word v = random_reduced_word(*gp.first, *gp.second, 5, rng);
            auto w = shuffle(*gp.first, *gp.second, u, v,
                             random_pattern(u.size(), v.size(), rng));
            check_one(*gp.first, *gp.second, w);
        }
    }
}

TEST_CASE("strict-bfz convention is the opposite quiver") {
    auto a3 = path_graph(3);
    CartanData c(a3);
    Word u{1, 2, 1, 3}, v{2, 3, 2, 1};
    auto we = shuffle(a3, c, u, v);
    auto wb = shuffle(a3, c, u, v, {}, SignConvention::strict_bfz);
    auto se = successor_map(we), sb = successor_map(wb);
    CHECK(quiver_direct(wb, sb, c) == opposite(quiver_direct(we, se, c)));
}
