#pragma once

#include "bfz/pipeline.hpp"

namespace bfz {

struct GlueResult {
    Quiver quiver;
    std::map<int, int> bottom_renaming; // bottom indices -> glued indices
    std::map<int, int> top_renaming;    // top indices -> glued indices
};

// Glue the quiver of (e, v) on top of the quiver of (u, e): on each string
// the top frozen vertex of the bottom quiver is identified with the prefix
// vertex of the top quiver.  Both inputs carry their completion arrows;
// between identified vertices, equal arrows merge and opposite arrows cancel.
// The result is indexed like the direct quiver of the concatenated word.
inline GlueResult glue(const Build& bottom, const Build& top) {
    if (bottom.graph.edges() != top.graph.edges() || bottom.graph.rank() != top.graph.rank())
        throw InvalidInput("graph_mismatch", "glue requires the same graph on both sides");
    if (!bottom.word.v().empty())
        throw InvalidInput("bad_spec", "bottom quiver of a gluing must have v = e");
    if (!top.word.u().empty())
        throw InvalidInput("bad_spec", "top quiver of a gluing must have u = e");

    int r = bottom.graph.rank();
    int nu = bottom.word.shuffle_length();
    GlueResult res;
    for (int k : bottom.word.all_indices()) res.bottom_renaming[k] = k;
    // Top prefix vertex -a lands on the bottom's top vertex of string a;
    // top shuffle position j becomes nu + j.
    for (int a = 1; a <= r; ++a) {
        const auto& sa = bottom.embedding.strings.at(a);
        res.top_renaming[-a] = sa.back();
    }
    for (int j = 1; j <= top.word.shuffle_length(); ++j) res.top_renaming[j] = nu + j;

    Quiver& q = res.quiver;
    for (const auto& [k, rec] : bottom.completed.vertices) q.vertices[k] = rec;
    for (const auto& [k, rec] : top.completed.vertices) {
        int nk = res.top_renaming.at(k);
        if (q.vertices.count(nk)) continue; // identified vertex, keep bottom record
        QuiverVertex nr = rec;
        nr.k = nk;
        nr.level = nu + rec.level; // shuffle levels continue above the bottom
        q.vertices[nk] = nr;
    }
    // Identified layer: image of the top prefix.
    std::set<int> seam;
    for (int a = 1; a <= r; ++a) seam.insert(res.top_renaming.at(-a));

    for (const auto& [st, m] : bottom.completed.arrows) q.arrows[st] += m;
    for (const auto& [st, m] : top.completed.arrows) {
        std::pair<int, int> nst{res.top_renaming.at(st.first), res.top_renaming.at(st.second)};
        q.arrows[nst] += m;
    }
    // Merge or cancel between identified vertices.
    for (int x : seam)
        for (int y : seam) {
            if (x >= y) continue;
            int fwd = q.multiplicity(x, y), bwd = q.multiplicity(y, x);
            q.arrows.erase({x, y});
            q.arrows.erase({y, x});
            if (fwd > 0 && bwd > 0) continue;       // opposite directions cancel
            if (fwd > 0) q.arrows[{x, y}] = 1;      // parallel copies merge
            if (bwd > 0) q.arrows[{y, x}] = 1;
        }
    // Frozen flags: ends of each glued string are frozen, the rest mutable.
    std::map<int, std::vector<int>> strings;
    for (const auto& [k, rec] : q.vertices) strings[rec.letter].push_back(k);
    for (auto& [letter, verts] : strings) {
        std::sort(verts.begin(), verts.end(),
                  [&](int x, int y) { return q.vertices.at(x).level < q.vertices.at(y).level; });
        for (size_t i = 0; i < verts.size(); ++i)
            q.vertices.at(verts[i]).frozen = (i == 0 || i + 1 == verts.size());
    }
    return res;
}

// Direct construction of the same object: the all-u-then-all-v shuffle.
inline Build direct_for_glue(const LabeledGraph& g, const Word& u, const Word& v,
                             SignConvention sc = SignConvention::example) {
    return build_quiver(g, u, v, {}, sc);
}

} // namespace bfz
