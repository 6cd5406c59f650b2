#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "bfz/quiver.hpp"

namespace bfz {

struct Placement {
    int string = 0; // graph vertex label the quiver vertex projects onto
    int level = 0;
};

enum class ArrowKind { vertical, inclined };

struct ArrowClass {
    ArrowKind kind = ArrowKind::vertical;
    int string = 0;     // for vertical arrows
    Edge edge{0, 0};    // for inclined arrows: the graph edge below
    int branch = -1;    // sheet index (branch), -1 for verticals
};

struct StripInfo {
    Edge edge{0, 0}; // normalized (a < b)
    int branch = -1; // sheet containing this strip
    int xa = 0, xb = 0; // positions of the two strings along the branch
};

// Placement of a quiver on the cylinder: strings carry the vertices,
// vertical arrows live on strings, inclined arrows on strips (edges).
struct Embedding {
    std::map<int, Placement> placement;
    std::map<std::pair<int, int>, ArrowClass> classification;
    std::map<int, std::vector<int>> strings; // letter -> vertices, bottom to top
    std::vector<StripInfo> strips;           // one per graph edge
};

inline Embedding embed(const Quiver& q, const LabeledGraph& g, const BranchDecomposition& d) {
    Embedding e;
    for (const auto& [k, rec] : q.vertices) {
        e.placement[k] = Placement{rec.letter, rec.level};
        e.strings[rec.letter].push_back(k);
    }
    for (int a = 1; a <= g.rank(); ++a) e.strings[a]; // degenerate strings still exist
    for (auto& [letter, verts] : e.strings)
        std::sort(verts.begin(), verts.end(), [&](int x, int y) {
            return q.vertices.at(x).level < q.vertices.at(y).level;
        });
    for (const auto& [st, mult] : q.arrows) {
        int la = q.vertices.at(st.first).letter;
        int lb = q.vertices.at(st.second).letter;
        ArrowClass ac;
        if (la == lb) {
            ac.kind = ArrowKind::vertical;
            ac.string = la;
        } else {
            if (!g.has_edge(la, lb))
                throw InternalError("arrow projects onto a non-edge of the graph");
            ac.kind = ArrowKind::inclined;
            ac.edge = make_edge(la, lb);
            ac.branch = branch_of_edge(d, ac.edge);
        }
        e.classification[st] = ac;
    }
    for (const Edge& ge : g.edges()) {
        StripInfo si;
        si.edge = ge;
        si.branch = branch_of_edge(d, ge);
        const auto& path = d.branches[si.branch].path;
        for (size_t i = 0; i < path.size(); ++i) {
            if (path[i] == ge.first) si.xa = static_cast<int>(i);
            if (path[i] == ge.second) si.xb = static_cast<int>(i);
        }
        e.strips.push_back(si);
    }
    std::sort(e.strips.begin(), e.strips.end(),
              [](const StripInfo& x, const StripInfo& y) { return x.edge < y.edge; });
    return e;
}

namespace detail {

// Inclined arrows of a strip as unordered endpoint pairs (va on string a,
// vb on string b), sorted bottom to top.  Planarity makes this a total
// order.  Corner arrows -- the ones joining the two bottom vertices or the
// two top vertices of the strip -- separate no regions and are skipped.
inline std::vector<std::pair<int, int>> strip_inclined(const Quiver& q, const Embedding& e,
                                                       const Edge& edge) {
    const auto& sa = e.strings.at(edge.first);
    const auto& sb = e.strings.at(edge.second);
    std::pair<int, int> bottoms{sa.front(), sb.front()};
    std::pair<int, int> tops{sa.back(), sb.back()};
    std::vector<std::pair<int, int>> out;
    for (const auto& [st, ac] : e.classification) {
        if (ac.kind != ArrowKind::inclined || ac.edge != edge) continue;
        int src = st.first, dst = st.second;
        int va = q.vertices.at(src).letter == edge.first ? src : dst;
        int vb = va == src ? dst : src;
        if (std::make_pair(va, vb) == bottoms || std::make_pair(va, vb) == tops) continue;
        out.push_back({va, vb});
    }
    auto level = [&](int k) { return q.vertices.at(k).level; };
    std::sort(out.begin(), out.end(), [&](const auto& x, const auto& y) {
        return std::make_pair(level(x.first), level(x.second)) <
               std::make_pair(level(y.first), level(y.second));
    });
    return out;
}

// A step of a region walk: unordered vertex pair plus the slot flag for a
// boundary edge that the completion may still have to provide.
struct WalkStep {
    int from = 0, to = 0;
    bool corner_slot = false;
};

// Boundary walk of the region between two separators of one strip.
// A separator is an inclined arrow or a (possibly missing) corner edge.
struct RegionWalk {
    std::vector<WalkStep> steps;
};

inline RegionWalk region_walk(const std::vector<int>& string_a, const std::vector<int>& string_b,
                              std::pair<int, int> low, std::pair<int, int> high, bool low_corner,
                              bool high_corner) {
    RegionWalk w;
    auto pos = [](const std::vector<int>& s, int v) {
        return static_cast<int>(std::find(s.begin(), s.end(), v) - s.begin());
    };
    int a0 = pos(string_a, low.first), a1 = pos(string_a, high.first);
    int b0 = pos(string_b, low.second), b1 = pos(string_b, high.second);
    for (int i = a0; i < a1; ++i) w.steps.push_back({string_a[i], string_a[i + 1], false});
    w.steps.push_back({high.first, high.second, high_corner});
    for (int i = b1; i > b0; --i) w.steps.push_back({string_b[i], string_b[i - 1], false});
    w.steps.push_back({low.second, low.first, low_corner});
    return w;
}

// Direction of the existing arrow along a step: +1 with the walk, -1 against,
// 0 when no arrow exists.
inline int step_direction(const Quiver& q, const WalkStep& s) {
    if (q.has_arrow(s.from, s.to)) return +1;
    if (q.has_arrow(s.to, s.from)) return -1;
    return 0;
}

} // namespace detail

// Adds the arrows between frozen vertices that complete the faces of each
// strip: the edge-rule arrows the exchangeability gate suppressed, plus one
// corner arrow closing the extreme region at each end of a strip.  Corner
// orientation is forced by the rest of the region boundary; strips where the
// boundary does not orient are left open and reported in `warnings`.
inline Quiver add_frozen_completion_arrows(const Quiver& q, const Embedding& e,
                                           const ShuffledWord& w, const SuccessorMap& s,
                                           const CartanData& c,
                                           std::vector<std::string>* warnings = nullptr) {
    Quiver out = q;
    auto warn = [&](const std::string& msg) {
        if (warnings) warnings->push_back(msg);
    };
    for (const auto& a : ungated_frozen_arrows(w, s, c)) out.add_arrow(a.first, a.second);

    for (const StripInfo& si : e.strips) {
        int a = si.edge.first, b = si.edge.second;
        const auto& sa = e.strings.at(a);
        const auto& sb = e.strings.at(b);
        if (sa.empty() || sb.empty()) continue;
        // Inclined arrows of this strip in `out` (which already holds the
        // formula part of the completion), classified by letters.  Corner
        // pairs are skipped so the pass is idempotent.
        std::vector<std::pair<int, int>> incl;
        for (const auto& [st, m] : out.arrows) {
            int la = out.vertices.at(st.first).letter, lb = out.vertices.at(st.second).letter;
            if (make_edge(la, lb) != si.edge || la == lb) continue;
            int va = la == a ? st.first : st.second;
            int vb = va == st.first ? st.second : st.first;
            if ((va == sa.front() && vb == sb.front()) || (va == sa.back() && vb == sb.back()))
                continue;
            incl.push_back({va, vb});
        }
        auto level = [&](int k) { return out.vertices.at(k).level; };
        std::sort(incl.begin(), incl.end(), [&](const auto& x, const auto& y) {
            return std::make_pair(level(x.first), level(x.second)) <
                   std::make_pair(level(y.first), level(y.second));
        });

        std::pair<int, int> bottoms{sa.front(), sb.front()};
        std::pair<int, int> tops{sa.back(), sb.back()};
        auto try_close = [&](const detail::RegionWalk& walk, const std::string& where) {
            int sigma = 0;
            bool consistent = true;
            for (const auto& st : walk.steps) {
                if (st.corner_slot) continue;
                int d = detail::step_direction(out, st);
                if (d == 0) throw InternalError("missing arrow on region boundary");
                if (sigma == 0) sigma = d;
                else if (sigma != d) consistent = false;
            }
            if (sigma == 0 || !consistent) {
                warn("completion ambiguous on strip " + std::to_string(a) + "-" +
                     std::to_string(b) + " (" + where + ")");
                return;
            }
            for (const auto& st : walk.steps)
                if (st.corner_slot) {
                    int from = sigma > 0 ? st.from : st.to;
                    int to = sigma > 0 ? st.to : st.from;
                    if (!out.has_arrow(from, to) && !out.has_arrow(to, from))
                        out.add_arrow(from, to);
                }
        };

        if (incl.empty()) {
            if (sa.size() <= 1 && sb.size() <= 1) continue; // nothing to bound a face
            detail::RegionWalk walk = detail::region_walk(sa, sb, bottoms, tops, true, true);
            try_close(walk, "whole strip");
            continue;
        }
        try_close(detail::region_walk(sa, sb, bottoms, incl.front(), true, false), "bottom");
        try_close(detail::region_walk(sa, sb, incl.back(), tops, false, true), "top");
    }
    return out;
}

// An oriented region of one strip.
struct Face {
    Edge sheet_edge{0, 0};              // graph edge the face projects onto
    int branch = -1;                    // sheet index
    std::vector<int> vertex_cycle;      // vertices in directed-cycle order
    std::vector<std::pair<int, int>> boundary; // arrows in the same order
    bool oriented = false;
    int orientation = 0; // +1 anticlockwise, -1 clockwise (signed area), 0 if unoriented
};

namespace detail {

// Signed doubled area of the placed polygon; x = string position along the
// branch, y = level.
inline long polygon_area2(const Quiver& q, const StripInfo& si, const std::vector<int>& cycle) {
    long area2 = 0;
    auto coord = [&](int k) -> std::pair<long, long> {
        int letter = q.vertices.at(k).letter;
        long x = letter == si.edge.first ? si.xa : si.xb;
        return {x, q.vertices.at(k).level};
    };
    for (size_t i = 0; i < cycle.size(); ++i) {
        auto [x1, y1] = coord(cycle[i]);
        auto [x2, y2] = coord(cycle[(i + 1) % cycle.size()]);
        area2 += x1 * y2 - x2 * y1;
    }
    return area2;
}

inline std::optional<Face> region_to_face(const Quiver& q, const StripInfo& si,
                                          const RegionWalk& walk) {
    // Every step must carry an arrow; corner slots that stayed open mean the
    // region is unbounded and is not a face.
    std::vector<int> dirs;
    for (const auto& st : walk.steps) {
        int d = step_direction(q, st);
        if (d == 0) return std::nullopt;
        dirs.push_back(d);
    }
    Face f;
    f.sheet_edge = si.edge;
    f.branch = si.branch;
    bool all_fwd = std::all_of(dirs.begin(), dirs.end(), [](int d) { return d > 0; });
    bool all_bwd = std::all_of(dirs.begin(), dirs.end(), [](int d) { return d < 0; });
    f.oriented = all_fwd || all_bwd;
    std::vector<int> order;
    for (const auto& st : walk.steps) order.push_back(st.from);
    if (f.oriented && all_bwd) std::reverse(order.begin(), order.end());
    f.vertex_cycle = order;
    for (size_t i = 0; i < order.size(); ++i) {
        int x = order[i], y = order[(i + 1) % order.size()];
        f.boundary.push_back(q.has_arrow(x, y) ? std::make_pair(x, y) : std::make_pair(y, x));
    }
    if (f.oriented) {
        long a2 = polygon_area2(q, si, f.vertex_cycle);
        f.orientation = a2 > 0 ? +1 : (a2 < 0 ? -1 : 0);
    }
    return f;
}

} // namespace detail

// Pairwise segment-crossing test for the inclined arrows of each strip.
// Returns the first offending pair if any.
inline bool check_planarity_per_sheet(const Quiver& q, const Embedding& e,
                                      std::pair<std::pair<int, int>, std::pair<int, int>>* witness
                                      = nullptr) {
    for (const StripInfo& si : e.strips) {
        std::vector<std::pair<int, int>> incl; // (va, vb) with va on edge.first
        for (const auto& [st, ac] : e.classification) {
            if (ac.kind != ArrowKind::inclined || ac.edge != si.edge) continue;
            int va = q.vertices.at(st.first).letter == si.edge.first ? st.first : st.second;
            int vb = va == st.first ? st.second : st.first;
            incl.push_back({va, vb});
        }
        auto level = [&](int k) { return q.vertices.at(k).level; };
        for (size_t i = 0; i < incl.size(); ++i)
            for (size_t j = i + 1; j < incl.size(); ++j) {
                long da = level(incl[i].first) - level(incl[j].first);
                long db = level(incl[i].second) - level(incl[j].second);
                if (da * db < 0) {
                    if (witness) *witness = {incl[i], incl[j]};
                    return false;
                }
            }
    }
    return true;
}

// All faces of the embedded, completed quiver, strip by strip.
inline std::vector<Face> faces(const Quiver& q, const Embedding& e) {
    if (!check_planarity_per_sheet(q, e))
        throw InternalError("sheet is not planar; face enumeration is undefined");
    std::vector<Face> out;
    for (const StripInfo& si : e.strips) {
        const auto& sa = e.strings.at(si.edge.first);
        const auto& sb = e.strings.at(si.edge.second);
        if (sa.empty() || sb.empty()) continue;
        auto incl = detail::strip_inclined(q, e, si.edge);
        std::pair<int, int> bottoms{sa.front(), sb.front()};
        std::pair<int, int> tops{sa.back(), sb.back()};
        std::vector<detail::RegionWalk> regions;
        if (incl.empty()) {
            if (sa.size() <= 1 && sb.size() <= 1) continue;
            regions.push_back(detail::region_walk(sa, sb, bottoms, tops, true, true));
        } else {
            regions.push_back(detail::region_walk(sa, sb, bottoms, incl.front(), true, false));
            for (size_t i = 0; i + 1 < incl.size(); ++i)
                regions.push_back(detail::region_walk(sa, sb, incl[i], incl[i + 1], false, false));
            regions.push_back(detail::region_walk(sa, sb, incl.back(), tops, false, true));
        }
        for (const auto& rw : regions)
            if (auto f = detail::region_to_face(q, si, rw)) out.push_back(*f);
    }
    return out;
}

// Shared-edge rule: two faces may share two or more arrows only when all the
// shared arrows are vertical arrows on a spine string.
struct SharedEdgeReport {
    bool ok = true;
    // (face index, face index, shared arrows) for pairs sharing >= 2 arrows
    // legitimately on a spine.
    std::vector<std::tuple<int, int, std::vector<std::pair<int, int>>>> spine_pairs;
    std::vector<std::tuple<int, int, std::vector<std::pair<int, int>>>> violations;
};

inline SharedEdgeReport check_shared_edges(const Quiver& q, const std::vector<Face>& fs,
                                           const BranchDecomposition& d) {
    SharedEdgeReport rep;
    for (size_t i = 0; i < fs.size(); ++i)
        for (size_t j = i + 1; j < fs.size(); ++j) {
            std::vector<std::pair<int, int>> shared;
            std::set<std::pair<int, int>> bi(fs[i].boundary.begin(), fs[i].boundary.end());
            for (const auto& a : fs[j].boundary)
                if (bi.count(a)) shared.push_back(a);
            if (shared.size() < 2) continue;
            bool all_spine = true;
            for (const auto& a : shared) {
                int la = q.vertices.at(a.first).letter, lb = q.vertices.at(a.second).letter;
                if (la != lb || !d.spines.count(la)) all_spine = false;
            }
            if (all_spine)
                rep.spine_pairs.push_back({static_cast<int>(i), static_cast<int>(j), shared});
            else {
                rep.ok = false;
                rep.violations.push_back({static_cast<int>(i), static_cast<int>(j), shared});
            }
        }
    return rep;
}

// The five dimer-model conditions, with witnesses for failures.
struct DimerReport {
    bool arrows_project = true;       // (1)
    bool faces_project = true;        // (2)
    bool faces_oriented = true;       // (3)
    bool boundary_frozen = true;      // (4)
    bool shared_edges_ok = true;      // (5)
    std::vector<std::string> witnesses;
    SharedEdgeReport shared;
    bool all() const {
        return arrows_project && faces_project && faces_oriented && boundary_frozen &&
               shared_edges_ok;
    }
};

inline DimerReport check_dimer_conditions(const Quiver& q, const Embedding& e,
                                          const std::vector<Face>& fs, const LabeledGraph& g,
                                          const BranchDecomposition& d) {
    DimerReport rep;
    for (const auto& [st, ac] : e.classification) {
        if (ac.kind == ArrowKind::inclined && !g.has_edge(ac.edge.first, ac.edge.second)) {
            rep.arrows_project = false;
            rep.witnesses.push_back("arrow " + std::to_string(st.first) + "->" +
                                    std::to_string(st.second) + " projects onto a non-edge");
        }
    }
    for (size_t i = 0; i < fs.size(); ++i) {
        std::set<int> letters;
        for (int v : fs[i].vertex_cycle) letters.insert(q.vertices.at(v).letter);
        if (letters != std::set<int>{fs[i].sheet_edge.first, fs[i].sheet_edge.second}) {
            rep.faces_project = false;
            rep.witnesses.push_back("face " + std::to_string(i) + " does not project onto an edge");
        }
        if (!fs[i].oriented) {
            rep.faces_oriented = false;
            rep.witnesses.push_back("face " + std::to_string(i) + " is not oriented");
        }
    }
    for (const auto& [letter, verts] : e.strings) {
        if (verts.empty()) continue;
        if (!q.vertices.at(verts.front()).frozen || !q.vertices.at(verts.back()).frozen) {
            rep.boundary_frozen = false;
            rep.witnesses.push_back("string " + std::to_string(letter) +
                                    " has a mutable end vertex");
        }
    }
    // Extreme faces of each strip must contain a frozen-frozen arrow.
    for (const StripInfo& si : e.strips) {
        std::vector<int> on_strip;
        for (size_t i = 0; i < fs.size(); ++i)
            if (fs[i].sheet_edge == si.edge) on_strip.push_back(static_cast<int>(i));
        if (on_strip.empty()) continue;
        for (int idx : {on_strip.front(), on_strip.back()}) {
            bool has_ff = false;
            for (const auto& a : fs[idx].boundary)
                if (q.vertices.at(a.first).frozen && q.vertices.at(a.second).frozen) has_ff = true;
            if (!has_ff) {
                rep.boundary_frozen = false;
                rep.witnesses.push_back("extreme face " + std::to_string(idx) + " on strip " +
                                        std::to_string(si.edge.first) + "-" +
                                        std::to_string(si.edge.second) +
                                        " has no frozen-frozen edge");
            }
        }
    }
    rep.shared = check_shared_edges(q, fs, d);
    rep.shared_edges_ok = rep.shared.ok;
    for (const auto& [i, j, shared] : rep.shared.violations)
        rep.witnesses.push_back("faces " + std::to_string(i) + "," + std::to_string(j) +
                                " share " + std::to_string(shared.size()) +
                                " edges off the spine");
    return rep;
}

} // namespace bfz
