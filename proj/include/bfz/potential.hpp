#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "bfz/embedding.hpp"
#include "bfz/linalg.hpp"

namespace bfz {

// Deterministic arrow ids for a quiver: arrows sorted by (source, target),
// parallel copies get consecutive ids.
class ArrowTable {
public:
    explicit ArrowTable(const Quiver& q) {
        for (const auto& [st, mult] : q.arrows)
            for (int i = 0; i < mult; ++i) arrows_.push_back(st);
        for (size_t i = 0; i < arrows_.size(); ++i) first_id_.emplace(arrows_[i], int(i));
    }

    int count() const { return static_cast<int>(arrows_.size()); }
    int src(int id) const { return arrows_.at(id).first; }
    int dst(int id) const { return arrows_.at(id).second; }
    std::pair<int, int> pair_of(int id) const { return arrows_.at(id); }

    int id_of(std::pair<int, int> st) const {
        auto it = first_id_.find(st);
        if (it == first_id_.end()) throw InternalError("arrow not in table");
        return it->second;
    }

private:
    std::vector<std::pair<int, int>> arrows_;
    std::map<std::pair<int, int>, int> first_id_;
};

// A path is a composable arrow-id sequence; a cycle closes up.
using Path = std::vector<int>;

inline bool is_composable(const ArrowTable& at, const Path& p) {
    for (size_t i = 0; i + 1 < p.size(); ++i)
        if (at.dst(p[i]) != at.src(p[i + 1])) return false;
    return true;
}

inline bool is_cycle(const ArrowTable& at, const Path& p) {
    return !p.empty() && is_composable(at, p) && at.dst(p.back()) == at.src(p.front());
}

inline bool is_simple_cycle(const ArrowTable& at, const Path& p) {
    std::set<int> seen;
    for (int id : p)
        if (!seen.insert(at.src(id)).second) return false;
    return true;
}

// Lexicographically smallest rotation: canonical representative of the
// rotation class.
inline Path canonical_rotation(const Path& p) {
    Path best = p;
    Path cur = p;
    for (size_t i = 1; i < p.size(); ++i) {
        std::rotate(cur.begin(), cur.begin() + 1, cur.end());
        if (cur < best) best = cur;
    }
    return best;
}

// Finitely supported rational combination of paths.
using PathCombination = std::map<Path, Rat>;

inline void add_term(PathCombination& pc, const Path& p, const Rat& c) {
    auto it = pc.find(p);
    if (it == pc.end()) {
        if (c != 0) pc[p] = c;
        return;
    }
    it->second += c;
    if (it->second == 0) pc.erase(it);
}

// Signed sum of face cycles: clockwise faces enter with +1, anticlockwise
// with -1.  Stored on canonical rotations.
struct Potential {
    PathCombination combination;
    std::vector<std::pair<Path, int>> provenance; // (canonical cycle, orientation)
};

inline Potential superpotential(const std::vector<Face>& fs, const ArrowTable& at) {
    Potential s;
    for (const auto& f : fs) {
        if (!f.oriented || f.orientation == 0)
            throw InternalError("superpotential requires oriented faces");
        Path p;
        for (const auto& a : f.boundary) p.push_back(at.id_of(a));
        if (!is_cycle(at, p)) throw InternalError("face boundary is not a cycle");
        if (p.size() < 3) throw InternalError("2-cycle face; the potential must be reduced");
        Path c = canonical_rotation(p);
        add_term(s.combination, c, Rat(f.orientation < 0 ? 1 : -1));
        s.provenance.push_back({c, f.orientation});
    }
    return s;
}

// Cyclic derivative with respect to one arrow, extended linearly; terms of
// the input must be cycles.
inline PathCombination cyclic_derivative(int arrow, const PathCombination& pc,
                                         const ArrowTable& at) {
    PathCombination out;
    for (const auto& [cycle, coeff] : pc) {
        if (!is_cycle(at, cycle)) throw InternalError("cyclic derivative of a non-cycle");
        for (size_t i = 0; i < cycle.size(); ++i) {
            if (cycle[i] != arrow) continue;
            Path rest;
            for (size_t j = 1; j < cycle.size(); ++j) rest.push_back(cycle[(i + j) % cycle.size()]);
            add_term(out, rest, coeff);
        }
    }
    return out;
}

// All derivatives d_a S.  With include_boundary = false the derivatives of
// arrows joining two frozen vertices are omitted.
inline std::vector<std::pair<int, PathCombination>>
jacobian_generators(const Potential& s, const Quiver& q, const ArrowTable& at,
                    bool include_boundary = true) {
    std::vector<std::pair<int, PathCombination>> out;
    for (int a = 0; a < at.count(); ++a) {
        if (!include_boundary && q.vertices.at(at.src(a)).frozen &&
            q.vertices.at(at.dst(a)).frozen)
            continue;
        out.push_back({a, cyclic_derivative(a, s.combination, at)});
    }
    return out;
}

// All paths grouped by length; by_len[0] stays empty (trivial paths are
// handled where products need them).
struct PathSets {
    std::vector<std::vector<Path>> by_len; // by_len[l]: length-l paths, lex order
};

inline PathSets enumerate_paths(const ArrowTable& at, int max_len) {
    PathSets ps;
    ps.by_len.resize(max_len + 1);
    if (max_len >= 1)
        for (int a = 0; a < at.count(); ++a) ps.by_len[1].push_back({a});
    size_t total = ps.by_len.empty() ? 0 : ps.by_len[1].size();
    for (int l = 2; l <= max_len; ++l) {
        for (const Path& p : ps.by_len[l - 1])
            for (int a = 0; a < at.count(); ++a)
                if (at.src(a) == at.dst(p.back())) {
                    Path np = p;
                    np.push_back(a);
                    ps.by_len[l].push_back(std::move(np));
                }
        total += ps.by_len[l].size();
        if (total > 5'000'000)
            throw InvalidInput("bad_bounds", "truncation degree generates too many paths");
    }
    return ps;
}

// Directed cycles of length <= max_len, one canonical representative per
// rotation class, in deterministic order.
inline std::vector<Path> enumerate_cycles(const ArrowTable& at, int max_len) {
    std::set<Path> seen;
    Path walk;
    std::vector<Path> out;
    std::function<void(int)> extend = [&](int start_vertex) {
        int here = walk.empty() ? start_vertex : at.dst(walk.back());
        if (!walk.empty() && here == start_vertex) {
            Path c = canonical_rotation(walk);
            if (seen.insert(c).second) out.push_back(c);
        }
        if (static_cast<int>(walk.size()) == max_len) return;
        for (int a = 0; a < at.count(); ++a) {
            if (at.src(a) != here) continue;
            walk.push_back(a);
            extend(start_vertex);
            walk.pop_back();
        }
    };
    std::set<int> starts;
    for (int a = 0; a < at.count(); ++a) starts.insert(at.src(a));
    for (int v : starts) extend(v);
    std::sort(out.begin(), out.end(), [](const Path& x, const Path& y) {
        return std::make_pair(x.size(), x) < std::make_pair(y.size(), y);
    });
    return out;
}

// Path-monomial column order: (length, lexicographic arrow ids).
class ColumnIndex {
public:
    explicit ColumnIndex(const std::vector<Path>& keys) {
        std::vector<Path> sorted = keys;
        std::sort(sorted.begin(), sorted.end(), [](const Path& x, const Path& y) {
            return std::make_pair(x.size(), x) < std::make_pair(y.size(), y);
        });
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        for (size_t i = 0; i < sorted.size(); ++i) ids_[sorted[i]] = static_cast<int>(i);
        keys_ = std::move(sorted);
    }

    int id(const Path& p) const {
        auto it = ids_.find(p);
        if (it == ids_.end()) return -1;
        return it->second;
    }
    const Path& key(int id) const { return keys_.at(id); }
    int size() const { return static_cast<int>(keys_.size()); }

private:
    std::map<Path, int> ids_;
    std::vector<Path> keys_;
};

inline SparseVec to_sparse(const PathCombination& pc, const ColumnIndex& cols) {
    SparseVec v;
    for (const auto& [p, c] : pc) {
        int id = cols.id(p);
        if (id < 0) throw InternalError("path outside the column index");
        v.push_back({id, c});
    }
    normalize_terms(v);
    return v;
}

// Generator metadata for certificates.
struct CyclicGen {
    Path cycle; // canonical representative
    int rotation; // generator is cycle - rot^rotation(cycle)
};
struct IdealGen {
    int arrow;
    Path left, right; // left * dS_arrow * right
};

struct MembershipSystem {
    ColumnIndex columns;
    Echelon echelon;
    std::vector<CyclicGen> cyclic_gens;
    std::vector<IdealGen> ideal_gens;
    int cyclic_rank = 0;
    int ideal_rank = 0;
    // Generator ids: cyclic generators come first, then ideal generators.
    int cyclic_count() const { return static_cast<int>(cyclic_gens.size()); }
};

inline Path rotate_by(const Path& p, int r) {
    Path q = p;
    std::rotate(q.begin(), q.begin() + (r % q.size()), q.end());
    return q;
}

// Span of the slices (cyclic-equivalence subspace + Jacobian ideal) up to
// total degree L, as one echelon with provenance.
inline MembershipSystem build_membership_system(
    const ArrowTable& at, const std::vector<std::pair<int, PathCombination>>& gens, int L) {
    if (L < 1) throw InvalidInput("bad_bounds", "truncation degree must be positive");
    for (const auto& [arrow, ds] : gens)
        for (const auto& [term, coeff] : ds)
            if (static_cast<int>(term.size()) > L)
                throw InvalidInput("bad_bounds",
                                   "truncation degree below the longest ideal generator");
    PathSets ps = enumerate_paths(at, L);

    std::vector<Path> keys;
    for (int l = 1; l <= L; ++l)
        for (const Path& p : ps.by_len[l]) keys.push_back(p);

    MembershipSystem sys{ColumnIndex(keys), Echelon{}, {}, {}, 0, 0};

    // Cyclic generators: c - rot(c) for every cycle of length <= L.
    std::vector<Path> cycles = enumerate_cycles(at, L);
    for (const Path& c : cycles) {
        for (size_t r = 1; r < c.size(); ++r) {
            PathCombination pc;
            add_term(pc, c, Rat(1));
            add_term(pc, rotate_by(c, static_cast<int>(r)), Rat(-1));
            if (pc.empty()) continue; // rotation-symmetric cycle
            int gid = static_cast<int>(sys.cyclic_gens.size());
            sys.cyclic_gens.push_back({c, static_cast<int>(r)});
            if (sys.echelon.add_row(to_sparse(pc, sys.columns), gid)) ++sys.cyclic_rank;
        }
    }

    // Paths grouped by (length, end vertex) and (length, start vertex).
    std::map<std::pair<int, int>, std::vector<const Path*>> by_end, by_start;
    for (int l = 1; l <= L; ++l)
        for (const Path& p : ps.by_len[l]) {
            by_end[{l, at.dst(p.back())}].push_back(&p);
            by_start[{l, at.src(p.front())}].push_back(&p);
        }
    static const Path empty_path{};

    // Ideal generators: left * dS * right with every term of total length <= L.
    int base = sys.cyclic_count();
    for (const auto& [arrow, ds] : gens) {
        if (ds.empty()) continue;
        size_t max_term = 0;
        for (const auto& [p, c] : ds) max_term = std::max(max_term, p.size());
        int head = at.dst(arrow), tail = at.src(arrow);
        // Left paths end at head(a), the start vertex of every term of dS;
        // right paths start at tail(a).
        for (int ll = 0; ll + static_cast<int>(max_term) <= L; ++ll) {
            std::vector<const Path*> lefts;
            if (ll == 0) lefts.push_back(&empty_path);
            else if (auto it = by_end.find({ll, head}); it != by_end.end()) lefts = it->second;
            for (const Path* left : lefts) {
                for (int rl = 0; ll + static_cast<int>(max_term) + rl <= L; ++rl) {
                    std::vector<const Path*> rights;
                    if (rl == 0) rights.push_back(&empty_path);
                    else if (auto it = by_start.find({rl, tail}); it != by_start.end())
                        rights = it->second;
                    for (const Path* right : rights) {
                        PathCombination pc;
                        for (const auto& [term, coeff] : ds) {
                            Path full = *left;
                            full.insert(full.end(), term.begin(), term.end());
                            full.insert(full.end(), right->begin(), right->end());
                            add_term(pc, full, coeff);
                        }
                        if (pc.empty()) continue;
                        int gid = base + static_cast<int>(sys.ideal_gens.size());
                        sys.ideal_gens.push_back({arrow, *left, *right});
                        if (sys.echelon.add_row(to_sparse(pc, sys.columns), gid))
                            ++sys.ideal_rank;
                    }
                }
            }
        }
    }
    return sys;
}

// Certificate of one cycle's membership.
struct CyclicCertTerm {
    Rat coeff;
    Path cycle;
    int rotation;
};
struct IdealCertTerm {
    Rat coeff;
    int arrow;
    Path left, right;
};

struct CycleVerdict {
    Path cycle;
    bool simple = false;
    bool member = false;
    std::vector<CyclicCertTerm> cyclic_part;
    std::vector<IdealCertTerm> ideal_part;
    PathCombination residual; // nonzero iff not member at this degree
};

struct RigidityReport {
    int max_cycle_len = 0;
    int degree_initial = 0;
    int degree_final = 0;
    bool escalated = false;
    bool capped = false;
    bool include_boundary = true;
    std::string verdict; // rigid | not_rigid_at_bounds | inconclusive
    std::vector<CycleVerdict> cycles;
    int cyclic_rank = 0;
    int ideal_rank = 0;
    bool rigid() const { return verdict == "rigid"; }
};

inline CycleVerdict test_cycle_membership(const Path& cycle, const ArrowTable& at,
                                          const MembershipSystem& sys) {
    CycleVerdict cv;
    cv.cycle = cycle;
    cv.simple = is_simple_cycle(at, cycle);
    PathCombination pc;
    add_term(pc, cycle, Rat(1));
    SparseVec comb;
    SparseVec residual = sys.echelon.reduce(to_sparse(pc, sys.columns), &comb);
    cv.member = residual.empty();
    if (cv.member) {
        for (const auto& [gid, coeff] : comb) {
            if (gid < sys.cyclic_count()) {
                const auto& g = sys.cyclic_gens[gid];
                cv.cyclic_part.push_back({coeff, g.cycle, g.rotation});
            } else {
                const auto& g = sys.ideal_gens[gid - sys.cyclic_count()];
                cv.ideal_part.push_back({coeff, g.arrow, g.left, g.right});
            }
        }
    } else {
        for (const auto& [col, coeff] : residual) cv.residual[sys.columns.key(col)] = coeff;
    }
    return cv;
}

struct RigidityOptions {
    int max_cycle_len = 0;  // 0 = derive from faces and strings
    int trunc_degree = 0;   // 0 = derive
    bool include_boundary = true;
    int max_escalations = 2;
};

inline int default_max_cycle_len(const std::vector<Face>& fs, const Embedding& e) {
    size_t max_face = 0;
    for (const auto& f : fs) max_face = std::max(max_face, f.boundary.size());
    size_t max_string = 0;
    for (const auto& [letter, verts] : e.strings) max_string = std::max(max_string, verts.size());
    return static_cast<int>(max_face + max_string);
}

// Decide, for every cycle of length <= L_c, membership in
// (cyclic-equivalence span + Jacobian ideal) truncated at degree L,
// escalating L when a cycle fails.  A failure after the last escalation is
// inconclusive about the completed ideal; a failure when no escalation is
// possible (no faces, or escalation disabled) is reported as not rigid at
// the given bounds.
inline RigidityReport is_rigid_up_to(const Quiver& q, const Potential& s, const ArrowTable& at,
                                     const std::vector<Face>& fs, const Embedding& e,
                                     RigidityOptions opt = {}) {
    RigidityReport rep;
    size_t max_face = 0;
    for (const auto& f : fs) max_face = std::max(max_face, f.boundary.size());
    int lc = opt.max_cycle_len > 0 ? opt.max_cycle_len : default_max_cycle_len(fs, e);
    int L = opt.trunc_degree > 0 ? opt.trunc_degree : lc + static_cast<int>(max_face);
    if (L < lc) throw InvalidInput("bad_bounds", "truncation degree below cycle bound");
    rep.max_cycle_len = lc;
    rep.degree_initial = L;
    rep.include_boundary = opt.include_boundary;

    auto gens = jacobian_generators(s, q, at, opt.include_boundary);
    std::vector<Path> cycles = enumerate_cycles(at, lc);

    int escalations_left = opt.max_escalations;
    bool can_escalate = max_face > 0;
    while (true) {
        MembershipSystem sys = build_membership_system(at, gens, L);
        rep.cycles.clear();
        bool all_member = true;
        for (const Path& c : cycles) {
            rep.cycles.push_back(test_cycle_membership(c, at, sys));
            all_member = all_member && rep.cycles.back().member;
        }
        rep.cyclic_rank = sys.cyclic_rank;
        rep.ideal_rank = sys.ideal_rank;
        rep.degree_final = L;
        if (all_member) {
            rep.verdict = "rigid";
            return rep;
        }
        if (!can_escalate) {
            rep.verdict = "not_rigid_at_bounds";
            return rep;
        }
        if (escalations_left == 0) {
            rep.capped = true;
            rep.verdict = "inconclusive";
            return rep;
        }
        --escalations_left;
        rep.escalated = true;
        L += static_cast<int>(max_face);
    }
}

// Expand a certificate back into a path combination; tests use this to
// verify member verdicts independently of the solver.
inline PathCombination expand_certificate(const CycleVerdict& cv, const ArrowTable& at,
                                          const std::vector<std::pair<int, PathCombination>>& gens) {
    PathCombination total;
    for (const auto& t : cv.cyclic_part) {
        add_term(total, t.cycle, t.coeff);
        add_term(total, rotate_by(t.cycle, t.rotation), -t.coeff);
    }
    std::map<int, const PathCombination*> ds;
    for (const auto& [a, pc] : gens) ds[a] = &pc;
    for (const auto& t : cv.ideal_part) {
        const PathCombination& g = *ds.at(t.arrow);
        for (const auto& [term, coeff] : g) {
            Path full = t.left;
            full.insert(full.end(), term.begin(), term.end());
            full.insert(full.end(), t.right.begin(), t.right.end());
            add_term(total, full, t.coeff * coeff);
        }
    }
    (void)at;
    return total;
}

// Differentiability of a cycle (diagnostic): either a contiguous closed
// sub-block of the cycle is a face, or an arrow outside the cycle closes a
// face against one of its arcs.
struct Differentiability {
    bool differentiable = false;
    std::pair<int, int> witness_arrow{0, 0};
    std::vector<std::pair<int, int>> face_part;
    std::vector<std::pair<int, int>> rest_part;
};

inline Differentiability is_differentiable_cycle(const std::vector<std::pair<int, int>>& cycle,
                                                 const Quiver& q, const std::vector<Face>& fs,
                                                 const ArrowTable& at) {
    (void)q;
    Differentiability res;
    Path c;
    for (const auto& a : cycle) c.push_back(at.id_of(a));
    if (!is_cycle(at, c)) throw InvalidInput("bad_spec", "input arrows do not form a cycle");
    std::set<Path> face_cycles;
    for (const auto& f : fs) {
        Path p;
        for (const auto& a : f.boundary) p.push_back(at.id_of(a));
        face_cycles.insert(canonical_rotation(p));
    }
    size_t n = c.size();
    // Contiguous closed sub-block equal to a face.
    for (size_t start = 0; start < n; ++start)
        for (size_t len = 2; len + 2 <= n; ++len) {
            Path block, rest;
            for (size_t i = 0; i < n; ++i) {
                size_t pos = (start + i) % n;
                (i < len ? block : rest).push_back(c[pos]);
            }
            if (!is_cycle(at, block) || !is_cycle(at, rest)) continue;
            if (!face_cycles.count(canonical_rotation(block))) continue;
            res.differentiable = true;
            for (int id : block) res.face_part.push_back(at.pair_of(id));
            for (int id : rest) res.rest_part.push_back(at.pair_of(id));
            // Witness: an arrow the two parts share, if any; else the cut arrow.
            std::set<int> bs(block.begin(), block.end());
            res.witness_arrow = at.pair_of(block.front());
            for (int id : rest)
                if (bs.count(id)) res.witness_arrow = at.pair_of(id);
            return res;
        }
    // Chord closing a face against an arc of the cycle.
    std::set<int> on_cycle(c.begin(), c.end());
    for (int e = 0; e < at.count(); ++e) {
        if (on_cycle.count(e)) continue;
        // Occurrences of head(e) and tail(e) along the cycle.
        for (size_t i = 0; i < n; ++i) {
            if (at.src(c[i]) != at.dst(e)) continue; // arc starts at head(e)
            for (size_t len = 1; len < n; ++len) {
                size_t end = (i + len) % n;
                if (at.dst(c[(end + n - 1) % n]) != at.src(e)) continue;
                Path arc;
                for (size_t t = 0; t < len; ++t) arc.push_back(c[(i + t) % n]);
                Path candidate{e};
                candidate.insert(candidate.end(), arc.begin(), arc.end());
                if (!face_cycles.count(canonical_rotation(candidate))) continue;
                res.differentiable = true;
                res.witness_arrow = at.pair_of(e);
                for (int id : candidate) res.face_part.push_back(at.pair_of(id));
                for (size_t t = len; t < n; ++t)
                    res.rest_part.push_back(at.pair_of(c[(i + t) % n]));
                res.rest_part.push_back(at.pair_of(e));
                return res;
            }
        }
    }
    return res;
}

} // namespace bfz
