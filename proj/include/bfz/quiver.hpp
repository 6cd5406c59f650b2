#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "bfz/words.hpp"

namespace bfz {

struct QuiverVertex {
    int k = 0;          // index in the decorated word
    int letter = 0;     // |i_k|, also the string label
    bool frozen = true; // k not exchangeable
    int level = 0;      // vertical position: k for shuffle, j-r-1 for prefix -j
};

// Vertex records plus an arrow multiset keyed by (source, target).
class Quiver {
public:
    std::map<int, QuiverVertex> vertices;        // by index k
    std::map<std::pair<int, int>, int> arrows;   // (src, dst) -> multiplicity

    void add_arrow(int s, int t, int mult = 1) {
        if (s == t) throw InternalError("loop arrow");
        if (mult <= 0) return;
        arrows[{s, t}] += mult;
    }

    bool has_arrow(int s, int t) const { return arrows.count({s, t}) > 0; }

    int multiplicity(int s, int t) const {
        auto it = arrows.find({s, t});
        return it == arrows.end() ? 0 : it->second;
    }

    int arrow_count() const {
        int n = 0;
        for (const auto& [st, m] : arrows) n += m;
        return n;
    }

    bool operator==(const Quiver& o) const {
        if (arrows != o.arrows || vertices.size() != o.vertices.size()) return false;
        for (const auto& [k, rec] : vertices) {
            auto it = o.vertices.find(k);
            if (it == o.vertices.end()) return false;
            if (it->second.letter != rec.letter || it->second.frozen != rec.frozen) return false;
        }
        return true;
    }
    bool operator!=(const Quiver& o) const { return !(*this == o); }
};

// Exchange matrix: rows over [-r,-1] u [1,n], columns over e(i).
struct ExchangeMatrix {
    std::vector<int> row_labels;
    std::vector<int> col_labels;
    std::vector<std::vector<int>> entries; // entries[row][col]

    int at(int k, int l) const {
        for (size_t i = 0; i < row_labels.size(); ++i)
            if (row_labels[i] == k)
                for (size_t j = 0; j < col_labels.size(); ++j)
                    if (col_labels[j] == l) return entries[i][j];
        throw InternalError("matrix entry out of range");
    }
};

// One evaluation of the b_{kl} formula, kept for the trace artifact.
struct TraceRow {
    int k = 0, l = 0, p = 0, q = 0;
    // Fields are optional where the evaluation short-circuits, mirroring
    // the worked-table layout: p>q rows record only b, k=l rows stop at
    // sgn(k-l), p=q rows stop before sgn(k+-l+).
    std::optional<int> eps_p, eps_q, sgn_kl, sgn_kplp, cartan;
    int b = 0;
};

namespace detail {

inline TraceRow eval_entry(const ShuffledWord& w, const SuccessorMap& s, const CartanData& c,
                           int k, int l) {
    TraceRow t;
    t.k = k;
    t.l = l;
    t.p = std::max(k, l);
    t.q = std::min(s.kplus.at(k), s.kplus.at(l));
    if (t.p > t.q) return t; // b = 0
    t.eps_p = w.sign(t.p);
    t.eps_q = w.sign(t.q);
    t.sgn_kl = sgn(k - l);
    if (k == l) return t; // b = 0
    if (t.p == t.q) {
        t.b = -(*t.sgn_kl) * (*t.eps_p);
        return t;
    }
    t.sgn_kplp = sgn(s.kplus.at(k) - s.kplus.at(l));
    t.cartan = c.at(w.letter(k), w.letter(l));
    long cond = static_cast<long>(k - l) * (s.kplus.at(k) - s.kplus.at(l)) * (*t.eps_p) *
                (*t.eps_q);
    if (cond > 0) t.b = -(*t.sgn_kl) * (*t.eps_p) * (*t.cartan);
    return t;
}

} // namespace detail

inline ExchangeMatrix exchange_matrix(const ShuffledWord& w, const SuccessorMap& s,
                                      const CartanData& c) {
    ExchangeMatrix m;
    m.row_labels = w.all_indices();
    m.col_labels.assign(s.exchangeable.begin(), s.exchangeable.end());
    for (int k : m.row_labels) {
        std::vector<int> row;
        for (int l : m.col_labels) row.push_back(detail::eval_entry(w, s, c, k, l).b);
        m.entries.push_back(std::move(row));
    }
    return m;
}

// Full evaluation table in column-major order, one row per (k, l) pair.
inline std::vector<TraceRow> exchange_matrix_trace(const ShuffledWord& w, const SuccessorMap& s,
                                                   const CartanData& c) {
    std::vector<TraceRow> rows;
    for (int l : s.exchangeable)
        for (int k : w.all_indices()) rows.push_back(detail::eval_entry(w, s, c, k, l));
    return rows;
}

inline std::string format_trace(const std::vector<TraceRow>& rows) {
    auto sign_char = [](int v) { return v > 0 ? std::string("+") : (v < 0 ? "-" : "0"); };
    std::ostringstream os;
    os << "k,l,p,q,eps_p,eps_q,sgn(k-l),sgn(k+-l+),a,b\n";
    for (const auto& t : rows) {
        os << t.k << ',' << t.l << ',' << t.p << ',' << t.q << ',';
        os << (t.eps_p ? sign_char(*t.eps_p) : "") << ',';
        os << (t.eps_q ? sign_char(*t.eps_q) : "") << ',';
        os << (t.sgn_kl ? sign_char(*t.sgn_kl) : "") << ',';
        os << (t.sgn_kplp ? sign_char(*t.sgn_kplp) : "") << ',';
        if (t.cartan) os << *t.cartan;
        os << ',' << t.b << '\n';
    }
    return os.str();
}

namespace detail {

// Edge test of the direct construction, without the exchangeability gate.
// For k < l: horizontal when l = k+, else the two interleaving conditions.
// Prefix-prefix pairs are excluded (their epsilon carries no information);
// boundary arrows between such pairs come from the completion step.
inline std::optional<std::pair<int, int>> ungated_arrow(const ShuffledWord& w,
                                                        const SuccessorMap& s, const CartanData& c,
                                                        int k, int l) {
    if (k >= l) throw InternalError("ungated_arrow expects k < l");
    if (l < 0) return std::nullopt;
    int kp = s.kplus.at(k), lp = s.kplus.at(l);
    int n = w.shuffle_length();
    if (l == kp) {
        // Horizontal: k -> k+ iff eps(i_{k+}) = +1.
        return w.sign(l) == +1 ? std::make_pair(k, l) : std::make_pair(l, k);
    }
    if (c.at(w.letter(k), w.letter(l)) >= 0) return std::nullopt;
    bool cond1 = l < kp && kp < lp && kp <= n && w.sign(l) == w.sign(kp);
    bool cond2 = l < lp && lp < kp && lp <= n && w.sign(l) == -w.sign(lp);
    if (!cond1 && !cond2) return std::nullopt;
    // Inclined: k -> l iff eps(i_l) = -1.
    return w.sign(l) == -1 ? std::make_pair(k, l) : std::make_pair(l, k);
}

} // namespace detail

// Direct construction from the edge rules: only pairs with an exchangeable
// member are connected.
inline Quiver quiver_direct(const ShuffledWord& w, const SuccessorMap& s, const CartanData& c) {
    Quiver q;
    int r = w.rank();
    for (int k : w.all_indices()) {
        QuiverVertex vr;
        vr.k = k;
        vr.letter = w.letter(k);
        vr.frozen = s.exchangeable.count(k) == 0;
        vr.level = k >= 1 ? k : (-k) - r - 1;
        q.vertices[k] = vr;
    }
    auto idx = w.all_indices();
    for (size_t i = 0; i < idx.size(); ++i)
        for (size_t j = i + 1; j < idx.size(); ++j) {
            int k = idx[i], l = idx[j];
            if (!s.exchangeable.count(k) && !s.exchangeable.count(l)) continue;
            if (auto a = detail::ungated_arrow(w, s, c, k, l)) q.add_arrow(a->first, a->second);
        }
    return q;
}

// Arrows the edge rules produce between two frozen vertices; these are the
// formula part of the frozen completion.
inline std::vector<std::pair<int, int>> ungated_frozen_arrows(const ShuffledWord& w,
                                                              const SuccessorMap& s,
                                                              const CartanData& c) {
    std::vector<std::pair<int, int>> out;
    auto idx = w.all_indices();
    for (size_t i = 0; i < idx.size(); ++i)
        for (size_t j = i + 1; j < idx.size(); ++j) {
            int k = idx[i], l = idx[j];
            if (s.exchangeable.count(k) || s.exchangeable.count(l)) continue;
            if (l < 0) continue; // prefix-prefix pairs handled geometrically
            if (auto a = detail::ungated_arrow(w, s, c, k, l)) out.push_back(*a);
        }
    return out;
}

// Reversed copy (opposite quiver).
inline Quiver opposite(const Quiver& q) {
    Quiver o;
    o.vertices = q.vertices;
    for (const auto& [st, m] : q.arrows) o.arrows[{st.second, st.first}] = m;
    return o;
}

// Apply a vertex renaming; the map must be a bijection on the vertex set.
inline Quiver rename_vertices(const Quiver& q, const std::map<int, int>& phi) {
    Quiver o;
    for (const auto& [k, rec] : q.vertices) {
        QuiverVertex r2 = rec;
        r2.k = phi.at(k);
        o.vertices[r2.k] = r2;
    }
    if (o.vertices.size() != q.vertices.size()) throw InternalError("renaming is not injective");
    for (const auto& [st, m] : q.arrows) o.arrows[{phi.at(st.first), phi.at(st.second)}] += m;
    return o;
}

} // namespace bfz
