#pragma once

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "bfz/graph.hpp"

namespace bfz {

// A word in the generators s_1..s_r, stored as its letter sequence.
using Word = std::vector<int>;

inline void validate_letters(const Word& w, int rank) {
    for (int a : w)
        if (a < 1 || a > rank)
            throw InvalidInput("bad_letter", "letter " + std::to_string(a) + " out of range");
}

namespace detail {

// Matrix of the reflection representation on the root lattice, columns =
// images of the simple roots in the simple-root basis.
using RootMatrix = std::vector<std::vector<long>>;

inline RootMatrix identity_matrix(int r) {
    RootMatrix m(r, std::vector<long>(r, 0));
    for (int i = 0; i < r; ++i) m[i][i] = 1;
    return m;
}

// Right-multiply m by the reflection s_a:  column j -= a_{a,j} * column a.
inline void apply_reflection(RootMatrix& m, const CartanData& c, int a) {
    int r = c.rank();
    std::vector<long> col_a(r);
    for (int i = 0; i < r; ++i) col_a[i] = m[i][a - 1];
    for (int j = 0; j < r; ++j) {
        long coeff = c.at(a, j + 1);
        for (int i = 0; i < r; ++i) m[i][j] -= coeff * col_a[i];
    }
}

// Sign of a root vector in simple-root coordinates: +1 positive, -1 negative.
inline int root_sign(const std::vector<long>& v) {
    bool pos = false, neg = false;
    for (long x : v) {
        if (x > 0) pos = true;
        if (x < 0) neg = true;
    }
    if (pos == neg) throw InternalError("vector is not a root");
    return pos ? 1 : -1;
}

} // namespace detail

// Exact reducedness test: track the roots b_k = s_{i_1}..s_{i_{k-1}}(a_{i_k});
// the word is reduced iff they are all positive (and then pairwise distinct).
inline bool is_reduced(const Word& w, const CartanData& c) {
    validate_letters(w, c.rank());
    auto m = detail::identity_matrix(c.rank());
    std::set<std::vector<long>> roots;
    for (int a : w) {
        std::vector<long> beta(c.rank());
        for (int i = 0; i < c.rank(); ++i) beta[i] = m[i][a - 1];
        if (detail::root_sign(beta) < 0) return false;
        if (!roots.insert(beta).second) return false;
        detail::apply_reflection(m, c, a);
    }
    return true;
}

// Sign convention for shuffled words.  `example` gives u-letters +1 and
// v-letters -1, matching the published tables and figures this code is
// validated against; `strict_bfz` is the opposite assignment and yields
// the globally arrow-reversed quiver.
enum class SignConvention { example, strict_bfz };

inline int sign_of_u(SignConvention sc) { return sc == SignConvention::example ? +1 : -1; }
inline int sign_of_v(SignConvention sc) { return -sign_of_u(sc); }

// The decorated word built from a shuffle of reduced words u and v with the
// fixed prefix (-r, ..., -1).  Indices k run over [-r,-1] u [1,n].
class ShuffledWord {
public:
    ShuffledWord(const LabeledGraph& g, const CartanData& c, Word u, Word v,
                 std::vector<int> pattern, SignConvention sc = SignConvention::example)
        : rank_(g.rank()), u_(std::move(u)), v_(std::move(v)), pattern_(std::move(pattern)),
          convention_(sc) {
        validate_letters(u_, rank_);
        validate_letters(v_, rank_);
        if (!is_reduced(u_, c)) throw InvalidInput("word_not_reduced", "u is not reduced");
        if (!is_reduced(v_, c)) throw InvalidInput("word_not_reduced", "v is not reduced");
        if (pattern_.empty()) {
            pattern_.assign(u_.size(), 0);
            pattern_.insert(pattern_.end(), v_.size(), 1);
        }
        if (pattern_.size() != u_.size() + v_.size())
            throw InvalidInput("bad_pattern", "pattern length must be l(u)+l(v)");
        size_t iu = 0, iv = 0;
        for (int bit : pattern_) {
            if (bit == 0 && iu < u_.size()) {
                letters_.push_back(u_[iu++]);
                signs_.push_back(sign_of_u(sc));
            } else if (bit == 1 && iv < v_.size()) {
                letters_.push_back(v_[iv++]);
                signs_.push_back(sign_of_v(sc));
            } else {
                throw InvalidInput("bad_pattern", "pattern does not match word lengths");
            }
        }
    }

    int rank() const { return rank_; }
    int shuffle_length() const { return static_cast<int>(letters_.size()); }

    // Valid indices: [-r,-1] for the prefix, [1,n] for shuffle positions.
    bool valid_index(int k) const {
        return (k >= -rank_ && k <= -1) || (k >= 1 && k <= shuffle_length());
    }

    // |i_k|: the letter at index k (prefix index -j has letter j).
    int letter(int k) const {
        if (k >= 1 && k <= shuffle_length()) return letters_[k - 1];
        if (k >= -rank_ && k <= -1) return -k;
        throw InternalError("index out of range");
    }

    // epsilon(i_k); prefix entries are fixed at -1 and never reach the
    // matrix formula on valid input.
    int sign(int k) const {
        if (k >= 1 && k <= shuffle_length()) return signs_[k - 1];
        if (k >= -rank_ && k <= -1) return -1;
        throw InternalError("index out of range");
    }

    std::vector<int> all_indices() const {
        std::vector<int> out;
        for (int k = -rank_; k <= -1; ++k) out.push_back(k);
        for (int k = 1; k <= shuffle_length(); ++k) out.push_back(k);
        return out;
    }

    const Word& u() const { return u_; }
    const Word& v() const { return v_; }
    const std::vector<int>& pattern() const { return pattern_; }
    SignConvention convention() const { return convention_; }

    // True when the shuffle position came from u.
    bool from_u(int k) const {
        if (k < 1 || k > shuffle_length()) throw InternalError("not a shuffle position");
        return pattern_[k - 1] == 0;
    }

private:
    int rank_;
    Word u_, v_;
    std::vector<int> pattern_;
    SignConvention convention_;
    std::vector<int> letters_;
    std::vector<int> signs_;
};

inline ShuffledWord shuffle(const LabeledGraph& g, const CartanData& c, const Word& u,
                            const Word& v, const std::vector<int>& pattern = {},
                            SignConvention sc = SignConvention::example) {
    return ShuffledWord(g, c, u, v, pattern, sc);
}

// k+ map and the exchangeable index set e(i).
struct SuccessorMap {
    std::map<int, int> kplus;   // total on [-r,-1] u [1,n]; value n+1 = none
    std::set<int> exchangeable; // k >= 1 with k+ <= n
};

inline SuccessorMap successor_map(const ShuffledWord& w) {
    SuccessorMap s;
    int n = w.shuffle_length();
    for (int k : w.all_indices()) {
        int kp = n + 1;
        for (int l = (k < 0 ? 1 : k + 1); l <= n; ++l)
            if (w.letter(l) == w.letter(k)) {
                kp = l;
                break;
            }
        s.kplus[k] = kp;
        if (k >= 1 && kp <= n) s.exchangeable.insert(k);
    }
    return s;
}

// Uniform-ish random reduced word of length <= max_len (random greedy walk).
inline Word random_reduced_word(const LabeledGraph& g, const CartanData& c, int max_len,
                                std::mt19937_64& rng) {
    Word w;
    std::uniform_int_distribution<int> letter_dist(1, g.rank());
    int target = std::uniform_int_distribution<int>(0, max_len)(rng);
    while (static_cast<int>(w.size()) < target) {
        // Collect letters that keep the word reduced.
        std::vector<int> ok;
        for (int a = 1; a <= g.rank(); ++a) {
            Word cand = w;
            cand.push_back(a);
            if (is_reduced(cand, c)) ok.push_back(a);
        }
        if (ok.empty()) break;
        w.push_back(ok[std::uniform_int_distribution<size_t>(0, ok.size() - 1)(rng)]);
    }
    return w;
}

inline std::vector<int> random_pattern(size_t nu, size_t nv, std::mt19937_64& rng) {
    std::vector<int> p(nu, 0);
    p.insert(p.end(), nv, 1);
    std::shuffle(p.begin(), p.end(), rng);
    return p;
}

} // namespace bfz
