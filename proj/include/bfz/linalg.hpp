#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "bfz/core.hpp"

namespace bfz {

// Sparse vector over exact rationals, terms sorted by column id.
using SparseVec = std::vector<std::pair<int, Rat>>;

inline void normalize_terms(SparseVec& v) {
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    SparseVec out;
    for (auto& [c, x] : v) {
        if (!out.empty() && out.back().first == c) out.back().second += x;
        else out.push_back({c, x});
    }
    out.erase(std::remove_if(out.begin(), out.end(),
                             [](const auto& t) { return t.second == 0; }),
              out.end());
    v = std::move(out);
}

// axpy: target += coeff * src (both sorted).
inline void add_scaled(SparseVec& target, const Rat& coeff, const SparseVec& src) {
    if (coeff == 0 || src.empty()) return;
    SparseVec merged;
    merged.reserve(target.size() + src.size());
    size_t i = 0, j = 0;
    while (i < target.size() || j < src.size()) {
        if (j == src.size() || (i < target.size() && target[i].first < src[j].first))
            merged.push_back(target[i++]);
        else if (i == target.size() || src[j].first < target[i].first)
            merged.push_back({src[j].first, coeff * src[j].second}), ++j;
        else {
            Rat x = target[i].second + coeff * src[j].second;
            if (x != 0) merged.push_back({target[i].first, x});
            ++i, ++j;
        }
    }
    target = std::move(merged);
}

// Incremental row echelon with provenance: every stored row knows its
// expression as a combination of the original generators it came from.
// Pivot column of a row is its largest column id; pivot coefficient is
// normalized to 1.  Fully deterministic.
class Echelon {
public:
    struct Row {
        SparseVec terms;      // sorted by column
        SparseVec provenance; // sorted by generator id
    };

    // Returns true when the row added rank (was independent).
    bool add_row(SparseVec terms, int generator_id) {
        SparseVec prov{{generator_id, Rat(1)}};
        reduce_inplace(terms, prov);
        if (terms.empty()) return false;
        Rat lead = terms.back().second;
        for (auto& [c, x] : terms) x /= lead;
        for (auto& [g, x] : prov) x /= lead;
        int pivot = terms.back().first;
        rows_.emplace(pivot, Row{std::move(terms), std::move(prov)});
        return true;
    }

    // Reduce v against the echelon; on full reduction `combination` holds
    // the generator combination with v = sum(combination) (sign included).
    SparseVec reduce(SparseVec v, SparseVec* combination = nullptr) const {
        SparseVec prov;
        reduce_inplace(v, prov);
        if (combination) {
            for (auto& [g, x] : prov) x = -x;
            normalize_terms(prov);
            *combination = std::move(prov);
        }
        return v;
    }

    int rank() const { return static_cast<int>(rows_.size()); }

private:
    void reduce_inplace(SparseVec& v, SparseVec& prov) const {
        while (!v.empty()) {
            int pivot = v.back().first;
            auto it = rows_.find(pivot);
            if (it == rows_.end()) {
                // Largest column is not a pivot; eliminate below it only.
                bool progressed = false;
                for (size_t i = v.size(); i-- > 0;) {
                    auto jt = rows_.find(v[i].first);
                    if (jt == rows_.end()) continue;
                    Rat c = -v[i].second;
                    add_scaled(v, c, jt->second.terms);
                    add_scaled(prov, c, jt->second.provenance);
                    progressed = true;
                    break;
                }
                if (!progressed) return;
                continue;
            }
            Rat c = -v.back().second;
            add_scaled(v, c, it->second.terms);
            add_scaled(prov, c, it->second.provenance);
        }
    }

    std::map<int, Row> rows_;
};

} // namespace bfz
