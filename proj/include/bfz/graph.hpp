#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "bfz/core.hpp"

namespace bfz {

// Undirected edge with endpoints stored as (min, max).
using Edge = std::pair<int, int>;

inline Edge make_edge(int a, int b) { return a < b ? Edge{a, b} : Edge{b, a}; }

// A finite tree with vertices labelled 1..r.  Validated at construction:
// labels contiguous, no self-loops, no multi-edges, connected, acyclic.
class LabeledGraph {
public:
    LabeledGraph(std::vector<int> vertices, std::vector<Edge> edges) {
        std::sort(vertices.begin(), vertices.end());
        rank_ = static_cast<int>(vertices.size());
        if (rank_ < 1)
            throw InvalidInput("bad_label", "graph needs at least one vertex");
        for (int i = 0; i < rank_; ++i)
            if (vertices[i] != i + 1)
                throw InvalidInput("bad_label",
                                   "vertex labels must be exactly 1.." + std::to_string(rank_));
        for (auto [a, b] : edges) {
            if (a == b)
                throw InvalidInput("self_loop", "self-loop at vertex " + std::to_string(a));
            if (a < 1 || a > rank_ || b < 1 || b > rank_)
                throw InvalidInput("bad_label", "edge endpoint out of range");
            if (!edges_.insert(make_edge(a, b)).second)
                throw InvalidInput("duplicate_edge", "duplicate edge " + std::to_string(a) + "-" +
                                                         std::to_string(b));
        }
        if (static_cast<int>(edges_.size()) > rank_ - 1)
            throw InvalidInput("cycle_detected", "graph contains a cycle");
        // Connectivity; together with |E| <= r-1 this forces a tree.
        std::vector<bool> seen(rank_ + 1, false);
        std::vector<int> stack{1};
        seen[1] = true;
        int visited = 0;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            ++visited;
            for (int w : neighbors(v))
                if (!seen[w]) {
                    seen[w] = true;
                    stack.push_back(w);
                }
        }
        if (visited != rank_)
            throw InvalidInput("not_connected", "graph is not connected");
    }

    int rank() const { return rank_; }
    const std::set<Edge>& edges() const { return edges_; }

    bool has_edge(int a, int b) const { return a != b && edges_.count(make_edge(a, b)) > 0; }

    std::vector<int> neighbors(int v) const {
        std::vector<int> out;
        for (const auto& [a, b] : edges_) {
            if (a == v) out.push_back(b);
            if (b == v) out.push_back(a);
        }
        return out;
    }

    int degree(int v) const { return static_cast<int>(neighbors(v).size()); }

private:
    int rank_ = 0;
    std::set<Edge> edges_;
};

// Symmetric generalized Cartan matrix of the tree: 2 on the diagonal,
// -1 across edges, 0 otherwise.
class CartanData {
public:
    explicit CartanData(const LabeledGraph& g) : rank_(g.rank()) {
        a_.assign(rank_, std::vector<int>(rank_, 0));
        for (int i = 0; i < rank_; ++i) a_[i][i] = 2;
        for (auto [u, v] : g.edges()) {
            a_[u - 1][v - 1] = -1;
            a_[v - 1][u - 1] = -1;
        }
    }

    int rank() const { return rank_; }

    // Entry a_{ij} for vertex labels i, j in 1..r.
    int at(int i, int j) const { return a_[i - 1][j - 1]; }

    const std::vector<std::vector<int>>& matrix() const { return a_; }

private:
    int rank_;
    std::vector<std::vector<int>> a_;
};

inline CartanData cartan_matrix(const LabeledGraph& g) { return CartanData(g); }

// A branch is a path between two special vertices (endpoints or
// ramification points) whose interior vertices all have degree 2.
struct Branch {
    std::vector<int> path; // vertex labels, ends are special
    int length() const { return static_cast<int>(path.size()) - 1; }
};

struct BranchDecomposition {
    std::set<int> special_vertices; // endpoints and ramification points
    std::vector<Branch> branches;   // every edge covered exactly once
    std::set<int> spines;           // ramification points (degree >= 3)
};

inline BranchDecomposition branch_decomposition(const LabeledGraph& g) {
    BranchDecomposition d;
    for (int v = 1; v <= g.rank(); ++v) {
        int deg = g.degree(v);
        if (deg <= 1) d.special_vertices.insert(v); // covers the one-vertex tree
        if (deg >= 3) {
            d.special_vertices.insert(v);
            d.spines.insert(v);
        }
    }
    std::set<Edge> used;
    for (int start : d.special_vertices) {
        for (int next : g.neighbors(start)) {
            if (used.count(make_edge(start, next))) continue;
            Branch b;
            b.path.push_back(start);
            int prev = start, cur = next;
            used.insert(make_edge(prev, cur));
            b.path.push_back(cur);
            while (!d.special_vertices.count(cur)) {
                for (int w : g.neighbors(cur))
                    if (w != prev) {
                        used.insert(make_edge(cur, w));
                        prev = cur;
                        cur = w;
                        b.path.push_back(cur);
                        break;
                    }
            }
            // Canonical direction: smaller end label first.
            if (b.path.back() < b.path.front()) std::reverse(b.path.begin(), b.path.end());
            d.branches.push_back(std::move(b));
        }
    }
    std::sort(d.branches.begin(), d.branches.end(),
              [](const Branch& x, const Branch& y) { return x.path < y.path; });
    // Dedupe: a branch between two special vertices is discovered from both ends.
    d.branches.erase(std::unique(d.branches.begin(), d.branches.end(),
                                 [](const Branch& x, const Branch& y) { return x.path == y.path; }),
                     d.branches.end());
    return d;
}

// Branch containing a given edge, as an index into decomposition.branches.
inline int branch_of_edge(const BranchDecomposition& d, const Edge& e) {
    for (size_t i = 0; i < d.branches.size(); ++i) {
        const auto& p = d.branches[i].path;
        for (size_t j = 0; j + 1 < p.size(); ++j)
            if (make_edge(p[j], p[j + 1]) == e) return static_cast<int>(i);
    }
    throw InternalError("edge not covered by any branch");
}

} // namespace bfz
