#pragma once

#include "bfz/embedding.hpp"

namespace bfz {

// End-to-end construction for one (graph, u, v, pattern) input.
struct Build {
    LabeledGraph graph;
    CartanData cartan;
    BranchDecomposition decomp;
    ShuffledWord word;
    SuccessorMap succ;
    ExchangeMatrix matrix;
    Quiver core;       // edge-rule arrows only
    Quiver completed;  // with frozen-completion arrows
    Embedding embedding; // of the completed quiver
    std::vector<Face> face_list;
    std::vector<std::string> warnings;
};

inline Build build_quiver(const LabeledGraph& g, const Word& u, const Word& v,
                          const std::vector<int>& pattern = {},
                          SignConvention sc = SignConvention::example) {
    CartanData c(g);
    ShuffledWord w = shuffle(g, c, u, v, pattern, sc);
    SuccessorMap s = successor_map(w);
    Build b{g,
            c,
            branch_decomposition(g),
            w,
            s,
            exchange_matrix(w, s, c),
            quiver_direct(w, s, c),
            Quiver{},
            Embedding{},
            {},
            {}};
    Embedding core_emb = embed(b.core, b.graph, b.decomp);
    b.completed = add_frozen_completion_arrows(b.core, core_emb, w, s, c, &b.warnings);
    b.embedding = embed(b.completed, b.graph, b.decomp);
    b.face_list = faces(b.completed, b.embedding);
    return b;
}

} // namespace bfz
