#pragma once

#include <random>

#include "bfz/io.hpp"

namespace bfz {

// Exit codes shared by every command.
enum ExitCode { exit_ok = 0, exit_violated = 1, exit_invalid = 2, exit_inconclusive = 3 };

struct CommandResult {
    int exit_code = exit_ok;
    Json output;                              // primary JSON document
    std::map<std::string, std::string> files; // extra artifacts by file name
};

inline CommandResult invalid_input_result(const InvalidInput& e) {
    CommandResult res;
    res.exit_code = exit_invalid;
    res.output = Json{{"error", {{"code", e.code()}, {"message", e.what()}}}};
    return res;
}

struct BuildFormats {
    bool json = true;
    bool dot = false;
    bool tikz = false;
    bool frozen_arrows = true;
};

inline CommandResult cmd_build(const JobSpec& spec, BuildFormats fmt = {}) {
    CommandResult res;
    try {
        Build b = build_from_spec(spec);
        const Quiver& q = fmt.frozen_arrows ? b.completed : b.core;
        res.output = Json{{"quiver", quiver_to_json(q)},
                          {"matrix", matrix_to_json(b.matrix)},
                          {"warnings", b.warnings}};
        if (fmt.json) {
            res.files["quiver.json"] = quiver_to_json(q).dump(2) + "\n";
            res.files["matrix.json"] = matrix_to_json(b.matrix).dump(2) + "\n";
            res.files["embedding.json"] = embedding_to_json(b.embedding).dump(2) + "\n";
            res.files["faces.json"] = faces_to_json(b.face_list).dump(2) + "\n";
        }
        res.files["matrix.txt"] = matrix_to_text(b.matrix);
        res.files["trace.csv"] = format_trace(exchange_matrix_trace(b.word, b.succ, b.cartan));
        if (fmt.dot) res.files["quiver.dot"] = to_dot(b);
        if (fmt.tikz) res.files["quiver.tex"] = to_tikz(b);
    } catch (const InvalidInput& e) {
        return invalid_input_result(e);
    }
    return res;
}

inline Json structural_report(const Build& b) {
    auto rep = check_dimer_conditions(b.completed, b.embedding, b.face_list, b.graph, b.decomp);
    std::pair<std::pair<int, int>, std::pair<int, int>> witness;
    bool planar = check_planarity_per_sheet(b.completed, b.embedding, &witness);
    Json j = dimer_report_to_json(rep);
    j["planar_per_sheet"] = planar;
    if (!planar)
        j["planarity_witness"] = {{witness.first.first, witness.first.second},
                                  {witness.second.first, witness.second.second}};
    j["faces"] = faces_to_json(b.face_list);
    j["completion_warnings"] = b.warnings;
    j["pass"] = rep.all() && planar && b.warnings.empty();
    return j;
}

struct CheckOptions {
    int random_count = 0; // when > 0, run a randomized batch on the spec's graph
    uint64_t seed = 0;
    int max_word_len = 6;
};

inline CommandResult cmd_check(const JobSpec& spec, CheckOptions opt = {}) {
    CommandResult res;
    try {
        if (opt.random_count <= 0) {
            Build b = build_from_spec(spec);
            res.output = structural_report(b);
            res.exit_code = res.output.at("pass").get<bool>() ? exit_ok : exit_violated;
            return res;
        }
        LabeledGraph g(spec.vertices, spec.edges);
        CartanData c(g);
        std::mt19937_64 rng(opt.seed);
        Json runs = Json::array();
        bool all_pass = true;
        for (int i = 0; i < opt.random_count; ++i) {
            Word u = random_reduced_word(g, c, opt.max_word_len, rng);
            Word v = random_reduced_word(g, c, opt.max_word_len, rng);
            auto pattern = random_pattern(u.size(), v.size(), rng);
            Build b = build_quiver(g, u, v, pattern, spec.convention);
            Json rep = structural_report(b);
            bool pass = rep.at("pass").get<bool>();
            all_pass = all_pass && pass;
            runs.push_back({{"u", u}, {"v", v}, {"pattern", pattern}, {"pass", pass},
                            {"report", rep}});
        }
        res.output = Json{{"runs", runs}, {"pass", all_pass}, {"seed", opt.seed},
                          {"count", opt.random_count}};
        res.exit_code = all_pass ? exit_ok : exit_violated;
    } catch (const InvalidInput& e) {
        return invalid_input_result(e);
    }
    return res;
}

// The zero-potential triangle, kept as a named fixture for the CLI.
inline CommandResult cmd_rigidity_fixture_triangle_zero() {
    Quiver q;
    for (int k : {1, 2, 3}) {
        QuiverVertex v;
        v.k = k;
        v.letter = 1;
        v.level = k;
        v.frozen = false;
        q.vertices[k] = v;
    }
    q.add_arrow(1, 2);
    q.add_arrow(2, 3);
    q.add_arrow(3, 1);
    ArrowTable at(q);
    Potential zero;
    RigidityOptions opt;
    opt.max_cycle_len = 3;
    opt.trunc_degree = 6;
    auto rep = is_rigid_up_to(q, zero, at, {}, Embedding{}, opt);
    CommandResult res;
    res.output = rigidity_report_to_json(rep, at);
    res.exit_code = rep.rigid() ? exit_ok
                                : (rep.verdict == "inconclusive" ? exit_inconclusive
                                                                 : exit_violated);
    return res;
}

inline CommandResult cmd_rigidity(const JobSpec& spec) {
    CommandResult res;
    try {
        Build b = build_from_spec(spec);
        ArrowTable at(b.completed);
        auto s = superpotential(b.face_list, at);
        RigidityOptions opt;
        opt.max_cycle_len = spec.max_cycle_len;
        opt.trunc_degree = spec.trunc_degree;
        opt.include_boundary = spec.include_boundary;
        auto rep = is_rigid_up_to(b.completed, s, at, b.face_list, b.embedding, opt);
        res.output = rigidity_report_to_json(rep, at);
        res.output["potential"] = potential_to_json(s, at);
        res.exit_code = rep.rigid() ? exit_ok
                                    : (rep.verdict == "inconclusive" ? exit_inconclusive
                                                                     : exit_violated);
    } catch (const InvalidInput& e) {
        return invalid_input_result(e);
    }
    return res;
}

inline CommandResult cmd_glue(const JobSpec& bottom_spec, const JobSpec& top_spec) {
    CommandResult res;
    try {
        if (bottom_spec.vertices != top_spec.vertices || bottom_spec.edges != top_spec.edges)
            throw InvalidInput("graph_mismatch", "glue requires the same graph in both specs");
        LabeledGraph g(bottom_spec.vertices, bottom_spec.edges);
        Build bottom = build_quiver(g, bottom_spec.u, {}, {}, bottom_spec.convention);
        Build top = build_quiver(g, {}, top_spec.v, {}, top_spec.convention);
        auto glued = glue(bottom, top);
        Build direct = build_quiver(g, bottom_spec.u, top_spec.v, {}, bottom_spec.convention);
        bool matches = glued.quiver == direct.completed;
        Json renaming = Json::array();
        for (const auto& [from, to] : glued.top_renaming)
            renaming.push_back({{"top", from}, {"glued", to}});
        res.output = Json{{"quiver", quiver_to_json(glued.quiver)},
                          {"matches_direct", matches},
                          {"top_renaming", renaming}};
        res.files["glued.json"] = res.output.dump(2) + "\n";
        res.exit_code = matches ? exit_ok : exit_violated;
    } catch (const InvalidInput& e) {
        return invalid_input_result(e);
    }
    return res;
}

} // namespace bfz
