// Command-line front end: build / check / rigidity / glue over a JSON spec.

#include <CLI11.hpp>

#include <iostream>

#include "bfz/commands.hpp"

namespace {

void write_outputs(const bfz::CommandResult& res, const std::string& out_dir) {
    if (out_dir.empty()) {
        std::cout << res.output.dump(2) << "\n";
        return;
    }
    std::filesystem::create_directories(out_dir);
    bfz::atomic_write(std::filesystem::path(out_dir) / "output.json", res.output.dump(2) + "\n");
    for (const auto& [name, content] : res.files)
        bfz::atomic_write(std::filesystem::path(out_dir) / name, content);
}

bfz::JobSpec load_spec(const std::string& path) { return bfz::parse_jobspec_file(path); }

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"BFZ quivers on cylinders: construction, dimer checks, rigidity"};
    app.require_subcommand(1);

    std::string spec_path, spec_path2, out_dir, formats = "json", sign_convention, fixture;
    int max_cycle_len = 0, trunc_degree = 0, random_count = 0, max_word_len = 6;
    uint64_t seed = 0;
    bool exclude_boundary = false, no_frozen_arrows = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--out", out_dir, "directory for output files (default: stdout)");
        cmd->add_option("--sign-convention", sign_convention,
                        "example (default) or strict-bfz");
    };

    auto* build = app.add_subcommand("build", "construct the quiver and its artifacts");
    build->add_option("spec", spec_path, "JSON job spec")->required();
    build->add_option("--format", formats, "comma list of json,dot,tikz");
    build->add_flag("--no-frozen-arrows", no_frozen_arrows,
                    "emit the plain edge-rule quiver without completion arrows");
    add_common(build);

    auto* check = app.add_subcommand("check", "verify the dimer-model conditions");
    check->add_option("spec", spec_path, "JSON job spec")->required();
    check->add_option("--random", random_count, "run N randomized word pairs instead");
    check->add_option("--seed", seed, "seed for --random");
    check->add_option("--max-word-len", max_word_len, "word length bound for --random");
    add_common(check);

    auto* rigidity = app.add_subcommand("rigidity", "superpotential rigidity certificate");
    rigidity->add_option("spec", spec_path, "JSON job spec");
    rigidity->add_option("--max-cycle-len", max_cycle_len, "cycle length bound (0 = default)");
    rigidity->add_option("--trunc-degree", trunc_degree, "ideal truncation degree (0 = default)");
    rigidity->add_flag("--exclude-boundary-derivatives", exclude_boundary,
                       "omit derivatives of frozen-frozen arrows");
    rigidity->add_option("--fixture", fixture, "named fixture (triangle-zero)");
    add_common(rigidity);

    auto* glue_cmd = app.add_subcommand("glue", "glue (u,e) below (e,v) and compare with direct");
    glue_cmd->add_option("bottom", spec_path, "spec providing u")->required();
    glue_cmd->add_option("top", spec_path2, "spec providing v")->required();
    add_common(glue_cmd);

    CLI11_PARSE(app, argc, argv);

    bfz::CommandResult res;
    try {
        auto apply_overrides = [&](bfz::JobSpec& spec) {
            if (!sign_convention.empty()) {
                if (sign_convention == "example") spec.convention = bfz::SignConvention::example;
                else if (sign_convention == "strict-bfz")
                    spec.convention = bfz::SignConvention::strict_bfz;
                else
                    throw bfz::InvalidInput("bad_spec",
                                            "unknown sign convention " + sign_convention);
            }
            if (max_cycle_len > 0) spec.max_cycle_len = max_cycle_len;
            if (trunc_degree > 0) spec.trunc_degree = trunc_degree;
            if (exclude_boundary) spec.include_boundary = false;
        };

        if (build->parsed()) {
            auto spec = load_spec(spec_path);
            apply_overrides(spec);
            bfz::BuildFormats fmt;
            fmt.json = formats.find("json") != std::string::npos;
            fmt.dot = formats.find("dot") != std::string::npos;
            fmt.tikz = formats.find("tikz") != std::string::npos;
            fmt.frozen_arrows = !no_frozen_arrows;
            res = bfz::cmd_build(spec, fmt);
        } else if (check->parsed()) {
            auto spec = load_spec(spec_path);
            apply_overrides(spec);
            bfz::CheckOptions opt;
            opt.random_count = random_count;
            opt.seed = seed;
            opt.max_word_len = max_word_len;
            res = bfz::cmd_check(spec, opt);
        } else if (rigidity->parsed()) {
            if (!fixture.empty()) {
                if (fixture != "triangle-zero")
                    throw bfz::InvalidInput("bad_spec", "unknown fixture " + fixture);
                res = bfz::cmd_rigidity_fixture_triangle_zero();
            } else {
                if (spec_path.empty())
                    throw bfz::InvalidInput("bad_spec", "rigidity needs a spec or --fixture");
                auto spec = load_spec(spec_path);
                apply_overrides(spec);
                res = bfz::cmd_rigidity(spec);
            }
        } else if (glue_cmd->parsed()) {
            auto bottom = load_spec(spec_path);
            auto top = load_spec(spec_path2);
            apply_overrides(bottom);
            apply_overrides(top);
            res = bfz::cmd_glue(bottom, top);
        }
    } catch (const bfz::InvalidInput& e) {
        res = bfz::invalid_input_result(e);
    } catch (const std::exception& e) {
        // Internal invariant failure; report instead of aborting.
        std::cerr << "internal error: " << e.what() << "\n";
        return 70;
    }

    try {
        write_outputs(res, out_dir);
    } catch (const bfz::InvalidInput& e) {
        std::cerr << e.what() << "\n";
        return bfz::exit_invalid;
    }
    return res.exit_code;
}
