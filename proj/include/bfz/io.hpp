#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bfz/glue.hpp"
#include "bfz/potential.hpp"

namespace bfz {

using Json = nlohmann::json;

// ---------------------------------------------------------------- input --

struct JobSpec {
    std::vector<int> vertices;
    std::vector<Edge> edges;
    Word u, v;
    std::vector<int> pattern;
    SignConvention convention = SignConvention::example;
    bool include_boundary = true;
    int max_cycle_len = 0; // 0 = defaults
    int trunc_degree = 0;
};

inline LabeledGraph parse_graph(const Json& j) {
    if (!j.is_object() || !j.contains("vertices") || !j.contains("edges"))
        throw InvalidInput("bad_spec", "graph spec needs \"vertices\" and \"edges\"");
    std::vector<int> vs;
    for (const auto& v : j.at("vertices")) {
        if (!v.is_number_integer()) throw InvalidInput("bad_spec", "vertex labels are integers");
        vs.push_back(v.get<int>());
    }
    std::vector<Edge> es;
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 2)
            throw InvalidInput("bad_spec", "edges are two-element arrays");
        es.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
    }
    return LabeledGraph(vs, es);
}

inline JobSpec parse_jobspec(const Json& j) {
    JobSpec spec;
    if (!j.is_object() || !j.contains("graph"))
        throw InvalidInput("bad_spec", "spec needs a \"graph\" object");
    for (const auto& v : j.at("graph").at("vertices")) spec.vertices.push_back(v.get<int>());
    for (const auto& e : j.at("graph").at("edges"))
        spec.edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
    auto read_word = [&](const char* key, Word& out) {
        if (!j.contains(key)) return;
        for (const auto& x : j.at(key)) {
            if (!x.is_number_integer()) throw InvalidInput("bad_spec", "words are integer arrays");
            out.push_back(x.get<int>());
        }
    };
    read_word("u", spec.u);
    read_word("v", spec.v);
    if (j.contains("pattern"))
        for (const auto& x : j.at("pattern")) spec.pattern.push_back(x.get<int>());
    if (j.contains("options")) {
        const auto& o = j.at("options");
        if (o.contains("sign_convention")) {
            std::string sc = o.at("sign_convention").get<std::string>();
            if (sc == "example") spec.convention = SignConvention::example;
            else if (sc == "strict-bfz") spec.convention = SignConvention::strict_bfz;
            else throw InvalidInput("bad_spec", "unknown sign convention " + sc);
        }
        if (o.contains("include_boundary_derivatives"))
            spec.include_boundary = o.at("include_boundary_derivatives").get<bool>();
        if (o.contains("max_cycle_len")) spec.max_cycle_len = o.at("max_cycle_len").get<int>();
        if (o.contains("trunc_degree")) spec.trunc_degree = o.at("trunc_degree").get<int>();
    }
    return spec;
}

inline JobSpec parse_jobspec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw InvalidInput("bad_spec", "cannot open spec file " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw InvalidInput("bad_spec", std::string("spec is not valid JSON: ") + e.what());
    }
    return parse_jobspec(j);
}

inline Build build_from_spec(const JobSpec& spec) {
    LabeledGraph g(spec.vertices, spec.edges);
    return build_quiver(g, spec.u, spec.v, spec.pattern, spec.convention);
}

// --------------------------------------------------------------- output --

inline Json quiver_to_json(const Quiver& q) {
    Json verts = Json::array();
    for (const auto& [k, rec] : q.vertices)
        verts.push_back({{"k", k},
                         {"letter", rec.letter},
                         {"frozen", rec.frozen},
                         {"level", rec.level}});
    Json arrows = Json::array();
    for (const auto& [st, mult] : q.arrows)
        for (int i = 0; i < mult; ++i) arrows.push_back({st.first, st.second});
    return Json{{"vertices", verts}, {"arrows", arrows}};
}

inline Json matrix_to_json(const ExchangeMatrix& m) {
    return Json{{"rows", m.row_labels}, {"cols", m.col_labels}, {"entries", m.entries}};
}

// Canonical plain-text form of the exchange matrix; golden tests compare
// these bytes.
inline std::string matrix_to_text(const ExchangeMatrix& m) {
    std::ostringstream os;
    os << "rows:";
    for (int k : m.row_labels) os << ' ' << k;
    os << "\ncols:";
    for (int l : m.col_labels) os << ' ' << l;
    os << '\n';
    for (size_t i = 0; i < m.row_labels.size(); ++i) {
        os << m.row_labels[i] << ':';
        for (int x : m.entries[i]) os << ' ' << x;
        os << '\n';
    }
    return os.str();
}

inline Json embedding_to_json(const Embedding& e) {
    Json placement = Json::array();
    for (const auto& [k, p] : e.placement)
        placement.push_back({{"k", k}, {"string", p.string}, {"level", p.level}});
    Json arrows = Json::array();
    for (const auto& [st, ac] : e.classification) {
        Json a{{"from", st.first}, {"to", st.second}};
        if (ac.kind == ArrowKind::vertical) {
            a["kind"] = "vertical";
            a["string"] = ac.string;
        } else {
            a["kind"] = "inclined";
            a["edge"] = {ac.edge.first, ac.edge.second};
            a["sheet"] = ac.branch;
        }
        arrows.push_back(a);
    }
    return Json{{"placement", placement}, {"arrows", arrows}};
}

inline Json faces_to_json(const std::vector<Face>& fs) {
    Json out = Json::array();
    for (const auto& f : fs) {
        Json boundary = Json::array();
        for (const auto& a : f.boundary) boundary.push_back({a.first, a.second});
        out.push_back({{"sheet", {f.sheet_edge.first, f.sheet_edge.second}},
                       {"vertices", f.vertex_cycle},
                       {"boundary", boundary},
                       {"oriented", f.oriented},
                       {"orientation", f.orientation > 0 ? "acw" : (f.orientation < 0 ? "cw" : "none")}});
    }
    return out;
}

inline Json dimer_report_to_json(const DimerReport& rep) {
    Json spine_pairs = Json::array();
    for (const auto& [i, j, shared] : rep.shared.spine_pairs) {
        Json arrows = Json::array();
        for (const auto& a : shared) arrows.push_back({a.first, a.second});
        spine_pairs.push_back({{"faces", {i, j}}, {"shared_arrows", arrows}});
    }
    return Json{{"arrows_project", rep.arrows_project},
                {"faces_project", rep.faces_project},
                {"faces_oriented", rep.faces_oriented},
                {"boundary_frozen", rep.boundary_frozen},
                {"shared_edges_ok", rep.shared_edges_ok},
                {"all_pass", rep.all()},
                {"spine_sharing_pairs", spine_pairs},
                {"witnesses", rep.witnesses}};
}

inline Json path_to_json(const Path& p) {
    Json out = Json::array();
    for (int id : p) out.push_back(id);
    return out;
}

inline Json rigidity_report_to_json(const RigidityReport& rep, const ArrowTable& at) {
    Json arrows = Json::array();
    for (int i = 0; i < at.count(); ++i) arrows.push_back({at.src(i), at.dst(i)});
    Json cycles = Json::array();
    for (const auto& cv : rep.cycles) {
        Json c{{"cycle", path_to_json(cv.cycle)},
               {"simple", cv.simple},
               {"verdict", cv.member ? "member" : "not_member_at_degree"}};
        if (cv.member) {
            Json cyc = Json::array();
            for (const auto& t : cv.cyclic_part)
                cyc.push_back({{"coeff", rat_to_string(t.coeff)},
                               {"cycle", path_to_json(t.cycle)},
                               {"rotation", t.rotation}});
            Json ideal = Json::array();
            for (const auto& t : cv.ideal_part)
                ideal.push_back({{"coeff", rat_to_string(t.coeff)},
                                 {"arrow", t.arrow},
                                 {"left", path_to_json(t.left)},
                                 {"right", path_to_json(t.right)}});
            c["certificate"] = Json{{"cyclic", cyc}, {"ideal", ideal}};
        } else {
            Json res = Json::array();
            for (const auto& [p, coeff] : cv.residual)
                res.push_back({{"path", path_to_json(p)}, {"coeff", rat_to_string(coeff)}});
            c["residual"] = res;
        }
        cycles.push_back(c);
    }
    return Json{{"verdict", rep.verdict},
                {"max_cycle_len", rep.max_cycle_len},
                {"trunc_degree_initial", rep.degree_initial},
                {"trunc_degree_final", rep.degree_final},
                {"escalated", rep.escalated},
                {"capped", rep.capped},
                {"include_boundary_derivatives", rep.include_boundary},
                {"cyclic_rank", rep.cyclic_rank},
                {"ideal_rank", rep.ideal_rank},
                {"arrows", arrows},
                {"cycles", cycles},
                {"note", std::string("a not_member_at_degree verdict is inconclusive about ") +
                             "the completed ideal"}};
}

inline Json potential_to_json(const Potential& s, const ArrowTable& at) {
    (void)at;
    Json terms = Json::array();
    for (const auto& [cycle, coeff] : s.combination)
        terms.push_back({{"coeff", rat_to_string(coeff)}, {"cycle", path_to_json(cycle)}});
    return terms;
}

// ------------------------------------------------------------- drawings --

namespace detail {
inline std::string sheet_color(int branch) {
    static const char* palette[] = {"forestgreen", "red3", "dodgerblue3", "darkorange2",
                                    "purple3", "goldenrod3"};
    return palette[branch % 6];
}
} // namespace detail

// DOT drawing: frozen vertices boxed, arrows grouped per sheet with one
// color each; spine verticals stay black at top level.
inline std::string to_dot(const Build& b) {
    std::ostringstream os;
    os << "digraph bfz {\n  rankdir=BT;\n";
    for (const auto& [k, rec] : b.completed.vertices)
        os << "  \"" << k << "\" [shape=" << (rec.frozen ? "box" : "circle") << "];\n";
    std::map<int, std::vector<std::pair<int, int>>> per_sheet;
    std::vector<std::pair<int, int>> on_strings;
    for (const auto& [st, ac] : b.embedding.classification) {
        if (ac.kind == ArrowKind::inclined) per_sheet[ac.branch].push_back(st);
        else on_strings.push_back(st);
    }
    for (const auto& [branch, arrows] : per_sheet) {
        const auto& path = b.decomp.branches[branch].path;
        os << "  subgraph sheet_" << branch << " {\n    edge [color=\""
           << detail::sheet_color(branch) << "\"]; // sheet";
        for (int v : path) os << ' ' << v;
        os << "\n";
        for (const auto& [s, t] : arrows) os << "    \"" << s << "\" -> \"" << t << "\";\n";
        os << "  }\n";
    }
    for (const auto& [s, t] : on_strings) os << "  \"" << s << "\" -> \"" << t << "\";\n";
    os << "}\n";
    return os.str();
}

// TikZ drawing in the style of the cylinder pictures: one panel per sheet,
// strings as vertical lines, spine strings repeated in every panel that
// contains them.
inline std::string to_tikz(const Build& b) {
    std::ostringstream os;
    os << "\\begin{tikzpicture}[xscale=1.2,yscale=0.55,\n"
       << "  frozen/.style={rectangle,draw,inner sep=2pt},\n"
       << "  mutable/.style={circle,draw,fill=black,inner sep=1.5pt}]\n";
    double panel_x = 0;
    for (size_t br = 0; br < b.decomp.branches.size(); ++br) {
        const auto& path = b.decomp.branches[br].path;
        os << "% sheet";
        for (int v : path) os << ' ' << v;
        os << '\n';
        std::map<int, double> xs;
        for (size_t i = 0; i < path.size(); ++i) xs[path[i]] = panel_x + double(i);
        for (int letter : path) {
            for (int k : b.embedding.strings.at(letter)) {
                const auto& rec = b.completed.vertices.at(k);
                os << "\\node[" << (rec.frozen ? "frozen" : "mutable") << "] (n" << br << "_" << k
                   << ") at (" << xs[letter] << "," << rec.level << ") {\\tiny $" << k << "$};\n";
            }
        }
        for (const auto& [st, ac] : b.embedding.classification) {
            bool here = false;
            if (ac.kind == ArrowKind::vertical)
                here = std::find(path.begin(), path.end(), ac.string) != path.end();
            else
                here = ac.branch == static_cast<int>(br);
            if (!here) continue;
            os << "\\draw[->] (n" << br << "_" << st.first << ") -- (n" << br << "_" << st.second
               << ");\n";
        }
        panel_x += double(path.size()) + 1.0;
    }
    os << "\\end{tikzpicture}\n";
    return os.str();
}

// ------------------------------------------------------------ file sink --

inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out.good()) throw InvalidInput("bad_spec", "cannot write " + tmp.string());
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

} // namespace bfz
