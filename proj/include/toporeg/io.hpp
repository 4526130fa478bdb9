#ifndef TOPOREG_IO_HPP
#define TOPOREG_IO_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <system_error>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"

#include "toporeg/errors.hpp"
#include "toporeg/graph.hpp"
#include "toporeg/optimizer.hpp"
#include "toporeg/persistence.hpp"
#include "toporeg/point_cloud.hpp"
#include "toporeg/topo_loss.hpp"
#include "toporeg/trajectory.hpp"

namespace toporeg {

// Shortest decimal string that round-trips the exact value.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s, const std::string& context) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        fail(ErrorCode::IoError, "bad number '" + s + "' in " + context);
    return v;
}

inline long parse_long(const std::string& s, const std::string& context) {
    long v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        fail(ErrorCode::IoError, "bad integer '" + s + "' in " + context);
    return v;
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

inline std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::IoError, "cannot open " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(ErrorCode::IoError, "cannot write " + path);
    return out;
}

} // namespace detail

// ---- point clouds: id,x,y ----

inline void write_points_csv(const std::string& path, const PointCloud& cloud) {
    auto out = detail::open_out(path);
    out << "id,x,y\n";
    for (std::size_t i = 0; i < cloud.points.size(); ++i)
        out << cloud.ids[i] << ',' << format_double(cloud.points[i].x) << ','
            << format_double(cloud.points[i].y) << '\n';
}

inline PointCloud read_points_csv(const std::string& path) {
    const auto lines = detail::read_lines(path);
    if (lines.empty() || detail::split_csv_line(lines[0]) != std::vector<std::string>{"id", "x", "y"})
        fail(ErrorCode::IoError, path + ": expected header id,x,y");
    PointCloud cloud;
    for (std::size_t k = 1; k < lines.size(); ++k) {
        const auto f = detail::split_csv_line(lines[k]);
        if (f.size() != 3) fail(ErrorCode::IoError, path + ": row needs 3 fields");
        cloud.ids.push_back(f[0]);
        cloud.points.push_back(Vec2{parse_double(f[1], path), parse_double(f[2], path)});
    }
    return cloud;
}

// ---- persistence diagrams: dim,birth,death,birth_simplex,death_simplex ----

inline void write_diagram_csv(const std::string& path,
                              const std::vector<PersistenceDiagram>& diagrams) {
    auto out = detail::open_out(path);
    out << "dim,birth,death,birth_simplex,death_simplex\n";
    for (const auto& dgm : diagrams)
        for (const auto& p : dgm.pairs)
            out << dgm.dimension << ',' << format_double(p.birth) << ',' << format_double(p.death)
                << ',' << p.birth_simplex << ',' << p.death_simplex << '\n';
}

inline std::vector<PersistenceDiagram> read_diagram_csv(const std::string& path) {
    const auto lines = detail::read_lines(path);
    if (lines.empty() ||
        detail::split_csv_line(lines[0]) !=
            std::vector<std::string>{"dim", "birth", "death", "birth_simplex", "death_simplex"})
        fail(ErrorCode::IoError, path + ": expected diagram header");
    std::vector<PersistenceDiagram> diagrams(2);
    diagrams[0].dimension = 0;
    diagrams[1].dimension = 1;
    for (std::size_t k = 1; k < lines.size(); ++k) {
        const auto f = detail::split_csv_line(lines[k]);
        if (f.size() != 5) fail(ErrorCode::IoError, path + ": row needs 5 fields");
        PersistencePair p;
        p.dimension = static_cast<int>(parse_long(f[0], path));
        p.birth = parse_double(f[1], path);
        p.death = parse_double(f[2], path);
        p.birth_simplex = static_cast<int>(parse_long(f[3], path));
        p.death_simplex = static_cast<int>(parse_long(f[4], path));
        if (p.dimension < 0 || p.dimension > 1)
            fail(ErrorCode::IoError, path + ": dimension must be 0 or 1");
        diagrams[p.dimension].pairs.push_back(p);
    }
    return diagrams;
}

// ---- loss traces: epoch,emb_loss,topo_loss,total_loss,seconds ----

// Wall-clock seconds are written as 0 unless with_timings is set, keeping
// repeated runs byte-identical.
inline void write_trace_csv(const std::string& path, const LossTrace& trace,
                            bool with_timings = false) {
    auto out = detail::open_out(path);
    out << "epoch,emb_loss,topo_loss,total_loss,seconds\n";
    for (const auto& e : trace.entries)
        out << e.epoch << ',' << format_double(e.emb_loss) << ',' << format_double(e.topo_loss)
            << ',' << format_double(e.total_loss) << ','
            << format_double(with_timings ? e.seconds : 0.0) << '\n';
}

inline LossTrace read_trace_csv(const std::string& path) {
    const auto lines = detail::read_lines(path);
    if (lines.empty() ||
        detail::split_csv_line(lines[0]) !=
            std::vector<std::string>{"epoch", "emb_loss", "topo_loss", "total_loss", "seconds"})
        fail(ErrorCode::IoError, path + ": expected trace header");
    LossTrace trace;
    for (std::size_t k = 1; k < lines.size(); ++k) {
        const auto f = detail::split_csv_line(lines[k]);
        if (f.size() != 5) fail(ErrorCode::IoError, path + ": row needs 5 fields");
        TraceEntry e;
        e.epoch = static_cast<int>(parse_long(f[0], path));
        e.emb_loss = parse_double(f[1], path);
        e.topo_loss = parse_double(f[2], path);
        e.total_loss = parse_double(f[3], path);
        e.seconds = parse_double(f[4], path);
        trace.entries.push_back(e);
    }
    return trace;
}

// ---- pseudotime: id,pseudotime,segment,arc_position ----

inline void write_pseudotime_csv(const std::string& path, const std::vector<std::string>& ids,
                                 const PseudotimeResult& res) {
    if (ids.size() != res.pseudotime.size())
        fail(ErrorCode::LengthMismatch, "ids do not match pseudotime length");
    auto out = detail::open_out(path);
    out << "id,pseudotime,segment,arc_position\n";
    for (std::size_t i = 0; i < ids.size(); ++i)
        out << ids[i] << ',' << format_double(res.pseudotime[i]) << ','
            << res.projection.points[i].segment << ','
            << format_double(res.projection.points[i].arc_position) << '\n';
}

// ---- data matrices: header of feature names, one row per observation ----

struct MatrixData {
    Eigen::MatrixXd values;
    std::vector<std::string> columns;
};

inline void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m,
                             std::vector<std::string> columns = {}) {
    if (columns.empty())
        for (Eigen::Index c = 0; c < m.cols(); ++c) columns.push_back("f" + std::to_string(c));
    if (static_cast<Eigen::Index>(columns.size()) != m.cols())
        fail(ErrorCode::LengthMismatch, "column names do not match the matrix");
    auto out = detail::open_out(path);
    for (std::size_t c = 0; c < columns.size(); ++c)
        out << columns[c] << (c + 1 < columns.size() ? ',' : '\n');
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            out << format_double(m(r, c)) << (c + 1 < m.cols() ? ',' : '\n');
}

inline MatrixData read_matrix_csv(const std::string& path) {
    const auto lines = detail::read_lines(path);
    if (lines.empty()) fail(ErrorCode::IoError, path + ": empty matrix file");
    MatrixData out;
    out.columns = detail::split_csv_line(lines[0]);
    const std::size_t cols = out.columns.size();
    out.values.resize(static_cast<Eigen::Index>(lines.size() - 1), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto f = detail::split_csv_line(lines[r]);
        if (f.size() != cols) fail(ErrorCode::IoError, path + ": ragged matrix row");
        for (std::size_t c = 0; c < cols; ++c)
            out.values(static_cast<Eigen::Index>(r - 1), static_cast<Eigen::Index>(c)) =
                parse_double(f[c], path);
    }
    return out;
}

// ---- graphs: one "u v" pair per line, node ids as strings ----

struct NamedGraph {
    Graph graph;
    std::vector<std::string> names; // index -> node id, in order of first appearance
};

inline NamedGraph read_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::IoError, "cannot open " + path);
    NamedGraph out;
    std::vector<std::pair<int, int>> edges;
    std::unordered_map<std::string, int> index;
    auto intern = [&](const std::string& name) {
        auto [it, inserted] = index.emplace(name, static_cast<int>(out.names.size()));
        if (inserted) out.names.push_back(name);
        return it->second;
    };
    std::string u, v;
    while (in >> u >> v) {
        // Two statements: argument evaluation order must not decide which
        // endpoint gets interned (and numbered) first.
        const int iu = intern(u);
        edges.emplace_back(iu, intern(v));
    }
    if (out.names.empty()) fail(ErrorCode::EmptyGraph, path + ": no edges");
    out.graph = make_graph(static_cast<int>(out.names.size()), std::move(edges));
    return out;
}

inline void write_edge_list(const std::string& path, const Graph& g,
                            const std::vector<std::string>& names = {}) {
    auto out = detail::open_out(path);
    for (const auto& [u, v] : g.edges) {
        if (names.empty())
            out << u << ' ' << v << '\n';
        else
            out << names[u] << ' ' << names[v] << '\n';
    }
}

// ---- labels: id,label ----

inline void write_labels_csv(const std::string& path, const std::vector<std::string>& ids,
                             const std::vector<int>& labels) {
    if (ids.size() != labels.size()) fail(ErrorCode::LengthMismatch, "ids do not match labels");
    auto out = detail::open_out(path);
    out << "id,label\n";
    for (std::size_t i = 0; i < ids.size(); ++i) out << ids[i] << ',' << labels[i] << '\n';
}

inline std::vector<std::pair<std::string, int>> read_labels_csv(const std::string& path) {
    const auto lines = detail::read_lines(path);
    if (lines.empty() ||
        detail::split_csv_line(lines[0]) != std::vector<std::string>{"id", "label"})
        fail(ErrorCode::IoError, path + ": expected header id,label");
    std::vector<std::pair<std::string, int>> out;
    for (std::size_t k = 1; k < lines.size(); ++k) {
        const auto f = detail::split_csv_line(lines[k]);
        if (f.size() != 2) fail(ErrorCode::IoError, path + ": row needs 2 fields");
        out.emplace_back(f[0], static_cast<int>(parse_long(f[1], path)));
    }
    return out;
}

// ---- loss-spec JSON ----

// {"terms":[{"weight":1.0,"dim":0,"i":2,"j":null,"mu":-1,"p":1.0,"q":0.0,
//            "f_s":0.25,"n_s":10,"tau":null}]}
// null means absent (j: to the end of the diagram). Unknown keys rejected.
inline TopoLossSpec parse_topo_spec_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::BadConfig, std::string("loss spec is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("terms") || !doc["terms"].is_array())
        fail(ErrorCode::BadConfig, "loss spec must be an object with a 'terms' array");
    for (const auto& key : doc.items())
        if (key.key() != "terms") fail(ErrorCode::BadConfig, "unknown key '" + key.key() + "'");

    static const std::vector<std::string> known{"weight", "dim", "i",   "j",   "mu",  "p",
                                                "q",      "f_s", "n_s", "tau", "with_replacement"};
    TopoLossSpec spec;
    for (const auto& t : doc["terms"]) {
        if (!t.is_object()) fail(ErrorCode::BadConfig, "each term must be an object");
        for (const auto& key : t.items())
            if (std::find(known.begin(), known.end(), key.key()) == known.end())
                fail(ErrorCode::BadConfig, "unknown term key '" + key.key() + "'");
        WeightedTerm wt;
        if (t.contains("weight")) wt.weight = t["weight"].get<double>();
        if (t.contains("dim")) wt.term.dimension = t["dim"].get<int>();
        if (t.contains("i")) wt.term.i = t["i"].get<int>();
        if (t.contains("j") && !t["j"].is_null()) wt.term.j = t["j"].get<int>();
        if (t.contains("mu")) wt.term.mu = t["mu"].get<double>();
        if (t.contains("p")) wt.term.p = t["p"].get<double>();
        if (t.contains("q")) wt.term.q = t["q"].get<double>();
        const bool has_fs = t.contains("f_s") && !t["f_s"].is_null();
        const bool has_ns = t.contains("n_s") && !t["n_s"].is_null();
        if (has_fs || has_ns) {
            TopoSampling smp;
            if (has_fs) smp.f_s = t["f_s"].get<double>();
            if (has_ns) smp.n_s = t["n_s"].get<int>();
            if (t.contains("with_replacement") && !t["with_replacement"].is_null())
                smp.with_replacement = t["with_replacement"].get<bool>();
            wt.term.sampling = smp;
        } else if (t.contains("with_replacement") && !t["with_replacement"].is_null()) {
            fail(ErrorCode::BadConfig, "with_replacement requires f_s or n_s");
        }
        if (t.contains("tau") && !t["tau"].is_null()) wt.term.functional_tau = t["tau"].get<double>();
        wt.term.validate();
        spec.terms.push_back(wt);
    }
    return spec;
}

inline std::string topo_spec_to_json(const TopoLossSpec& spec) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& wt : spec.terms) {
        nlohmann::json t;
        t["weight"] = wt.weight;
        t["dim"] = wt.term.dimension;
        t["i"] = wt.term.i;
        t["j"] = (wt.term.j == -1) ? nlohmann::json() : nlohmann::json(wt.term.j);
        t["mu"] = wt.term.mu;
        t["p"] = wt.term.p;
        t["q"] = wt.term.q;
        if (wt.term.sampling) {
            t["f_s"] = wt.term.sampling->f_s;
            t["n_s"] = wt.term.sampling->n_s;
            if (wt.term.sampling->with_replacement) t["with_replacement"] = true;
        } else {
            t["f_s"] = nlohmann::json();
            t["n_s"] = nlohmann::json();
        }
        t["tau"] = wt.term.functional_tau ? nlohmann::json(*wt.term.functional_tau)
                                          : nlohmann::json();
        terms.push_back(t);
    }
    return nlohmann::json{{"terms", terms}}.dump(2) + "\n";
}

inline TopoLossSpec load_topo_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::IoError, "cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_topo_spec_json(buf.str());
}

} // namespace toporeg

#endif
