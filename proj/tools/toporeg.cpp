// Command-line pipeline: dataset generation, persistence, topological
// optimization of point clouds and embeddings, pseudotime, plots, reports.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "CLI11.hpp"

#include "toporeg/toporeg.hpp"

namespace fs = std::filesystem;
using namespace toporeg;

namespace {

struct CommonOpts {
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    bool timings = false;
};

struct OptimOpts {
    std::string topo_spec_path;
    double lambda_top = 1.0;
    double lr = 1e-2;
    int epochs = 100;
    std::string method = "plain";
    bool topo_only = false;
    int record_every = 1;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--seed", o.seed, "random seed (all randomness flows from it)");
    cmd->add_option("--out-dir", o.out_dir, "output directory");
    cmd->add_flag("--timings", o.timings, "write real wall-clock seconds into trace CSVs");
}

void add_optim(CLI::App* cmd, OptimOpts& o) {
    cmd->add_option("--topo-spec", o.topo_spec_path, "topological loss spec JSON file");
    cmd->add_option("--lambda-top", o.lambda_top, "weight of the topological loss");
    cmd->add_option("--lr", o.lr, "learning rate");
    cmd->add_option("--epochs", o.epochs, "number of epochs");
    cmd->add_option("--method", o.method, "plain | adam")
        ->check(CLI::IsMember({"plain", "adam"}));
    cmd->add_flag("--topo-only", o.topo_only, "drop the embedding loss");
    cmd->add_option("--record-every", o.record_every, "trace recording stride");
}

OptimizerConfig make_config(const OptimOpts& o, std::uint64_t seed) {
    OptimizerConfig cfg;
    cfg.lambda_top = o.lambda_top;
    cfg.learning_rate = o.lr;
    cfg.epochs = o.epochs;
    cfg.method = (o.method == "adam") ? OptimizerConfig::Method::AdaptiveMoment
                                      : OptimizerConfig::Method::Plain;
    cfg.seed = seed;
    cfg.topo_only = o.topo_only;
    cfg.record_every = o.record_every;
    return cfg;
}

TopoLossSpec load_spec_or_empty(const std::string& path) {
    if (path.empty()) return {};
    return load_topo_spec(path);
}

std::string out_path(const CommonOpts& common, const std::string& name) {
    fs::create_directories(common.out_dir);
    return (fs::path(common.out_dir) / name).string();
}

PointCloud cloud_with_ids(const Eigen::MatrixXd& embedding, const std::vector<std::string>& ids) {
    PointCloud cloud = cloud_from_rows(embedding);
    if (!ids.empty()) {
        if (ids.size() != cloud.ids.size())
            fail(ErrorCode::LengthMismatch, "ids do not match the embedding");
        cloud.ids = ids;
    }
    return cloud;
}

void write_run_outputs(const CommonOpts& common, const RunResult& res,
                       const std::vector<std::string>& ids) {
    write_points_csv(out_path(common, "embedding.csv"), cloud_with_ids(res.embedding, ids));
    write_trace_csv(out_path(common, "trace.csv"), res.trace, common.timings);
    if (res.aborted)
        std::cerr << "note: run aborted after " << res.completed_epochs
                  << " epochs (" << res.abort_reason << "); last finite state written\n";
}

std::vector<Vec2> parse_centers(const std::string& text) {
    std::vector<Vec2> centers;
    std::stringstream in(text);
    std::string blob;
    while (std::getline(in, blob, ';')) {
        const auto comma = blob.find(',');
        if (comma == std::string::npos)
            fail(ErrorCode::BadConfig, "centers must look like 'x,y;x,y;...'");
        centers.push_back(Vec2{parse_double(blob.substr(0, comma), "centers"),
                               parse_double(blob.substr(comma + 1), "centers")});
    }
    if (centers.empty()) fail(ErrorCode::BadConfig, "no centers given");
    return centers;
}

// ---- generate ----

void cmd_generate(const CommonOpts& common, const std::string& kind, int n, int ambient_dim,
                  double noise, const std::string& centers_text, int points_per_cluster,
                  double spread, int arm_points) {
    if (kind == "circle") {
        const CircleData d = generate_circle(n, ambient_dim, noise, common.seed);
        write_matrix_csv(out_path(common, "data.csv"), d.data);
        auto out = std::ofstream(out_path(common, "angles.csv"));
        out << "id,angle\n";
        for (std::size_t i = 0; i < d.angles.size(); ++i)
            out << i << ',' << format_double(d.angles[i]) << '\n';
    } else if (kind == "clusters") {
        const ClusterData d =
            generate_clusters(parse_centers(centers_text), points_per_cluster, spread, common.seed);
        write_points_csv(out_path(common, "points.csv"), d.cloud);
        write_labels_csv(out_path(common, "labels.csv"), d.cloud.ids, d.labels);
    } else if (kind == "bifurcation") {
        const BifurcationData d = generate_bifurcation(arm_points, ambient_dim, noise, common.seed);
        write_matrix_csv(out_path(common, "data.csv"), d.data);
        write_points_csv(out_path(common, "planar.csv"), d.planar);
        write_labels_csv(out_path(common, "labels.csv"), d.planar.ids, d.labels);
    } else if (kind == "karate") {
        const KarateData d = load_karate();
        write_edge_list(out_path(common, "graph.txt"), d.graph);
        std::vector<std::string> ids;
        for (int i = 0; i < d.graph.n; ++i) ids.push_back(std::to_string(i));
        write_labels_csv(out_path(common, "labels.csv"), ids, d.labels);
    } else {
        fail(ErrorCode::BadConfig, "unknown kind '" + kind + "'");
    }
}

// ---- persistence ----

void cmd_persistence(const CommonOpts& common, const std::string& points_path) {
    const PointCloud cloud = read_points_csv(points_path);
    const Filtration filt = alpha_filtration(cloud);
    const PersistenceResult pers = compute_persistence(filt, 1);
    write_diagram_csv(out_path(common, "diagram.csv"), pers.diagrams);
}

// ---- optimize (raw 2-D point cloud) ----

void cmd_optimize(const CommonOpts& common, const OptimOpts& optim,
                  const std::string& points_path) {
    const PointCloud cloud = read_points_csv(points_path);
    const TopoLossSpec spec = load_spec_or_empty(optim.topo_spec_path);
    const RunResult res = run_points_with_topo(cloud, spec, make_config(optim, common.seed));
    write_run_outputs(common, res, cloud.ids);
}

// ---- embed ----

struct BackendOpts {
    std::string backend = "linear";
    std::string data_path;
    std::string graph_path;
    double ortho_weight = 1e4;
    int knn = 15;
    double min_dist = 0.1;
    int negatives = 5;
    int walk_length = 40;
    int walks_per_node = 10;
    int window = 5;
};

void cmd_embed(const CommonOpts& common, const OptimOpts& optim, const BackendOpts& b) {
    const TopoLossSpec spec = load_spec_or_empty(optim.topo_spec_path);
    const OptimizerConfig cfg = make_config(optim, common.seed);
    Rng rng(common.seed);

    if (b.backend == "linear") {
        if (b.data_path.empty()) fail(ErrorCode::BadConfig, "--data is required for linear");
        Eigen::MatrixXd x = read_matrix_csv(b.data_path).values;
        x = x.rowwise() - x.colwise().mean().eval();
        const Eigen::MatrixXd w0 = pca_init(x);
        const RunResult res = run_linear_with_topo(x, w0, spec, cfg, b.ortho_weight);
        write_run_outputs(common, res, {});
        write_matrix_csv(out_path(common, "loadings.csv"), res.parameters, {"w1", "w2"});
        const Eigen::VectorXd imp = feature_importance(res.parameters);
        auto out = std::ofstream(out_path(common, "importance.csv"));
        out << "feature,importance\n";
        for (Eigen::Index f = 0; f < imp.size(); ++f)
            out << 'f' << f << ',' << format_double(imp(f)) << '\n';
    } else if (b.backend == "neighbor") {
        if (b.data_path.empty()) fail(ErrorCode::BadConfig, "--data is required for neighbor");
        const Eigen::MatrixXd x = read_matrix_csv(b.data_path).values;
        NeighborEmbeddingModel model =
            build_neighbor_model(x, rng, b.knn, b.min_dist, b.negatives);
        const Eigen::MatrixXd e0 = model.embedding;
        const RunResult res = run(neighbor_backend(std::move(model)), e0, spec, cfg);
        write_run_outputs(common, res, {});
    } else if (b.backend == "walk") {
        if (b.graph_path.empty()) fail(ErrorCode::BadConfig, "--graph is required for walk");
        const NamedGraph ng = read_edge_list(b.graph_path);
        RandomWalkGraphModel model = build_random_walk_model(
            ng.graph, rng, b.walk_length, b.walks_per_node, b.window, b.negatives);
        const Eigen::MatrixXd e0 = model.embedding;
        const RunResult res = run(random_walk_backend(std::move(model)), e0, spec, cfg);
        write_run_outputs(common, res, ng.names);
    } else if (b.backend == "inner") {
        if (b.graph_path.empty()) fail(ErrorCode::BadConfig, "--graph is required for inner");
        const NamedGraph ng = read_edge_list(b.graph_path);
        InnerProductGraphModel model = build_inner_product_model(ng.graph, rng);
        const Eigen::MatrixXd e0 = model.embedding;
        const RunResult res = run(inner_product_backend(std::move(model)), e0, spec, cfg);
        write_run_outputs(common, res, ng.names);
    } else {
        fail(ErrorCode::BadConfig, "unknown backend '" + b.backend + "'");
    }
}

// ---- pseudotime ----

void cmd_pseudotime(const CommonOpts& common, const std::string& points_path) {
    const PointCloud cloud = read_points_csv(points_path);
    const PseudotimeResult res = infer_pseudotime(cloud);
    write_pseudotime_csv(out_path(common, "pseudotime.csv"), cloud.ids, res);
}

// ---- plot ----

void cmd_plot(const CommonOpts& common, const std::string& points_path,
              const std::string& labels_path, const std::string& diagram_path,
              const std::string& trace_path) {
    if (points_path.empty() && diagram_path.empty() && trace_path.empty())
        fail(ErrorCode::BadConfig, "nothing to plot: give --points, --diagram, or --trace");
    if (!points_path.empty()) {
        const PointCloud cloud = read_points_csv(points_path);
        std::vector<int> labels;
        if (!labels_path.empty()) {
            std::unordered_map<std::string, int> by_id;
            for (const auto& [id, label] : read_labels_csv(labels_path)) by_id[id] = label;
            for (const auto& id : cloud.ids) {
                auto it = by_id.find(id);
                if (it == by_id.end())
                    fail(ErrorCode::IoError, "no label for point id '" + id + "'");
                labels.push_back(it->second);
            }
        }
        write_text_file(out_path(common, "embedding.svg"), svg_scatter(cloud, labels));
    }
    if (!diagram_path.empty())
        write_text_file(out_path(common, "diagram.svg"), svg_diagram(read_diagram_csv(diagram_path)));
    if (!trace_path.empty())
        write_text_file(out_path(common, "trace.svg"), svg_trace(read_trace_csv(trace_path)));
}

// ---- report ----

void cmd_report(const CommonOpts& common, const OptimOpts& optim, const BackendOpts& b,
                const std::string& experiment) {
    if (optim.topo_spec_path.empty())
        fail(ErrorCode::BadConfig, "report needs --topo-spec");
    const TopoLossSpec spec = load_topo_spec(optim.topo_spec_path);

    struct Variant {
        const char* name;
        bool topo_only;
        double lambda;
    };
    const Variant variants[] = {
        {"ordinary", false, 0.0},
        {"topo_only", true, optim.lambda_top},
        {"regularized", false, optim.lambda_top},
    };

    auto out = std::ofstream(out_path(common, "report.csv"));
    out << "experiment,variant,emb_loss,topo_loss\n";
    for (const Variant& variant : variants) {
        OptimOpts vo = optim;
        vo.topo_only = variant.topo_only;
        vo.lambda_top = variant.lambda;
        const OptimizerConfig cfg = make_config(vo, common.seed);
        Rng rng(common.seed);

        RunResult res;
        if (b.backend == "linear") {
            Eigen::MatrixXd x = read_matrix_csv(b.data_path).values;
            x = x.rowwise() - x.colwise().mean().eval();
            res = run_linear_with_topo(x, pca_init(x), spec, cfg, b.ortho_weight);
        } else if (b.backend == "neighbor") {
            const Eigen::MatrixXd x = read_matrix_csv(b.data_path).values;
            NeighborEmbeddingModel model =
                build_neighbor_model(x, rng, b.knn, b.min_dist, b.negatives);
            const Eigen::MatrixXd e0 = model.embedding;
            res = run(neighbor_backend(std::move(model)), e0, spec, cfg);
        } else if (b.backend == "walk") {
            const NamedGraph ng = read_edge_list(b.graph_path);
            RandomWalkGraphModel model = build_random_walk_model(
                ng.graph, rng, b.walk_length, b.walks_per_node, b.window, b.negatives);
            const Eigen::MatrixXd e0 = model.embedding;
            res = run(random_walk_backend(std::move(model)), e0, spec, cfg);
        } else if (b.backend == "inner") {
            const NamedGraph ng = read_edge_list(b.graph_path);
            InnerProductGraphModel model = build_inner_product_model(ng.graph, rng);
            const Eigen::MatrixXd e0 = model.embedding;
            res = run(inner_product_backend(std::move(model)), e0, spec, cfg);
        } else {
            fail(ErrorCode::BadConfig, "unknown backend '" + b.backend + "'");
        }
        if (res.trace.entries.empty()) fail(ErrorCode::BadConfig, "run recorded no trace");
        const TraceEntry& last = res.trace.entries.back();
        out << experiment << ',' << variant.name << ',' << format_double(last.emb_loss) << ','
            << format_double(last.topo_loss) << '\n';
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"topologically regularized 2-D embeddings"};
    app.require_subcommand(1);

    CommonOpts common;
    OptimOpts optim;
    BackendOpts backend;

    // generate
    auto* gen = app.add_subcommand("generate", "write a synthetic dataset or the karate fixture");
    std::string kind = "circle";
    int gen_n = 50, gen_dim = 500, gen_ppc = 25, gen_arm = 20;
    double gen_noise = 0.45, gen_spread = 0.1;
    std::string gen_centers = "0,0;4,0;0,4;4,4";
    gen->add_option("--kind", kind, "circle | clusters | bifurcation | karate")->required();
    gen->add_option("--n", gen_n, "number of circle points");
    gen->add_option("--ambient-dim", gen_dim, "ambient dimension");
    gen->add_option("--noise", gen_noise, "noise half-width");
    gen->add_option("--centers", gen_centers, "cluster centers 'x,y;x,y;...'");
    gen->add_option("--points-per-cluster", gen_ppc, "points per cluster");
    gen->add_option("--spread", gen_spread, "cluster standard deviation");
    gen->add_option("--arm-points", gen_arm, "points per bifurcation arm");
    add_common(gen, common);

    // persistence
    auto* per = app.add_subcommand("persistence", "alpha persistence diagram of a point CSV");
    std::string per_points;
    per->add_option("--points", per_points, "input id,x,y CSV")->required();
    add_common(per, common);

    // optimize
    auto* opt = app.add_subcommand("optimize", "optimize raw 2-D points under a topological loss");
    std::string opt_points;
    opt->add_option("--points", opt_points, "input id,x,y CSV")->required();
    add_optim(opt, optim);
    add_common(opt, common);

    // embed
    auto* emb = app.add_subcommand("embed", "train an embedding backend, optionally regularized");
    emb->add_option("--backend", backend.backend, "linear | neighbor | walk | inner")->required();
    emb->add_option("--data", backend.data_path, "data matrix CSV (linear, neighbor)");
    emb->add_option("--graph", backend.graph_path, "edge list file (walk, inner)");
    emb->add_option("--ortho-weight", backend.ortho_weight, "orthonormality penalty weight");
    emb->add_option("--knn", backend.knn, "fuzzy graph neighbor count");
    emb->add_option("--min-dist", backend.min_dist, "similarity curve min_dist");
    emb->add_option("--negatives", backend.negatives, "negative samples per edge/pair");
    emb->add_option("--walk-length", backend.walk_length, "random walk length");
    emb->add_option("--walks-per-node", backend.walks_per_node, "walks started per node");
    emb->add_option("--window", backend.window, "skip-gram window");
    add_optim(emb, optim);
    add_common(emb, common);

    // pseudotime
    auto* pse = app.add_subcommand("pseudotime", "circular pseudotime from the dominant cycle");
    std::string pse_points;
    pse->add_option("--points", pse_points, "embedding id,x,y CSV")->required();
    add_common(pse, common);

    // plot
    auto* plt = app.add_subcommand("plot", "render embedding / diagram / trace SVGs");
    std::string plt_points, plt_labels, plt_diagram, plt_trace;
    plt->add_option("--points", plt_points, "embedding id,x,y CSV");
    plt->add_option("--labels", plt_labels, "id,label CSV for coloring");
    plt->add_option("--diagram", plt_diagram, "diagram CSV");
    plt->add_option("--trace", plt_trace, "trace CSV");
    add_common(plt, common);

    // report
    auto* rep = app.add_subcommand("report", "ordinary / topo-only / regularized comparison");
    std::string rep_name = "run";
    rep->add_option("--experiment", rep_name, "experiment name for the report rows");
    rep->add_option("--backend", backend.backend, "linear | neighbor | walk | inner")->required();
    rep->add_option("--data", backend.data_path, "data matrix CSV (linear, neighbor)");
    rep->add_option("--graph", backend.graph_path, "edge list file (walk, inner)");
    rep->add_option("--ortho-weight", backend.ortho_weight, "orthonormality penalty weight");
    rep->add_option("--knn", backend.knn, "fuzzy graph neighbor count");
    rep->add_option("--min-dist", backend.min_dist, "similarity curve min_dist");
    rep->add_option("--negatives", backend.negatives, "negative samples per edge/pair");
    rep->add_option("--walk-length", backend.walk_length, "random walk length");
    rep->add_option("--walks-per-node", backend.walks_per_node, "walks started per node");
    rep->add_option("--window", backend.window, "skip-gram window");
    add_optim(rep, optim);
    add_common(rep, common);

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed())
            cmd_generate(common, kind, gen_n, gen_dim, gen_noise, gen_centers, gen_ppc,
                         gen_spread, gen_arm);
        else if (per->parsed())
            cmd_persistence(common, per_points);
        else if (opt->parsed())
            cmd_optimize(common, optim, opt_points);
        else if (emb->parsed())
            cmd_embed(common, optim, backend);
        else if (pse->parsed())
            cmd_pseudotime(common, pse_points);
        else if (plt->parsed())
            cmd_plot(common, plt_points, plt_labels, plt_diagram, plt_trace);
        else if (rep->parsed())
            cmd_report(common, optim, backend, rep_name);
    } catch (const Error& e) {
        std::string msg = e.what();
        const std::string prefix = std::string(error_code_name(e.code())) + ": ";
        if (msg.rfind(prefix, 0) == 0) msg = msg.substr(prefix.size());
        std::cerr << "{\"error\":\"" << error_code_name(e.code()) << "\",\"message\":\"" << msg
                  << "\"}\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "{\"error\":\"Unhandled\",\"message\":\"" << e.what() << "\"}\n";
        return 2;
    }
    return 0;
}
