#ifndef TOPOREG_OPTIMIZER_HPP
#define TOPOREG_OPTIMIZER_HPP

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "toporeg/errors.hpp"
#include "toporeg/models/common.hpp"
#include "toporeg/models/inner_product.hpp"
#include "toporeg/models/linear.hpp"
#include "toporeg/models/neighbor.hpp"
#include "toporeg/models/random_walk.hpp"
#include "toporeg/point_cloud.hpp"
#include "toporeg/rng.hpp"
#include "toporeg/topo_loss.hpp"

namespace toporeg {

struct OptimizerConfig {
    double lambda_top = 1.0;
    double learning_rate = 1e-2;
    int epochs = 100;
    enum class Method { Plain, AdaptiveMoment };
    Method method = Method::Plain;
    std::uint64_t seed = 0;
    bool topo_only = false;
    int record_every = 1;

    void validate() const {
        if (!(lambda_top >= 0.0)) fail(ErrorCode::BadConfig, "lambda_top must be >= 0");
        if (!(learning_rate > 0.0)) fail(ErrorCode::BadConfig, "learning_rate must be > 0");
        if (epochs < 1) fail(ErrorCode::BadConfig, "epochs must be >= 1");
        if (record_every < 1) fail(ErrorCode::BadConfig, "record_every must be >= 1");
    }
};

struct TraceEntry {
    int epoch = 0;
    double emb_loss = 0.0;
    double topo_loss = 0.0; // unweighted
    double total_loss = 0.0;
    double seconds = 0.0;   // cumulative wall clock
};

struct LossTrace {
    std::vector<TraceEntry> entries;
};

// A trainable matrix plus the maps the loop needs: the embedding loss on the
// parameters, the induced 2-D embedding, and the pullback of a cloud-space
// topological gradient into parameter space. `constraint` is an optional
// feasibility penalty on the parameters themselves (for the linear model,
// near-orthonormal loadings); unlike the embedding loss it stays active under
// topo_only, because dropping it would let the parameterization degenerate.
struct GradientBackend {
    std::function<EmbeddingGradient(const Eigen::MatrixXd&, const Rng&)> embedding_loss;
    std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)> induced_embedding;
    std::function<Eigen::MatrixXd(const Eigen::MatrixXd&, const Eigen::MatrixXd&)> lift;
    std::function<EmbeddingGradient(const Eigen::MatrixXd&)> constraint; // may be empty
};

struct RunResult {
    Eigen::MatrixXd parameters;
    Eigen::MatrixXd embedding;
    LossTrace trace;
    bool aborted = false;
    std::string abort_reason; // error name when aborted
    int completed_epochs = 0;
};

namespace detail {

struct EpochEval {
    double emb_value = 0.0;
    double topo_value = 0.0;
    double constraint_value = 0.0;
    Eigen::MatrixXd emb_grad;
    Eigen::MatrixXd topo_grad; // cloud space, n x 2
    Eigen::MatrixXd constraint_grad;
    bool finite() const {
        return std::isfinite(emb_value) && std::isfinite(topo_value) &&
               std::isfinite(constraint_value) && emb_grad.allFinite() &&
               topo_grad.allFinite() && constraint_grad.allFinite();
    }
};

inline EpochEval evaluate_epoch(const GradientBackend& backend, const Eigen::MatrixXd& params,
                                const TopoLossSpec& spec, const Rng& root, int epoch) {
    const Rng epoch_stream = root.child(static_cast<std::uint64_t>(epoch));
    EpochEval ev;
    const EmbeddingGradient emb = backend.embedding_loss(params, epoch_stream.child(1));
    ev.emb_value = emb.value;
    ev.emb_grad = emb.gradient;
    if (backend.constraint) {
        const EmbeddingGradient con = backend.constraint(params);
        ev.constraint_value = con.value;
        ev.constraint_grad = con.gradient;
    } else {
        ev.constraint_grad = Eigen::MatrixXd::Zero(params.rows(), params.cols());
    }

    const Eigen::MatrixXd induced = backend.induced_embedding(params);
    const TopoGradient topo = spec_gradient(cloud_from_rows(induced), spec, epoch_stream.child(2));
    ev.topo_value = topo.value;
    ev.topo_grad = Eigen::MatrixXd::Zero(induced.rows(), 2);
    for (Eigen::Index r = 0; r < induced.rows(); ++r) {
        ev.topo_grad(r, 0) = topo.gradient[r].x;
        ev.topo_grad(r, 1) = topo.gradient[r].y;
    }
    return ev;
}

} // namespace detail

// Per epoch: g = grad(L_emb) + grad(constraint) + lambda_top * grad(L_top)
// at the current parameters (embedding loss dropped under topo_only, the
// constraint never), one step of the chosen method, then a fresh evaluation
// at the updated parameters under the same epoch stream for the trace.
// Evaluation failures after the first epoch, and non-finite losses anywhere,
// abort with the last finite state.
inline RunResult run(const GradientBackend& backend, Eigen::MatrixXd params,
                     const TopoLossSpec& spec, const OptimizerConfig& config) {
    config.validate();
    spec.validate();
    const Rng root(config.seed);
    const auto started = std::chrono::steady_clock::now();

    RunResult res;
    Eigen::MatrixXd adam_m = Eigen::MatrixXd::Zero(params.rows(), params.cols());
    Eigen::MatrixXd adam_v = Eigen::MatrixXd::Zero(params.rows(), params.cols());

    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    };
    auto total_of = [&](const detail::EpochEval& ev) {
        return (config.topo_only ? 0.0 : ev.emb_value) + ev.constraint_value +
               config.lambda_top * ev.topo_value;
    };

    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        detail::EpochEval at_current;
        try {
            at_current = detail::evaluate_epoch(backend, params, spec, root, epoch);
        } catch (const Error& e) {
            if (epoch == 1) throw; // the initial state must be evaluable
            res.aborted = true;
            res.abort_reason = error_code_name(e.code());
            break;
        }
        if (!at_current.finite()) {
            res.aborted = true;
            res.abort_reason = error_code_name(ErrorCode::NonFiniteLoss);
            break;
        }

        Eigen::MatrixXd g = config.topo_only
                                ? Eigen::MatrixXd::Zero(params.rows(), params.cols())
                                : at_current.emb_grad;
        g += at_current.constraint_grad;
        if (config.lambda_top != 0.0)
            g += config.lambda_top * backend.lift(params, at_current.topo_grad);

        Eigen::MatrixXd updated = params;
        if (config.method == OptimizerConfig::Method::Plain) {
            updated -= config.learning_rate * g;
        } else {
            const double b1 = 0.9, b2 = 0.999, eps = 1e-8;
            adam_m = b1 * adam_m + (1.0 - b1) * g;
            adam_v = b2 * adam_v + (1.0 - b2) * g.cwiseProduct(g);
            const double c1 = 1.0 - std::pow(b1, epoch);
            const double c2 = 1.0 - std::pow(b2, epoch);
            updated -= (config.learning_rate / c1) *
                       (adam_m.array() / ((adam_v.array() / c2).sqrt() + eps)).matrix();
        }

        // Trace entries describe the state the epoch produced, evaluated
        // under the epoch's own stream.
        detail::EpochEval at_updated;
        try {
            at_updated = detail::evaluate_epoch(backend, updated, spec, root, epoch);
        } catch (const Error& e) {
            res.aborted = true;
            res.abort_reason = error_code_name(e.code());
            break;
        }
        if (!at_updated.finite()) {
            res.aborted = true;
            res.abort_reason = error_code_name(ErrorCode::NonFiniteLoss);
            break;
        }

        params = std::move(updated);
        res.completed_epochs = epoch;
        if (epoch % config.record_every == 0 || epoch == config.epochs) {
            TraceEntry entry;
            entry.epoch = epoch;
            entry.emb_loss = at_updated.emb_value;
            entry.topo_loss = at_updated.topo_value;
            entry.total_loss = total_of(at_updated);
            entry.seconds = elapsed();
            res.trace.entries.push_back(entry);
        }
    }

    res.parameters = std::move(params);
    res.embedding = backend.induced_embedding(res.parameters);
    return res;
}

// Raw 2-D point cloud: the coordinates themselves are the parameters and the
// embedding loss is identically zero.
inline GradientBackend point_cloud_backend() {
    GradientBackend b;
    b.embedding_loss = [](const Eigen::MatrixXd& p, const Rng&) {
        EmbeddingGradient g;
        g.gradient = Eigen::MatrixXd::Zero(p.rows(), p.cols());
        return g;
    };
    b.induced_embedding = [](const Eigen::MatrixXd& p) { return p; };
    b.lift = [](const Eigen::MatrixXd&, const Eigen::MatrixXd& cloud_grad) { return cloud_grad; };
    return b;
}

// The reconstruction error is the embedding loss; the orthonormality penalty
// rides along as the constraint so the loadings stay a projection even when
// only the topological term is trained.
inline GradientBackend linear_backend(Eigen::MatrixXd data, double ortho_weight = 1e4) {
    GradientBackend b;
    auto x = std::make_shared<Eigen::MatrixXd>(std::move(data));
    b.embedding_loss = [x](const Eigen::MatrixXd& w, const Rng&) {
        LinearProjectionModel model;
        model.data = *x;
        model.loadings = w;
        model.ortho_weight = 0.0;
        return linear_loss(model);
    };
    b.constraint = [ortho_weight](const Eigen::MatrixXd& w) {
        EmbeddingGradient out;
        out.gradient = Eigen::MatrixXd::Zero(w.rows(), w.cols());
        const Eigen::Matrix2d ortho = w.transpose() * w - Eigen::Matrix2d::Identity();
        const double ortho_norm = ortho.norm();
        out.value = ortho_weight * ortho_norm;
        if (ortho_norm > 1e-18)
            out.gradient = (2.0 * ortho_weight / ortho_norm) * (w * ortho);
        return out;
    };
    b.induced_embedding = [x](const Eigen::MatrixXd& w) -> Eigen::MatrixXd { return (*x) * w; };
    b.lift = [x](const Eigen::MatrixXd&, const Eigen::MatrixXd& cloud_grad) -> Eigen::MatrixXd {
        return x->transpose() * cloud_grad;
    };
    return b;
}

inline GradientBackend neighbor_backend(NeighborEmbeddingModel model) {
    GradientBackend b;
    auto shared = std::make_shared<NeighborEmbeddingModel>(std::move(model));
    b.embedding_loss = [shared](const Eigen::MatrixXd& e, const Rng& rng) {
        NeighborEmbeddingModel m = *shared;
        m.embedding = e;
        return neighbor_loss(m, rng);
    };
    b.induced_embedding = [](const Eigen::MatrixXd& e) { return e; };
    b.lift = [](const Eigen::MatrixXd&, const Eigen::MatrixXd& cloud_grad) { return cloud_grad; };
    return b;
}

inline GradientBackend random_walk_backend(RandomWalkGraphModel model) {
    GradientBackend b;
    auto shared = std::make_shared<RandomWalkGraphModel>(std::move(model));
    b.embedding_loss = [shared](const Eigen::MatrixXd& e, const Rng& rng) {
        RandomWalkGraphModel m = *shared;
        m.embedding = e;
        return random_walk_loss(m, rng);
    };
    b.induced_embedding = [](const Eigen::MatrixXd& e) { return e; };
    b.lift = [](const Eigen::MatrixXd&, const Eigen::MatrixXd& cloud_grad) { return cloud_grad; };
    return b;
}

inline GradientBackend inner_product_backend(InnerProductGraphModel model) {
    GradientBackend b;
    auto shared = std::make_shared<InnerProductGraphModel>(std::move(model));
    b.embedding_loss = [shared](const Eigen::MatrixXd& e, const Rng&) {
        InnerProductGraphModel m = *shared;
        m.embedding = e;
        return inner_product_loss(m);
    };
    b.induced_embedding = [](const Eigen::MatrixXd& e) { return e; };
    b.lift = [](const Eigen::MatrixXd&, const Eigen::MatrixXd& cloud_grad) { return cloud_grad; };
    return b;
}

inline RunResult run_points_with_topo(const PointCloud& cloud, const TopoLossSpec& spec,
                                      const OptimizerConfig& config) {
    Eigen::MatrixXd params(cloud.points.size(), 2);
    for (std::size_t r = 0; r < cloud.points.size(); ++r) {
        params(r, 0) = cloud.points[r].x;
        params(r, 1) = cloud.points[r].y;
    }
    return run(point_cloud_backend(), std::move(params), spec, config);
}

// Chain rule for the composed linear model: dL_top/dW = X^T (dL_top/dE).
inline RunResult run_linear_with_topo(const Eigen::MatrixXd& x, const Eigen::MatrixXd& w0,
                                      const TopoLossSpec& spec, const OptimizerConfig& config,
                                      double ortho_weight = 1e4) {
    return run(linear_backend(x, ortho_weight), w0, spec, config);
}

} // namespace toporeg

#endif
