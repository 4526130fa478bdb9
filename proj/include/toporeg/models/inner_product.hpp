#ifndef TOPOREG_MODELS_INNER_PRODUCT_HPP
#define TOPOREG_MODELS_INNER_PRODUCT_HPP

#include <Eigen/Dense>

#include "toporeg/errors.hpp"
#include "toporeg/graph.hpp"
#include "toporeg/models/common.hpp"
#include "toporeg/rng.hpp"

namespace toporeg {

struct InnerProductGraphModel {
    Graph graph;
    Eigen::MatrixXd embedding; // |V| x 2
};

inline InnerProductGraphModel build_inner_product_model(Graph graph, Rng& rng) {
    InnerProductGraphModel model;
    model.embedding = random_embedding(graph.n, rng);
    model.graph = std::move(graph);
    return model;
}

// Mean binary cross-entropy between the logistic of pairwise inner products
// and the edge indicator, over all unordered node pairs.
inline EmbeddingGradient inner_product_loss(const InnerProductGraphModel& model) {
    const Eigen::MatrixXd& e = model.embedding;
    const int n = static_cast<int>(e.rows());
    if (n < 2) fail(ErrorCode::TooFewPoints, "need at least 2 nodes");

    EmbeddingGradient out;
    out.gradient = Eigen::MatrixXd::Zero(n, 2);
    const double inv = 2.0 / (static_cast<double>(n) * (n - 1));

    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            const double s = e.row(u).dot(e.row(v));
            const double y = model.graph.has_edge(u, v) ? 1.0 : 0.0;
            out.value += inv * (detail::softplus(s) - y * s);
            const double c = inv * (detail::sigmoid(s) - y);
            out.gradient.row(u) += c * e.row(v);
            out.gradient.row(v) += c * e.row(u);
        }
    }
    return out;
}

} // namespace toporeg

#endif
