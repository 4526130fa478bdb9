#ifndef TOPOREG_MODELS_RANDOM_WALK_HPP
#define TOPOREG_MODELS_RANDOM_WALK_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "toporeg/errors.hpp"
#include "toporeg/graph.hpp"
#include "toporeg/models/common.hpp"
#include "toporeg/rng.hpp"

namespace toporeg {

struct RandomWalkGraphModel {
    Graph graph;
    Eigen::MatrixXd embedding; // |V| x 2, single table for center and context
    int walk_length = 40;
    int walks_per_node = 10;
    int window = 5;
    int negative_samples = 5;
};

inline RandomWalkGraphModel build_random_walk_model(Graph graph, Rng& rng, int walk_length = 40,
                                                    int walks_per_node = 10, int window = 5,
                                                    int negative_samples = 5) {
    RandomWalkGraphModel model;
    model.embedding = random_embedding(graph.n, rng);
    model.graph = std::move(graph);
    model.walk_length = walk_length;
    model.walks_per_node = walks_per_node;
    model.window = window;
    model.negative_samples = negative_samples;
    return model;
}

// walks_per_node uniform random walks from every node, in shuffled node
// order per round.
inline std::vector<std::vector<int>> generate_walks(const Graph& graph, Rng& rng,
                                                    int walk_length, int walks_per_node) {
    std::vector<std::vector<int>> walks;
    walks.reserve(static_cast<std::size_t>(graph.n) * walks_per_node);
    std::vector<int> order(graph.n);
    std::iota(order.begin(), order.end(), 0);
    for (int round = 0; round < walks_per_node; ++round) {
        rng.shuffle(order);
        for (int start : order) {
            std::vector<int> walk{start};
            int cur = start;
            for (int step = 1; step < walk_length; ++step) {
                const auto& nbrs = graph.adjacency[cur];
                if (nbrs.empty()) break;
                cur = nbrs[rng.uniform_index(nbrs.size())];
                walk.push_back(cur);
            }
            walks.push_back(std::move(walk));
        }
    }
    return walks;
}

// Skip-gram with negative sampling over window co-occurrences of freshly
// generated walks; mean over co-occurrence pairs. Pure given the rng state.
// Negatives are drawn proportional to degree^(3/4): walk visit frequency is
// proportional to degree, and noise must track it or the hub vectors grow
// without bound (their positive co-occurrences are never offset) and drag
// every other node onto one axis.
inline EmbeddingGradient random_walk_loss(const RandomWalkGraphModel& model,
                                          const Rng& rng_state) {
    if (model.graph.edges.empty()) fail(ErrorCode::EmptyGraph, "graph has no edges");
    const Eigen::MatrixXd& e = model.embedding;
    const int n = static_cast<int>(e.rows());
    Rng rng = rng_state;

    const auto walks = generate_walks(model.graph, rng, model.walk_length, model.walks_per_node);
    std::size_t pair_count = 0;
    for (const auto& walk : walks)
        for (std::size_t t = 0; t < walk.size(); ++t)
            pair_count += std::min<std::size_t>(model.window, walk.size() - 1 - t);
    if (pair_count == 0) fail(ErrorCode::EmptyGraph, "walks produced no co-occurrence pairs");

    std::vector<double> noise_cdf(static_cast<std::size_t>(n));
    int noise_support = 0;
    double noise_total = 0.0;
    for (int vtx = 0; vtx < n; ++vtx) {
        const std::size_t deg = model.graph.adjacency[vtx].size();
        noise_support += deg > 0 ? 1 : 0;
        noise_total += std::pow(static_cast<double>(deg), 0.75);
        noise_cdf[static_cast<std::size_t>(vtx)] = noise_total;
    }

    EmbeddingGradient out;
    out.gradient = Eigen::MatrixXd::Zero(n, 2);
    const double inv = 1.0 / static_cast<double>(pair_count);

    for (const auto& walk : walks) {
        for (std::size_t t = 0; t < walk.size(); ++t) {
            const int u = walk[t];
            const std::size_t last = std::min(walk.size() - 1, t + model.window);
            for (std::size_t o = t + 1; o <= last; ++o) {
                const int v = walk[o];
                const double s = e.row(u).dot(e.row(v));
                out.value += inv * detail::neg_log_sigmoid(s);
                const double c = inv * (detail::sigmoid(s) - 1.0);
                out.gradient.row(u) += c * e.row(v);
                out.gradient.row(v) += c * e.row(u);

                if (noise_support < 3) continue;
                for (int k = 0; k < model.negative_samples; ++k) {
                    int neg;
                    do {
                        const double mark = rng.uniform01() * noise_total;
                        neg = static_cast<int>(
                            std::lower_bound(noise_cdf.begin(), noise_cdf.end(), mark) -
                            noise_cdf.begin());
                        if (neg >= n) neg = n - 1;
                    } while (neg == u || neg == v);
                    const double sn = e.row(u).dot(e.row(neg));
                    out.value += inv * detail::neg_log_sigmoid(-sn);
                    const double cn = inv * detail::sigmoid(sn);
                    out.gradient.row(u) += cn * e.row(neg);
                    out.gradient.row(neg) += cn * e.row(u);
                }
            }
        }
    }
    return out;
}

} // namespace toporeg

#endif
