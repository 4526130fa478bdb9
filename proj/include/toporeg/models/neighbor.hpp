#ifndef TOPOREG_MODELS_NEIGHBOR_HPP
#define TOPOREG_MODELS_NEIGHBOR_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "toporeg/errors.hpp"
#include "toporeg/models/common.hpp"
#include "toporeg/models/linear.hpp"
#include "toporeg/rng.hpp"

namespace toporeg {

struct FuzzyEdge {
    int u = 0;
    int v = 0;
    double weight = 0.0; // symmetric membership in (0, 1]
};

struct NeighborEmbeddingModel {
    std::vector<FuzzyEdge> fuzzy_edges;
    Eigen::MatrixXd embedding; // n x 2
    double a = 1.577;
    double b = 0.8951;
    int negative_samples = 5;
};

// Least-squares fit of (1 + a d^{2b})^{-1} to the offset exponential that is
// 1 below min_dist and decays with unit scale above it.
inline std::pair<double, double> fit_similarity_curve(double min_dist = 0.1,
                                                      double spread = 1.0) {
    constexpr int kGrid = 300;
    std::vector<double> d(kGrid), target(kGrid);
    for (int k = 0; k < kGrid; ++k) {
        d[k] = 3.0 * spread * k / (kGrid - 1);
        target[k] = (d[k] <= min_dist) ? 1.0 : std::exp(-(d[k] - min_dist) / spread);
    }
    double a = 1.0, b = 1.0;
    for (int iter = 0; iter < 300; ++iter) {
        double jtj00 = 0, jtj01 = 0, jtj11 = 0, jtr0 = 0, jtr1 = 0;
        for (int k = 0; k < kGrid; ++k) {
            const double t = (d[k] > 0.0) ? std::pow(d[k], 2.0 * b) : 0.0;
            const double denom = 1.0 + a * t;
            const double resid = 1.0 / denom - target[k];
            const double ja = -t / (denom * denom);
            const double jb = (d[k] > 0.0) ? -2.0 * a * t * std::log(d[k]) / (denom * denom) : 0.0;
            jtj00 += ja * ja;
            jtj01 += ja * jb;
            jtj11 += jb * jb;
            jtr0 += ja * resid;
            jtr1 += jb * resid;
        }
        jtj00 += 1e-9;
        jtj11 += 1e-9;
        const double det = jtj00 * jtj11 - jtj01 * jtj01;
        const double da = (-jtr0 * jtj11 + jtr1 * jtj01) / det;
        const double db = (-jtr1 * jtj00 + jtr0 * jtj01) / det;
        a = std::max(1e-3, a + da);
        b = std::max(1e-3, b + db);
        if (std::fabs(da) + std::fabs(db) < 1e-12) break;
    }
    return {a, b};
}

// Symmetric fuzzy kNN membership graph with per-point bandwidth calibrated
// so the effective neighbor count is log2(k).
inline std::vector<FuzzyEdge> build_fuzzy_graph(const Eigen::MatrixXd& x, int k = 15) {
    const int n = static_cast<int>(x.rows());
    if (n < 2) fail(ErrorCode::EmptyGraph, "fuzzy graph needs at least 2 points");
    const int k_eff = std::min(k, n - 1);
    const double target = std::log2(static_cast<double>(k_eff));

    std::map<std::pair<int, int>, std::pair<double, double>> directed;
    std::vector<std::pair<double, int>> nbrs(n - 1);
    for (int i = 0; i < n; ++i) {
        int m = 0;
        for (int j = 0; j < n; ++j)
            if (j != i) nbrs[m++] = {(x.row(i) - x.row(j)).norm(), j};
        std::partial_sort(nbrs.begin(), nbrs.begin() + k_eff, nbrs.end());

        const double rho = nbrs[0].first;
        auto effective = [&](double sigma) {
            double s = 0.0;
            for (int j = 0; j < k_eff; ++j)
                s += std::exp(-std::max(0.0, nbrs[j].first - rho) / sigma);
            return s;
        };
        double hi = 1.0;
        while (effective(hi) < target && hi < 1e12) hi *= 2.0;
        double lo = 0.0;
        for (int it = 0; it < 64; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (effective(mid) >= target)
                hi = mid;
            else
                lo = mid;
        }
        const double sigma = std::max(hi, 1e-12);

        for (int j = 0; j < k_eff; ++j) {
            const double mu = std::exp(-std::max(0.0, nbrs[j].first - rho) / sigma);
            const int other = nbrs[j].second;
            auto key = std::minmax(i, other);
            auto& slot = directed[{key.first, key.second}];
            if (i < other)
                slot.first = mu;
            else
                slot.second = mu;
        }
    }

    std::vector<FuzzyEdge> edges;
    edges.reserve(directed.size());
    for (const auto& [key, mus] : directed) {
        const double w = mus.first + mus.second - mus.first * mus.second;
        edges.push_back({key.first, key.second, w});
    }
    return edges;
}

// Builds the fuzzy graph, fits the similarity curve, and initializes the
// embedding from the 2-D PCA projection (random fallback), scaled to max
// absolute coordinate 10.
inline NeighborEmbeddingModel build_neighbor_model(const Eigen::MatrixXd& x, Rng& rng, int k = 15,
                                                   double min_dist = 0.1,
                                                   int negative_samples = 5) {
    NeighborEmbeddingModel model;
    model.fuzzy_edges = build_fuzzy_graph(x, k);
    std::tie(model.a, model.b) = fit_similarity_curve(min_dist);
    model.negative_samples = negative_samples;

    const int n = static_cast<int>(x.rows());
    try {
        const Eigen::MatrixXd w = pca_init(x);
        model.embedding = (x.rowwise() - x.colwise().mean()) * w;
    } catch (const Error&) {
        model.embedding = random_embedding(n, rng, 1.0);
    }
    const double amax = model.embedding.cwiseAbs().maxCoeff();
    if (amax > 0.0) model.embedding *= 10.0 / amax;
    // Break exact collinearity of degenerate projections.
    for (int r = 0; r < n; ++r) {
        model.embedding(r, 0) += 1e-4 * rng.normal();
        model.embedding(r, 1) += 1e-4 * rng.normal();
    }
    return model;
}

// Cross-entropy along fuzzy edges (attraction) plus m uniform negative
// samples per edge (repulsion). Pure given the rng state.
inline EmbeddingGradient neighbor_loss(const NeighborEmbeddingModel& model, const Rng& rng_state) {
    if (model.fuzzy_edges.empty()) fail(ErrorCode::EmptyGraph, "fuzzy graph has no edges");
    const Eigen::MatrixXd& e = model.embedding;
    const int n = static_cast<int>(e.rows());
    const double a = model.a, b = model.b;
    Rng rng = rng_state;

    EmbeddingGradient out;
    out.gradient = Eigen::MatrixXd::Zero(n, 2);

    for (const FuzzyEdge& edge : model.fuzzy_edges) {
        const Eigen::RowVector2d diff = e.row(edge.u) - e.row(edge.v);
        const double t = std::max(diff.squaredNorm(), 1e-12);
        const double tb = std::pow(t, b);
        out.value += edge.weight * std::log1p(a * tb);
        const double coef = edge.weight * a * b * std::pow(t, b - 1.0) / (1.0 + a * tb);
        out.gradient.row(edge.u) += 2.0 * coef * diff;
        out.gradient.row(edge.v) -= 2.0 * coef * diff;

        if (n < 3) continue;
        for (int s = 0; s < model.negative_samples; ++s) {
            int neg;
            do {
                neg = static_cast<int>(rng.uniform_index(n));
            } while (neg == edge.u || neg == edge.v);
            const Eigen::RowVector2d dn = e.row(edge.u) - e.row(neg);
            const double tn = dn.squaredNorm() + 1e-3; // keeps the repulsion finite
            const double tnb = std::pow(tn, b);
            out.value += std::log1p(a * tnb) - std::log(a) - b * std::log(tn);
            const double cn = a * b * std::pow(tn, b - 1.0) / (1.0 + a * tnb) - b / tn;
            out.gradient.row(edge.u) += 2.0 * cn * dn;
            out.gradient.row(neg) -= 2.0 * cn * dn;
        }
    }
    return out;
}

} // namespace toporeg

#endif
