#ifndef TOPOREG_TOPO_LOSS_HPP
#define TOPOREG_TOPO_LOSS_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "toporeg/alpha.hpp"
#include "toporeg/errors.hpp"
#include "toporeg/persistence.hpp"
#include "toporeg/point_cloud.hpp"
#include "toporeg/rng.hpp"

namespace toporeg {

struct TopoSampling {
    double f_s = 1.0;       // subsample fraction in (0, 1]
    int n_s = 1;            // number of subsamples averaged
    bool with_replacement = false;
};

struct TopoLossTerm {
    int dimension = 0;      // homology dimension of the diagram
    int i = 1;              // 1-based range [i, j] into the ordered diagram
    int j = -1;             // -1 means "to the end of the diagram"
    double mu = 1.0;        // +1 shrinks the selected pairs, -1 grows them
    double p = 1.0;         // persistence exponent
    double q = 0.0;         // midlife exponent
    std::optional<TopoSampling> sampling;
    std::optional<double> functional_tau; // keep only points with centrality <= tau

    void validate() const {
        if (dimension != 0 && dimension != 1)
            fail(ErrorCode::BadConfig, "term dimension must be 0 or 1");
        if (i < 1) fail(ErrorCode::BadConfig, "term index i must be >= 1");
        if (j != -1 && j < i) fail(ErrorCode::BadConfig, "term requires i <= j");
        if (mu != 1.0 && mu != -1.0) fail(ErrorCode::BadConfig, "mu must be +1 or -1");
        if (!(p > 0.0)) fail(ErrorCode::BadConfig, "exponent p must be > 0");
        if (!(q >= 0.0)) fail(ErrorCode::BadConfig, "exponent q must be >= 0");
        if (sampling) {
            if (!(sampling->f_s > 0.0 && sampling->f_s <= 1.0))
                fail(ErrorCode::BadConfig, "f_s must lie in (0, 1]");
            if (sampling->n_s < 1) fail(ErrorCode::BadConfig, "n_s must be >= 1");
        }
        // tau > 1 is legal and keeps every point (centrality tops out at 1).
        if (functional_tau && !(*functional_tau > 0.0))
            fail(ErrorCode::BadConfig, "tau must be positive");
    }
};

struct WeightedTerm {
    double weight = 1.0;
    TopoLossTerm term;
};

struct TopoLossSpec {
    std::vector<WeightedTerm> terms;

    void validate() const {
        for (const auto& wt : terms) wt.term.validate();
    }
};

struct TopoGradient {
    double value = 0.0;
    std::vector<Vec2> gradient; // per point of the full cloud
};

// Scaled centrality: 1 at the mean, 0 at the farthest point.
inline std::vector<double> centrality(const PointCloud& cloud) {
    const std::size_t n = cloud.points.size();
    if (n == 0) fail(ErrorCode::TooFewPoints, "centrality of an empty cloud");
    Vec2 mean{0.0, 0.0};
    for (const Vec2& pt : cloud.points) mean = mean + pt;
    mean = mean * (1.0 / static_cast<double>(n));
    std::vector<double> dist(n);
    double max_dist = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        dist[k] = (cloud.points[k] - mean).norm();
        max_dist = std::max(max_dist, dist[k]);
    }
    if (max_dist == 0.0)
        fail(ErrorCode::DegenerateCloud, "centrality undefined when all points coincide");
    std::vector<double> values(n);
    for (std::size_t k = 0; k < n; ++k) values[k] = 1.0 - dist[k] / max_dist;
    return values;
}

namespace detail {

// Value and full-cloud gradient of the deterministic pair-range sum on the
// subcloud given by ascending original indices, scaled by `scale`.
inline void term_on_subset(const PointCloud& full, const std::vector<std::size_t>& subset,
                           const TopoLossTerm& term, double scale, double& value,
                           std::vector<Vec2>* grad) {
    const PointCloud sub = full.subcloud(subset);
    const Filtration filt = alpha_filtration(sub);
    const PersistenceResult pers = compute_persistence(filt, term.dimension);
    const PersistenceDiagram& dgm = pers.diagrams[term.dimension];

    const std::size_t first = static_cast<std::size_t>(term.i) - 1;
    const std::size_t last = (term.j == -1) ? dgm.pairs.size()
                                            : std::min<std::size_t>(term.j, dgm.pairs.size());
    for (std::size_t k = first; k < last; ++k) {
        const PersistencePair& pair = dgm.pairs[k];
        if (pair.essential()) continue;
        const double pers_k = pair.death - pair.birth;
        const double mid_k = 0.5 * (pair.death + pair.birth);
        value += scale * term.mu * std::pow(pers_k, term.p) * std::pow(mid_k, term.q);
        if (!grad) continue;

        const double d_pers = term.p * std::pow(pers_k, term.p - 1.0) * std::pow(mid_k, term.q);
        const double d_mid =
            (term.q == 0.0) ? 0.0
                            : term.q * std::pow(pers_k, term.p) * std::pow(mid_k, term.q - 1.0);
        const double coef_birth = scale * term.mu * (-d_pers + 0.5 * d_mid);
        const double coef_death = scale * term.mu * (d_pers + 0.5 * d_mid);

        const AlphaGradient gb = alpha_gradient_sparse(sub, filt, pair.birth_simplex);
        for (int e = 0; e < gb.count; ++e) {
            const auto& [v, g] = gb.entries[e];
            (*grad)[subset[v]] = (*grad)[subset[v]] + g * coef_birth;
        }
        const AlphaGradient gd = alpha_gradient_sparse(sub, filt, pair.death_simplex);
        for (int e = 0; e < gd.count; ++e) {
            const auto& [v, g] = gd.entries[e];
            (*grad)[subset[v]] = (*grad)[subset[v]] + g * coef_death;
        }
    }
}

inline TopoGradient evaluate_term(const PointCloud& cloud, const TopoLossTerm& term,
                                  const Rng& rng, bool want_grad) {
    term.validate();
    const std::size_t n = cloud.points.size();

    // Functional restriction: membership is a fixed selection, no gradient
    // flows through the centrality values.
    std::vector<std::size_t> base(n);
    for (std::size_t k = 0; k < n; ++k) base[k] = k;
    if (term.functional_tau) {
        const std::vector<double> cent = centrality(cloud);
        std::vector<std::size_t> kept;
        for (std::size_t k = 0; k < n; ++k)
            if (cent[k] <= *term.functional_tau) kept.push_back(k);
        base = std::move(kept);
    }

    TopoGradient out;
    if (want_grad) out.gradient.assign(n, Vec2{0.0, 0.0});
    std::vector<Vec2>* grad = want_grad ? &out.gradient : nullptr;

    if (!term.sampling) {
        // Two points still carry an H0 diagram (one edge); only subsamples
        // are held to the stricter >= 3 floor.
        if (base.size() < 2)
            fail(ErrorCode::TooFewPoints, "fewer than 2 points after restriction");
        term_on_subset(cloud, base, term, 1.0, out.value, grad);
        return out;
    }

    const TopoSampling& smp = *term.sampling;
    const std::size_t m = static_cast<std::size_t>(
        std::llround(smp.f_s * static_cast<double>(base.size())));
    if (m < 3) fail(ErrorCode::TooFewPoints, "subsample smaller than 3 points");
    const double scale = 1.0 / static_cast<double>(smp.n_s);
    for (int r = 0; r < smp.n_s; ++r) {
        Rng stream = rng.child(static_cast<std::uint64_t>(r));
        std::vector<std::size_t> draw =
            smp.with_replacement ? stream.sample_with_replacement(base.size(), m)
                                 : stream.sample_without_replacement(base.size(), m);
        if (draw.size() < 3)
            fail(ErrorCode::TooFewPoints, "subsample has fewer than 3 distinct points");
        std::vector<std::size_t> subset(draw.size());
        for (std::size_t k = 0; k < draw.size(); ++k) subset[k] = base[draw[k]];
        term_on_subset(cloud, subset, term, scale, out.value, grad);
    }
    return out;
}

} // namespace detail

inline double term_value(const PointCloud& cloud, const TopoLossTerm& term, const Rng& rng) {
    return detail::evaluate_term(cloud, term, rng, false).value;
}

inline TopoGradient term_gradient(const PointCloud& cloud, const TopoLossTerm& term,
                                  const Rng& rng) {
    return detail::evaluate_term(cloud, term, rng, true);
}

// Term k >= 1 draws from a split child stream; term 0 uses the caller's
// stream directly so a single-term spec matches term_value/term_gradient.
inline double spec_value(const PointCloud& cloud, const TopoLossSpec& spec, const Rng& rng) {
    double value = 0.0;
    for (std::size_t k = 0; k < spec.terms.size(); ++k) {
        const Rng stream = (k == 0) ? rng : rng.child(static_cast<std::uint64_t>(k));
        value += spec.terms[k].weight * term_value(cloud, spec.terms[k].term, stream);
    }
    return value;
}

inline TopoGradient spec_gradient(const PointCloud& cloud, const TopoLossSpec& spec,
                                  const Rng& rng) {
    TopoGradient out;
    out.gradient.assign(cloud.points.size(), Vec2{0.0, 0.0});
    for (std::size_t k = 0; k < spec.terms.size(); ++k) {
        const Rng stream = (k == 0) ? rng : rng.child(static_cast<std::uint64_t>(k));
        const TopoGradient tg = term_gradient(cloud, spec.terms[k].term, stream);
        out.value += spec.terms[k].weight * tg.value;
        for (std::size_t n = 0; n < out.gradient.size(); ++n)
            out.gradient[n] = out.gradient[n] + tg.gradient[n] * spec.terms[k].weight;
    }
    return out;
}

} // namespace toporeg

#endif
