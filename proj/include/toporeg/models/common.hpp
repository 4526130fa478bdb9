#ifndef TOPOREG_MODELS_COMMON_HPP
#define TOPOREG_MODELS_COMMON_HPP

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "toporeg/errors.hpp"
#include "toporeg/point_cloud.hpp"
#include "toporeg/rng.hpp"

namespace toporeg {

// Loss value plus gradient with respect to the model's trainable matrix.
struct EmbeddingGradient {
    double value = 0.0;
    Eigen::MatrixXd gradient;
};

inline PointCloud cloud_from_rows(const Eigen::MatrixXd& m) {
    if (m.cols() != 2) fail(ErrorCode::BadDimensions, "embedding must have 2 columns");
    PointCloud cloud;
    cloud.points.resize(m.rows());
    cloud.ids.resize(m.rows());
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        cloud.points[r] = Vec2{m(r, 0), m(r, 1)};
        cloud.ids[r] = std::to_string(r);
    }
    return cloud;
}

inline Eigen::MatrixXd random_embedding(int n, Rng& rng, double scale = 0.1) {
    Eigen::MatrixXd e(n, 2);
    for (int r = 0; r < n; ++r) {
        e(r, 0) = scale * rng.normal();
        e(r, 1) = scale * rng.normal();
    }
    return e;
}

namespace detail {

inline double sigmoid(double s) {
    if (s >= 0.0) return 1.0 / (1.0 + std::exp(-s));
    const double z = std::exp(s);
    return z / (1.0 + z);
}

// log(1 + exp(s)) without overflow; equals -log(sigmoid(-s)).
inline double softplus(double s) { return std::max(s, 0.0) + std::log1p(std::exp(-std::fabs(s))); }

// -log(sigmoid(s))
inline double neg_log_sigmoid(double s) { return softplus(-s); }

} // namespace detail

} // namespace toporeg

#endif
