#ifndef TOPOREG_MODELS_LINEAR_HPP
#define TOPOREG_MODELS_LINEAR_HPP

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>

#include "toporeg/errors.hpp"
#include "toporeg/models/common.hpp"

namespace toporeg {

struct LinearProjectionModel {
    Eigen::MatrixXd data;     // n x D
    Eigen::MatrixXd loadings; // D x 2
    double ortho_weight = 1e4;
    bool ortho_spectral = false; // spectral norm instead of Frobenius

    Eigen::MatrixXd embedding() const { return data * loadings; }
};

// Top-2 right singular vectors of the column-centered data, each column
// sign-fixed so its largest-magnitude entry is positive.
inline Eigen::MatrixXd pca_init(const Eigen::MatrixXd& x) {
    if (x.rows() < 2 || x.cols() < 2)
        fail(ErrorCode::BadDimensions, "pca needs at least 2 rows and 2 columns");
    Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double tol = std::max(x.rows(), x.cols()) * 1e-15 * sv(0);
    if (sv.size() < 2 || !(sv(1) > tol))
        fail(ErrorCode::RankDeficient, "data has fewer than 2 nonzero singular values");
    Eigen::MatrixXd w = svd.matrixV().leftCols(2);
    for (int c = 0; c < 2; ++c) {
        Eigen::Index imax;
        w.col(c).cwiseAbs().maxCoeff(&imax);
        if (w(imax, c) < 0.0) w.col(c) = -w.col(c);
    }
    return w;
}

// MSE(X W W^T, X) + ortho_weight * ||W^T W - I|| (norm, not squared).
// The penalty norm is Frobenius by default, spectral behind the flag.
inline EmbeddingGradient linear_loss(const LinearProjectionModel& model) {
    const Eigen::MatrixXd& x = model.data;
    const Eigen::MatrixXd& w = model.loadings;
    if (w.cols() != 2 || w.rows() != x.cols())
        fail(ErrorCode::ShapeMismatch, "loadings must be D x 2 with D matching the data");

    const double entries = static_cast<double>(x.rows()) * static_cast<double>(x.cols());
    const Eigen::MatrixXd resid = x * w * w.transpose() - x;
    const Eigen::Matrix2d ortho = w.transpose() * w - Eigen::Matrix2d::Identity();

    EmbeddingGradient out;
    out.value = resid.squaredNorm() / entries;
    out.gradient = (2.0 / entries) *
                   (x.transpose() * resid * w + resid.transpose() * x * w);
    if (model.ortho_spectral) {
        // ortho is symmetric; its spectral norm is the largest |eigenvalue|.
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(ortho);
        const int top = std::abs(es.eigenvalues()(0)) > std::abs(es.eigenvalues()(1)) ? 0 : 1;
        const double lam = es.eigenvalues()(top);
        out.value += model.ortho_weight * std::abs(lam);
        if (std::abs(lam) > 1e-18) {
            const Eigen::Vector2d v = es.eigenvectors().col(top);
            const double sgn = lam > 0.0 ? 1.0 : -1.0;
            out.gradient += (2.0 * model.ortho_weight * sgn) * (w * (v * v.transpose()));
        }
    } else {
        const double ortho_norm = ortho.norm();
        out.value += model.ortho_weight * ortho_norm;
        if (ortho_norm > 1e-18)
            out.gradient += (2.0 * model.ortho_weight / ortho_norm) * (w * ortho);
    }
    return out;
}

// Per-feature importance: sum of the two absolute loadings of the feature.
inline Eigen::VectorXd feature_importance(const Eigen::MatrixXd& w) {
    if (w.cols() != 2) fail(ErrorCode::BadDimensions, "loadings must have 2 columns");
    return w.cwiseAbs().rowwise().sum();
}

} // namespace toporeg

#endif
