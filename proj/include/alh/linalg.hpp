#pragma once

#include <Eigen/Dense>

#include "alh/common.hpp"

namespace alh {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Relative eigenvalue floor below which a metric block counts as degenerate.
inline constexpr double kDegenerateEigRatio = 1e-10;

inline void require_spd(const Mat& g, const char* what = "metric") {
    Eigen::SelfAdjointEigenSolver<Mat> es(g, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (!(lo > kDegenerateEigRatio * std::max(hi, 0.0))) {
        throw degenerate_metric_error(std::string(what) +
                                      " block is not positive definite "
                                      "(min eig " + std::to_string(lo) + ")");
    }
}

inline Mat spd_inverse(const Mat& g, const char* what = "metric") {
    require_spd(g, what);
    return g.inverse();
}

// Eigenvalues of a mixed (1,1)-operator A^b_a that is self-adjoint with
// respect to the SPD metric g, i.e. gA is symmetric. Solves the generalized
// symmetric problem (gA) x = lambda g x; eigenvalues are real.
inline Vec metric_selfadjoint_eigenvalues(const Mat& op, const Mat& g) {
    require_spd(g, "eigenvalue metric");
    Mat lowered = g * op;                      // (gA)_{ab} = g_{ac} A^c_b
    lowered = 0.5 * (lowered + lowered.transpose());
    Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(lowered, g,
                                                     Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

inline double operator_norm(const Mat& m) {
    Eigen::JacobiSVD<Mat> svd(m);
    return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

}  // namespace alh
