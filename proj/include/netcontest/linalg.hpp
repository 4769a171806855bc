#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

namespace netcontest {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Reciprocal condition number from singular values. Fine for the small dense
// matrices this library deals in (m <= a few dozen).
inline double rcond(const Mat& a) {
    if (a.rows() == 0) return 1.0;
    Eigen::JacobiSVD<Mat> svd(a);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    if (smax <= 0.0) return 0.0;
    return smin / smax;
}

// Solve a*x = b. Uses LU when a is comfortably non-singular; falls back to a
// rank-revealing minimum-norm least-squares solve otherwise and reports which
// path was taken, so callers can flag effort/multiplier continua.
struct LinearSolve {
    Vec x;
    bool rank_deficient = false;
    double residual = 0.0;  // ||a*x - b||_inf, nonzero means inconsistent system
};

inline LinearSolve solve_linear(const Mat& a, const Vec& b, double rcond_floor = 1e-12) {
    LinearSolve out;
    if (a.rows() == 0) {
        out.x = Vec(0);
        return out;
    }
    if (rcond(a) > rcond_floor) {
        Eigen::PartialPivLU<Mat> lu(a);
        out.x = lu.solve(b);
    } else {
        Eigen::CompleteOrthogonalDecomposition<Mat> cod(a);
        out.x = cod.solve(b);
        out.rank_deficient = true;
    }
    out.residual = (a * out.x - b).lpNorm<Eigen::Infinity>();
    return out;
}

// Principal submatrix a[idx, idx].
inline Mat submatrix(const Mat& a, const std::vector<int>& idx) {
    Mat s(idx.size(), idx.size());
    for (size_t r = 0; r < idx.size(); ++r)
        for (size_t c = 0; c < idx.size(); ++c) s(r, c) = a(idx[r], idx[c]);
    return s;
}

// a[rows, cols] for arbitrary index lists.
inline Mat block(const Mat& a, const std::vector<int>& rows, const std::vector<int>& cols) {
    Mat s(rows.size(), cols.size());
    for (size_t r = 0; r < rows.size(); ++r)
        for (size_t c = 0; c < cols.size(); ++c) s(r, c) = a(rows[r], cols[c]);
    return s;
}

inline Vec gather(const Vec& v, const std::vector<int>& idx) {
    Vec s(idx.size());
    for (size_t r = 0; r < idx.size(); ++r) s(r) = v(idx[r]);
    return s;
}

inline void scatter(Vec& v, const std::vector<int>& idx, const Vec& vals) {
    for (size_t r = 0; r < idx.size(); ++r) v(idx[r]) = vals(r);
}

}  // namespace netcontest
