#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>

#include "vservo/errors.hpp"

namespace vservo {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using VecX = Eigen::VectorXd;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using MatX = Eigen::MatrixXd;
using Mat2x3 = Eigen::Matrix<double, 2, 3>;
using Mat3x2 = Eigen::Matrix<double, 3, 2>;
using Mat1x3 = Eigen::Matrix<double, 1, 3>;
using Mat6x3 = Eigen::Matrix<double, 6, 3>;

inline constexpr double kDetFloor = 1e-12;

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
    return m.allFinite();
}

// S(c) such that S(c) v = c x v; S(c)^T = -S(c).
inline Mat3 skew(const Vec3& c) {
    Mat3 s;
    s << 0.0, -c.z(), c.y(),
         c.z(), 0.0, -c.x(),
        -c.y(), c.x(), 0.0;
    return s;
}

// Right pseudoinverse A^T (A A^T)^-1 of a wide full-row-rank matrix.
// Rank test is relative to the matrix scale: throws SingularJacobian when
// det(A A^T) <= det_floor * max(1, trace(A A^T)^2), so a rank-1 matrix with
// large entries is still flagged despite floating-point determinant noise.
template <int N>
Eigen::Matrix<double, N, 2> pinv_wide(const Eigen::Matrix<double, 2, N>& a,
                                      double det_floor = kDetFloor) {
    const Mat2 gram = a * a.transpose();
    const double det = gram.determinant();
    const double scale = std::max(1.0, gram.trace() * gram.trace());
    if (!(det > det_floor * scale)) {
        throw SingularJacobian(det);
    }
    Mat2 inv;
    inv << gram(1, 1), -gram(0, 1),
          -gram(1, 0), gram(0, 0);
    inv /= det;
    return a.transpose() * inv;
}

// d/dt of pinv_wide along (A, Adot):
//   d(A+)/dt = -A+ Adot A+ + (I - A+ A) Adot^T A+^T A+
template <int N>
Eigen::Matrix<double, N, 2> pinv_rate(const Eigen::Matrix<double, 2, N>& a,
                                      const Eigen::Matrix<double, 2, N>& adot,
                                      double det_floor = kDetFloor) {
    const Eigen::Matrix<double, N, 2> ap = pinv_wide(a, det_floor);
    const Eigen::Matrix<double, N, N> proj =
        Eigen::Matrix<double, N, N>::Identity() - ap * a;
    return -ap * adot * ap + proj * adot.transpose() * ap.transpose() * ap;
}

// Classical fixed-step RK4. Throws NonFiniteState if any stage is non-finite.
template <typename F>
VecX rk4_step(F&& f, const VecX& s, double h) {
    const VecX k1 = f(s);
    const VecX k2 = f(VecX(s + 0.5 * h * k1));
    const VecX k3 = f(VecX(s + 0.5 * h * k2));
    const VecX k4 = f(VecX(s + h * k3));
    if (!k1.allFinite() || !k2.allFinite() || !k3.allFinite() || !k4.allFinite()) {
        throw NonFiniteState("rk4 stage derivative");
    }
    VecX out = s + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!out.allFinite()) {
        throw NonFiniteState("rk4 update");
    }
    return out;
}

// Cholesky-based SPD check used by gain validation and the inertia guard.
inline void require_spd(const MatX& m, const std::string& name) {
    if (m.rows() != m.cols()) {
        throw NonPositiveDefinite(name);
    }
    if (!m.isApprox(m.transpose(), 0.0)) {
        throw NonPositiveDefinite(name); // symmetry must be exact
    }
    Eigen::LLT<MatX> llt(m);
    if (llt.info() != Eigen::Success) {
        throw NonPositiveDefinite(name);
    }
}

} // namespace vservo
