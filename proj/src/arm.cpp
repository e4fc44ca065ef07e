#include "vservo/arm.hpp"

#include <cmath>

namespace vservo {

namespace {

struct Trig {
    double c1, s1, c2, s2, c23, s23, c3, s3;
    explicit Trig(const Vec3& q)
        : c1(std::cos(q[0])), s1(std::sin(q[0])),
          c2(std::cos(q[1])), s2(std::sin(q[1])),
          c23(std::cos(q[1] + q[2])), s23(std::sin(q[1] + q[2])),
          c3(std::cos(q[2])), s3(std::sin(q[2])) {}
};

} // namespace

VecX ArmModel::dynamic_params() const {
    VecX a(kNumDynParams);
    a << b1,
        m2 * l2 * l2 / 3.0 + m3 * l2 * l2,
        m3 * l3 * l3 / 3.0,
        m3 * l2 * l3,
        b2,
        b3,
        (m2 / 2.0 + m3) * l2 * gravity,
        m3 * l3 * gravity / 2.0;
    return a;
}

void ArmModel::validate() const {
    if (!(l1 > 0.0 && l2 > 0.0 && l3 > 0.0)) {
        throw ConfigError("arm link lengths must be positive");
    }
    if (!(m1 > 0.0 && m2 > 0.0 && m3 > 0.0)) {
        throw ConfigError("arm link masses must be positive");
    }
    if (!(b1 > 0.0 && b2 > 0.0 && b3 > 0.0)) {
        throw ConfigError("arm armature inertias must be positive");
    }
    if (!c.allFinite()) {
        throw ConfigError("feature offset must be finite");
    }
}

Vec3 reference_position(const ArmModel& m, const Vec3& q) {
    const Trig t(q);
    const double rho = m.l2 * t.c2 + m.l3 * t.c23; // horizontal reach
    return {rho * t.c1, rho * t.s1, m.l1 + m.l2 * t.s2 + m.l3 * t.s23};
}

Vec3 feature_position(const ArmModel& m, const Vec3& q) {
    return reference_position(m, q) + m.c;
}

Mat6x3 geometric_jacobian(const ArmModel& m, const Vec3& q) {
    const Trig t(q);
    const double rho = m.l2 * t.c2 + m.l3 * t.c23;
    Mat6x3 j;
    // translational rows
    j(0, 0) = -rho * t.s1;
    j(0, 1) = -t.c1 * (m.l2 * t.s2 + m.l3 * t.s23);
    j(0, 2) = -t.c1 * m.l3 * t.s23;
    j(1, 0) = rho * t.c1;
    j(1, 1) = -t.s1 * (m.l2 * t.s2 + m.l3 * t.s23);
    j(1, 2) = -t.s1 * m.l3 * t.s23;
    j(2, 0) = 0.0;
    j(2, 1) = m.l2 * t.c2 + m.l3 * t.c23;
    j(2, 2) = m.l3 * t.c23;
    // angular rows: yaw about Z0, elevations about (s1, -c1, 0)
    j(3, 0) = 0.0;  j(3, 1) = t.s1;   j(3, 2) = t.s1;
    j(4, 0) = 0.0;  j(4, 1) = -t.c1;  j(4, 2) = -t.c1;
    j(5, 0) = 1.0;  j(5, 1) = 0.0;    j(5, 2) = 0.0;
    return j;
}

Mat3 feature_velocity_jacobian(const ArmModel& m, const Vec3& q) {
    const Mat6x3 jr = geometric_jacobian(m, q);
    if (m.c.isZero(0.0)) {
        return jr.topRows<3>();
    }
    return jr.topRows<3>() - skew(m.c) * jr.bottomRows<3>();
}

Mat3 inertia(const ArmModel& m, const Vec3& q) {
    const Trig t(q);
    const VecX a = m.dynamic_params();
    Mat3 M = Mat3::Zero();
    M(0, 0) = a[0] + a[1] * t.c2 * t.c2 + a[2] * t.c23 * t.c23 + a[3] * t.c2 * t.c23;
    M(1, 1) = a[4] + a[1] + a[2] + a[3] * t.c3;
    M(1, 2) = a[2] + 0.5 * a[3] * t.c3;
    M(2, 1) = M(1, 2);
    M(2, 2) = a[5] + a[2];
    // model-construction guard
    Eigen::LLT<Mat3> llt(M);
    if (llt.info() != Eigen::Success) {
        throw NonPositiveDefinite("inertia matrix");
    }
    return M;
}

Mat3 coriolis(const ArmModel& m, const Vec3& q, const Vec3& qd) {
    const Trig t(q);
    const VecX a = m.dynamic_params();
    // Christoffel form; h2 = dM11/dq2 / 2, h3 = dM11/dq3 / 2
    const double h2 = -(a[1] * t.c2 * t.s2 + 0.5 * a[3] * (t.s2 * t.c23 + t.c2 * t.s23) +
                        a[2] * t.c23 * t.s23);
    const double h3 = -(a[2] * t.c23 * t.s23 + 0.5 * a[3] * t.c2 * t.s23);
    const double w = 0.5 * a[3] * t.s3;
    Mat3 C;
    C << h2 * qd[1] + h3 * qd[2], h2 * qd[0], h3 * qd[0],
        -h2 * qd[0], -w * qd[2], -w * (qd[1] + qd[2]),
        -h3 * qd[0], w * qd[1], 0.0;
    return C;
}

Vec3 gravity_torque(const ArmModel& m, const Vec3& q) {
    const Trig t(q);
    const VecX a = m.dynamic_params();
    return {0.0, a[6] * t.c2 + a[7] * t.c23, a[7] * t.c23};
}

double potential_energy(const ArmModel& m, const Vec3& q) {
    const Trig t(q);
    return m.m2 * m.gravity * (m.l1 + 0.5 * m.l2 * t.s2) +
           m.m3 * m.gravity * (m.l1 + m.l2 * t.s2 + 0.5 * m.l3 * t.s23);
}

double kinetic_energy(const ArmModel& m, const Vec3& q, const Vec3& qd) {
    return 0.5 * qd.dot(inertia(m, q) * qd);
}

Eigen::Matrix<double, 3, kNumDynParams> dynamics_regressor(const Vec3& q, const Vec3& qd,
                                                           const Vec3& zeta,
                                                           const Vec3& zeta_dot) {
    const Trig t(q);
    Eigen::Matrix<double, 3, kNumDynParams> Y;
    Y.setZero();

    // col 1: armature of joint 1
    Y(0, 0) = zeta_dot[0];

    // col 2: m2 l2^2/3 + m3 l2^2
    Y(0, 1) = t.c2 * t.c2 * zeta_dot[0] - t.c2 * t.s2 * (qd[1] * zeta[0] + qd[0] * zeta[1]);
    Y(1, 1) = zeta_dot[1] + t.c2 * t.s2 * qd[0] * zeta[0];

    // col 3: m3 l3^2/3
    Y(0, 2) = t.c23 * t.c23 * zeta_dot[0] -
              t.c23 * t.s23 * ((qd[1] + qd[2]) * zeta[0] + qd[0] * (zeta[1] + zeta[2]));
    Y(1, 2) = zeta_dot[1] + zeta_dot[2] + t.c23 * t.s23 * qd[0] * zeta[0];
    Y(2, 2) = Y(1, 2);

    // col 4: m3 l2 l3
    {
        const double h2 = -0.5 * (t.s2 * t.c23 + t.c2 * t.s23);
        const double h3 = -0.5 * t.c2 * t.s23;
        Y(0, 3) = t.c2 * t.c23 * zeta_dot[0] + h2 * (qd[1] * zeta[0] + qd[0] * zeta[1]) +
                  h3 * (qd[2] * zeta[0] + qd[0] * zeta[2]);
        Y(1, 3) = t.c3 * zeta_dot[1] + 0.5 * t.c3 * zeta_dot[2] - h2 * qd[0] * zeta[0] -
                  0.5 * t.s3 * qd[2] * zeta[1] - 0.5 * t.s3 * (qd[1] + qd[2]) * zeta[2];
        Y(2, 3) = 0.5 * t.c3 * zeta_dot[1] - h3 * qd[0] * zeta[0] + 0.5 * t.s3 * qd[1] * zeta[1];
    }

    // cols 5, 6: armatures of joints 2, 3
    Y(1, 4) = zeta_dot[1];
    Y(2, 5) = zeta_dot[2];

    // cols 7, 8: gravity
    Y(1, 6) = t.c2;
    Y(1, 7) = t.c23;
    Y(2, 7) = t.c23;

    return Y;
}

Vec3 forward_dynamics(const ArmModel& m, const Vec3& q, const Vec3& qd, const Vec3& tau) {
    const Mat3 M = inertia(m, q);
    const Vec3 rhs = tau - coriolis(m, q, qd) * qd - gravity_torque(m, q);
    return M.llt().solve(rhs);
}

} // namespace vservo
