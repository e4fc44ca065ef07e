#include "vservo/kinreg.hpp"

#include <cmath>

namespace vservo::kinreg {

namespace {

struct Trig {
    double c1, s1, c2, s2, c23, s23;
    explicit Trig(const Vec3& q)
        : c1(std::cos(q[0])), s1(std::sin(q[0])),
          c2(std::cos(q[1])), s2(std::sin(q[1])),
          c23(std::cos(q[1] + q[2])), s23(std::sin(q[1] + q[2])) {}
};

void require_size(const VecX& v, int n, const char* what) {
    if (v.size() != n) {
        throw ConfigError(std::string(what) + ": wrong parameter count");
    }
}

} // namespace

bool extended(const ArmModel& arm) { return !arm.c.isZero(0.0); }

int depth_param_count(const ArmModel& arm) { return extended(arm) ? 5 : 3; }

int perp_param_count(const ArmModel& arm) { return extended(arm) ? 5 : 2; }

KinParams true_params(const CameraModel& cam, const ArmModel& arm) {
    const double bf = cam.focal_scale();
    KinParams p;
    if (!extended(arm)) {
        p.a_z = Vec3{cam.d_C, arm.l2, arm.l3};
        p.a_z_perp = Vec2{bf * arm.l2, bf * arm.l3};
        return p;
    }
    p.a_z.resize(5);
    p.a_z << cam.d_C + arm.c[0], arm.l2, arm.l3, arm.c[1], arm.c[2];
    p.a_z_perp.resize(5);
    p.a_z_perp << bf * arm.l2, bf * arm.l3, bf * arm.c[0], bf * arm.c[1], bf * arm.c[2];
    return p;
}

VecX depth_basis(const ArmModel& arm, const Vec3& q) {
    const Trig t(q);
    VecX h(depth_param_count(arm));
    h[0] = 1.0;
    h[1] = t.c1 * t.c2;
    h[2] = t.c1 * t.c23;
    if (extended(arm)) {
        // c_y, c_z do not contribute to the depth itself, only to its rate
        // through the [I, -S(c)] rigid-body velocity map.
        h[3] = 0.0;
        h[4] = 0.0;
    }
    return h;
}

MatX depth_jacobian_basis(const ArmModel& arm, const Vec3& q) {
    const Trig t(q);
    MatX b = MatX::Zero(depth_param_count(arm), 3);
    b.row(1) << -t.s1 * t.c2, -t.c1 * t.s2, 0.0;
    b.row(2) << -t.s1 * t.c23, -t.c1 * t.s23, -t.c1 * t.s23;
    if (extended(arm)) {
        b.row(3) << -1.0, 0.0, 0.0;
        b.row(4) << 0.0, -t.c1, -t.c1;
    }
    return b;
}

MatX depth_jacobian_basis_rate(const ArmModel& arm, const Vec3& q, const Vec3& qd) {
    const Trig t(q);
    const double e = qd[1] + qd[2]; // rate of q2+q3
    MatX b = MatX::Zero(depth_param_count(arm), 3);
    b.row(1) << -t.c1 * t.c2 * qd[0] + t.s1 * t.s2 * qd[1],
        t.s1 * t.s2 * qd[0] - t.c1 * t.c2 * qd[1], 0.0;
    b.row(2) << -t.c1 * t.c23 * qd[0] + t.s1 * t.s23 * e,
        t.s1 * t.s23 * qd[0] - t.c1 * t.c23 * e,
        t.s1 * t.s23 * qd[0] - t.c1 * t.c23 * e;
    if (extended(arm)) {
        b.row(4) << 0.0, t.s1 * qd[0], t.s1 * qd[0];
    }
    return b;
}

std::vector<Mat2x3> perp_basis(const ArmModel& arm, const Vec3& q) {
    const Trig t(q);
    std::vector<Mat2x3> out(static_cast<size_t>(perp_param_count(arm)));
    out[0] << t.c1 * t.c2, -t.s1 * t.s2, 0.0,
        0.0, t.c2, 0.0;
    out[1] << t.c1 * t.c23, -t.s1 * t.s23, -t.s1 * t.s23,
        0.0, t.c23, t.c23;
    if (extended(arm)) {
        out[2] << 1.0, 0.0, 0.0,
            0.0, t.c1, t.c1;
        out[3] << 0.0, 0.0, 0.0,
            0.0, t.s1, t.s1;
        out[4] << 0.0, -t.s1, -t.s1,
            0.0, 0.0, 0.0;
    }
    return out;
}

std::vector<Mat2x3> perp_basis_rate(const ArmModel& arm, const Vec3& q, const Vec3& qd) {
    const Trig t(q);
    const double e = qd[1] + qd[2];
    std::vector<Mat2x3> out(static_cast<size_t>(perp_param_count(arm)));
    out[0] << -t.s1 * t.c2 * qd[0] - t.c1 * t.s2 * qd[1],
        -t.c1 * t.s2 * qd[0] - t.s1 * t.c2 * qd[1], 0.0,
        0.0, -t.s2 * qd[1], 0.0;
    out[1] << -t.s1 * t.c23 * qd[0] - t.c1 * t.s23 * e,
        -t.c1 * t.s23 * qd[0] - t.s1 * t.c23 * e,
        -t.c1 * t.s23 * qd[0] - t.s1 * t.c23 * e,
        0.0, -t.s23 * e, -t.s23 * e;
    if (extended(arm)) {
        out[2] << 0.0, 0.0, 0.0,
            0.0, -t.s1 * qd[0], -t.s1 * qd[0];
        out[3] << 0.0, 0.0, 0.0,
            0.0, t.c1 * qd[0], t.c1 * qd[0];
        out[4] << 0.0, -t.c1 * qd[0], -t.c1 * qd[0],
            0.0, 0.0, 0.0;
    }
    return out;
}

MatX Yz(const ArmModel& arm, const Vec3& q, const Vec2& phi) {
    return phi * depth_basis(arm, q).transpose();
}

MatX Yz_bar(const ArmModel& arm, const Vec3& q, const Vec3& qd, const Vec2& phi) {
    const VecX w = depth_jacobian_basis(arm, q) * qd; // per-parameter depth rate
    return phi * w.transpose();
}

MatX Yz_perp(const ArmModel& arm, const Vec3& q, const Vec3& xi) {
    const auto basis = perp_basis(arm, q);
    MatX y(2, perp_param_count(arm));
    for (size_t k = 0; k < basis.size(); ++k) {
        y.col(static_cast<int>(k)) = basis[k] * xi;
    }
    return y;
}

MatX Yz_star(const ArmModel& arm, const Vec3& q, const Vec3& qd_r, const Vec2& x_plus_xd,
             const Vec2& xr_dot) {
    return Yz(arm, q, xr_dot) + 0.5 * Yz_bar(arm, q, qd_r, x_plus_xd);
}

double estimated_depth(const ArmModel& arm, const Vec3& q, const VecX& a_z_hat) {
    require_size(a_z_hat, depth_param_count(arm), "estimated_depth");
    return depth_basis(arm, q).dot(a_z_hat);
}

double estimated_depth_rate(const ArmModel& arm, const Vec3& q, const Vec3& qd,
                            const VecX& a_z_hat, const VecX& a_z_hat_rate) {
    require_size(a_z_hat, depth_param_count(arm), "estimated_depth_rate");
    require_size(a_z_hat_rate, depth_param_count(arm), "estimated_depth_rate");
    const VecX w = depth_jacobian_basis(arm, q) * qd;
    return w.dot(a_z_hat) + depth_basis(arm, q).dot(a_z_hat_rate);
}

Mat1x3 estimated_depth_jacobian(const ArmModel& arm, const Vec3& q, const VecX& a_z_hat) {
    require_size(a_z_hat, depth_param_count(arm), "estimated_depth_jacobian");
    return a_z_hat.transpose() * depth_jacobian_basis(arm, q);
}

Mat1x3 estimated_depth_jacobian_rate(const ArmModel& arm, const Vec3& q, const Vec3& qd,
                                     const VecX& a_z_hat, const VecX& a_z_hat_rate) {
    require_size(a_z_hat, depth_param_count(arm), "estimated_depth_jacobian_rate");
    require_size(a_z_hat_rate, depth_param_count(arm), "estimated_depth_jacobian_rate");
    return a_z_hat.transpose() * depth_jacobian_basis_rate(arm, q, qd) +
           a_z_hat_rate.transpose() * depth_jacobian_basis(arm, q);
}

Mat2x3 estimated_perp_jacobian(const ArmModel& arm, const Vec3& q,
                               const VecX& a_z_perp_hat) {
    require_size(a_z_perp_hat, perp_param_count(arm), "estimated_perp_jacobian");
    const auto basis = perp_basis(arm, q);
    Mat2x3 j = Mat2x3::Zero();
    for (size_t k = 0; k < basis.size(); ++k) {
        j += a_z_perp_hat[static_cast<int>(k)] * basis[k];
    }
    return j;
}

Mat2x3 estimated_perp_jacobian_rate(const ArmModel& arm, const Vec3& q, const Vec3& qd,
                                    const VecX& a_z_perp_hat,
                                    const VecX& a_z_perp_hat_rate) {
    require_size(a_z_perp_hat, perp_param_count(arm), "estimated_perp_jacobian_rate");
    require_size(a_z_perp_hat_rate, perp_param_count(arm), "estimated_perp_jacobian_rate");
    const auto basis = perp_basis(arm, q);
    const auto basis_rate = perp_basis_rate(arm, q, qd);
    Mat2x3 j = Mat2x3::Zero();
    for (size_t k = 0; k < basis.size(); ++k) {
        j += a_z_perp_hat[static_cast<int>(k)] * basis_rate[k] +
             a_z_perp_hat_rate[static_cast<int>(k)] * basis[k];
    }
    return j;
}

} // namespace vservo::kinreg

namespace vservo {

Mat2x3 task_jacobian(const KinParams& params, const ArmModel& arm, const Vec3& q,
                     const Vec2& x, const Vec2& x_d) {
    return task_jacobian_from(kinreg::estimated_perp_jacobian(arm, q, params.a_z_perp),
                              kinreg::estimated_depth_jacobian(arm, q, params.a_z), x, x_d);
}

} // namespace vservo
