#include "vservo/control.hpp"

namespace vservo::control {

const char* to_string(Kind k) {
    switch (k) {
    case Kind::inverse_jacobian: return "inverse_jacobian";
    case Kind::transpose_jacobian: return "transpose_jacobian";
    case Kind::kinematic: return "kinematic";
    }
    return "unknown";
}

namespace {

void require_dims(const ArmModel& arm, const Estimates& est) {
    if (est.a_d.size() != kNumDynParams ||
        est.a_z.size() != kinreg::depth_param_count(arm) ||
        est.a_z_perp.size() != kinreg::perp_param_count(arm)) {
        throw ConfigError("estimate vector dimensions do not match the model");
    }
}

} // namespace

void Gains::validate(const ArmModel& arm) const {
    require_spd(K, "K");
    require_spd(K1, "K1");
    if (!(alpha > 0.0)) {
        throw NonPositiveDefinite("alpha");
    }
    require_spd(Gamma_d, "Gamma_d");
    require_spd(Gamma_z, "Gamma_z");
    require_spd(Gamma_z_perp, "Gamma_z_perp");
    if (Gamma_d.rows() != kNumDynParams) {
        throw ConfigError("Gamma_d dimension must match the dynamic parameter count");
    }
    if (Gamma_z.rows() != kinreg::depth_param_count(arm)) {
        throw ConfigError("Gamma_z dimension must match the depth parameter count");
    }
    if (Gamma_z_perp.rows() != kinreg::perp_param_count(arm)) {
        throw ConfigError("Gamma_z_perp dimension must match the J_z^perp parameter count");
    }
}

Refs reference_velocity(const ArmModel& arm, const Estimates& est, const Gains& gains,
                        const Vec3& q, const Vec2& x, const ImageTarget& target) {
    Refs r;
    r.z_hat = kinreg::estimated_depth(arm, q, est.a_z);
    r.J_hat = task_jacobian(est.kin(), arm, q, x, target.x);
    r.J_hat_pinv = pinv_wide(r.J_hat);
    r.xr_dot = target.xdot - gains.alpha * (x - target.x);
    r.qd_r = r.J_hat_pinv * (r.z_hat * r.xr_dot);
    return r;
}

KinAdaptation kinematic_adaptation(const ArmModel& arm, const Gains& gains, const Vec3& q,
                                   const Vec3& reg_velocity, const Vec2& x,
                                   const Vec2& x_d, const Vec2& xr_dot) {
    const Vec2 dx = x - x_d;
    KinAdaptation k;
    k.a_z_rate =
        -gains.Gamma_z *
        (kinreg::Yz_star(arm, q, reg_velocity, x + x_d, xr_dot).transpose() * dx);
    k.a_z_perp_rate =
        gains.Gamma_z_perp * (kinreg::Yz_perp(arm, q, reg_velocity).transpose() * dx);
    return k;
}

RefAccel reference_acceleration(const ArmModel& arm, const Estimates& est,
                                const KinAdaptation& kin, const Gains& gains,
                                const Measurement& m, const ImageTarget& target,
                                const Refs& refs) {
    RefAccel out;
    out.xr_ddot = target.xddot - gains.alpha * (m.xdot - target.xdot);
    out.z_hat_dot = kinreg::estimated_depth_rate(arm, m.q, m.qd, est.a_z, kin.a_z_rate);

    const Mat1x3 jz = kinreg::estimated_depth_jacobian(arm, m.q, est.a_z);
    const Mat1x3 jz_dot =
        kinreg::estimated_depth_jacobian_rate(arm, m.q, m.qd, est.a_z, kin.a_z_rate);
    const Mat2x3 jp_dot = kinreg::estimated_perp_jacobian_rate(arm, m.q, m.qd, est.a_z_perp,
                                                               kin.a_z_perp_rate);
    out.J_hat_dot = jp_dot - 0.5 * (m.xdot + target.xdot) * jz -
                    0.5 * (m.x + target.x) * jz_dot;

    const Mat3x2& jpinv = refs.J_hat_pinv;
    const Vec3 core = jpinv * (refs.z_hat * out.xr_ddot + out.z_hat_dot * refs.xr_dot -
                               out.J_hat_dot * refs.qd_r);
    const Mat3 null_proj = Mat3::Identity() - jpinv * refs.J_hat;
    out.qdd_r =
        core + null_proj * (out.J_hat_dot.transpose() * (jpinv.transpose() * refs.qd_r));
    return out;
}

namespace {

Output torque_body(Kind kind, const ArmModel& arm, const Estimates& est, const Gains& gains,
                   const Measurement& m, const ImageTarget& target) {
    require_dims(arm, est);
    Output o;
    const Refs refs = reference_velocity(arm, est, gains, m.q, m.x, target);
    const Vec3 reg_vel = (kind == Kind::transpose_jacobian) ? m.qd : refs.qd_r;
    const KinAdaptation kin =
        kinematic_adaptation(arm, gains, m.q, reg_vel, m.x, target.x, refs.xr_dot);
    const RefAccel acc = reference_acceleration(arm, est, kin, gains, m, target, refs);

    o.s = m.qd - refs.qd_r;
    const auto yd = dynamics_regressor(m.q, m.qd, refs.qd_r, acc.qdd_r);
    if (kind == Kind::inverse_jacobian) {
        o.command = -gains.K * o.s + yd * est.a_d;
    } else {
        o.command = -refs.J_hat.transpose() * (gains.K1 * (refs.J_hat * o.s)) + yd * est.a_d;
    }
    o.rates.a_d = -gains.Gamma_d * (yd.transpose() * o.s);
    o.rates.a_z = kin.a_z_rate;
    o.rates.a_z_perp = kin.a_z_perp_rate;

    o.qd_r = refs.qd_r;
    o.qdd_r = acc.qdd_r;
    o.J_hat = refs.J_hat;
    o.z_hat = refs.z_hat;
    o.z_hat_dot = acc.z_hat_dot;
    o.xr_dot = refs.xr_dot;
    return o;
}

} // namespace

Output inverse_jacobian_torque(const ArmModel& arm, const Estimates& est, const Gains& gains,
                               const Measurement& m, const ImageTarget& target) {
    return torque_body(Kind::inverse_jacobian, arm, est, gains, m, target);
}

Output transpose_jacobian_torque(const ArmModel& arm, const Estimates& est,
                                 const Gains& gains, const Measurement& m,
                                 const ImageTarget& target) {
    return torque_body(Kind::transpose_jacobian, arm, est, gains, m, target);
}

Output kinematic_command(const ArmModel& arm, const Estimates& est, const Gains& gains,
                         const Vec3& q, const Vec2& x, const ImageTarget& target,
                         const Vec3& qd_measured) {
    require_dims(arm, est);
    Output o;
    const Refs refs = reference_velocity(arm, est, gains, q, x, target);
    const KinAdaptation kin =
        kinematic_adaptation(arm, gains, q, refs.qd_r, x, target.x, refs.xr_dot);
    o.command = refs.qd_r;
    o.qd_r = refs.qd_r;
    o.qdd_r = Vec3::Zero();
    o.s = qd_measured - refs.qd_r;
    o.J_hat = refs.J_hat;
    o.z_hat = refs.z_hat;
    o.z_hat_dot =
        kinreg::estimated_depth_rate(arm, q, qd_measured, est.a_z, kin.a_z_rate);
    o.xr_dot = refs.xr_dot;
    o.rates.a_d = VecX::Zero(est.a_d.size());
    o.rates.a_z = kin.a_z_rate;
    o.rates.a_z_perp = kin.a_z_perp_rate;
    return o;
}

Output step(Kind kind, const ArmModel& arm, const Estimates& est, const Gains& gains,
            const Measurement& m, const ImageTarget& target) {
    switch (kind) {
    case Kind::inverse_jacobian:
        return inverse_jacobian_torque(arm, est, gains, m, target);
    case Kind::transpose_jacobian:
        return transpose_jacobian_torque(arm, est, gains, m, target);
    case Kind::kinematic:
    default:
        return kinematic_command(arm, est, gains, m.q, m.x, target, m.qd);
    }
}

EstimateRates adapt(Kind kind, const ArmModel& arm, const Gains& gains, const Measurement& m,
                    const ImageTarget& target, const Refs& refs,
                    const Eigen::Matrix<double, 3, kNumDynParams>& Yd, const Vec3& s) {
    const Vec3 reg_vel = (kind == Kind::transpose_jacobian) ? m.qd : refs.qd_r;
    const KinAdaptation kin =
        kinematic_adaptation(arm, gains, m.q, reg_vel, m.x, target.x, refs.xr_dot);
    EstimateRates r;
    if (kind == Kind::kinematic) {
        r.a_d = VecX::Zero(kNumDynParams);
    } else {
        r.a_d = -gains.Gamma_d * (Yd.transpose() * s);
    }
    r.a_z = kin.a_z_rate;
    r.a_z_perp = kin.a_z_perp_rate;
    return r;
}

} // namespace vservo::control
