#include "vservo/sim.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace vservo::sim {

control::ImageTarget desired_trajectory(const Trajectory& traj, double t) {
    const double th = traj.omega * t + traj.phase;
    control::ImageTarget out;
    out.x = traj.center + traj.radius * Vec2{std::cos(th), std::sin(th)};
    out.xdot = traj.radius * traj.omega * Vec2{-std::sin(th), std::cos(th)};
    out.xddot = -traj.omega * traj.omega * (out.x - traj.center);
    return out;
}

const char* to_string(ControlMode m) {
    return m == ControlMode::sampled ? "sampled" : "continuous";
}

const char* to_string(AdaptationMode m) {
    return m == AdaptationMode::held ? "held" : "continuous";
}

const char* to_string(ServoMode m) { return m == ServoMode::ideal ? "ideal" : "first_order"; }

const char* to_string(AbortReason r) {
    switch (r) {
    case AbortReason::none: return "none";
    case AbortReason::singular_jacobian: return "singular_jacobian";
    case AbortReason::nonpositive_depth: return "nonpositive_depth";
    case AbortReason::nonfinite_state: return "nonfinite_state";
    }
    return "unknown";
}

namespace {

bool is_multiple(double big, double small) {
    if (!(small > 0.0) || !(big > 0.0)) {
        return false;
    }
    const double n = std::round(big / small);
    return n >= 1.0 && std::abs(n * small - big) <= 1e-9 * big;
}

} // namespace

void Scenario::validate() const {
    arm.validate();
    camera.validate();
    gains.validate(arm);
    if (init_estimates.a_d.size() != kNumDynParams) {
        throw ConfigError("init.a_d_hat must have " + std::to_string(kNumDynParams) +
                          " entries");
    }
    if (init_estimates.a_z.size() != kinreg::depth_param_count(arm)) {
        throw ConfigError("init.a_z_hat dimension does not match the parameterization mode");
    }
    if (init_estimates.a_z_perp.size() != kinreg::perp_param_count(arm)) {
        throw ConfigError(
            "init.a_z_perp_hat dimension does not match the parameterization mode");
    }
    if (!init_state.q.allFinite() || !init_state.qd.allFinite() ||
        !init_estimates.a_d.allFinite() || !init_estimates.a_z.allFinite() ||
        !init_estimates.a_z_perp.allFinite()) {
        throw ConfigError("initial state and estimates must be finite");
    }
    if (!(duration >= 0.0) || !std::isfinite(duration)) {
        throw ConfigError("duration must be nonnegative");
    }
    if (!(control_period > 0.0) || !(substep > 0.0)) {
        throw ConfigError("control period and substep must be positive");
    }
    if (!is_multiple(control_period, substep)) {
        throw ConfigError("control period must be an integer multiple of the substep");
    }
    if (duration > 0.0 && !is_multiple(duration, substep)) {
        throw ConfigError("duration must be an integer multiple of the substep");
    }
    if (record_period != 0.0) {
        const double base = control_mode == ControlMode::sampled ? control_period : substep;
        if (!is_multiple(record_period, base)) {
            throw ConfigError("record period must be an integer multiple of the control "
                              "period (sampled mode) or substep (continuous mode)");
        }
    }
    if (servo == ServoMode::first_order && !(servo_time_constant > 0.0)) {
        throw ConfigError("servo time constant must be positive");
    }
    if (camera.u0 != 0.0 || camera.v0 != 0.0) {
        throw ConfigError("principal point must be (0,0): the controller regressors assume "
                          "centered image coordinates");
    }
    if (!(trajectory.radius >= 0.0) || !(trajectory.omega >= 0.0)) {
        throw ConfigError("trajectory radius and angular rate must be nonnegative");
    }
}

Vec3 velocity_servo_plant(const Vec3& cmd, const JointState& state, ServoMode mode,
                          double time_constant) {
    if (mode == ServoMode::ideal) {
        return cmd;
    }
    return (cmd - state.qd) / time_constant;
}

namespace {

struct Layout {
    int m1, m2;
    int i_ad, i_az, i_azp, i_int, size;
    explicit Layout(const ArmModel& arm)
        : m1(kinreg::depth_param_count(arm)), m2(kinreg::perp_param_count(arm)) {
        i_ad = 7; // [0] = t, [1..3] = q, [4..6] = qd
        i_az = i_ad + kNumDynParams;
        i_azp = i_az + m1;
        i_int = i_azp + m2;
        size = i_int + 4; // ∫xᵀu, ∫Δxᵀū, ∫dissipation, ∫V̇₂-rhs
    }
};

struct Snapshot {
    double t = 0.0;
    Vec3 q, qd;
    control::Estimates est;
    Eigen::Vector4d integrals;
    control::ImageTarget target;
    Vec2 x;
    double z = 0.0;
    Mat2x3 j_perp;
    Mat1x3 j_z;
};

struct Instant {
    double xu = 0.0, dxu = 0.0, diss = 0.0, v2rhs = 0.0;
    double young_lhs = 0.0, young_rhs = 0.0;
    Vec2 xdot;
    double zdot = 0.0;
};

struct StorageValues {
    double Vs = 0.0, Vs_err = 0.0, V1 = 0.0, V2 = 0.0;
};

class Engine {
public:
    explicit Engine(const Scenario& s)
        : scn(s), lay(s.arm), a_d_true(s.arm.dynamic_params()),
          kin_true(kinreg::true_params(s.camera, s.arm)),
          gamma_d_llt(s.gains.Gamma_d), gamma_z_llt(s.gains.Gamma_z),
          gamma_zp_llt(s.gains.Gamma_z_perp) {}

    Trace go();

private:
    const Scenario& scn;
    Layout lay;
    VecX a_d_true;
    KinParams kin_true;
    Eigen::LLT<MatX> gamma_d_llt, gamma_z_llt, gamma_zp_llt;
    control::Output held;

    bool kinematic() const { return scn.controller == control::Kind::kinematic; }
    bool ideal_servo() const { return kinematic() && scn.servo == ServoMode::ideal; }

    VecX pack_initial() const {
        VecX st = VecX::Zero(lay.size);
        st.segment<3>(1) = scn.init_state.q;
        st.segment<3>(4) = scn.init_state.qd;
        st.segment(lay.i_ad, kNumDynParams) = scn.init_estimates.a_d;
        st.segment(lay.i_az, lay.m1) = scn.init_estimates.a_z;
        st.segment(lay.i_azp, lay.m2) = scn.init_estimates.a_z_perp;
        return st;
    }

    Snapshot view(const VecX& st) const {
        Snapshot v;
        v.t = st[0];
        v.q = st.segment<3>(1);
        v.qd = st.segment<3>(4);
        v.est.a_d = st.segment(lay.i_ad, kNumDynParams);
        v.est.a_z = st.segment(lay.i_az, lay.m1);
        v.est.a_z_perp = st.segment(lay.i_azp, lay.m2);
        v.integrals = st.segment<4>(lay.i_int);
        v.target = desired_trajectory(scn.trajectory, v.t);
        const Projection pr = project(scn.camera, feature_position(scn.arm, v.q));
        v.x = pr.x;
        v.z = pr.z;
        v.j_perp = depth_rate_independent_jacobian(scn.camera, scn.arm, v.q);
        v.j_z = depth_jacobian(scn.camera, scn.arm, v.q);
        return v;
    }

    control::Output control_at(const Snapshot& v) const {
        if (kinematic()) {
            auto o = control::kinematic_command(scn.arm, v.est, scn.gains, v.q, v.x,
                                                v.target, v.qd);
            if (scn.servo == ServoMode::ideal) {
                // plant realizes q̇ ≡ q̇_cmd exactly
                o.s.setZero();
                o.z_hat_dot = kinreg::estimated_depth_rate(scn.arm, v.q, o.command,
                                                           v.est.a_z, o.rates.a_z);
            }
            return o;
        }
        control::Measurement m;
        m.q = v.q;
        m.qd = v.qd;
        m.x = v.x;
        m.xdot = (v.j_perp * v.qd - v.x * v.j_z.dot(v.qd)) / v.z;
        return control::step(scn.controller, scn.arm, v.est, scn.gains, m, v.target);
    }

    Vec3 qd_eff(const Snapshot& v, const control::Output& o) const {
        return ideal_servo() ? Vec3(o.command) : v.qd;
    }

    Instant instant(const Snapshot& v, const control::Output& o) const {
        Instant it;
        const Vec3 qde = qd_eff(v, o);
        it.zdot = v.j_z.dot(qde);
        it.xdot = (v.j_perp * qde - v.x * it.zdot) / v.z;
        const Vec2 u = v.j_perp * qde - 0.5 * v.x * it.zdot;
        it.xu = v.x.dot(u);
        const Vec2 dx = v.x - v.target.x;
        const Vec2 dxdot = it.xdot - v.target.xdot;
        const Vec2 ubar = v.z * dxdot + 0.5 * it.zdot * dx;
        it.dxu = dx.dot(ubar);
        const Vec3 s = qde - o.qd_r;
        if (scn.controller == control::Kind::inverse_jacobian) {
            it.diss = s.dot(scn.gains.K * s);
        } else if (scn.controller == control::Kind::transpose_jacobian) {
            const Vec2 js = o.J_hat * s;
            it.diss = js.dot(scn.gains.K1 * js);
        }
        const Mat2x3 jstar = task_jacobian_from(v.j_perp, v.j_z, v.x, v.target.x);
        const Vec2 jss = jstar * s;
        const double az = scn.gains.alpha * v.z;
        it.v2rhs = -az * dx.squaredNorm() + dx.dot(jss);
        it.young_lhs = dx.dot(jss);
        it.young_rhs = 0.5 * az * dx.squaredNorm() + jss.squaredNorm() / (2.0 * az);
        return it;
    }

    StorageValues storage(const Snapshot& v, const control::Output& o) const {
        StorageValues val;
        val.Vs = 0.5 * v.z * v.x.squaredNorm();
        const Vec2 dx = v.x - v.target.x;
        val.Vs_err = 0.5 * v.z * dx.squaredNorm();
        const Vec3 s = qd_eff(v, o) - o.qd_r;
        const VecX da_d = v.est.a_d - a_d_true;
        val.V1 = 0.5 * s.dot(inertia(scn.arm, v.q) * s) + 0.5 * da_d.dot(gamma_d_llt.solve(da_d));
        const VecX da_z = v.est.a_z - kin_true.a_z;
        const VecX da_zp = v.est.a_z_perp - kin_true.a_z_perp;
        val.V2 = val.Vs_err + 0.5 * da_z.dot(gamma_z_llt.solve(da_z)) +
                 0.5 * da_zp.dot(gamma_zp_llt.solve(da_zp));
        return val;
    }

    VecX deriv(const VecX& st) const {
        // classify a blown-up state before cos(NaN) can poison the projected
        // depth and masquerade as a nonpositive-depth abort
        if (!st.allFinite()) {
            throw NonFiniteState("integration state");
        }
        const Snapshot v = view(st);
        control::Output o;
        if (scn.control_mode == ControlMode::continuous) {
            o = control_at(v);
        } else if (scn.adaptation == AdaptationMode::continuous) {
            o = control_at(v);
            o.command = held.command; // zero-order hold on the command only
        } else {
            o = held;
        }
        const Instant it = instant(v, o);

        VecX d = VecX::Zero(lay.size);
        d[0] = 1.0;
        if (kinematic()) {
            if (scn.servo == ServoMode::ideal) {
                d.segment<3>(1) = o.command;
            } else {
                d.segment<3>(1) = v.qd;
                d.segment<3>(4) = velocity_servo_plant(o.command, {v.q, v.qd}, scn.servo,
                                                       scn.servo_time_constant);
            }
        } else {
            d.segment<3>(1) = v.qd;
            d.segment<3>(4) = forward_dynamics(scn.arm, v.q, v.qd, o.command);
        }
        d.segment(lay.i_ad, kNumDynParams) = o.rates.a_d;
        d.segment(lay.i_az, lay.m1) = scn.instrumentation.a_z_rate_sign * o.rates.a_z;
        d.segment(lay.i_azp, lay.m2) =
            scn.instrumentation.a_z_perp_rate_sign * o.rates.a_z_perp;
        d[lay.i_int + 0] = it.xu;
        d[lay.i_int + 1] = it.dxu;
        d[lay.i_int + 2] = it.diss;
        d[lay.i_int + 3] = it.v2rhs;
        return d;
    }

    AuditSample make_audit(const Snapshot& v, const control::Output& o) const {
        const Instant it = instant(v, o);
        const StorageValues val = storage(v, o);
        AuditSample a;
        a.t = v.t;
        a.Vs = val.Vs;
        a.Vs_err = val.Vs_err;
        a.V1 = val.V1;
        a.V2 = val.V2;
        a.xu = it.xu;
        a.dxu = it.dxu;
        a.diss = it.diss;
        a.v2rhs = it.v2rhs;
        a.I_xu = v.integrals[0];
        a.I_dxu = v.integrals[1];
        a.I_diss = v.integrals[2];
        a.I_v2 = v.integrals[3];
        a.young_lhs = it.young_lhs;
        a.young_rhs = it.young_rhs;
        return a;
    }

    Row make_row(const Snapshot& v, const control::Output& o) const {
        const Instant it = instant(v, o);
        const StorageValues val = storage(v, o);
        Row r;
        r.t = v.t;
        r.q = v.q;
        r.qd = qd_eff(v, o);
        r.command = o.command;
        r.s = qd_eff(v, o) - o.qd_r;
        r.x = v.x;
        r.xdot = it.xdot;
        r.x_d = v.target.x;
        r.dx = v.x - v.target.x;
        r.z = v.z;
        r.z_hat = o.z_hat;
        r.z_hat_dot = o.z_hat_dot;
        r.a_d = v.est.a_d;
        r.a_z = v.est.a_z;
        r.a_z_perp = v.est.a_z_perp;
        r.Vs = val.Vs;
        r.Vs_err = val.Vs_err;
        r.V1 = val.V1;
        r.V2 = val.V2;
        r.xu = it.xu;
        r.dxu = it.dxu;
        r.diss = it.diss;
        r.v2rhs = it.v2rhs;
        r.I_xu = v.integrals[0];
        r.I_dxu = v.integrals[1];
        r.I_diss = v.integrals[2];
        r.I_v2 = v.integrals[3];
        return r;
    }
};

Trace Engine::go() {
    const auto wall_start = std::chrono::steady_clock::now();
    Trace tr;
    tr.scenario = scn;
    const auto stamp_wall = [&] {
        tr.wall_clock_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start)
                .count();
    };
    const long n_steps = std::lround(scn.duration / scn.substep);
    if (n_steps == 0) {
        stamp_wall();
        return tr; // header-only
    }
    const long n_sub = std::lround(scn.control_period / scn.substep);
    const long rec_every = std::lround(scn.effective_record_period() / scn.substep);
    tr.rows.reserve(static_cast<size_t>(n_steps / rec_every) + 2);
    tr.audit.reserve(static_cast<size_t>(n_steps) + 1);

    VecX state = pack_initial();
    try {
        for (long i = 0; i <= n_steps; ++i) {
            state[0] = static_cast<double>(i) * scn.substep; // pin t against drift
            const Snapshot v = view(state);
            if (scn.control_mode == ControlMode::sampled && i % n_sub == 0) {
                held = control_at(v);
            }
            const control::Output o =
                scn.control_mode == ControlMode::continuous ? control_at(v) : held;
            tr.audit.push_back(make_audit(v, o));
            if (i % rec_every == 0 || i == n_steps) {
                tr.rows.push_back(make_row(v, o));
            }
            if (i == n_steps) {
                break;
            }
            state = rk4_step([this](const VecX& s) { return deriv(s); }, state, scn.substep);
        }
    } catch (const SingularJacobian& e) {
        tr.abort = AbortReason::singular_jacobian;
        tr.abort_detail = e.what();
        tr.abort_time = state[0];
    } catch (const NonPositiveDepth& e) {
        tr.abort = AbortReason::nonpositive_depth;
        tr.abort_detail = e.what();
        tr.abort_time = state[0];
    } catch (const NonFiniteState& e) {
        tr.abort = AbortReason::nonfinite_state;
        tr.abort_detail = e.what();
        tr.abort_time = state[0];
    }
    stamp_wall();
    return tr;
}

} // namespace

Trace run(const Scenario& scn) {
    scn.validate();
    Engine engine(scn);
    return engine.go();
}

PassivityReport passivity_audit(const Trace& tr) {
    PassivityReport rep;
    const auto& a = tr.audit;
    if (a.empty()) {
        return rep;
    }
    const double vs0 = a.front().Vs;
    const double vse0 = a.front().Vs_err;
    double t1 = 0.0, t2 = 0.0; // running trapezoids
    rep.inequality_margin = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < a.size(); ++k) {
        if (k > 0) {
            const double h = a[k].t - a[k - 1].t;
            t1 += 0.5 * h * (a[k].xu + a[k - 1].xu);
            t2 += 0.5 * h * (a[k].dxu + a[k - 1].dxu);
        }
        const double n1 = 1.0 + std::abs(a[k].Vs);
        const double n2 = 1.0 + std::abs(a[k].Vs_err);
        rep.prop1_trapezoid = std::max(rep.prop1_trapezoid,
                                       std::abs(t1 - (a[k].Vs - vs0)) / n1);
        rep.prop1_quadrature = std::max(rep.prop1_quadrature,
                                        std::abs(a[k].I_xu - (a[k].Vs - vs0)) / n1);
        rep.prop2_trapezoid = std::max(rep.prop2_trapezoid,
                                       std::abs(t2 - (a[k].Vs_err - vse0)) / n2);
        rep.prop2_quadrature = std::max(rep.prop2_quadrature,
                                        std::abs(a[k].I_dxu - (a[k].Vs_err - vse0)) / n2);
        rep.inequality_margin = std::min(rep.inequality_margin, a[k].I_xu + vs0);
    }
    rep.inequality_ok = rep.inequality_margin >= -1e-9 * (1.0 + std::abs(vs0));
    return rep;
}

LyapunovReport lyapunov_audit(const Trace& tr) {
    LyapunovReport rep;
    rep.v2_applicable = tr.scenario.controller != control::Kind::transpose_jacobian;
    const auto& a = tr.audit;
    if (a.empty()) {
        return rep;
    }
    const double v10 = a.front().V1;
    const double v20 = a.front().V2;
    double td = 0.0, tv = 0.0;
    for (size_t k = 0; k < a.size(); ++k) {
        if (k > 0) {
            const double h = a[k].t - a[k - 1].t;
            td += 0.5 * h * (a[k].diss + a[k - 1].diss);
            tv += 0.5 * h * (a[k].v2rhs + a[k - 1].v2rhs);
            rep.v1_max_increase = std::max(
                rep.v1_max_increase, (a[k].V1 - a[k - 1].V1) / (1.0 + std::abs(a[k - 1].V1)));
        }
        const double n1 = 1.0 + std::abs(a[k].V1);
        rep.v1_trapezoid = std::max(rep.v1_trapezoid, std::abs((a[k].V1 - v10) + td) / n1);
        rep.v1_quadrature =
            std::max(rep.v1_quadrature, std::abs((a[k].V1 - v10) + a[k].I_diss) / n1);
        if (rep.v2_applicable) {
            const double n2 = 1.0 + std::abs(a[k].V2);
            rep.v2_trapezoid =
                std::max(rep.v2_trapezoid, std::abs((a[k].V2 - v20) - tv) / n2);
            rep.v2_quadrature =
                std::max(rep.v2_quadrature, std::abs((a[k].V2 - v20) - a[k].I_v2) / n2);
        }
        const double excess =
            (a[k].young_lhs - a[k].young_rhs) / (1.0 + std::abs(a[k].young_rhs));
        if (excess > 1e-9) {
            ++rep.bound_violations;
        }
        rep.bound_worst = std::max(rep.bound_worst, excess);
    }
    return rep;
}

Metrics metrics(const Trace& tr) {
    Metrics m;
    m.wall_clock_s = tr.wall_clock_s;
    if (tr.rows.empty()) {
        return m;
    }
    m.duration = tr.rows.back().t;
    m.z_min = std::numeric_limits<double>::infinity();
    m.z_hat_min = std::numeric_limits<double>::infinity();
    m.z_hat_absmin_after_20s = std::numeric_limits<double>::infinity();
    for (const Row& r : tr.rows) {
        const double err = r.dx.lpNorm<Eigen::Infinity>();
        m.max_error_inf = std::max(m.max_error_inf, err);
        if (r.t > 20.0) {
            m.max_error_after_20s = std::max(m.max_error_after_20s, err);
            m.z_hat_absmin_after_20s = std::min(m.z_hat_absmin_after_20s, std::abs(r.z_hat));
        }
        m.peak_abs_command =
            std::max(m.peak_abs_command, r.command.lpNorm<Eigen::Infinity>());
        m.z_min = std::min(m.z_min, r.z);
        m.z_hat_min = std::min(m.z_hat_min, r.z_hat);
        if (r.z_hat <= 0.0) {
            m.z_hat_nonpositive_seen = true;
        }
    }
    m.final_error_inf = tr.rows.back().dx.lpNorm<Eigen::Infinity>();
    m.z_gap_final = std::abs(tr.rows.back().z - tr.rows.back().z_hat);

    // first time after which the error stays below 0.5 px
    m.convergence_time_05px = -1.0;
    for (auto it = tr.rows.rbegin(); it != tr.rows.rend(); ++it) {
        if (it->dx.lpNorm<Eigen::Infinity>() >= 0.5) {
            break;
        }
        m.convergence_time_05px = it->t;
    }

    const double period = tr.scenario.trajectory.omega > 0.0
                              ? 2.0 * std::numbers::pi / tr.scenario.trajectory.omega
                              : m.duration;
    for (double w0 = m.window_start; w0 + period <= m.duration + 1e-9; w0 += period) {
        double peak = 0.0;
        for (const Row& r : tr.rows) {
            if (r.t >= w0 && r.t < w0 + period) {
                peak = std::max(peak, r.dx.lpNorm<Eigen::Infinity>());
            }
        }
        m.window_peaks.push_back(peak);
    }
    return m;
}

Vec3 solve_q_for_image(const CameraModel& cam, const ArmModel& arm, const Vec2& x_target,
                       const Vec3& q_guess) {
    Vec3 q = q_guess;
    for (int i = 0; i < 60; ++i) {
        const Projection pr = project(cam, feature_position(arm, q));
        const Vec2 err = x_target - pr.x;
        if (err.norm() < 1e-13) {
            return q;
        }
        const Mat2x3 j = overall_jacobian(cam, arm, q, pr.x); // z ẋ = J q̇
        q += pinv_wide(j) * (pr.z * err);
    }
    const Projection pr = project(cam, feature_position(arm, q));
    if ((x_target - pr.x).norm() > 1e-9) {
        throw ConfigError("no joint configuration found for requested image point");
    }
    return q;
}

namespace {

control::Estimates benchmark_estimates() {
    control::Estimates e;
    e.a_d = VecX::Zero(kNumDynParams);
    e.a_d[6] = 30.0;
    e.a_z = Vec3{3.2, 3.2, 3.2};
    // β̂(0)·f̂(0) = 2000·0.09 = 180, times l̂₂(0) = l̂₃(0) = 3.2 m
    e.a_z_perp = Vec2{576.0, 576.0};
    return e;
}

VecX benchmark_reference_a_d() {
    VecX v(kNumDynParams);
    v << 8.2688, 2.9925, 1.3538, 0.2578, 10.6250, 1.8050, 46.3050, 13.9650;
    return v;
}

} // namespace

Scenario benchmark_scenario(control::Kind kind) {
    Scenario s; // field defaults already carry the benchmark constants
    s.controller = kind;
    // start 8 px per axis from the initial reference point (74, 79); much
    // larger offsets can drive a_z_perp_hat through zero fast enough that the
    // estimated task Jacobian loses rank before tracking takes hold
    s.init_state.q = solve_q_for_image(s.camera, s.arm, Vec2{66.0, 71.0},
                                       Vec3{0.7, 0.6, -0.35});
    s.init_state.qd = Vec3::Zero();
    s.init_estimates = benchmark_estimates();
    s.reference_a_d = benchmark_reference_a_d();
    return s;
}

Scenario kinematic_scenario(ServoMode mode) {
    Scenario s = benchmark_scenario(control::Kind::kinematic);
    s.servo = mode;
    s.servo_time_constant = 0.02;
    return s;
}

Scenario audit_scenario(control::Kind kind) {
    Scenario s = benchmark_scenario(kind);
    s.control_mode = ControlMode::continuous;
    s.adaptation = AdaptationMode::continuous;
    s.duration = 12.0;
    // the trapezoid cross-checks of the rate identities carry an O(h^2)
    // quadrature error of their own; 1e-5 keeps them below the audit gate
    // through the initial transient with about a 3x margin
    s.substep = 1e-5;
    s.record_period = 0.001;
    // milder initial transient keeps the dense trapezoid cross-check of the
    // rate identities well inside tolerance
    s.init_state.q = solve_q_for_image(s.camera, s.arm, Vec2{70.0, 75.0}, s.init_state.q);
    return s;
}

std::vector<std::pair<std::string, Scenario>> shipped_scenarios() {
    std::vector<std::pair<std::string, Scenario>> out;
    out.emplace_back("benchmark_inverse", benchmark_scenario(control::Kind::inverse_jacobian));
    out.emplace_back("benchmark_transpose",
                     benchmark_scenario(control::Kind::transpose_jacobian));
    out.emplace_back("kinematic_ideal", kinematic_scenario(ServoMode::ideal));
    out.emplace_back("kinematic_first_order", kinematic_scenario(ServoMode::first_order));
    out.emplace_back("audit_inverse", audit_scenario(control::Kind::inverse_jacobian));
    out.emplace_back("audit_transpose", audit_scenario(control::Kind::transpose_jacobian));
    return out;
}

} // namespace vservo::sim
