#include "vservo/checks.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "vservo/numfmt.hpp"

namespace vservo::checks {

namespace {

constexpr double kRegressorTol = 1e-10;
constexpr double kJacobianTol = 1e-5; // stricter than the acceptance gate of 1e-4
constexpr double kEnergyTol = 1e-5;
constexpr double kMonotoneTol = 1e-8;
constexpr double kDetectionFloor = 1e-3;

// uniform double in [lo, hi) from the raw engine; distribution-free so results
// are identical across standard libraries
double urand(std::mt19937_64& rng, double lo, double hi) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

Vec3 rand_vec3(std::mt19937_64& rng, double lo, double hi) {
    return {urand(rng, lo, hi), urand(rng, lo, hi), urand(rng, lo, hi)};
}

Vec2 rand_vec2(std::mt19937_64& rng, double lo, double hi) {
    return {urand(rng, lo, hi), urand(rng, lo, hi)};
}

ArmModel random_arm(std::mt19937_64& rng, bool with_offset) {
    ArmModel a;
    a.l1 = urand(rng, 0.5, 3.0);
    a.l2 = urand(rng, 0.5, 3.0);
    a.l3 = urand(rng, 0.5, 3.0);
    a.m1 = urand(rng, 0.3, 3.0);
    a.m2 = urand(rng, 0.3, 3.0);
    a.m3 = urand(rng, 0.3, 3.0);
    a.b1 = urand(rng, 0.1, 2.0);
    a.b2 = urand(rng, 0.1, 2.0);
    a.b3 = urand(rng, 0.1, 2.0);
    a.gravity = urand(rng, 1.0, 15.0);
    if (with_offset) {
        a.c = rand_vec3(rng, -0.4, 0.4);
        if (a.c.isZero(0.0)) {
            a.c[0] = 0.1;
        }
    }
    return a;
}

// keeps the feature strictly in front of the camera for every q
CameraModel random_camera(std::mt19937_64& rng, const ArmModel& arm) {
    CameraModel c;
    c.f = urand(rng, 0.05, 0.3);
    c.beta = urand(rng, 500.0, 2000.0);
    c.d_C = arm.l2 + arm.l3 + std::abs(arm.c[0]) + urand(rng, 1.0, 5.0);
    return c;
}

template <typename A, typename B>
double rel_err(const A& lhs, const B& rhs) {
    return (lhs - rhs).cwiseAbs().maxCoeff() / (1.0 + rhs.cwiseAbs().maxCoeff());
}

Result make(std::string name, double measured, double threshold, std::string detail = {}) {
    Result r;
    r.name = std::move(name);
    r.measured = measured;
    r.threshold = threshold;
    r.pass = measured < threshold;
    r.detail = std::move(detail);
    return r;
}

} // namespace

std::vector<Result> regressor_suite(int trials, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Result> out;

    {
        double worst = 0.0;
        for (int i = 0; i < trials; ++i) {
            const ArmModel arm = random_arm(rng, false);
            const Vec3 q = rand_vec3(rng, -2.0, 2.0);
            const Vec3 qd = rand_vec3(rng, -2.0, 2.0);
            const Vec3 zeta = rand_vec3(rng, -2.0, 2.0);
            const Vec3 zeta_dot = rand_vec3(rng, -2.0, 2.0);
            const Vec3 lhs = dynamics_regressor(q, qd, zeta, zeta_dot) * arm.dynamic_params();
            const Vec3 rhs = inertia(arm, q) * zeta_dot + coriolis(arm, q, qd) * zeta +
                             gravity_torque(arm, q);
            worst = std::max(worst, rel_err(lhs, rhs));
        }
        out.push_back(make("regressors/dynamics", worst, kRegressorTol,
                           "Y_d a_d vs M zeta_dot + C zeta + g, randomized models"));
    }

    double worst_depth = 0.0, worst_dj = 0.0, worst_perp = 0.0, worst_task = 0.0;
    double mutation_seen = std::numeric_limits<double>::infinity();
    for (int i = 0; i < trials; ++i) {
        const ArmModel arm = random_arm(rng, i % 2 == 1); // both parameterization modes
        const CameraModel cam = random_camera(rng, arm);
        const KinParams truth = kinreg::true_params(cam, arm);
        const Vec3 q = rand_vec3(rng, -3.0, 3.0);
        const Vec3 v = rand_vec3(rng, -2.0, 2.0);
        const Vec2 phi = rand_vec2(rng, -5.0, 5.0);

        const Projection pr = project(cam, feature_position(arm, q));
        worst_depth = std::max(
            worst_depth, rel_err(MatX(kinreg::Yz(arm, q, phi) * truth.a_z), Vec2(pr.z * phi)));

        const double zdot_v = depth_jacobian(cam, arm, q).dot(v);
        worst_dj = std::max(worst_dj, rel_err(MatX(kinreg::Yz_bar(arm, q, v, phi) * truth.a_z),
                                              Vec2(zdot_v * phi)));

        const Mat2x3 jperp = depth_rate_independent_jacobian(cam, arm, q);
        worst_perp = std::max(
            worst_perp,
            rel_err(MatX(kinreg::Yz_perp(arm, q, v) * truth.a_z_perp), Vec2(jperp * v)));

        const Vec2 xpxd = rand_vec2(rng, -200.0, 200.0);
        const Vec2 xr_dot = rand_vec2(rng, -50.0, 50.0);
        worst_task = std::max(
            worst_task,
            rel_err(MatX(kinreg::Yz_star(arm, q, v, xpxd, xr_dot) * truth.a_z),
                    Vec2(pr.z * xr_dot + 0.5 * zdot_v * xpxd)));

        // deliberate fault: a 1% miscalibrated D̄ must be visible to this suite
        CameraModel bad = cam;
        bad.beta *= 1.01;
        mutation_seen = std::min(
            mutation_seen,
            rel_err(MatX(kinreg::Yz_perp(arm, q, v) * truth.a_z_perp),
                    Vec2(depth_rate_independent_jacobian(bad, arm, q) * v)));
    }
    out.push_back(make("regressors/depth", worst_depth, kRegressorTol,
                       "Y_z(q,phi) a_z vs z(q) phi"));
    out.push_back(make("regressors/depth_jacobian", worst_dj, kRegressorTol,
                       "Ybar_z(q,v,phi) a_z vs (J_z v) phi"));
    out.push_back(make("regressors/depth_rate_independent", worst_perp, kRegressorTol,
                       "Y_zperp(q,v) a_zperp vs J_zperp v"));
    out.push_back(make("regressors/task_composite", worst_task, kRegressorTol,
                       "Y_z*(q,v,x+x_d,xr_dot) a_z vs z xr_dot + (J_z v)(x+x_d)/2"));
    {
        Result r;
        r.name = "regressors/mutation_scaled_projection";
        r.measured = mutation_seen;
        r.threshold = kDetectionFloor;
        r.pass = mutation_seen > kDetectionFloor; // fault must be detected
        r.detail = "smallest residual against a 1% D-bar scaling fault (must exceed "
                   "threshold)";
        out.push_back(r);
    }
    return out;
}

namespace {

Result qddr_fd_check(control::Kind kind, const char* name) {
    sim::Scenario scn = sim::audit_scenario(kind);
    scn.duration = 0.002;
    scn.substep = 1e-5;
    scn.record_period = 1e-5;
    const sim::Trace tr = sim::run(scn);
    const double h = scn.substep;
    std::vector<Vec3> qdr(tr.rows.size()), qddr(tr.rows.size());
    for (size_t i = 0; i < tr.rows.size(); ++i) {
        const sim::Row& r = tr.rows[i];
        const control::Estimates est{r.a_d, r.a_z, r.a_z_perp};
        const control::Measurement m{r.q, r.qd, r.x, r.xdot};
        const control::Output o = control::step(
            kind, scn.arm, est, scn.gains, m, sim::desired_trajectory(scn.trajectory, r.t));
        qdr[i] = o.qd_r;
        qddr[i] = o.qdd_r;
    }
    double worst = 0.0;
    for (size_t i = 1; i + 1 < tr.rows.size(); ++i) {
        const Vec3 fd = (qdr[i + 1] - qdr[i - 1]) / (2.0 * h);
        worst = std::max(worst, (fd - qddr[i]).lpNorm<Eigen::Infinity>() /
                                    (1.0 + qddr[i].lpNorm<Eigen::Infinity>()));
    }
    return make(name, worst, 1e-4,
                "reference acceleration vs central difference of the reference velocity "
                "along a dense closed-loop run");
}

} // namespace

std::vector<Result> jacobian_suite(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Result> out;
    const ArmModel arm;     // default geometry, zero feature offset
    const CameraModel cam;
    const double h = 1e-6;

    double worst_j = 0.0, worst_jz = 0.0, worst_jp = 0.0;
    for (int i = 0; i < 50; ++i) {
        const Vec3 q = rand_vec3(rng, -3.0, 3.0);
        const Projection pr = project(cam, feature_position(arm, q));
        const Mat2x3 j = overall_jacobian(cam, arm, q, pr.x);
        const Mat1x3 jz = depth_jacobian(cam, arm, q);
        const Mat2x3 jp = depth_rate_independent_jacobian(cam, arm, q);

        Mat2x3 j_fd, jp_fd;
        Mat1x3 jz_fd;
        for (int k = 0; k < 3; ++k) {
            Vec3 qp = q, qm = q;
            qp[k] += h;
            qm[k] -= h;
            const Projection pp = project(cam, feature_position(arm, qp));
            const Projection pm = project(cam, feature_position(arm, qm));
            j_fd.col(k) = (pp.x - pm.x) / (2.0 * h);
            jz_fd(0, k) = (pp.z - pm.z) / (2.0 * h);
            jp_fd.col(k) = (cam.D_bar() * (feature_position(arm, qp) - feature_position(arm, qm))) / (2.0 * h);
        }
        worst_j = std::max(worst_j, rel_err(Mat2x3((1.0 / pr.z) * j), j_fd));
        worst_jz = std::max(worst_jz, rel_err(jz, jz_fd));
        worst_jp = std::max(worst_jp, rel_err(jp, jp_fd));
    }
    out.push_back(make("jacobians/overall_fd", worst_j, kJacobianTol,
                       "J(q,x)/z vs central difference of the projected feature"));
    out.push_back(make("jacobians/depth_fd", worst_jz, kJacobianTol,
                       "J_z vs central difference of the depth"));
    out.push_back(make("jacobians/depth_rate_independent_fd", worst_jp, kJacobianTol,
                       "J_zperp vs central difference of the scaled feature position"));
    out.push_back(qddr_fd_check(control::Kind::inverse_jacobian, "jacobians/qddr_fd_inverse"));
    out.push_back(
        qddr_fd_check(control::Kind::transpose_jacobian, "jacobians/qddr_fd_transpose"));
    return out;
}

std::vector<Result> passivity_suite() {
    std::vector<Result> out;
    for (const auto& [name, scn] : sim::shipped_scenarios()) {
        const sim::Trace tr = sim::run(scn);
        if (tr.aborted()) {
            Result r;
            r.name = name + "/run";
            r.pass = false;
            r.detail = "aborted: " + tr.abort_detail;
            out.push_back(r);
            continue;
        }
        const sim::PassivityReport rep = sim::passivity_audit(tr);
        out.push_back(make(name + "/prop1_quadrature", rep.prop1_quadrature, kEnergyTol,
                           "d/dt[(z/2) x'x] = x'u, integrator-carried integral; trapezoid "
                           "cross-check: " +
                               format_double(rep.prop1_trapezoid)));
        out.push_back(make(name + "/prop2_quadrature", rep.prop2_quadrature, kEnergyTol,
                           "error-system analogue; trapezoid cross-check: " +
                               format_double(rep.prop2_trapezoid)));
        // the trapezoid estimate is only a faithful integral on a smooth dense
        // grid; sampled runs step the command discontinuously, so it is gated
        // only on the continuous-mode audit scenarios
        if (name.rfind("audit_", 0) == 0) {
            out.push_back(make(name + "/prop1_trapezoid", rep.prop1_trapezoid, kEnergyTol,
                               "d/dt[(z/2) x'x] = x'u, trapezoid on the record grid"));
            out.push_back(make(name + "/prop2_trapezoid", rep.prop2_trapezoid, kEnergyTol,
                               "error-system analogue, trapezoid on the record grid"));
        }
        Result ineq;
        ineq.name = name + "/passivity_inequality";
        ineq.measured = rep.inequality_margin;
        ineq.threshold = 0.0;
        ineq.pass = rep.inequality_ok;
        ineq.detail = "min over t of the input energy plus the initial storage";
        out.push_back(ineq);
    }
    return out;
}

std::vector<Result> lyapunov_suite() {
    std::vector<Result> out;

    for (const control::Kind kind :
         {control::Kind::inverse_jacobian, control::Kind::transpose_jacobian}) {
        const bool inv = kind == control::Kind::inverse_jacobian;
        const std::string name = inv ? "audit_inverse" : "audit_transpose";
        const sim::Trace tr = sim::run(sim::audit_scenario(kind));
        if (tr.aborted()) {
            Result r;
            r.name = name + "/run";
            r.pass = false;
            r.detail = "aborted: " + tr.abort_detail;
            out.push_back(r);
            continue;
        }
        const sim::LyapunovReport rep = sim::lyapunov_audit(tr);
        out.push_back(make(name + "/v1_trapezoid", rep.v1_trapezoid, kEnergyTol,
                           "V1 rate equals the controller dissipation, trapezoid"));
        out.push_back(make(name + "/v1_quadrature", rep.v1_quadrature, kEnergyTol,
                           "V1 rate equals the controller dissipation, quadrature"));
        out.push_back(make(name + "/v1_monotone", rep.v1_max_increase, kMonotoneTol,
                           "largest normalized per-step increase of V1"));
        if (rep.v2_applicable) {
            out.push_back(make(name + "/v2_trapezoid", rep.v2_trapezoid, kEnergyTol,
                               "V2 rate identity, trapezoid"));
            out.push_back(make(name + "/v2_quadrature", rep.v2_quadrature, kEnergyTol,
                               "V2 rate identity, quadrature"));
        }
        Result young;
        young.name = name + "/v2_upper_bound";
        young.measured = rep.bound_worst;
        young.threshold = 1e-9;
        young.pass = rep.bound_violations == 0;
        young.detail = "Young-inequality bound on the cross term, worst normalized excess";
        out.push_back(young);
    }

    // deliberate fault: flipped depth-adaptation sign must be visible
    {
        sim::Scenario scn = sim::audit_scenario(control::Kind::inverse_jacobian);
        scn.duration = 2.0;
        scn.instrumentation.a_z_rate_sign = -1.0;
        const sim::Trace tr = sim::run(scn);
        Result r;
        r.name = "mutation_flipped_adaptation_sign";
        r.threshold = kDetectionFloor;
        if (tr.aborted()) {
            r.pass = true;
            r.measured = std::numeric_limits<double>::infinity();
            r.detail = "run aborted (" + std::string(sim::to_string(tr.abort)) +
                       "), fault detected";
        } else {
            const sim::LyapunovReport rep = sim::lyapunov_audit(tr);
            r.measured = rep.v2_quadrature;
            r.pass = rep.v2_quadrature > kDetectionFloor;
            r.detail = "V2 residual under a flipped adaptation sign (must exceed threshold)";
        }
        out.push_back(r);
    }
    return out;
}

std::vector<Result> run_suite(const std::string& name) {
    if (name == "regressors") {
        return regressor_suite();
    }
    if (name == "jacobians") {
        return jacobian_suite();
    }
    if (name == "passivity") {
        return passivity_suite();
    }
    if (name == "lyapunov") {
        return lyapunov_suite();
    }
    if (name == "all") {
        std::vector<Result> out = regressor_suite();
        for (const auto& suite : {jacobian_suite(), passivity_suite(), lyapunov_suite()}) {
            out.insert(out.end(), suite.begin(), suite.end());
        }
        return out;
    }
    throw ConfigError("unknown check suite '" + name +
                      "' (expected regressors, jacobians, passivity, lyapunov, or all)");
}

bool all_pass(const std::vector<Result>& results) {
    for (const Result& r : results) {
        if (!r.pass) {
            return false;
        }
    }
    return true;
}

} // namespace vservo::checks
