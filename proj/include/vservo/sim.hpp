#pragma once

#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "vservo/control.hpp"

namespace vservo::sim {

// Circular desired trajectory on the image plane.
struct Trajectory {
    Vec2 center{53.0, 79.0};
    double radius = 21.0;
    double omega = std::numbers::pi / 3.0; // rad/s
    double phase = 0.0;
};

control::ImageTarget desired_trajectory(const Trajectory& traj, double t);

enum class ControlMode { sampled, continuous };
enum class AdaptationMode { held, continuous };
enum class ServoMode { ideal, first_order };
enum class AbortReason { none, singular_jacobian, nonpositive_depth, nonfinite_state };

const char* to_string(ControlMode m);
const char* to_string(AdaptationMode m);
const char* to_string(ServoMode m);
const char* to_string(AbortReason r);

// Test instrumentation, reachable only from code (the config loader never
// touches it): flips the sign of an integrated adaptation law so the audit
// suites can demonstrate they detect a wrong-signed implementation.
struct Instrumentation {
    double a_z_rate_sign = 1.0;
    double a_z_perp_rate_sign = 1.0;
};

struct Scenario {
    ArmModel arm;
    CameraModel camera;
    control::Gains gains;
    JointState init_state;
    control::Estimates init_estimates;
    control::Kind controller = control::Kind::inverse_jacobian;
    double duration = 30.0;
    double control_period = 0.005;
    double substep = 0.001;
    double record_period = 0.0; // 0 → control_period
    ControlMode control_mode = ControlMode::sampled;
    AdaptationMode adaptation = AdaptationMode::held;
    ServoMode servo = ServoMode::ideal; // kinematic controller only
    double servo_time_constant = 0.02;
    Trajectory trajectory;
    VecX reference_a_d; // published reference vector, carried for documentation only
    Instrumentation instrumentation;

    double effective_record_period() const {
        return record_period > 0.0 ? record_period : control_period;
    }
    void validate() const; // throws ConfigError
};

// One recorded control tick.
struct Row {
    double t = 0.0;
    Vec3 q, qd, command, s;
    Vec2 x, xdot, x_d, dx;
    double z = 0.0, z_hat = 0.0, z_hat_dot = 0.0;
    VecX a_d, a_z, a_z_perp;
    double Vs = 0.0, Vs_err = 0.0, V1 = 0.0, V2 = 0.0;
    double xu = 0.0, dxu = 0.0, diss = 0.0, v2rhs = 0.0;     // instantaneous integrands
    double I_xu = 0.0, I_dxu = 0.0, I_diss = 0.0, I_v2 = 0.0; // integrals carried by the integrator
};

// Dense per-substep audit channel (storage functions, integrands, integrals).
struct AuditSample {
    double t = 0.0;
    double Vs = 0.0, Vs_err = 0.0, V1 = 0.0, V2 = 0.0;
    double xu = 0.0, dxu = 0.0, diss = 0.0, v2rhs = 0.0;
    double I_xu = 0.0, I_dxu = 0.0, I_diss = 0.0, I_v2 = 0.0;
    double young_lhs = 0.0, young_rhs = 0.0; // ΔxᵀJ*s vs (αz/2)|Δx|² + |J*s|²/(2αz)
};

struct Trace {
    Scenario scenario;
    std::vector<Row> rows;
    std::vector<AuditSample> audit;
    AbortReason abort = AbortReason::none;
    std::string abort_detail;
    double abort_time = 0.0;
    double wall_clock_s = 0.0;

    bool aborted() const { return abort != AbortReason::none; }
};

// Deterministic fixed-step closed-loop run; identical scenarios yield
// identical traces.  Aborts early (with reason recorded) on SingularJacobian,
// NonPositiveDepth, or NonFiniteState.
Trace run(const Scenario& scn);

// Inner joint-velocity servo: ideal returns q̇ (≡ cmd), first_order returns
// q̈ = (cmd − q̇)/T.
Vec3 velocity_servo_plant(const Vec3& cmd, const JointState& state, ServoMode mode,
                          double time_constant);

// Passivity audit (storage (z/2)xᵀx with input u, and the error-system
// analogue).  Residuals are max over samples of
// |∫integrand − (V(t) − V(0))| / (1 + |V(t)|), computed two ways: trapezoid
// on the dense sample grid and from the integrator-carried integrals.
struct PassivityReport {
    double prop1_trapezoid = 0.0, prop1_quadrature = 0.0;
    double prop2_trapezoid = 0.0, prop2_quadrature = 0.0;
    double inequality_margin = 0.0; // min over t of ∫xᵀu + Vs(0)
    bool inequality_ok = true;
};
PassivityReport passivity_audit(const Trace& tr);

// Lyapunov-rate audit.  V1 = ½sᵀMs + ½Δa_dᵀΓ_d⁻¹Δa_d with V̇1 equal to the
// controller's dissipation (−sᵀKs, resp. −(Ĵ*s)ᵀK₁(Ĵ*s)); V2 adds the
// kinematic-parameter errors to the image-error storage and satisfies
// V̇2 = −αzΔxᵀΔx + ΔxᵀJ*s for the q̇_r-driven adaptation laws (inverse and
// kinematic schemes; not applicable to the transpose scheme's q̇-driven laws).
// Meaningful on control_mode = continuous runs, where the identities hold to
// integrator precision.
struct LyapunovReport {
    bool v2_applicable = true;
    double v1_trapezoid = 0.0, v1_quadrature = 0.0;
    double v2_trapezoid = 0.0, v2_quadrature = 0.0;
    double v1_max_increase = 0.0; // max normalized step increase of V1
    int bound_violations = 0;     // samples violating the V̇2 upper bound
    double bound_worst = 0.0;
};
LyapunovReport lyapunov_audit(const Trace& tr);

struct Metrics {
    double duration = 0.0;
    double final_error_inf = 0.0;
    double max_error_inf = 0.0;
    double max_error_after_20s = 0.0;
    double convergence_time_05px = -1.0; // first t with ‖Δx‖∞ < 0.5 px ever after; −1 if never
    std::vector<double> window_peaks;    // per-trajectory-period peaks of ‖Δx‖∞ after the transient cut
    double window_start = 5.0;
    double peak_abs_command = 0.0;
    double z_gap_final = 0.0;
    double z_min = 0.0;
    double z_hat_min = 0.0;               // signed minimum of ẑ over the run
    double z_hat_absmin_after_20s = 0.0;  // min |ẑ| for t > 20 s
    bool z_hat_nonpositive_seen = false;
    double wall_clock_s = 0.0;
};
Metrics metrics(const Trace& tr);

// Newton solve for a joint configuration imaging to x_target (used to place
// initial states and for certainty-equivalence tests).
Vec3 solve_q_for_image(const CameraModel& cam, const ArmModel& arm, const Vec2& x_target,
                       const Vec3& q_guess);

// Canonical scenario set (the shipped config files mirror these exactly).
Scenario benchmark_scenario(control::Kind kind);
Scenario kinematic_scenario(ServoMode mode);
Scenario audit_scenario(control::Kind kind);
std::vector<std::pair<std::string, Scenario>> shipped_scenarios();

} // namespace vservo::sim
