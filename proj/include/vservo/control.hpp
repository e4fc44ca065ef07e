#pragma once

#include "vservo/arm.hpp"
#include "vservo/kinreg.hpp"
#include "vservo/mathkit.hpp"

namespace vservo::control {

enum class Kind { inverse_jacobian, transpose_jacobian, kinematic };

const char* to_string(Kind k);

struct Estimates {
    VecX a_d;      // dynamic parameters (p entries)
    VecX a_z;      // depth parameters (m1 entries)
    VecX a_z_perp; // depth-rate-independent parameters (m2 entries)

    KinParams kin() const { return {a_z, a_z_perp}; }
};

struct EstimateRates {
    VecX a_d;
    VecX a_z;
    VecX a_z_perp;
};

struct Gains {
    Mat3 K = 40.0 * Mat3::Identity();       // sliding-vector feedback [inverse scheme]
    Mat2 K1 = 0.0015 * Mat2::Identity();    // image-space feedback [transpose scheme]
    double alpha = 10.0;                    // image error gain in ẋ_r
    MatX Gamma_d = 200.0 * MatX::Identity(kNumDynParams, kNumDynParams);
    MatX Gamma_z = 0.008 * MatX::Identity(3, 3);
    MatX Gamma_z_perp = 260.0 * MatX::Identity(2, 2);

    // SPD + dimension checks; dimensions depend on the arm's parameterization mode.
    void validate(const ArmModel& arm) const;
};

// Desired image trajectory sample: position, velocity, acceleration.
struct ImageTarget {
    Vec2 x;
    Vec2 xdot;
    Vec2 xddot;
};

// What a controller is allowed to see: joint state plus image measurements
// (the image feature velocity is treated as directly measurable).
struct Measurement {
    Vec3 q;
    Vec3 qd;
    Vec2 x;
    Vec2 xdot;
};

// Reference-velocity bundle: q̇_r = Ĵ*⁺ ẑ ẋ_r with ẋ_r = ẋ_d − αΔx.
struct Refs {
    Vec3 qd_r;
    Vec2 xr_dot;
    Mat2x3 J_hat;      // Ĵ*
    Mat3x2 J_hat_pinv; // Ĵ*⁺
    double z_hat;
};

Refs reference_velocity(const ArmModel& arm, const Estimates& est, const Gains& gains,
                        const Vec3& q, const Vec2& x, const ImageTarget& target);

// Kinematic adaptation laws (sign-critical):
//   dâ_z/dt     = −Γ_z    Y_z*ᵀ(q, v, x+x_d, ẋ_r) Δx
//   dâ_z^⊥/dt   = +Γ_z^⊥  Y_z^⊥ᵀ(q, v) Δx
// where v = q̇_r for the inverse-Jacobian and kinematic schemes and v = q̇ for
// the transpose scheme.  No projection, deadzone, or normalization.
struct KinAdaptation {
    VecX a_z_rate;
    VecX a_z_perp_rate;
};

KinAdaptation kinematic_adaptation(const ArmModel& arm, const Gains& gains, const Vec3& q,
                                   const Vec3& reg_velocity, const Vec2& x,
                                   const Vec2& x_d, const Vec2& xr_dot);

// q̈_r: exact total time derivative of q̇_r, with ẑ and Ĵ* differentiated as
// time-varying quantities (transport along the actual q̇ plus the adaptation
// rates of the estimates handed in through `kin`).
struct RefAccel {
    Vec3 qdd_r;
    Vec2 xr_ddot;
    double z_hat_dot;
    Mat2x3 J_hat_dot;
};

RefAccel reference_acceleration(const ArmModel& arm, const Estimates& est,
                                const KinAdaptation& kin, const Gains& gains,
                                const Measurement& m, const ImageTarget& target,
                                const Refs& refs);

// One controller evaluation: command plus diagnostics and adaptation rates.
struct Output {
    Vec3 command; // τ [N·m] for the torque schemes, q̇_cmd [rad/s] for the kinematic one
    Vec3 qd_r;
    Vec3 qdd_r;
    Vec3 s;
    Mat2x3 J_hat;
    double z_hat = 0.0;
    double z_hat_dot = 0.0;
    Vec2 xr_dot;
    EstimateRates rates;
};

// τ = −K s + Y_d(q, q̇, q̇_r, q̈_r) â_d,  s = q̇ − q̇_r.
Output inverse_jacobian_torque(const ArmModel& arm, const Estimates& est, const Gains& gains,
                               const Measurement& m, const ImageTarget& target);

// τ = −Ĵ*ᵀ K₁ Ĵ* s + Y_d â_d; kinematic regressors take q̇ instead of q̇_r.
Output transpose_jacobian_torque(const ArmModel& arm, const Estimates& est,
                                 const Gains& gains, const Measurement& m,
                                 const ImageTarget& target);

// Velocity-command scheme: q̇_cmd = q̇_r plus the two kinematic adaptation
// laws; no dynamic adaptation.  qd_measured only feeds the s diagnostic.
Output kinematic_command(const ArmModel& arm, const Estimates& est, const Gains& gains,
                         const Vec3& q, const Vec2& x, const ImageTarget& target,
                         const Vec3& qd_measured);

Output step(Kind kind, const ArmModel& arm, const Estimates& est, const Gains& gains,
            const Measurement& m, const ImageTarget& target);

// Standalone adaptation-law evaluation (same expressions the step functions
// apply internally): dâ_d/dt = −Γ_d Y_dᵀ s plus the kinematic laws above.
EstimateRates adapt(Kind kind, const ArmModel& arm, const Gains& gains, const Measurement& m,
                    const ImageTarget& target, const Refs& refs,
                    const Eigen::Matrix<double, 3, kNumDynParams>& Yd, const Vec3& s);

} // namespace vservo::control
