#pragma once

#include "vservo/mathkit.hpp"

namespace vservo {

// Number of base dynamic parameters of the 3-DOF arm model (see docs/model.md).
inline constexpr int kNumDynParams = 8;

// Anthropomorphic 3-DOF arm: joint 1 revolute about the vertical base axis,
// joints 2 and 3 revolute about horizontal axes, links 2/3 of lengths l2, l3
// swinging in the rotating vertical plane, link 1 a vertical offset l1.
// Links are uniform thin rods; b1..b3 are armature (joint) inertias, which
// keep the inertia matrix uniformly positive definite in the stretched-up
// configuration where thin rods alone contribute nothing about the yaw axis.
struct ArmModel {
    double l1 = 2.1; // m
    double l2 = 2.1;
    double l3 = 1.9;
    double m1 = 1.5; // kg; link 1 never moves relative to the base, inert
    double m2 = 1.5;
    double m3 = 1.5;
    double b1 = 1.0; // kg m^2 armature inertias
    double b2 = 0.5;
    double b3 = 0.25;
    double gravity = 9.81;      // m/s^2, acting along -Z0
    Vec3 c = Vec3::Zero();      // feature offset from the reference point, base frame

    // Base dynamic parameter vector a_d (dimension kNumDynParams):
    //   (b1, m2 l2^2/3 + m3 l2^2, m3 l3^2/3, m3 l2 l3, b2, b3,
    //    (m2/2 + m3) l2 g, m3 l3 g / 2)
    VecX dynamic_params() const;

    void validate() const;
};

struct JointState {
    Vec3 q = Vec3::Zero();  // rad
    Vec3 qd = Vec3::Zero(); // rad/s
};

// Position of the end-effector reference point in the base frame.
Vec3 reference_position(const ArmModel& m, const Vec3& q);

// Feature point position r = r0 + c (c held constant in the base frame).
Vec3 feature_position(const ArmModel& m, const Vec3& q);

// 6x3 geometric Jacobian: (r0_dot; omega0) = J_r(q) qd.
Mat6x3 geometric_jacobian(const ArmModel& m, const Vec3& q);

// 3x3 feature-velocity map [I3, -S(c)] J_r(q).
Mat3 feature_velocity_jacobian(const ArmModel& m, const Vec3& q);

Mat3 inertia(const ArmModel& m, const Vec3& q);
Mat3 coriolis(const ArmModel& m, const Vec3& q, const Vec3& qd);
Vec3 gravity_torque(const ArmModel& m, const Vec3& q);
double potential_energy(const ArmModel& m, const Vec3& q);
double kinetic_energy(const ArmModel& m, const Vec3& q, const Vec3& qd);

// Y_d(q, qd, zeta, zeta_dot): 3 x kNumDynParams regressor with
//   Y_d a_d = M(q) zeta_dot + C(q, qd) zeta + g(q).
// Pure function of its arguments; never reads model parameters.
Eigen::Matrix<double, 3, kNumDynParams> dynamics_regressor(const Vec3& q, const Vec3& qd,
                                                           const Vec3& zeta,
                                                           const Vec3& zeta_dot);

// qdd = M(q)^-1 (tau - C qd - g).
Vec3 forward_dynamics(const ArmModel& m, const Vec3& q, const Vec3& qd, const Vec3& tau);

} // namespace vservo
