#pragma once

#include <vector>

#include "vservo/arm.hpp"
#include "vservo/camera.hpp"
#include "vservo/mathkit.hpp"

namespace vservo {

// Kinematic/camera parameter vectors of the linear parameterizations
//   z(q) φ      = Y_z(q,φ) a_z
//   ż(q) φ      = Ȳ_z(q,q̇,φ) a_z
//   J_z^⊥(q) ξ  = Y_z^⊥(q,ξ) a_z^⊥
// Default mode (feature offset c = 0): a_z = (d_C, l2, l3), a_z^⊥ = βf·(l2, l3).
// Extended mode (c ≠ 0): a_z = (d_C + c_x, l2, l3, c_y, c_z),
// a_z^⊥ = βf·(l2, l3, c_x, c_y, c_z).
struct KinParams {
    VecX a_z;      // depth parameters [m]
    VecX a_z_perp; // depth-rate-independent parameters [px·m]
};

namespace kinreg {

bool extended(const ArmModel& arm);
int depth_param_count(const ArmModel& arm); // m1: 3 default, 5 extended
int perp_param_count(const ArmModel& arm);  // m2: 2 default, 5 extended

KinParams true_params(const CameraModel& cam, const ArmModel& arm);

// Depth basis h(q): z = h(q)ᵀ a_z.
VecX depth_basis(const ArmModel& arm, const Vec3& q);

// Row k of the returned m1×3 matrix is the J_z contribution of parameter k:
// J_z = a_zᵀ · depth_jacobian_basis.  The rate variant is its elementwise
// time derivative along q̇.
MatX depth_jacobian_basis(const ArmModel& arm, const Vec3& q);
MatX depth_jacobian_basis_rate(const ArmModel& arm, const Vec3& q, const Vec3& qd);

// Entry k is the J_z^⊥ contribution of parameter k: J_z^⊥ = Σ_k a_z^⊥[k]·basis[k].
std::vector<Mat2x3> perp_basis(const ArmModel& arm, const Vec3& q);
std::vector<Mat2x3> perp_basis_rate(const ArmModel& arm, const Vec3& q, const Vec3& qd);

// Regressors.  All are parameter-free: they never read a_z / a_z^⊥.
MatX Yz(const ArmModel& arm, const Vec3& q, const Vec2& phi);                      // 2×m1
MatX Yz_bar(const ArmModel& arm, const Vec3& q, const Vec3& qd, const Vec2& phi);  // 2×m1
MatX Yz_perp(const ArmModel& arm, const Vec3& q, const Vec3& xi);                  // 2×m2
// Y_z* = Y_z(q, ẋ_r) + ½ Ȳ_z(q, q̇_r, x + x_d)
MatX Yz_star(const ArmModel& arm, const Vec3& q, const Vec3& qd_r, const Vec2& x_plus_xd,
             const Vec2& xr_dot); // 2×m1

// ẑ = h(q)ᵀ â_z and its total time derivative: transport along q̇ plus the
// adaptation term h(q)ᵀ dâ_z/dt.  ẑ may cross zero; no clamping anywhere.
double estimated_depth(const ArmModel& arm, const Vec3& q, const VecX& a_z_hat);
double estimated_depth_rate(const ArmModel& arm, const Vec3& q, const Vec3& qd,
                            const VecX& a_z_hat, const VecX& a_z_hat_rate);

// Ĵ_z, Ĵ_z^⊥ and their total time derivatives (transport + adaptation terms).
Mat1x3 estimated_depth_jacobian(const ArmModel& arm, const Vec3& q, const VecX& a_z_hat);
Mat1x3 estimated_depth_jacobian_rate(const ArmModel& arm, const Vec3& q, const Vec3& qd,
                                     const VecX& a_z_hat, const VecX& a_z_hat_rate);
Mat2x3 estimated_perp_jacobian(const ArmModel& arm, const Vec3& q, const VecX& a_z_perp_hat);
Mat2x3 estimated_perp_jacobian_rate(const ArmModel& arm, const Vec3& q, const Vec3& qd,
                                    const VecX& a_z_perp_hat, const VecX& a_z_perp_hat_rate);

} // namespace kinreg

// Ĵ* built from parameter estimates; shares the combiner with the true-camera
// overload in camera.hpp.
Mat2x3 task_jacobian(const KinParams& params, const ArmModel& arm, const Vec3& q,
                     const Vec2& x, const Vec2& x_d);

} // namespace vservo
