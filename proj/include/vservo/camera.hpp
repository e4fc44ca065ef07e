#pragma once

#include "vservo/arm.hpp"
#include "vservo/errors.hpp"
#include "vservo/mathkit.hpp"

namespace vservo {

// Fixed pinhole camera watching the workspace from distance d_C along the
// world X axis; image axes X_C, Y_C, Z_C are aligned with Y0, Z0, X0.  With
// zero principal point the projection matrix H = [D, b] has
//   D = ((u0, bf, 0), (v0, 0, bf), (1, 0, 0)),  b = (u0*d_C, v0*d_C, d_C),
// so the metric depth of a point r is z = r_x + d_C.
struct CameraModel {
    double f = 0.16;     // focal length [m]
    double beta = 1200.0; // pixel scaling [px/m]
    double d_C = 6.0;    // camera offset along the optical axis [m]
    double u0 = 0.0;     // principal point [px]
    double v0 = 0.0;

    double focal_scale() const { return beta * f; } // βf [px]

    Mat2x3 D_bar() const {
        Mat2x3 d;
        d << u0, focal_scale(), 0.0,
            v0, 0.0, focal_scale();
        return d;
    }
    Vec2 b_bar() const { return {u0 * d_C, v0 * d_C}; }
    Mat1x3 d3() const { return Mat1x3{1.0, 0.0, 0.0}; } // unit row: z is metric depth
    double b3() const { return d_C; }

    void validate() const {
        if (!(f > 0.0) || !(beta > 0.0)) {
            throw ConfigError("camera focal length and scaling must be positive");
        }
        if (!std::isfinite(d_C) || !std::isfinite(u0) || !std::isfinite(v0)) {
            throw ConfigError("camera parameters must be finite");
        }
    }
};

struct Projection {
    Vec2 x;   // image coordinates [px]
    double z; // depth [m]
};

// x = (D̄ r + b̄)/z with z = d₃ᵀ r + b₃; throws NonPositiveDepth when z <= 0.
Projection project(const CameraModel& cam, const Vec3& r);

// Depth-independent interaction matrix N(x) = D̄ − x d₃ᵀ.
Mat2x3 interaction(const CameraModel& cam, const Vec2& x);

// J(q,x) = N(x) J_f J_r, so that ẋ = (1/z) J(q,x) q̇.
Mat2x3 overall_jacobian(const CameraModel& cam, const ArmModel& arm, const Vec3& q,
                        const Vec2& x);

// J_z(q) = d₃ᵀ J_f J_r, so that ż = J_z(q) q̇.
Mat1x3 depth_jacobian(const CameraModel& cam, const ArmModel& arm, const Vec3& q);

// J_z^⊥(q) = D̄ J_f J_r; satisfies J(q,x) = J_z^⊥(q) − x J_z(q).
Mat2x3 depth_rate_independent_jacobian(const CameraModel& cam, const ArmModel& arm,
                                       const Vec3& q);

// Composite task Jacobian J* = J_z^⊥ − ((x+x_d)/2) J_z; the second overload is
// the same combination built from an arbitrary parameter vector pair, used
// with estimates in place of the true kinematic/camera parameters.
Mat2x3 task_jacobian(const CameraModel& cam, const ArmModel& arm, const Vec3& q,
                     const Vec2& x, const Vec2& x_d);

// Shared combiner both task_jacobian paths reduce to.
inline Mat2x3 task_jacobian_from(const Mat2x3& j_z_perp, const Mat1x3& j_z, const Vec2& x,
                                 const Vec2& x_d) {
    return j_z_perp - 0.5 * (x + x_d) * j_z;
}

} // namespace vservo
