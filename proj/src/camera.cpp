#include "vservo/camera.hpp"

namespace vservo {

Projection project(const CameraModel& cam, const Vec3& r) {
    const double z = cam.d3().dot(r) + cam.b3();
    if (!(z > 0.0)) {
        throw NonPositiveDepth(z);
    }
    const Vec2 x = (cam.D_bar() * r + cam.b_bar()) / z;
    return {x, z};
}

Mat2x3 interaction(const CameraModel& cam, const Vec2& x) {
    return cam.D_bar() - x * cam.d3();
}

Mat2x3 overall_jacobian(const CameraModel& cam, const ArmModel& arm, const Vec3& q,
                        const Vec2& x) {
    return interaction(cam, x) * feature_velocity_jacobian(arm, q);
}

Mat1x3 depth_jacobian(const CameraModel& cam, const ArmModel& arm, const Vec3& q) {
    return cam.d3() * feature_velocity_jacobian(arm, q);
}

Mat2x3 depth_rate_independent_jacobian(const CameraModel& cam, const ArmModel& arm,
                                       const Vec3& q) {
    return cam.D_bar() * feature_velocity_jacobian(arm, q);
}

Mat2x3 task_jacobian(const CameraModel& cam, const ArmModel& arm, const Vec3& q,
                     const Vec2& x, const Vec2& x_d) {
    return task_jacobian_from(depth_rate_independent_jacobian(cam, arm, q),
                              depth_jacobian(cam, arm, q), x, x_d);
}

} // namespace vservo
