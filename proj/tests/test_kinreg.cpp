#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "vservo/kinreg.hpp"
#include "vservo/sim.hpp"

using namespace vservo;

namespace {

double urand(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

Vec3 rand_vec3(std::mt19937_64& rng, double lo, double hi) {
    return {urand(rng, lo, hi), urand(rng, lo, hi), urand(rng, lo, hi)};
}

Vec2 rand_vec2(std::mt19937_64& rng, double lo, double hi) {
    return {urand(rng, lo, hi), urand(rng, lo, hi)};
}

template <typename A, typename B>
double rel_err(const A& lhs, const B& rhs) {
    return (lhs - rhs).cwiseAbs().maxCoeff() / (1.0 + rhs.cwiseAbs().maxCoeff());
}

ArmModel offset_arm() {
    ArmModel arm;
    arm.c = Vec3{0.25, -0.15, 0.2};
    return arm;
}

// smooth joint path and matching estimate drift for rate oracles
Vec3 q_path(double t) {
    return {0.5 * std::sin(t), 0.4 * std::cos(2.0 * t), -0.3 + 0.2 * std::sin(3.0 * t)};
}

Vec3 qd_path(double t) {
    return {0.5 * std::cos(t), -0.8 * std::sin(2.0 * t), 0.6 * std::cos(3.0 * t)};
}

} // namespace

TEST_CASE("parameter packing and counts") {
    const CameraModel cam;
    const ArmModel arm;
    CHECK_FALSE(kinreg::extended(arm));
    CHECK(kinreg::depth_param_count(arm) == 3);
    CHECK(kinreg::perp_param_count(arm) == 2);

    const KinParams p = kinreg::true_params(cam, arm);
    REQUIRE(p.a_z.size() == 3);
    REQUIRE(p.a_z_perp.size() == 2);
    CHECK(p.a_z[0] == doctest::Approx(6.0).epsilon(1e-15));
    CHECK(p.a_z[1] == doctest::Approx(2.1).epsilon(1e-15));
    CHECK(p.a_z[2] == doctest::Approx(1.9).epsilon(1e-15));
    CHECK(p.a_z_perp[0] == doctest::Approx(403.2).epsilon(1e-13));
    CHECK(p.a_z_perp[1] == doctest::Approx(364.8).epsilon(1e-13));

    const ArmModel ext = offset_arm();
    CHECK(kinreg::extended(ext));
    CHECK(kinreg::depth_param_count(ext) == 5);
    CHECK(kinreg::perp_param_count(ext) == 5);
    const KinParams pe = kinreg::true_params(cam, ext);
    CHECK(pe.a_z[0] == doctest::Approx(6.25).epsilon(1e-15)); // d_C + c_x
    CHECK(pe.a_z[3] == doctest::Approx(-0.15).epsilon(1e-15));
    CHECK(pe.a_z[4] == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(pe.a_z_perp[2] == doctest::Approx(192.0 * 0.25).epsilon(1e-13));
}

TEST_CASE("zero inputs give zero regressors") {
    const ArmModel arm;
    const Vec3 q{0.3, -0.5, 0.9};
    CHECK(kinreg::Yz(arm, q, Vec2::Zero()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(kinreg::Yz_bar(arm, q, Vec3::Zero(), Vec2{3.0, -2.0}).cwiseAbs().maxCoeff() == 0.0);
    CHECK(kinreg::Yz_perp(arm, q, Vec3::Zero()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(kinreg::Yz_star(arm, q, Vec3::Zero(), Vec2{50.0, 60.0}, Vec2::Zero())
              .cwiseAbs()
              .maxCoeff() == 0.0);
}

TEST_CASE("depth regressor identity on random inputs, both modes") {
    std::mt19937_64 rng(21);
    const CameraModel cam;
    for (int i = 0; i < 1000; ++i) {
        const ArmModel arm = (i % 2 == 0) ? ArmModel{} : offset_arm();
        const KinParams truth = kinreg::true_params(cam, arm);
        const Vec3 q = rand_vec3(rng, -3.0, 3.0);
        const Vec2 phi = rand_vec2(rng, -5.0, 5.0);
        const double z = project(cam, feature_position(arm, q)).z;
        CHECK(rel_err(MatX(kinreg::Yz(arm, q, phi) * truth.a_z), Vec2(z * phi)) < 1e-12);
    }
}

TEST_CASE("depth-rate regressor identity and its d_C column") {
    std::mt19937_64 rng(22);
    const CameraModel cam;
    for (int i = 0; i < 500; ++i) {
        const ArmModel arm = (i % 2 == 0) ? ArmModel{} : offset_arm();
        const KinParams truth = kinreg::true_params(cam, arm);
        const Vec3 q = rand_vec3(rng, -3.0, 3.0);
        const Vec3 qd = rand_vec3(rng, -2.0, 2.0);
        const Vec2 phi = rand_vec2(rng, -5.0, 5.0);
        const double zdot = depth_jacobian(cam, arm, q).dot(qd);
        const MatX y = kinreg::Yz_bar(arm, q, qd, phi);
        CHECK(rel_err(MatX(y * truth.a_z), Vec2(zdot * phi)) < 1e-10);
        CHECK(y.col(0).cwiseAbs().maxCoeff() == 0.0); // constant-offset parameter has no rate
    }
}

TEST_CASE("depth-rate regressor is the time derivative of the depth regressor") {
    const CameraModel cam;
    const ArmModel arm;
    const KinParams truth = kinreg::true_params(cam, arm);
    const Vec2 phi{2.0, -1.0};
    const double h = 1e-6;
    for (const double t : {0.0, 0.7, 1.9, 3.1}) {
        const Vec3 q = q_path(t);
        const Vec3 qd = qd_path(t);
        const Vec2 analytic = kinreg::Yz_bar(arm, q, qd, phi) * truth.a_z;
        const Vec2 fd = (kinreg::Yz(arm, q_path(t + h), phi) * truth.a_z -
                         kinreg::Yz(arm, q_path(t - h), phi) * truth.a_z) /
                        (2.0 * h);
        CHECK(rel_err(MatX(analytic), fd) < 1e-7);
    }
}

TEST_CASE("depth-rate-independent regressor identity, both modes") {
    std::mt19937_64 rng(23);
    const CameraModel cam;
    for (int i = 0; i < 500; ++i) {
        const ArmModel arm = (i % 2 == 0) ? ArmModel{} : offset_arm();
        const KinParams truth = kinreg::true_params(cam, arm);
        const Vec3 q = rand_vec3(rng, -3.0, 3.0);
        const Vec3 xi = rand_vec3(rng, -2.0, 2.0);
        const Vec2 direct = depth_rate_independent_jacobian(cam, arm, q) * xi;
        CHECK(rel_err(MatX(kinreg::Yz_perp(arm, q, xi) * truth.a_z_perp), direct) < 1e-10);
    }
}

TEST_CASE("composite task regressor identity and linearity") {
    std::mt19937_64 rng(24);
    const CameraModel cam;
    for (int i = 0; i < 500; ++i) {
        const ArmModel arm = (i % 2 == 0) ? ArmModel{} : offset_arm();
        const KinParams truth = kinreg::true_params(cam, arm);
        const Vec3 q = rand_vec3(rng, -3.0, 3.0);
        const Vec3 qd_r = rand_vec3(rng, -2.0, 2.0);
        const Vec2 xpxd = rand_vec2(rng, -200.0, 200.0);
        const Vec2 xr_dot = rand_vec2(rng, -50.0, 50.0);
        const double z = project(cam, feature_position(arm, q)).z;
        const double zdot_r = depth_jacobian(cam, arm, q).dot(qd_r);
        const Vec2 expect = z * xr_dot + 0.5 * zdot_r * xpxd;
        CHECK(rel_err(MatX(kinreg::Yz_star(arm, q, qd_r, xpxd, xr_dot) * truth.a_z), expect) <
              1e-10);
    }

    // superposition in (qd_r, xr_dot) jointly
    const ArmModel arm;
    const Vec3 q{0.4, -0.7, 1.1};
    const Vec2 xpxd{120.0, 90.0};
    const Vec3 v1{1.0, -0.5, 0.25}, v2{-0.75, 0.3, 1.5};
    const Vec2 w1{3.0, -2.0}, w2{1.5, 4.0};
    const MatX lhs = kinreg::Yz_star(arm, q, Vec3(2.0 * v1 - 3.0 * v2), xpxd,
                                     Vec2(2.0 * w1 - 3.0 * w2));
    const MatX rhs = 2.0 * kinreg::Yz_star(arm, q, v1, xpxd, w1) -
                     3.0 * kinreg::Yz_star(arm, q, v2, xpxd, w2);
    CHECK(rel_err(lhs, rhs) < 1e-13);
}

TEST_CASE("jacobian bases reassemble the camera-model jacobians") {
    std::mt19937_64 rng(25);
    const CameraModel cam;
    for (int i = 0; i < 200; ++i) {
        const ArmModel arm = (i % 2 == 0) ? ArmModel{} : offset_arm();
        const KinParams truth = kinreg::true_params(cam, arm);
        const Vec3 q = rand_vec3(rng, -3.0, 3.0);

        const Mat1x3 jz_est = kinreg::estimated_depth_jacobian(arm, q, truth.a_z);
        CHECK(rel_err(jz_est, depth_jacobian(cam, arm, q)) < 1e-12);

        const Mat2x3 jp_est = kinreg::estimated_perp_jacobian(arm, q, truth.a_z_perp);
        CHECK(rel_err(jp_est, depth_rate_independent_jacobian(cam, arm, q)) < 1e-12);

        CHECK(std::abs(kinreg::estimated_depth(arm, q, truth.a_z) -
                       project(cam, feature_position(arm, q)).z) < 1e-12);
    }
}

TEST_CASE("basis rates match finite differences along a smooth path") {
    const double h = 1e-6;
    for (const bool ext : {false, true}) {
        const ArmModel arm = ext ? offset_arm() : ArmModel{};
        for (const double t : {0.2, 1.3, 2.9}) {
            const Vec3 q = q_path(t);
            const Vec3 qd = qd_path(t);

            const MatX rate = kinreg::depth_jacobian_basis_rate(arm, q, qd);
            const MatX fd = (kinreg::depth_jacobian_basis(arm, q_path(t + h)) -
                             kinreg::depth_jacobian_basis(arm, q_path(t - h))) /
                            (2.0 * h);
            CHECK(rel_err(rate, fd) < 1e-7);

            const auto prate = kinreg::perp_basis_rate(arm, q, qd);
            const auto pp = kinreg::perp_basis(arm, q_path(t + h));
            const auto pm = kinreg::perp_basis(arm, q_path(t - h));
            REQUIRE(prate.size() == pp.size());
            for (size_t k = 0; k < prate.size(); ++k) {
                CHECK(rel_err(prate[k], Mat2x3((pp[k] - pm[k]) / (2.0 * h))) < 1e-7);
            }
        }
    }
}

TEST_CASE("estimated depth rate is the total derivative (transport + adaptation)") {
    const ArmModel arm;
    const VecX a0 = (VecX(3) << 3.2, 3.2, 3.2).finished();
    auto a_hat = [&](double t) { return VecX(a0 + 0.1 * std::sin(t) * VecX::Ones(3)); };
    auto a_hat_rate = [&](double t) { return VecX(0.1 * std::cos(t) * VecX::Ones(3)); };
    const double h = 1e-6;
    for (const double t : {0.3, 1.1, 2.6}) {
        const double analytic =
            kinreg::estimated_depth_rate(arm, q_path(t), qd_path(t), a_hat(t), a_hat_rate(t));
        const double fd = (kinreg::estimated_depth(arm, q_path(t + h), a_hat(t + h)) -
                           kinreg::estimated_depth(arm, q_path(t - h), a_hat(t - h))) /
                          (2.0 * h);
        CHECK(std::abs(analytic - fd) < 1e-7 * (1.0 + std::abs(fd)));

        // zero adaptation rate leaves pure transport
        const double transport =
            kinreg::estimated_depth_rate(arm, q_path(t), qd_path(t), a_hat(t), VecX::Zero(3));
        const double expect =
            (a_hat(t).transpose() * kinreg::depth_jacobian_basis(arm, q_path(t)) * qd_path(t))(0);
        CHECK(std::abs(transport - expect) < 1e-13 * (1.0 + std::abs(expect)));
    }
}

TEST_CASE("estimated jacobian rates match finite differences with drifting estimates") {
    const ArmModel arm;
    const VecX z0 = (VecX(3) << 3.2, 3.2, 3.2).finished();
    const VecX p0 = (VecX(2) << 576.0, 576.0).finished();
    auto az = [&](double t) { return VecX(z0 + 0.2 * std::sin(2.0 * t) * VecX::Ones(3)); };
    auto az_rate = [&](double t) { return VecX(0.4 * std::cos(2.0 * t) * VecX::Ones(3)); };
    auto ap = [&](double t) { return VecX(p0 + 5.0 * std::cos(t) * VecX::Ones(2)); };
    auto ap_rate = [&](double t) { return VecX(-5.0 * std::sin(t) * VecX::Ones(2)); };
    const double h = 1e-6;
    for (const double t : {0.5, 1.7}) {
        const Mat1x3 jz_rate =
            kinreg::estimated_depth_jacobian_rate(arm, q_path(t), qd_path(t), az(t), az_rate(t));
        const Mat1x3 jz_fd = (kinreg::estimated_depth_jacobian(arm, q_path(t + h), az(t + h)) -
                              kinreg::estimated_depth_jacobian(arm, q_path(t - h), az(t - h))) /
                             (2.0 * h);
        CHECK(rel_err(jz_rate, jz_fd) < 1e-7);

        const Mat2x3 jp_rate =
            kinreg::estimated_perp_jacobian_rate(arm, q_path(t), qd_path(t), ap(t), ap_rate(t));
        const Mat2x3 jp_fd = (kinreg::estimated_perp_jacobian(arm, q_path(t + h), ap(t + h)) -
                              kinreg::estimated_perp_jacobian(arm, q_path(t - h), ap(t - h))) /
                             (2.0 * h);
        CHECK(rel_err(jp_rate, jp_fd) < 1e-7);
    }
}

TEST_CASE("recorded estimated-depth rate differentiates the recorded estimate") {
    sim::Scenario scn = sim::audit_scenario(control::Kind::inverse_jacobian);
    scn.duration = 0.02;
    scn.substep = 1e-5;
    scn.record_period = 1e-5;
    const sim::Trace tr = sim::run(scn);
    REQUIRE_FALSE(tr.aborted());
    REQUIRE(tr.rows.size() > 100);
    double worst = 0.0;
    for (size_t i = 1; i + 1 < tr.rows.size(); ++i) {
        const double fd =
            (tr.rows[i + 1].z_hat - tr.rows[i - 1].z_hat) / (tr.rows[i + 1].t - tr.rows[i - 1].t);
        worst = std::max(worst,
                         std::abs(fd - tr.rows[i].z_hat_dot) / (1.0 + std::abs(tr.rows[i].z_hat_dot)));
    }
    CHECK(worst < 1e-4);
}
