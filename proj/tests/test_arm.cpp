#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>

#include "vservo/arm.hpp"

using namespace vservo;

namespace {

double urand(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

Vec3 rand_vec3(std::mt19937_64& rng, double lo, double hi) {
    return {urand(rng, lo, hi), urand(rng, lo, hi), urand(rng, lo, hi)};
}

ArmModel random_arm(std::mt19937_64& rng, bool with_offset = false) {
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
        a.c = rand_vec3(rng, -0.5, 0.5);
    }
    return a;
}

} // namespace

TEST_CASE("dynamic parameter packing matches its closed form") {
    ArmModel a;
    a.l1 = 0.4;
    a.l2 = 1.0;
    a.l3 = 2.0;
    a.m1 = 0.7;
    a.m2 = 3.0;
    a.m3 = 0.5;
    a.b1 = 1.25;
    a.b2 = 0.5;
    a.b3 = 0.125;
    a.gravity = 10.0;
    const VecX p = a.dynamic_params();
    REQUIRE(p.size() == kNumDynParams);
    CHECK(p[0] == 1.25);                       // b1
    CHECK(p[1] == doctest::Approx(3.0 / 3.0 + 0.5).epsilon(1e-15));   // m2 l2^2/3 + m3 l2^2
    CHECK(p[2] == doctest::Approx(0.5 * 4.0 / 3.0).epsilon(1e-15));   // m3 l3^2/3
    CHECK(p[3] == doctest::Approx(0.5 * 1.0 * 2.0).epsilon(1e-15));   // m3 l2 l3
    CHECK(p[4] == 0.5);                        // b2
    CHECK(p[5] == 0.125);                      // b3
    CHECK(p[6] == doctest::Approx((1.5 + 0.5) * 1.0 * 10.0).epsilon(1e-15)); // (m2/2+m3) l2 g
    CHECK(p[7] == doctest::Approx(0.5 * 2.0 * 10.0 / 2.0).epsilon(1e-15));   // m3 l3 g/2
}

TEST_CASE("model validation rejects non-physical parameters") {
    ArmModel a;
    CHECK_NOTHROW(a.validate());
    ArmModel bad = a;
    bad.l2 = 0.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = a;
    bad.m3 = -1.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = a;
    bad.b1 = 0.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = a;
    bad.c[1] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("translational Jacobian matches central differences of the positions") {
    std::mt19937_64 rng(42);
    const double h = 1e-6;
    for (int i = 0; i < 30; ++i) {
        const ArmModel arm = random_arm(rng, i % 2 == 1);
        const Vec3 q = rand_vec3(rng, -3.0, 3.0);
        const Mat6x3 jr = geometric_jacobian(arm, q);
        const Mat3 jf = feature_velocity_jacobian(arm, q);
        for (int k = 0; k < 3; ++k) {
            Vec3 qp = q, qm = q;
            qp[k] += h;
            qm[k] -= h;
            const Vec3 d0 = (reference_position(arm, qp) - reference_position(arm, qm)) / (2.0 * h);
            CHECK((jr.block<3, 1>(0, k) - d0).cwiseAbs().maxCoeff() < 1e-7);
            // the offset is held constant in the base frame, so the position
            // derivative equals the reference-point derivative for any c ...
            const Vec3 df = (feature_position(arm, qp) - feature_position(arm, qm)) / (2.0 * h);
            CHECK((jr.block<3, 1>(0, k) - df).cwiseAbs().maxCoeff() < 1e-7);
            // ... while the velocity map carries the -S(c)omega term and
            // coincides with the position derivative only for c = 0.
            if (arm.c.isZero()) {
                CHECK((jf.col(k) - df).cwiseAbs().maxCoeff() < 1e-7);
            }
        }
    }
}

TEST_CASE("feature-velocity map is the offset-corrected geometric Jacobian") {
    std::mt19937_64 rng(43);
    for (int i = 0; i < 30; ++i) {
        const ArmModel arm = random_arm(rng, true);
        const Vec3 q = rand_vec3(rng, -3.0, 3.0);
        const Mat6x3 jr = geometric_jacobian(arm, q);
        const Mat3 expect = jr.topRows<3>() - skew(arm.c) * jr.bottomRows<3>();
        CHECK((feature_velocity_jacobian(arm, q) - expect).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("inertia matrix is symmetric positive definite") {
    std::mt19937_64 rng(44);
    for (int i = 0; i < 100; ++i) {
        const ArmModel arm = random_arm(rng);
        const Vec3 q = rand_vec3(rng, -3.2, 3.2);
        const Mat3 M = inertia(arm, q);
        CHECK((M - M.transpose()).cwiseAbs().maxCoeff() == 0.0);
        CHECK_NOTHROW(require_spd(M, "inertia"));
    }
}

TEST_CASE("inertia rate equals C + C^T (skew-symmetry of Mdot - 2C)") {
    std::mt19937_64 rng(45);
    const double h = 1e-6;
    for (int i = 0; i < 50; ++i) {
        const ArmModel arm = random_arm(rng);
        const Vec3 q = rand_vec3(rng, -3.0, 3.0);
        const Vec3 qd = rand_vec3(rng, -2.0, 2.0);
        const Mat3 mdot_fd =
            (inertia(arm, Vec3(q + h * qd)) - inertia(arm, Vec3(q - h * qd))) / (2.0 * h);
        const Mat3 c = coriolis(arm, q, qd);
        CHECK((mdot_fd - c - c.transpose()).cwiseAbs().maxCoeff() < 1e-6);
    }
}

TEST_CASE("gravity torque is the potential-energy gradient") {
    std::mt19937_64 rng(46);
    const double h = 1e-6;
    for (int i = 0; i < 50; ++i) {
        const ArmModel arm = random_arm(rng);
        const Vec3 q = rand_vec3(rng, -3.0, 3.0);
        const Vec3 g = gravity_torque(arm, q);
        for (int k = 0; k < 3; ++k) {
            Vec3 qp = q, qm = q;
            qp[k] += h;
            qm[k] -= h;
            const double fd = (potential_energy(arm, qp) - potential_energy(arm, qm)) / (2.0 * h);
            CHECK(std::abs(g[k] - fd) < 1e-6 * (1.0 + std::abs(fd)));
        }
    }
}

TEST_CASE("kinetic energy agrees with the inertia quadratic form") {
    std::mt19937_64 rng(47);
    for (int i = 0; i < 50; ++i) {
        const ArmModel arm = random_arm(rng);
        const Vec3 q = rand_vec3(rng, -3.0, 3.0);
        const Vec3 qd = rand_vec3(rng, -2.0, 2.0);
        const double lhs = kinetic_energy(arm, q, qd);
        const double rhs = 0.5 * qd.dot(inertia(arm, q) * qd);
        CHECK(std::abs(lhs - rhs) < 1e-12 * (1.0 + std::abs(rhs)));
    }
}

TEST_CASE("dynamics regressor factors the equations of motion") {
    std::mt19937_64 rng(48);
    for (int i = 0; i < 200; ++i) {
        const ArmModel arm = random_arm(rng);
        const Vec3 q = rand_vec3(rng, -3.0, 3.0);
        const Vec3 qd = rand_vec3(rng, -2.0, 2.0);
        const Vec3 zeta = rand_vec3(rng, -2.0, 2.0);
        const Vec3 zeta_dot = rand_vec3(rng, -2.0, 2.0);
        const Vec3 lhs = dynamics_regressor(q, qd, zeta, zeta_dot) * arm.dynamic_params();
        const Vec3 rhs =
            inertia(arm, q) * zeta_dot + coriolis(arm, q, qd) * zeta + gravity_torque(arm, q);
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10 * (1.0 + rhs.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("forward dynamics inverts the equations of motion") {
    std::mt19937_64 rng(49);
    for (int i = 0; i < 50; ++i) {
        const ArmModel arm = random_arm(rng);
        const Vec3 q = rand_vec3(rng, -3.0, 3.0);
        const Vec3 qd = rand_vec3(rng, -2.0, 2.0);
        const Vec3 tau = rand_vec3(rng, -20.0, 20.0);
        const Vec3 qdd = forward_dynamics(arm, q, qd, tau);
        const Vec3 back = inertia(arm, q) * qdd + coriolis(arm, q, qd) * qd + gravity_torque(arm, q);
        CHECK((back - tau).cwiseAbs().maxCoeff() < 1e-9 * (1.0 + tau.cwiseAbs().maxCoeff()));
    }
}

// Work-energy audit: d/dt(T + U) = qd' tau along a driven swing, integrated
// with the same RK4 scheme as the simulator; the work integral is carried as
// an extra state so both sides see identical quadrature.
TEST_CASE("energy balance along a driven trajectory") {
    const ArmModel arm; // defaults
    auto torque = [](double t) {
        return Vec3{2.0 * std::sin(t), 6.0 * std::cos(2.0 * t), 1.5 * std::sin(3.0 * t)};
    };
    // state: (t, q, qd, W)
    auto f = [&](const VecX& s) {
        const double t = s[0];
        const Vec3 q = s.segment<3>(1);
        const Vec3 qd = s.segment<3>(4);
        const Vec3 tau = torque(t);
        VecX d(8);
        d[0] = 1.0;
        d.segment<3>(1) = qd;
        d.segment<3>(4) = forward_dynamics(arm, q, qd, tau);
        d[7] = qd.dot(tau);
        return d;
    };
    VecX s = VecX::Zero(8);
    s.segment<3>(1) = Vec3{0.3, 0.4, -0.2};
    const double e0 = kinetic_energy(arm, s.segment<3>(1), s.segment<3>(4)) +
                      potential_energy(arm, s.segment<3>(1));
    const double h = 1e-4;
    double worst = 0.0;
    for (int i = 0; i < 20000; ++i) {
        s = rk4_step(f, s, h);
        const double e = kinetic_energy(arm, s.segment<3>(1), s.segment<3>(4)) +
                         potential_energy(arm, s.segment<3>(1));
        worst = std::max(worst, std::abs(s[7] - (e - e0)) / (1.0 + std::abs(e)));
    }
    CHECK(worst < 1e-6);
}
