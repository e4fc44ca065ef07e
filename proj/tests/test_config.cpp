#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "vservo/config.hpp"
#include "vservo/sim.hpp"

using namespace vservo;

TEST_CASE("empty config is the stock benchmark scenario") {
    const sim::Scenario parsed = config::parse("");
    const sim::Scenario stock = sim::benchmark_scenario(control::Kind::inverse_jacobian);
    CHECK(config::emit(parsed) == config::emit(stock));
}

TEST_CASE("emit/parse round trip is value-identical for every shipped scenario") {
    for (const auto& [name, scn] : sim::shipped_scenarios()) {
        CAPTURE(name);
        const std::string once = config::emit(scn);
        const sim::Scenario back = config::parse(once);
        CHECK(config::emit(back) == once);
    }
}

TEST_CASE("unknown and duplicate keys are rejected with diagnostics") {
    CHECK_THROWS_AS(config::parse("no.such.key = 1\n"), ConfigError);
    try {
        config::parse("duration = 1\nbogus = 2\n");
        FAIL("expected a parse error");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("bogus") != std::string::npos);
    }
    CHECK_THROWS_AS(config::parse("duration = 1\nduration = 2\n"), ConfigError);
}

TEST_CASE("malformed values are rejected") {
    CHECK_THROWS_AS(config::parse("duration = banana\n"), ConfigError);
    CHECK_THROWS_AS(config::parse("arm.l = (1.0, 2.0)\n"), ConfigError); // arity
    CHECK_THROWS_AS(config::parse("controller = sideways\n"), ConfigError);
    CHECK_THROWS_AS(config::parse("gains.K = diag(1, 2)\n"), ConfigError);
    CHECK_THROWS_AS(config::parse("duration = \n"), ConfigError);
}

TEST_CASE("comments, blank lines, and spacing are tolerated") {
    const std::string text =
        "# scenario tweaks\n"
        "\n"
        "  duration =  2.5   # and a trailing comment\n"
        "controller=transpose_jacobian\n";
    const sim::Scenario scn = config::parse(text);
    CHECK(scn.duration == 2.5);
    CHECK(scn.controller == control::Kind::transpose_jacobian);
}

TEST_CASE("scalar, diag, and mat gain spellings agree") {
    const sim::Scenario a = config::parse("gains.K = 40\n");
    const sim::Scenario b = config::parse("gains.K = diag(40, 40, 40)\n");
    const sim::Scenario c =
        config::parse("gains.K = mat((40, 0, 0), (0, 40, 0), (0, 0, 40))\n");
    CHECK(config::emit(a) == config::emit(b));
    CHECK(config::emit(b) == config::emit(c));
    CHECK((a.gains.K - 40.0 * Mat3::Identity()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("overrides apply after the file and the last one wins") {
    const sim::Scenario scn =
        config::parse("duration = 9\n", {"duration = 1.5", "gains.alpha=12", "gains.alpha=15"});
    CHECK(scn.duration == 1.5);
    CHECK(scn.gains.alpha == 15.0);
}

TEST_CASE("validation failures surface from parsing") {
    CHECK_THROWS_AS(config::parse("gains.K = -40\n"), NonPositiveDefinite);
    CHECK_THROWS_AS(config::parse("camera.principal_point = (1, 2)\n"), ConfigError);
    CHECK_THROWS_AS(config::parse("init.a_z_hat = (1, 2, 3, 4)\n"), ConfigError);
    CHECK_THROWS_AS(config::parse("substep = 0.003\n"), ConfigError); // control period misaligned
}

TEST_CASE("extended parameterization configures end to end") {
    const std::string text =
        "arm.c = (0.2, -0.1, 0.15)\n"
        "gains.Gamma_z = 0.008\n"
        "gains.Gamma_z_perp = 260\n"
        "init.a_z_hat = (3.2, 3.2, 3.2, 0, 0)\n"
        "init.a_z_perp_hat = (576, 576, 60, 0, 0)\n";
    const sim::Scenario scn = config::parse(text);
    CHECK(scn.arm.c[0] == 0.2);
    CHECK(scn.gains.Gamma_z.rows() == 5);
    CHECK(scn.gains.Gamma_z_perp.rows() == 5);
    CHECK(scn.init_estimates.a_z.size() == 5);
    const std::string emitted = config::emit(scn);
    CHECK(config::emit(config::parse(emitted)) == emitted);
}

TEST_CASE("word fields parse every spelling") {
    CHECK(config::parse("controller = inverse_jacobian\n").controller ==
          control::Kind::inverse_jacobian);
    CHECK(config::parse("controller = transpose_jacobian\n").controller ==
          control::Kind::transpose_jacobian);
    CHECK(config::parse("controller = kinematic\n").controller == control::Kind::kinematic);
    CHECK(config::parse("control_mode = continuous\n").control_mode ==
          sim::ControlMode::continuous);
    CHECK(config::parse("adaptation = continuous\n").adaptation ==
          sim::AdaptationMode::continuous);
    const sim::Scenario scn = config::parse("servo = first_order\nservo_time_constant = 0.02\n");
    CHECK(scn.servo == sim::ServoMode::first_order);
    CHECK(scn.servo_time_constant == 0.02);
}

TEST_CASE("shipped config files match their factory scenarios byte for byte") {
    const char* dir = std::getenv("VSERVO_CONFIG_DIR");
    REQUIRE_MESSAGE(dir != nullptr, "VSERVO_CONFIG_DIR must point at the configs directory");
    for (const auto& [name, scn] : sim::shipped_scenarios()) {
        CAPTURE(name);
        const std::string path = std::string(dir) + "/" + name + ".cfg";
        std::ifstream in(path, std::ios::binary);
        REQUIRE_MESSAGE(in.good(), path.c_str());
        std::ostringstream buf;
        buf << in.rdbuf();
        CHECK(buf.str() == config::emit(scn));
        const sim::Scenario loaded = config::load(path);
        CHECK(config::emit(loaded) == config::emit(scn));
    }
}
