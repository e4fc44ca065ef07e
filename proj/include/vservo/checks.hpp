#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vservo/sim.hpp"

namespace vservo::checks {

struct Result {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double threshold = 0.0;
    std::string detail;
};

// Algebraic regressor factorizations on randomized models and inputs, both
// parameterization modes, plus a deliberate-fault detection probe.
std::vector<Result> regressor_suite(int trials = 1000, std::uint64_t seed = 12345);

// Central-difference oracles for the image Jacobians and the reference
// acceleration along a simulated run.
std::vector<Result> jacobian_suite(std::uint64_t seed = 777);

// Energy-balance identities of the storage functions on every shipped
// scenario (trapezoid cross-check and quadrature-carried integrals).
std::vector<Result> passivity_suite();

// Rate identities of the two composite storage functions on the dense audit
// scenarios, monotonicity scan, and an adaptation sign-flip detection probe.
std::vector<Result> lyapunov_suite();

// name: regressors | jacobians | passivity | lyapunov | all
std::vector<Result> run_suite(const std::string& name);

bool all_pass(const std::vector<Result>& results);

} // namespace vservo::checks
