#pragma once

#include <stdexcept>
#include <string>

namespace vservo {

// Thrown when the 2x2 normal matrix of a wide Jacobian falls below the
// configured determinant floor. Carries the offending determinant.
class SingularJacobian : public std::runtime_error {
public:
    explicit SingularJacobian(double determinant)
        : std::runtime_error("singular Jacobian: det(J J^T) = " + std::to_string(determinant)),
          determinant_(determinant) {}

    double determinant() const noexcept { return determinant_; }

private:
    double determinant_;
};

// A NaN/Inf appeared in a state vector or an integrator stage.
class NonFiniteState : public std::runtime_error {
public:
    explicit NonFiniteState(const std::string& where)
        : std::runtime_error("non-finite state in " + where) {}
};

// The feature depth left the positive half-space the model assumes.
class NonPositiveDepth : public std::runtime_error {
public:
    explicit NonPositiveDepth(double z)
        : std::runtime_error("non-positive feature depth z = " + std::to_string(z)), z_(z) {}

    double depth() const noexcept { return z_; }

private:
    double z_;
};

// Cholesky failure on a matrix that must be symmetric positive definite.
class NonPositiveDefinite : public std::runtime_error {
public:
    explicit NonPositiveDefinite(const std::string& what_matrix)
        : std::runtime_error(what_matrix + " is not symmetric positive definite") {}
};

// Scenario/config validation failure.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace vservo
