#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace rbbr {

enum class ErrorKind {
  Domain,  // argument outside the operation's domain
  Shape,   // dimension mismatch
  Drift,   // integrator left the simplex beyond tolerance
  Config,  // invalid scenario / missing prerequisite
  Solver,  // root finder or fixed-point solver failure
  Step,    // finite-difference step leaves the simplex
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Raised by renormalize / RK4 when a state drifts off the simplex.
class DriftError : public Error {
 public:
  DriftError(const std::string& what, Eigen::VectorXd offending)
      : Error(ErrorKind::Drift, what), offending_(std::move(offending)) {}

  const Eigen::VectorXd& offending() const noexcept { return offending_; }

 private:
  Eigen::VectorXd offending_;
};

}  // namespace rbbr
