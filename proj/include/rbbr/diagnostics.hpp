#pragma once

#include <string>
#include <vector>

#include "rbbr/dynamics.hpp"

namespace rbbr {

/// eps * sum_k w_k v(sigma_k). Infinite when a Burg row touches the boundary.
double aggregate_entropy(const Regularizer& v, NoiseLevel eps, const BayesianStrategy& sigma, const TypeSpace& types);

/// sum_k w_k <G(sigma, theta_k), rho_k> - aggregate_entropy(rho).
double perturbed_payoff(const Game& game, const Regularizer& v, NoiseLevel eps, const BayesianStrategy& sigma,
                        const BayesianStrategy& rho, const TypeSpace& types);

/// phi(sigma) - aggregate_entropy(sigma); nondecreasing along the dynamic in potential games.
double entropy_adjusted_potential(const Game& game, const Regularizer& v, NoiseLevel eps,
                                  const BayesianStrategy& sigma, const TypeSpace& types);

/// Perturbed-payoff gap between the best response and sigma itself. Nonnegative,
/// zero exactly at regularized equilibria, nonincreasing in NSD games.
double lyapunov_psi(const Game& game, const Regularizer& v, NoiseLevel eps, const BayesianStrategy& sigma,
                    const TypeSpace& types);

enum class Direction { Nondecreasing, Nonincreasing };

struct Violation {
  double time;
  double value;
  double delta;  // signed change from the previous sample
};

struct MonotonicityReport {
  Direction direction = Direction::Nondecreasing;
  std::vector<Violation> violations;
  double max_violation = 0.0;  // largest move against `direction`, 0 when none
  double tolerance = 0.0;

  bool passed() const { return max_violation <= tolerance; }
};

/// Scans consecutive samples of the named diagnostic.
MonotonicityReport audit_monotone(const Trajectory& traj, const std::string& scalar, Direction direction,
                                  double per_step_tol);

/// Probes "phi_tilde" (when the game declares a potential) and "psi".
std::vector<Probe> standard_probes(const Game& game, const Regularizer& v, NoiseLevel eps, const TypeSpace& types);

}  // namespace rbbr
