#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "rbbr/dynamics.hpp"

namespace rbbr {

struct SolverConfig {
  double damping = 0.5;
  double tol = 1e-8;
  std::size_t max_iter = 100000;
  // Halve the damping and restart from the best iterate when the residual
  // has not improved for `patience` iterations. Off, the iterates are
  // exactly Euler steps with dt = damping.
  bool adaptive = true;
  std::size_t patience = 50;
  double min_damping = 1e-4;
  // After `newton_after` Picard iterations without convergence, try Newton's
  // method on the aggregate equation E = sum_k w_k beta_k(E) from the best
  // iterate. Picard resumes if Newton fails.
  bool newton_fallback = true;
  std::size_t newton_after = 1000;

  void validate() const;
};

struct EquilibriumResult {
  BayesianStrategy strategy;
  double residual = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  double final_damping = 0.0;
  bool newton = false;  // finished by the Newton fallback
};

/// |||beta(sigma) - sigma|||.
double residual(const Game& game, const Regularizer& v, NoiseLevel eps, const BayesianStrategy& sigma,
                const TypeSpace& types);

/// Damped Picard iteration sigma <- (1-d) sigma + d beta(sigma) until the
/// residual is <= tol. Non-convergence is reported (converged = false, best
/// iterate), never thrown.
/// `observer`, when set, sees every Picard iterate (iteration index, state)
/// before its update.
using IterateObserver = std::function<void(std::size_t, const BayesianStrategy&)>;

EquilibriumResult solve_fixed_point(const Game& game, const Regularizer& v, NoiseLevel eps,
                                    const BayesianStrategy& sigma_init, const TypeSpace& types,
                                    const SolverConfig& cfg = {}, const IterateObserver& observer = {});

struct SweepPoint {
  double epsilon = 0.0;
  EquilibriumResult result;
};

/// Solves at each noise level in descending order, warm-starting each solve
/// from the previous solution. The first start is `warm_start` when given,
/// otherwise random_strategy(types, n, seed).
std::vector<SweepPoint> epsilon_sweep(const Game& game, const Regularizer& v, std::vector<double> eps_list,
                                      const TypeSpace& types, std::uint64_t seed, const SolverConfig& cfg = {},
                                      const std::optional<BayesianStrategy>& warm_start = std::nullopt);

}  // namespace rbbr
