#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "rbbr/games.hpp"
#include "rbbr/regularizers.hpp"

namespace rbbr {

/// Row k = conjugate_argmax(v, eps, G(sigma, theta_k)).
BayesianStrategy rbbr_map(const Game& game, const Regularizer& v, NoiseLevel eps, const BayesianStrategy& sigma,
                          const TypeSpace& types);

/// rbbr_map - sigma; rows lie in the zero-sum subspace.
SignedStrategy rbbr_field(const Game& game, const Regularizer& v, NoiseLevel eps, const BayesianStrategy& sigma,
                          const TypeSpace& types);

/// (1 - dt) sigma + dt beta: one Euler step, equivalently one damped Picard update.
BayesianStrategy relax_toward(const BayesianStrategy& sigma, const BayesianStrategy& beta, double dt);

enum class Method { Euler, RK4 };

struct IntegratorConfig {
  Method method = Method::Euler;
  double dt = 0.1;
  double horizon = 10.0;
  std::size_t record_every = 1;

  /// Throws Config on dt <= 0, Euler dt > 1, horizon < dt or record_every == 0.
  void validate() const;
  std::size_t steps() const;
};

/// Scalar evaluated at each recorded state and stored under `name`.
struct Probe {
  std::string name;
  std::function<double(const BayesianStrategy&)> evaluate;
};

/// Recorded samples of the semiflow t -> state(sigma0, t) plus per-sample diagnostics.
class Trajectory {
 public:
  /// Times must be strictly increasing.
  void append(double time, BayesianStrategy state, std::map<std::string, double> diagnostics);

  std::size_t size() const noexcept { return times_.size(); }
  bool empty() const noexcept { return times_.empty(); }
  const std::vector<double>& times() const noexcept { return times_; }
  const std::vector<BayesianStrategy>& states() const noexcept { return states_; }
  const BayesianStrategy& state(std::size_t i) const { return states_.at(i); }
  const BayesianStrategy& final_state() const { return states_.back(); }
  const std::map<std::string, double>& diagnostics(std::size_t i) const { return diagnostics_.at(i); }

  bool has_series(const std::string& name) const;
  /// Throws Config when some sample lacks the diagnostic.
  std::vector<double> series(const std::string& name) const;

 private:
  std::vector<double> times_;
  std::vector<BayesianStrategy> states_;
  std::vector<std::map<std::string, double>> diagnostics_;
};

inline constexpr double kRk4DriftTol = 1e-9;

/// Integrates sigma' = beta(sigma) - sigma. Euler steps are exact convex
/// combinations; RK4 steps are renormalised with tolerance 1e-9. Every
/// recorded sample carries "residual" = |||beta(sigma) - sigma||| plus the probes.
Trajectory integrate(const Game& game, const Regularizer& v, NoiseLevel eps, const BayesianStrategy& sigma0,
                     const TypeSpace& types, const IntegratorConfig& cfg, const std::vector<Probe>& probes = {});

struct GronwallReport {
  bool holds = true;
  double max_ratio = 0.0;          // max over t > 0 of observed distance / bound
  double kappa = 0.0;
  double lipschitz_constant = 0.0;  // 1 + kappa / (eps gamma)
  double initial_distance = 0.0;
  std::vector<double> times;
  std::vector<double> distances;
};

inline constexpr double kGronwallSlack = 1e-9;

/// |||sigma_t - sigma'_t||| <= exp(L t) |||sigma_0 - sigma'_0||| + 1e-9 at every recorded t.
GronwallReport gronwall_check(const Game& game, const Regularizer& v, NoiseLevel eps, const BayesianStrategy& sigma0,
                              const BayesianStrategy& sigma0_alt, const TypeSpace& types,
                              const IntegratorConfig& cfg);

struct InvarianceReport {
  bool type_lipschitz_game = false;  // ||G(s,theta_i) - G(s,theta_j)|| <= d_ij
  bool alpha_certified = false;      // alpha >= 1 / (eps gamma)
  bool initial_lipschitz = false;    // Lipschitz-in-type constant of sigma_0 <= alpha
  bool lipschitz_holds = true;
  bool interior_holds = true;
  double alpha = 0.0;
  double max_lipschitz = 0.0;
  double min_entry = 1.0;
  double interior_floor = 1.0;

  bool holds() const { return lipschitz_holds && interior_holds; }
};

inline constexpr double kInvarianceSlack = 1e-9;

/// Forward-invariance audit of a recorded trajectory (record every step for
/// the interior part to be sharp): (a) type-Lipschitz constant stays <= alpha
/// once it starts there; (b) min entry never drops below min(m, min entry of
/// the best-response images seen so far).
InvarianceReport invariance_check(const Game& game, const Regularizer& v, NoiseLevel eps, const Trajectory& traj,
                                  const TypeSpace& types, double alpha, double m);

}  // namespace rbbr
