#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rbbr/population.hpp"

namespace rbbr {

/// Per-type payoff rule theta_k : aggregate state -> payoff vector.
using AggregativeRule = std::function<Vec(const Vec& aggregate)>;
/// Declared Bayesian potential phi(sigma).
using PotentialFn = std::function<double(const BayesianStrategy&, const TypeSpace&)>;

/// A Bayesian population game G(sigma, theta_k). Both kinds pay through the
/// aggregate E(sigma): matrix games pay A_k E(sigma), aggregative games pay
/// theta_k(E(sigma)). Immutable after construction.
class Game {
 public:
  enum class Kind { Matrix, Aggregative };

  /// One n x n matrix per type atom.
  static Game matrix(std::vector<Mat> matrices);
  /// The same matrix for each of `types` atoms.
  static Game common_matrix(const Mat& a, std::size_t types);
  /// `kappa`, when given, is a certified strong-Lipschitz constant of the rules.
  static Game aggregative(std::vector<AggregativeRule> rules, std::size_t strategies, std::string rule_name,
                          std::optional<double> kappa = std::nullopt);
  /// theta_k(x) = base_k - slope * x (heterogeneous base payoffs, linear congestion).
  static Game congestion(const Mat& base, double slope);

  Game with_potential(PotentialFn phi, std::string name) const;

  Kind kind() const noexcept { return kind_; }
  std::size_t types() const noexcept { return types_; }
  std::size_t strategies() const noexcept { return strategies_; }
  const std::string& rule_name() const noexcept { return rule_name_; }

  const std::vector<Mat>& matrices() const;
  /// The shared matrix when every type uses the same one.
  std::optional<Mat> common_matrix() const;

  bool has_potential() const noexcept { return static_cast<bool>(potential_); }
  const std::string& potential_name() const noexcept { return potential_name_; }
  double potential(const BayesianStrategy& sigma, const TypeSpace& types) const;

  /// Payoff of type k when the aggregate state is `aggregate` (any vector).
  Vec payoff_at(const Vec& aggregate, std::size_t k) const;
  /// K x n payoffs at a given aggregate.
  Mat payoffs_at(const Vec& aggregate) const;

  std::optional<double> certified_lipschitz() const;

 private:
  Game() = default;

  Kind kind_ = Kind::Matrix;
  std::size_t types_ = 0;
  std::size_t strategies_ = 0;
  std::vector<Mat> matrices_;
  std::vector<AggregativeRule> rules_;
  std::string rule_name_;
  std::optional<double> kappa_;
  PotentialFn potential_;
  std::string potential_name_;
};

/// G(sigma, theta_k).
Vec payoff(const Game& game, const BayesianStrategy& sigma, std::size_t k, const TypeSpace& types);
/// Rows G(sigma, theta_k) for all k.
Mat payoff_all(const Game& game, const BayesianStrategy& sigma, const TypeSpace& types);

/// phi(sigma) = 1/2 <E(sigma), A E(sigma)>; a potential when A is symmetric and common.
PotentialFn quadratic_potential(const Mat& a);
/// phi(sigma) = sum_k w_k <base_k, sigma_k> - slope/2 ||E(sigma)||^2.
PotentialFn congestion_potential(const Mat& base, double slope);

/// Largest singular value.
double operator_norm(const Mat& a);
/// Largest eigenvalue of the symmetric part of A restricted to the zero-sum subspace.
double max_tangent_eigenvalue(const Mat& a);
/// d_ij = ||A_i - A_j||_op for matrix games.
Mat operator_norm_metric(const Game& game);

struct LipschitzEstimate {
  double empirical = 0.0;
  std::optional<double> certified;
  /// certified bound when available, otherwise the empirical value
  double bound() const { return certified.value_or(empirical); }
};

LipschitzEstimate strong_lipschitz_estimate(const Game& game, const TypeSpace& types, std::size_t samples,
                                            std::uint64_t seed);

struct NsdReport {
  bool verdict = false;
  double worst_value = 0.0;        // max sampled sum_k w_k <G_k(s)-G_k(r), s_k-r_k>
  bool sampled_verdict = false;    // worst_value <= 1e-9
  std::optional<bool> exact_verdict;
  std::optional<double> max_tangent_eigenvalue;
};

inline constexpr double kNsdSampleTol = 1e-9;
inline constexpr double kNsdEigenTol = 1e-12;

/// Randomised falsifier; exact eigenvalue test for matrix games.
NsdReport is_negative_semidefinite(const Game& game, const TypeSpace& types, std::size_t trials, std::uint64_t seed);

inline constexpr double kFiniteDifferenceStep = 1e-5;

/// Central difference of sum_k w_k <G_k(sigma + h s0) - G_k(sigma - h s0), s0_k> / (2h).
double sde_directional_form(const Game& game, const TypeSpace& types, const BayesianStrategy& sigma,
                            const SignedStrategy& s0, double h = kFiniteDifferenceStep);

struct PotentialGradientCheck {
  double max_residual = 0.0;
  std::size_t probes_used = 0;
  std::size_t probes_below_step_floor = 0;
};

PotentialGradientCheck check_potential_gradient(const Game& game, const TypeSpace& types,
                                                const BayesianStrategy& sigma, std::size_t probes,
                                                std::uint64_t seed, double h = kFiniteDifferenceStep);

/// Largest t with sigma +- t s0 entrywise nonnegative.
double admissible_step(const BayesianStrategy& sigma, const SignedStrategy& s0);

/// Random direction with tangent rows, normalised to unit strong norm.
SignedStrategy random_tangent_direction(Rng& rng, const TypeSpace& types, std::size_t n);

/// Random pair used by the sampled estimators: half the draws are type-constant.
BayesianStrategy random_probe_strategy(Rng& rng, const TypeSpace& types, std::size_t n);

}  // namespace rbbr
