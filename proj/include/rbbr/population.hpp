#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "rbbr/random.hpp"
#include "rbbr/simplex.hpp"

namespace rbbr {

/// Finite weighted type atoms with an optional metric between them.
class TypeSpace {
 public:
  /// Weights must be >= 0 and sum to one within 1e-12. A metric must be
  /// K x K, symmetric, nonnegative with zero diagonal, and satisfy the
  /// triangle inequality within 1e-9.
  explicit TypeSpace(Vec weights, std::optional<Mat> metric = std::nullopt);

  static TypeSpace uniform(std::size_t k);

  std::size_t size() const noexcept { return static_cast<std::size_t>(weights_.size()); }
  const Vec& weights() const noexcept { return weights_; }
  double weight(std::size_t k) const { return weights_(static_cast<Eigen::Index>(k)); }
  bool has_metric() const noexcept { return metric_.has_value(); }
  const Mat& metric() const;

  TypeSpace with_metric(Mat metric) const { return TypeSpace(weights_, std::move(metric)); }

 private:
  Vec weights_;
  std::optional<Mat> metric_;
};

/// K x n row-stochastic array; row k is the mixed strategy of type k.
class BayesianStrategy {
 public:
  explicit BayesianStrategy(Mat rows);

  static BayesianStrategy uniform(std::size_t k, std::size_t n);
  static BayesianStrategy constant(std::size_t k, const SimplexPoint& x);

  const Mat& rows() const noexcept { return rows_; }
  Vec row(std::size_t k) const { return rows_.row(static_cast<Eigen::Index>(k)).transpose(); }
  std::size_t types() const noexcept { return static_cast<std::size_t>(rows_.rows()); }
  std::size_t strategies() const noexcept { return static_cast<std::size_t>(rows_.cols()); }

 private:
  Mat rows_;
};

/// Integrable signed strategy: K x n, rows unconstrained. Differences of
/// Bayesian strategies have zero row sums.
class SignedStrategy {
 public:
  explicit SignedStrategy(Mat rows);

  const Mat& rows() const noexcept { return rows_; }
  std::size_t types() const noexcept { return static_cast<std::size_t>(rows_.rows()); }
  std::size_t strategies() const noexcept { return static_cast<std::size_t>(rows_.cols()); }

 private:
  Mat rows_;
};

SignedStrategy operator-(const BayesianStrategy& a, const BayesianStrategy& b);

/// sum_k w_k ||row_k|| (Euclidean rows).
double strong_norm(const SignedStrategy& s, const TypeSpace& types);
double strong_distance(const BayesianStrategy& a, const BayesianStrategy& b, const TypeSpace& types);

/// Aggregate population state sum_k w_k sigma(theta_k).
SimplexPoint expectation(const BayesianStrategy& sigma, const TypeSpace& types);
/// Weighted row average of an arbitrary K x n array.
Vec aggregate(const Mat& rows, const TypeSpace& types);

/// Largest ||sigma_i - sigma_j|| / d_ij over pairs at positive distance.
double lipschitz_in_type(const BayesianStrategy& sigma, const TypeSpace& types);

double min_row_entry(const BayesianStrategy& sigma);

/// Rows drawn from the flat Dirichlet (normalised exponentials).
BayesianStrategy random_strategy(const TypeSpace& types, std::size_t n, std::uint64_t seed);

/// One flat-Dirichlet draw in the simplex of dimension n.
Vec random_simplex_point(Rng& rng, std::size_t n);

void require_same_shape(const Mat& a, const Mat& b, const char* what);
void require_types(const TypeSpace& types, std::size_t k, const char* what);

}  // namespace rbbr
