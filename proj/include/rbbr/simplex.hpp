#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "rbbr/error.hpp"

namespace rbbr {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Membership tolerance for constructed simplex points.
inline constexpr double kSimplexTol = 1e-12;

/// A probability vector over the n pure strategies.
class SimplexPoint {
 public:
  /// Validates entries >= 0 and |sum - 1| <= kSimplexTol; throws Domain otherwise.
  explicit SimplexPoint(Vec entries);

  static SimplexPoint uniform(std::size_t n);
  static SimplexPoint vertex(std::size_t n, std::size_t k);

  const Vec& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(entries_.size()); }
  double operator[](std::size_t j) const { return entries_(static_cast<Eigen::Index>(j)); }
  bool interior() const noexcept { return entries_.minCoeff() > 0.0; }

 private:
  Vec entries_;
};

/// A vector in the tangent space of the simplex (components sum to zero).
class TangentVector {
 public:
  explicit TangentVector(Vec entries);

  const Vec& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(entries_.size()); }

 private:
  Vec entries_;
};

bool is_simplex_point(const Vec& x, double tol = kSimplexTol);

/// u - mean(u) * 1.
TangentVector tangent_project(const Vec& u);

/// Clamps small negatives and rescales to sum one. Entries below -tol or a
/// sum off by more than tol raise DriftError carrying x.
SimplexPoint renormalize(const Vec& x, double tol);

/// Orthonormal basis (n x (n-1)) of the zero-sum subspace.
Mat tangent_basis(std::size_t n);

}  // namespace rbbr
