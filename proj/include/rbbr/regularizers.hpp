#pragma once

#include <string>

#include "rbbr/simplex.hpp"

namespace rbbr {

enum class RegularizerKind { Shannon, Tsallis, Burg };

/// Strongly convex, boundary-steep perturbation on the simplex.
///
/// Shannon is the negentropy sum x log x (convex). Tsallis(q) is
/// (1-q)^-1 sum (x - x^q) with q in (0,1). Burg is -sum log x.
/// A positive `scale` multiplies value, gradient and modulus, so a
/// regularizer scale*v at noise 1 behaves exactly like v at noise `scale`.
class Regularizer {
 public:
  static Regularizer shannon();
  static Regularizer tsallis(double q);
  static Regularizer burg();

  Regularizer scaled(double factor) const;

  RegularizerKind kind() const noexcept { return kind_; }
  double q() const noexcept { return q_; }
  double scale() const noexcept { return scale_; }
  std::string name() const;

  /// +infinity for Burg on the boundary. Shannon/Tsallis use the 0 log 0 = 0 limit.
  double value(const Vec& x) const;
  /// Requires a strictly interior point.
  Vec gradient(const Vec& x) const;
  /// Certified lower bound on the Hessian's smallest eigenvalue over the interior
  /// (Euclidean norm): 1 for Shannon and Burg, q for Tsallis, times scale.
  double strong_convexity_modulus() const noexcept;

 private:
  Regularizer(RegularizerKind kind, double q, double scale) : kind_(kind), q_(q), scale_(scale) {}

  RegularizerKind kind_;
  double q_;
  double scale_;
};

class NoiseLevel {
 public:
  explicit NoiseLevel(double epsilon);
  double value() const noexcept { return epsilon_; }

 private:
  double epsilon_;
};

/// Root tolerance on the simplex-sum residual and iteration cap for the KKT solvers.
inline constexpr double kRootTol = 1e-12;
inline constexpr int kRootMaxIter = 200;

/// Unique maximiser of <y,u> - eps v(y) over the simplex.
SimplexPoint conjugate_argmax(const Regularizer& v, NoiseLevel eps, const Vec& u);

/// <y*,u> - eps v(y*).
double conjugate_value(const Regularizer& v, NoiseLevel eps, const Vec& u);

/// exp(u/eps) normalised, with max shift.
SimplexPoint logit_map(NoiseLevel eps, const Vec& u);

/// Spread of u - eps grad v(y) around its mean (zero at the interior optimum).
double kkt_residual(const Regularizer& v, NoiseLevel eps, const Vec& u, const Vec& y);

/// <y,u> - eps v(y).
double perturbed_objective(const Regularizer& v, NoiseLevel eps, const Vec& u, const Vec& y);

}  // namespace rbbr
