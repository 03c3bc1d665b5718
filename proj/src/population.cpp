#include "rbbr/population.hpp"

#include <cmath>
#include <string>

#include "rbbr/random.hpp"

namespace rbbr {

void require_same_shape(const Mat& a, const Mat& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorKind::Shape, std::string(what) + ": shape mismatch (" + std::to_string(a.rows()) +
                                      "x" + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                                      "x" + std::to_string(b.cols()) + ")");
}

void require_types(const TypeSpace& types, std::size_t k, const char* what) {
  if (types.size() != k)
    throw Error(ErrorKind::Shape, std::string(what) + ": expected " + std::to_string(types.size()) +
                                      " type rows, got " + std::to_string(k));
}

TypeSpace::TypeSpace(Vec weights, std::optional<Mat> metric)
    : weights_(std::move(weights)), metric_(std::move(metric)) {
  if (weights_.size() == 0) throw Error(ErrorKind::Domain, "type space needs at least one atom");
  if (!weights_.allFinite() || weights_.minCoeff() < 0.0 || std::abs(weights_.sum() - 1.0) > 1e-12)
    throw Error(ErrorKind::Domain, "type weights must be nonnegative and sum to one");
  if (!metric_) return;
  const Mat& d = *metric_;
  const Eigen::Index k = weights_.size();
  if (d.rows() != k || d.cols() != k)
    throw Error(ErrorKind::Shape, "metric must be K x K with K = " + std::to_string(k));
  if (!d.allFinite() || d.minCoeff() < 0.0) throw Error(ErrorKind::Domain, "metric entries must be finite and >= 0");
  for (Eigen::Index i = 0; i < k; ++i) {
    if (d(i, i) != 0.0) throw Error(ErrorKind::Domain, "metric diagonal must be zero");
    for (Eigen::Index j = 0; j < k; ++j) {
      if (std::abs(d(i, j) - d(j, i)) > 1e-12) throw Error(ErrorKind::Domain, "metric must be symmetric");
      for (Eigen::Index l = 0; l < k; ++l)
        if (d(i, l) > d(i, j) + d(j, l) + 1e-9)
          throw Error(ErrorKind::Domain, "metric violates the triangle inequality at (" + std::to_string(i) +
                                             "," + std::to_string(j) + "," + std::to_string(l) + ")");
    }
  }
}

TypeSpace TypeSpace::uniform(std::size_t k) {
  return TypeSpace(Vec::Constant(static_cast<Eigen::Index>(k), 1.0 / static_cast<double>(k)));
}

const Mat& TypeSpace::metric() const {
  if (!metric_) throw Error(ErrorKind::Config, "type space has no metric");
  return *metric_;
}

BayesianStrategy::BayesianStrategy(Mat rows) : rows_(std::move(rows)) {
  if (rows_.rows() == 0 || rows_.cols() == 0) throw Error(ErrorKind::Shape, "empty Bayesian strategy");
  for (Eigen::Index k = 0; k < rows_.rows(); ++k)
    if (!is_simplex_point(rows_.row(k).transpose()))
      throw Error(ErrorKind::Domain, "row " + std::to_string(k) + " of Bayesian strategy is not a simplex point");
}

BayesianStrategy BayesianStrategy::uniform(std::size_t k, std::size_t n) {
  return constant(k, SimplexPoint::uniform(n));
}

BayesianStrategy BayesianStrategy::constant(std::size_t k, const SimplexPoint& x) {
  return BayesianStrategy(x.entries().transpose().replicate(static_cast<Eigen::Index>(k), 1));
}

SignedStrategy::SignedStrategy(Mat rows) : rows_(std::move(rows)) {
  if (!rows_.allFinite()) throw Error(ErrorKind::Domain, "signed strategy has non-finite entries");
}

SignedStrategy operator-(const BayesianStrategy& a, const BayesianStrategy& b) {
  require_same_shape(a.rows(), b.rows(), "strategy difference");
  return SignedStrategy(a.rows() - b.rows());
}

double strong_norm(const SignedStrategy& s, const TypeSpace& types) {
  require_types(types, s.types(), "strong_norm");
  return types.weights().dot(s.rows().rowwise().norm());
}

double strong_distance(const BayesianStrategy& a, const BayesianStrategy& b, const TypeSpace& types) {
  return strong_norm(a - b, types);
}

Vec aggregate(const Mat& rows, const TypeSpace& types) {
  require_types(types, static_cast<std::size_t>(rows.rows()), "aggregate");
  return rows.transpose() * types.weights();
}

SimplexPoint expectation(const BayesianStrategy& sigma, const TypeSpace& types) {
  Vec e = aggregate(sigma.rows(), types);
  if (is_simplex_point(e)) return SimplexPoint(std::move(e));
  // A convex combination can only miss the simplex by rounding.
  e = e.cwiseMax(0.0);
  return SimplexPoint(e / e.sum());
}

double lipschitz_in_type(const BayesianStrategy& sigma, const TypeSpace& types) {
  require_types(types, sigma.types(), "lipschitz_in_type");
  const Mat& d = types.metric();
  if (sigma.types() < 2) throw Error(ErrorKind::Domain, "lipschitz_in_type needs at least two types");
  const Mat& r = sigma.rows();
  double best = 0.0;
  for (Eigen::Index i = 0; i < r.rows(); ++i)
    for (Eigen::Index j = i + 1; j < r.rows(); ++j)
      if (d(i, j) > 0.0) best = std::max(best, (r.row(i) - r.row(j)).norm() / d(i, j));
  return best;
}

double min_row_entry(const BayesianStrategy& sigma) { return sigma.rows().minCoeff(); }

Vec random_simplex_point(Rng& rng, std::size_t n) {
  Vec x(static_cast<Eigen::Index>(n));
  for (Eigen::Index j = 0; j < x.size(); ++j) x(j) = -std::log(rng.uniform_open_low());
  return x / x.sum();
}

BayesianStrategy random_strategy(const TypeSpace& types, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw Error(ErrorKind::Domain, "random_strategy needs n >= 1");
  Rng rng(seed);
  Mat rows(static_cast<Eigen::Index>(types.size()), static_cast<Eigen::Index>(n));
  for (Eigen::Index k = 0; k < rows.rows(); ++k) rows.row(k) = random_simplex_point(rng, n).transpose();
  return BayesianStrategy(std::move(rows));
}

}  // namespace rbbr
