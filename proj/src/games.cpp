#include "rbbr/games.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace rbbr {

Game Game::matrix(std::vector<Mat> matrices) {
  if (matrices.empty()) throw Error(ErrorKind::Config, "matrix game needs one matrix per type");
  const Eigen::Index n = matrices.front().rows();
  if (n < 1) throw Error(ErrorKind::Shape, "payoff matrices must be non-empty");
  for (std::size_t k = 0; k < matrices.size(); ++k) {
    if (matrices[k].rows() != n || matrices[k].cols() != n)
      throw Error(ErrorKind::Shape, "payoff matrix " + std::to_string(k) + " is not " + std::to_string(n) + "x" +
                                        std::to_string(n));
    if (!matrices[k].allFinite())
      throw Error(ErrorKind::Domain, "payoff matrix " + std::to_string(k) + " has non-finite entries");
  }
  Game g;
  g.kind_ = Kind::Matrix;
  g.types_ = matrices.size();
  g.strategies_ = static_cast<std::size_t>(n);
  g.matrices_ = std::move(matrices);
  g.rule_name_ = "matrix";
  return g;
}

Game Game::common_matrix(const Mat& a, std::size_t types) {
  return matrix(std::vector<Mat>(types, a));
}

Game Game::aggregative(std::vector<AggregativeRule> rules, std::size_t strategies, std::string rule_name,
                       std::optional<double> kappa) {
  if (rules.empty() || strategies == 0) throw Error(ErrorKind::Config, "aggregative game needs rules and n >= 1");
  Game g;
  g.kind_ = Kind::Aggregative;
  g.types_ = rules.size();
  g.strategies_ = strategies;
  g.rules_ = std::move(rules);
  g.rule_name_ = std::move(rule_name);
  g.kappa_ = kappa;
  return g;
}

Game Game::congestion(const Mat& base, double slope) {
  if (!base.allFinite() || !std::isfinite(slope) || slope < 0.0)
    throw Error(ErrorKind::Domain, "congestion game needs finite base payoffs and slope >= 0");
  std::vector<AggregativeRule> rules;
  for (Eigen::Index k = 0; k < base.rows(); ++k) {
    Vec b = base.row(k).transpose();
    rules.emplace_back([b, slope](const Vec& x) -> Vec { return b - slope * x; });
  }
  return aggregative(std::move(rules), static_cast<std::size_t>(base.cols()), "congestion", slope);
}

Game Game::with_potential(PotentialFn phi, std::string name) const {
  Game g = *this;
  g.potential_ = std::move(phi);
  g.potential_name_ = std::move(name);
  return g;
}

const std::vector<Mat>& Game::matrices() const {
  if (kind_ != Kind::Matrix) throw Error(ErrorKind::Config, "game is not of matrix type");
  return matrices_;
}

std::optional<Mat> Game::common_matrix() const {
  if (kind_ != Kind::Matrix) return std::nullopt;
  for (const Mat& a : matrices_)
    if (a != matrices_.front()) return std::nullopt;
  return matrices_.front();
}

double Game::potential(const BayesianStrategy& sigma, const TypeSpace& types) const {
  if (!potential_) throw Error(ErrorKind::Config, "game has no declared potential");
  return potential_(sigma, types);
}

Vec Game::payoff_at(const Vec& aggregate, std::size_t k) const {
  if (k >= types_)
    throw Error(ErrorKind::Domain, "type index " + std::to_string(k) + " out of range (K=" + std::to_string(types_) + ")");
  if (static_cast<std::size_t>(aggregate.size()) != strategies_)
    throw Error(ErrorKind::Shape, "aggregate has wrong dimension");
  if (kind_ == Kind::Matrix) return matrices_[k] * aggregate;
  Vec u = rules_[k](aggregate);
  if (static_cast<std::size_t>(u.size()) != strategies_)
    throw Error(ErrorKind::Shape, "aggregative rule returned a payoff of wrong dimension");
  return u;
}

Mat Game::payoffs_at(const Vec& aggregate) const {
  Mat out(static_cast<Eigen::Index>(types_), static_cast<Eigen::Index>(strategies_));
  for (std::size_t k = 0; k < types_; ++k) out.row(static_cast<Eigen::Index>(k)) = payoff_at(aggregate, k).transpose();
  return out;
}

std::optional<double> Game::certified_lipschitz() const {
  if (kind_ == Kind::Aggregative) return kappa_;
  double best = 0.0;
  for (const Mat& a : matrices_) best = std::max(best, operator_norm(a));
  return best;
}

namespace {

void require_compatible(const Game& game, const BayesianStrategy& sigma, const TypeSpace& types) {
  require_types(types, sigma.types(), "payoff");
  if (game.types() != types.size())
    throw Error(ErrorKind::Shape, "game has " + std::to_string(game.types()) + " types but the type space has " +
                                      std::to_string(types.size()));
  if (game.strategies() != sigma.strategies()) throw Error(ErrorKind::Shape, "strategy count mismatch");
}

}  // namespace

Vec payoff(const Game& game, const BayesianStrategy& sigma, std::size_t k, const TypeSpace& types) {
  require_compatible(game, sigma, types);
  return game.payoff_at(expectation(sigma, types).entries(), k);
}

Mat payoff_all(const Game& game, const BayesianStrategy& sigma, const TypeSpace& types) {
  require_compatible(game, sigma, types);
  return game.payoffs_at(expectation(sigma, types).entries());
}

PotentialFn quadratic_potential(const Mat& a) {
  return [a](const BayesianStrategy& sigma, const TypeSpace& types) {
    const Vec e = aggregate(sigma.rows(), types);
    return 0.5 * e.dot(a * e);
  };
}

PotentialFn congestion_potential(const Mat& base, double slope) {
  return [base, slope](const BayesianStrategy& sigma, const TypeSpace& types) {
    require_same_shape(base, sigma.rows(), "congestion potential");
    const Vec e = aggregate(sigma.rows(), types);
    const Vec inner = (base.array() * sigma.rows().array()).rowwise().sum();
    return types.weights().dot(inner) - 0.5 * slope * e.squaredNorm();
  };
}

double operator_norm(const Mat& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(a);
  return svd.singularValues()(0);
}

double max_tangent_eigenvalue(const Mat& a) {
  const Mat q = tangent_basis(static_cast<std::size_t>(a.rows()));
  const Mat s = q.transpose() * (0.5 * (a + a.transpose())) * q;
  Eigen::SelfAdjointEigenSolver<Mat> es(s, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

Mat operator_norm_metric(const Game& game) {
  const auto& mats = game.matrices();
  const auto k = static_cast<Eigen::Index>(mats.size());
  Mat d = Mat::Zero(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = i + 1; j < k; ++j) d(i, j) = d(j, i) = operator_norm(mats[i] - mats[j]);
  return d;
}

BayesianStrategy random_probe_strategy(Rng& rng, const TypeSpace& types, std::size_t n) {
  const auto k = static_cast<Eigen::Index>(types.size());
  Mat rows(k, static_cast<Eigen::Index>(n));
  if (rng.uniform() < 0.5) {
    rows = random_simplex_point(rng, n).transpose().replicate(k, 1);
  } else {
    for (Eigen::Index i = 0; i < k; ++i) rows.row(i) = random_simplex_point(rng, n).transpose();
  }
  return BayesianStrategy(std::move(rows));
}

SignedStrategy random_tangent_direction(Rng& rng, const TypeSpace& types, std::size_t n) {
  const auto k = static_cast<Eigen::Index>(types.size());
  const auto m = static_cast<Eigen::Index>(n);
  Vec common(m);
  for (Eigen::Index j = 0; j < m; ++j) common(j) = rng.uniform(-1.0, 1.0);
  const double spread = rng.uniform();
  Mat rows(k, m);
  for (Eigen::Index i = 0; i < k; ++i) {
    Vec r = common;
    for (Eigen::Index j = 0; j < m; ++j) r(j) += spread * rng.uniform(-1.0, 1.0);
    rows.row(i) = (r.array() - r.mean()).matrix().transpose();
  }
  const double norm = types.weights().dot(rows.rowwise().norm());
  if (norm > 0.0) rows /= norm;
  return SignedStrategy(std::move(rows));
}

LipschitzEstimate strong_lipschitz_estimate(const Game& game, const TypeSpace& types, std::size_t samples,
                                            std::uint64_t seed) {
  if (samples < 2) throw Error(ErrorKind::Domain, "strong_lipschitz_estimate needs at least two samples");
  LipschitzEstimate est;
  est.certified = game.certified_lipschitz();
  Rng rng(seed);
  const std::size_t n = game.strategies();
  for (std::size_t s = 0; s < samples; ++s) {
    const BayesianStrategy a = random_probe_strategy(rng, types, n);
    const BayesianStrategy b = random_probe_strategy(rng, types, n);
    const double denom = strong_distance(a, b, types);
    if (denom < 1e-14) continue;
    const Mat diff = payoff_all(game, a, types) - payoff_all(game, b, types);
    est.empirical = std::max(est.empirical, diff.rowwise().norm().maxCoeff() / denom);
  }
  return est;
}

namespace {

// Exact test for heterogeneous matrix games: the form
// sum_k w_k <A_k E(z), z_k> over tangent rows z is the block quadratic form
// with blocks w_k w_j A_k.
double block_tangent_eigenvalue(const Game& game, const TypeSpace& types) {
  const auto& mats = game.matrices();
  const auto k = static_cast<Eigen::Index>(mats.size());
  const auto n = static_cast<Eigen::Index>(game.strategies());
  const Mat q = tangent_basis(static_cast<std::size_t>(n));
  Mat m(k * (n - 1), k * (n - 1));
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j)
      m.block(i * (n - 1), j * (n - 1), n - 1, n - 1) =
          types.weights()(i) * types.weights()(j) * (q.transpose() * mats[static_cast<std::size_t>(i)] * q);
  const Mat s = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(s, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

}  // namespace

NsdReport is_negative_semidefinite(const Game& game, const TypeSpace& types, std::size_t trials, std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorKind::Domain, "is_negative_semidefinite needs at least one trial");
  NsdReport rep;
  rep.worst_value = -std::numeric_limits<double>::infinity();
  Rng rng(seed);
  const std::size_t n = game.strategies();
  for (std::size_t t = 0; t < trials; ++t) {
    const BayesianStrategy a = random_probe_strategy(rng, types, n);
    const BayesianStrategy b = random_probe_strategy(rng, types, n);
    const Mat du = payoff_all(game, a, types) - payoff_all(game, b, types);
    const Mat dx = a.rows() - b.rows();
    const double value = types.weights().dot((du.array() * dx.array()).rowwise().sum().matrix());
    rep.worst_value = std::max(rep.worst_value, value);
  }
  rep.sampled_verdict = rep.worst_value <= kNsdSampleTol;
  if (game.kind() == Game::Kind::Matrix && n >= 2) {
    const auto common = game.common_matrix();
    const double top = common ? max_tangent_eigenvalue(*common) : block_tangent_eigenvalue(game, types);
    rep.max_tangent_eigenvalue = top;
    rep.exact_verdict = top <= kNsdEigenTol;
  }
  rep.verdict = rep.sampled_verdict && rep.exact_verdict.value_or(true);
  return rep;
}

namespace {

void require_tangent_rows(const SignedStrategy& s0) {
  const Mat& r = s0.rows();
  for (Eigen::Index k = 0; k < r.rows(); ++k) {
    const double scale = std::max(1.0, r.row(k).cwiseAbs().sum());
    if (std::abs(r.row(k).sum()) > kSimplexTol * scale)
      throw Error(ErrorKind::Domain, "direction row " + std::to_string(k) + " does not sum to zero");
  }
}

BayesianStrategy shifted(const BayesianStrategy& sigma, const SignedStrategy& s0, double h) {
  try {
    return BayesianStrategy(sigma.rows() + h * s0.rows());
  } catch (const Error&) {
    throw Error(ErrorKind::Step, "finite-difference step leaves the simplex");
  }
}

}  // namespace

double admissible_step(const BayesianStrategy& sigma, const SignedStrategy& s0) {
  require_same_shape(sigma.rows(), s0.rows(), "admissible_step");
  double t = std::numeric_limits<double>::infinity();
  const Mat& x = sigma.rows();
  const Mat& d = s0.rows();
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      if (d(i, j) != 0.0) t = std::min(t, x(i, j) / std::abs(d(i, j)));
  return t;
}

double sde_directional_form(const Game& game, const TypeSpace& types, const BayesianStrategy& sigma,
                            const SignedStrategy& s0, double h) {
  require_same_shape(sigma.rows(), s0.rows(), "sde_directional_form");
  require_tangent_rows(s0);
  if (!(h > 0.0)) throw Error(ErrorKind::Domain, "finite-difference step must be positive");
  if (h > admissible_step(sigma, s0)) throw Error(ErrorKind::Step, "finite-difference step leaves the simplex");
  const Mat du = payoff_all(game, shifted(sigma, s0, h), types) - payoff_all(game, shifted(sigma, s0, -h), types);
  const Vec per_type = (du.array() * s0.rows().array()).rowwise().sum();
  return types.weights().dot(per_type) / (2.0 * h);
}

PotentialGradientCheck check_potential_gradient(const Game& game, const TypeSpace& types,
                                                const BayesianStrategy& sigma, std::size_t probes,
                                                std::uint64_t seed, double h) {
  if (!game.has_potential()) throw Error(ErrorKind::Config, "game has no declared potential");
  if (!(min_row_entry(sigma) > 0.0)) throw Error(ErrorKind::Domain, "potential check needs interior rows");
  PotentialGradientCheck out;
  Rng rng(seed);
  const Mat u = payoff_all(game, sigma, types);
  for (std::size_t p = 0; p < probes; ++p) {
    const SignedStrategy s0 = random_tangent_direction(rng, types, game.strategies());
    const double step = std::min(h, 0.5 * admissible_step(sigma, s0));
    if (step < 1e-10) {
      ++out.probes_below_step_floor;
      continue;
    }
    const double fd =
        (game.potential(shifted(sigma, s0, step), types) - game.potential(shifted(sigma, s0, -step), types)) /
        (2.0 * step);
    const double exact = types.weights().dot((u.array() * s0.rows().array()).rowwise().sum().matrix());
    out.max_residual = std::max(out.max_residual, std::abs(fd - exact));
    ++out.probes_used;
  }
  return out;
}

}  // namespace rbbr
