#include "rbbr/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rbbr {

namespace {

// Best responses at an arbitrary K x n array; RK4 stages need this off the simplex.
Mat best_response_rows(const Game& game, const Regularizer& v, NoiseLevel eps, const Mat& rows,
                       const TypeSpace& types) {
  const Vec agg = aggregate(rows, types);
  Mat out(rows.rows(), rows.cols());
  for (Eigen::Index k = 0; k < rows.rows(); ++k)
    out.row(k) = conjugate_argmax(v, eps, game.payoff_at(agg, static_cast<std::size_t>(k))).entries().transpose();
  return out;
}

void require_compatible(const Game& game, const BayesianStrategy& sigma, const TypeSpace& types) {
  require_types(types, sigma.types(), "rbbr_map");
  if (game.types() != types.size()) throw Error(ErrorKind::Shape, "game and type space disagree on K");
  if (game.strategies() != sigma.strategies()) throw Error(ErrorKind::Shape, "game and strategy disagree on n");
}

}  // namespace

BayesianStrategy rbbr_map(const Game& game, const Regularizer& v, NoiseLevel eps, const BayesianStrategy& sigma,
                          const TypeSpace& types) {
  require_compatible(game, sigma, types);
  const Vec agg = expectation(sigma, types).entries();
  Mat out(sigma.rows().rows(), sigma.rows().cols());
  for (Eigen::Index k = 0; k < out.rows(); ++k)
    out.row(k) = conjugate_argmax(v, eps, game.payoff_at(agg, static_cast<std::size_t>(k))).entries().transpose();
  return BayesianStrategy(std::move(out));
}

SignedStrategy rbbr_field(const Game& game, const Regularizer& v, NoiseLevel eps, const BayesianStrategy& sigma,
                          const TypeSpace& types) {
  return rbbr_map(game, v, eps, sigma, types) - sigma;
}

BayesianStrategy relax_toward(const BayesianStrategy& sigma, const BayesianStrategy& beta, double dt) {
  require_same_shape(sigma.rows(), beta.rows(), "relax_toward");
  if (!(dt > 0.0 && dt <= 1.0)) throw Error(ErrorKind::Domain, "relaxation weight must lie in (0,1]");
  if (dt == 1.0) return beta;
  return BayesianStrategy((1.0 - dt) * sigma.rows() + dt * beta.rows());
}

void IntegratorConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorKind::Config, "integrator dt must be positive");
  if (method == Method::Euler && dt > 1.0)
    throw Error(ErrorKind::Config, "Euler dt must not exceed 1 (simplex preservation)");
  if (!(horizon >= dt) || !std::isfinite(horizon)) throw Error(ErrorKind::Config, "integrator horizon must be >= dt");
  if (record_every == 0) throw Error(ErrorKind::Config, "record_every must be at least 1");
}

std::size_t IntegratorConfig::steps() const {
  return static_cast<std::size_t>(std::llround(std::ceil(horizon / dt - 1e-9)));
}

void Trajectory::append(double time, BayesianStrategy state, std::map<std::string, double> diagnostics) {
  if (!times_.empty() && !(time > times_.back()))
    throw Error(ErrorKind::Domain, "trajectory times must be strictly increasing");
  times_.push_back(time);
  states_.push_back(std::move(state));
  diagnostics_.push_back(std::move(diagnostics));
}

bool Trajectory::has_series(const std::string& name) const {
  return !diagnostics_.empty() &&
         std::all_of(diagnostics_.begin(), diagnostics_.end(), [&](const auto& d) { return d.count(name) > 0; });
}

std::vector<double> Trajectory::series(const std::string& name) const {
  std::vector<double> out;
  out.reserve(diagnostics_.size());
  for (const auto& d : diagnostics_) {
    const auto it = d.find(name);
    if (it == d.end()) throw Error(ErrorKind::Config, "trajectory has no diagnostic '" + name + "'");
    out.push_back(it->second);
  }
  return out;
}

Trajectory integrate(const Game& game, const Regularizer& v, NoiseLevel eps, const BayesianStrategy& sigma0,
                     const TypeSpace& types, const IntegratorConfig& cfg, const std::vector<Probe>& probes) {
  cfg.validate();
  require_compatible(game, sigma0, types);
  const std::size_t steps = cfg.steps();
  Trajectory traj;
  BayesianStrategy sigma = sigma0;

  auto record = [&](std::size_t i, const BayesianStrategy& beta) {
    std::map<std::string, double> diag;
    diag["residual"] = strong_distance(beta, sigma, types);
    for (const Probe& p : probes) diag[p.name] = p.evaluate(sigma);
    traj.append(static_cast<double>(i) * cfg.dt, sigma, std::move(diag));
  };

  for (std::size_t i = 0; i < steps; ++i) {
    const BayesianStrategy beta = rbbr_map(game, v, eps, sigma, types);
    if (i % cfg.record_every == 0) record(i, beta);
    if (cfg.method == Method::Euler) {
      sigma = relax_toward(sigma, beta, cfg.dt);
      continue;
    }
    const Mat& x = sigma.rows();
    const Mat k1 = beta.rows() - x;
    const Mat x2 = x + 0.5 * cfg.dt * k1;
    const Mat k2 = best_response_rows(game, v, eps, x2, types) - x2;
    const Mat x3 = x + 0.5 * cfg.dt * k2;
    const Mat k3 = best_response_rows(game, v, eps, x3, types) - x3;
    const Mat x4 = x + cfg.dt * k3;
    const Mat k4 = best_response_rows(game, v, eps, x4, types) - x4;
    const Mat next = x + (cfg.dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    Mat fixed(next.rows(), next.cols());
    for (Eigen::Index k = 0; k < next.rows(); ++k)
      fixed.row(k) = renormalize(next.row(k).transpose(), kRk4DriftTol).entries().transpose();
    sigma = BayesianStrategy(std::move(fixed));
  }
  record(steps, rbbr_map(game, v, eps, sigma, types));
  return traj;
}

GronwallReport gronwall_check(const Game& game, const Regularizer& v, NoiseLevel eps, const BayesianStrategy& sigma0,
                              const BayesianStrategy& sigma0_alt, const TypeSpace& types,
                              const IntegratorConfig& cfg) {
  GronwallReport rep;
  rep.kappa = strong_lipschitz_estimate(game, types, 1000, 0x6a09e667f3bcc908ULL).bound();
  rep.lipschitz_constant = 1.0 + rep.kappa / (eps.value() * v.strong_convexity_modulus());
  const Trajectory a = integrate(game, v, eps, sigma0, types, cfg);
  const Trajectory b = integrate(game, v, eps, sigma0_alt, types, cfg);
  rep.initial_distance = strong_distance(sigma0, sigma0_alt, types);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = a.times()[i];
    const double dist = strong_distance(a.state(i), b.state(i), types);
    const double bound = std::exp(rep.lipschitz_constant * t) * rep.initial_distance;
    rep.times.push_back(t);
    rep.distances.push_back(dist);
    if (dist > bound + kGronwallSlack) rep.holds = false;
    if (t == 0.0) continue;  // the bound is tight by definition at t = 0
    if (bound > 0.0) rep.max_ratio = std::max(rep.max_ratio, dist / bound);
    else if (dist > 0.0) rep.max_ratio = std::numeric_limits<double>::infinity();
  }
  return rep;
}

namespace {

bool game_is_type_lipschitz(const Game& game, const TypeSpace& types) {
  const Mat& d = types.metric();
  const auto k = static_cast<Eigen::Index>(game.types());
  if (game.kind() == Game::Kind::Matrix) {
    const auto& mats = game.matrices();
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index j = i + 1; j < k; ++j)
        if (operator_norm(mats[static_cast<std::size_t>(i)] - mats[static_cast<std::size_t>(j)]) > d(i, j) + 1e-12)
          return false;
    return true;
  }
  // Aggregative rules are only falsifiable by sampling.
  Rng rng(0xbb67ae8584caa73bULL);
  for (int s = 0; s < 200; ++s) {
    const Vec x = random_simplex_point(rng, game.strategies());
    const Mat u = game.payoffs_at(x);
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index j = i + 1; j < k; ++j)
        if ((u.row(i) - u.row(j)).norm() > d(i, j) + 1e-12) return false;
  }
  return true;
}

}  // namespace

InvarianceReport invariance_check(const Game& game, const Regularizer& v, NoiseLevel eps, const Trajectory& traj,
                                  const TypeSpace& types, double alpha, double m) {
  if (!types.has_metric()) throw Error(ErrorKind::Config, "invariance_check needs a type metric");
  if (traj.empty()) throw Error(ErrorKind::Domain, "invariance_check needs a non-empty trajectory");
  InvarianceReport rep;
  rep.alpha = alpha;
  rep.alpha_certified = alpha * eps.value() * v.strong_convexity_modulus() >= 1.0 - 1e-15;
  rep.type_lipschitz_game = game_is_type_lipschitz(game, types);
  const bool multi = types.size() >= 2;
  rep.initial_lipschitz = !multi || lipschitz_in_type(traj.state(0), types) <= alpha + kInvarianceSlack;

  double floor = std::min(m, min_row_entry(traj.state(0)));
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const BayesianStrategy& s = traj.state(i);
    if (multi) {
      const double lip = lipschitz_in_type(s, types);
      rep.max_lipschitz = std::max(rep.max_lipschitz, lip);
      if (rep.initial_lipschitz && lip > alpha + kInvarianceSlack) rep.lipschitz_holds = false;
    }
    const double lowest = min_row_entry(s);
    rep.min_entry = std::min(rep.min_entry, lowest);
    if (lowest < floor - 1e-15) rep.interior_holds = false;
    floor = std::min(floor, min_row_entry(rbbr_map(game, v, eps, s, types)));
  }
  rep.interior_floor = floor;
  return rep;
}

}  // namespace rbbr
