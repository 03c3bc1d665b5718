#include "rbbr/diagnostics.hpp"

#include <cmath>

namespace rbbr {

double aggregate_entropy(const Regularizer& v, NoiseLevel eps, const BayesianStrategy& sigma,
                         const TypeSpace& types) {
  require_types(types, sigma.types(), "aggregate_entropy");
  double s = 0.0;
  for (std::size_t k = 0; k < sigma.types(); ++k) {
    if (types.weight(k) == 0.0) continue;
    s += types.weight(k) * v.value(sigma.row(k));
  }
  return eps.value() * s;
}

namespace {

double expected_payoff(const Mat& payoffs, const BayesianStrategy& rho, const TypeSpace& types) {
  require_same_shape(payoffs, rho.rows(), "perturbed_payoff");
  return types.weights().dot((payoffs.array() * rho.rows().array()).rowwise().sum().matrix());
}

}  // namespace

double perturbed_payoff(const Game& game, const Regularizer& v, NoiseLevel eps, const BayesianStrategy& sigma,
                        const BayesianStrategy& rho, const TypeSpace& types) {
  return expected_payoff(payoff_all(game, sigma, types), rho, types) - aggregate_entropy(v, eps, rho, types);
}

double entropy_adjusted_potential(const Game& game, const Regularizer& v, NoiseLevel eps,
                                  const BayesianStrategy& sigma, const TypeSpace& types) {
  return game.potential(sigma, types) - aggregate_entropy(v, eps, sigma, types);
}

double lyapunov_psi(const Game& game, const Regularizer& v, NoiseLevel eps, const BayesianStrategy& sigma,
                    const TypeSpace& types) {
  const Mat u = payoff_all(game, sigma, types);
  const BayesianStrategy beta = rbbr_map(game, v, eps, sigma, types);
  // Per-type gaps are each >= 0 by optimality of beta; summing them avoids
  // cancelling two large perturbed payoffs.
  double psi = 0.0;
  for (std::size_t k = 0; k < sigma.types(); ++k) {
    const double w = types.weight(k);
    if (w == 0.0) continue;
    const Vec uk = u.row(static_cast<Eigen::Index>(k)).transpose();
    const Vec bk = beta.row(k);
    const Vec sk = sigma.row(k);
    psi += w * (uk.dot(bk - sk) - eps.value() * (v.value(bk) - v.value(sk)));
  }
  return psi;
}

MonotonicityReport audit_monotone(const Trajectory& traj, const std::string& scalar, Direction direction,
                                  double per_step_tol) {
  const std::vector<double> values = traj.series(scalar);
  MonotonicityReport rep;
  rep.direction = direction;
  rep.tolerance = per_step_tol;
  for (std::size_t i = 1; i < values.size(); ++i) {
    const double delta = values[i] - values[i - 1];
    const double against = direction == Direction::Nondecreasing ? -delta : delta;
    if (std::isnan(delta) || against > per_step_tol) rep.violations.push_back({traj.times()[i], values[i], delta});
    if (std::isnan(delta)) rep.max_violation = std::numeric_limits<double>::infinity();
    else rep.max_violation = std::max(rep.max_violation, against);
  }
  return rep;
}

std::vector<Probe> standard_probes(const Game& game, const Regularizer& v, NoiseLevel eps, const TypeSpace& types) {
  std::vector<Probe> probes;
  if (game.has_potential())
    probes.push_back({"phi_tilde", [&game, v, eps, &types](const BayesianStrategy& s) {
                        return entropy_adjusted_potential(game, v, eps, s, types);
                      }});
  probes.push_back({"psi", [&game, v, eps, &types](const BayesianStrategy& s) {
                      return lyapunov_psi(game, v, eps, s, types);
                    }});
  return probes;
}

}  // namespace rbbr
