#include "rbbr/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace rbbr {

void SolverConfig::validate() const {
  if (!(damping > 0.0 && damping <= 1.0)) throw Error(ErrorKind::Config, "solver damping must lie in (0,1]");
  if (!(tol > 0.0)) throw Error(ErrorKind::Config, "solver tolerance must be positive");
  if (max_iter == 0) throw Error(ErrorKind::Config, "solver max_iter must be positive");
  if (adaptive && (patience == 0 || !(min_damping > 0.0)))
    throw Error(ErrorKind::Config, "adaptive damping needs patience >= 1 and min_damping > 0");
}

namespace {

/// Newton's method with a finite-difference Jacobian on the reduced equation
/// Q'(B(E0 + Q z) - (E0 + Q z)) = 0, where B(E) = sum_k w_k beta_k(E) and Q
/// spans the zero-sum subspace. Every fixed point of the dynamic has the
/// form sigma_k = beta_k(E) for a root E. Returns the strategy built from the
/// final aggregate.
BayesianStrategy newton_on_aggregate(const Game& game, const Regularizer& v, NoiseLevel eps, const TypeSpace& types,
                                     const Vec& start, double tol) {
  const std::size_t n = game.strategies();
  const std::size_t k = types.size();
  const Mat q = tangent_basis(n);
  auto respond = [&](const Vec& e) {
    Mat rows(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(n));
    for (std::size_t a = 0; a < k; ++a)
      rows.row(static_cast<Eigen::Index>(a)) = conjugate_argmax(v, eps, game.payoff_at(e, a)).entries().transpose();
    return rows;
  };
  auto reduced = [&](const Vec& z) {
    const Vec e = start + q * z;
    return Vec(q.transpose() * (aggregate(respond(e), types) - e));
  };

  Vec z = Vec::Zero(static_cast<Eigen::Index>(n - 1));
  Vec f = reduced(z);
  for (int it = 0; it < 100 && f.norm() > 1e-3 * tol; ++it) {
    Mat jac(f.size(), z.size());
    for (Eigen::Index j = 0; j < z.size(); ++j) {
      constexpr double h = 1e-7;
      Vec up = z, dn = z;
      up(j) += h;
      dn(j) -= h;
      jac.col(j) = (reduced(up) - reduced(dn)) / (2.0 * h);
    }
    const Vec step = jac.colPivHouseholderQr().solve(-f);
    if (!step.allFinite()) break;
    double lambda = 1.0;
    Vec trial = z + step;
    Vec ft = reduced(trial);
    while (!(ft.norm() < (1.0 - 1e-4 * lambda) * f.norm()) && lambda > 1e-6) {
      lambda *= 0.5;
      trial = z + lambda * step;
      ft = reduced(trial);
    }
    if (!(ft.norm() < f.norm())) break;
    z = trial;
    f = ft;
  }
  return BayesianStrategy(respond(start + q * z));
}

}  // namespace

double residual(const Game& game, const Regularizer& v, NoiseLevel eps, const BayesianStrategy& sigma,
                const TypeSpace& types) {
  return strong_distance(rbbr_map(game, v, eps, sigma, types), sigma, types);
}

EquilibriumResult solve_fixed_point(const Game& game, const Regularizer& v, NoiseLevel eps,
                                    const BayesianStrategy& sigma_init, const TypeSpace& types,
                                    const SolverConfig& cfg, const IterateObserver& observer) {
  cfg.validate();
  BayesianStrategy sigma = sigma_init;
  BayesianStrategy best = sigma_init;
  double best_residual = std::numeric_limits<double>::infinity();
  double damping = cfg.damping;
  std::size_t stale = 0;

  for (std::size_t it = 0; it <= cfg.max_iter; ++it) {
    if (observer) observer(it, sigma);
    const BayesianStrategy beta = rbbr_map(game, v, eps, sigma, types);
    const double r = strong_distance(beta, sigma, types);
    if (r <= cfg.tol) return {sigma, r, it, true, damping, false};
    if (r < best_residual) {
      best_residual = r;
      best = sigma;
      stale = 0;
    } else if (cfg.adaptive && ++stale >= cfg.patience && damping > cfg.min_damping) {
      // Back off: shorter steps from the best point seen so far.
      damping = std::max(cfg.min_damping, 0.5 * damping);
      stale = 0;
      sigma = best;
      continue;
    }
    if (it == cfg.max_iter) break;
    if (cfg.newton_fallback && it > 0 && it == cfg.newton_after) {
      try {
        const BayesianStrategy polished =
            newton_on_aggregate(game, v, eps, types, expectation(best, types).entries(), cfg.tol);
        const double rn = residual(game, v, eps, polished, types);
        if (rn <= cfg.tol) return {polished, rn, it, true, damping, true};
      } catch (const Error&) {
        // fall through to further Picard iterations
      }
    }
    sigma = relax_toward(sigma, beta, damping);
  }
  return {best, best_residual, cfg.max_iter, false, damping, false};
}

std::vector<SweepPoint> epsilon_sweep(const Game& game, const Regularizer& v, std::vector<double> eps_list,
                                      const TypeSpace& types, std::uint64_t seed, const SolverConfig& cfg,
                                      const std::optional<BayesianStrategy>& warm_start) {
  if (eps_list.empty()) throw Error(ErrorKind::Config, "epsilon sweep needs at least one noise level");
  for (double e : eps_list)
    if (!(e > 0.0) || !std::isfinite(e)) throw Error(ErrorKind::Config, "sweep noise levels must be positive");
  std::sort(eps_list.begin(), eps_list.end(), std::greater<>());

  BayesianStrategy start = warm_start ? *warm_start : random_strategy(types, game.strategies(), seed);
  std::vector<SweepPoint> out;
  out.reserve(eps_list.size());
  for (double e : eps_list) {
    EquilibriumResult res = solve_fixed_point(game, v, NoiseLevel(e), start, types, cfg);
    start = res.strategy;
    out.push_back({e, std::move(res)});
  }
  return out;
}

}  // namespace rbbr
