#include "check_suites.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "rbbr/commands.hpp"
#include "rbbr/diagnostics.hpp"

namespace rbbr::checks {

namespace {

using json = nlohmann::json;

json to_json(const Vec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json to_json(const Mat& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(to_json(Vec(m.row(i).transpose())));
  return out;
}

Line judge(const char* suite, const char* property, double worst, double limit, const json& probe) {
  Line l{suite, property, worst <= limit ? Status::Pass : Status::Fail, worst, limit, ""};
  if (l.status == Status::Fail && !probe.is_null()) l.detail = probe.dump();
  return l;
}

Line skipped(const char* suite, const char* property, std::string why) {
  return Line{suite, property, Status::Skip, 0.0, 0.0, std::move(why)};
}

Line note(const char* suite, const char* property, double worst, double limit, std::string remark) {
  return Line{suite, property, Status::Note, worst, limit, std::move(remark)};
}

Vec random_payoff(Rng& rng, std::size_t n) {
  Vec u(static_cast<Eigen::Index>(n));
  for (Eigen::Index j = 0; j < u.size(); ++j) u(j) = rng.uniform(-5.0, 5.0);
  return u;
}

json payoff_probe(const Scenario& sc, const Vec& u) {
  return {{"regularizer", sc.regularizer.name()}, {"epsilon", sc.epsilon}, {"u", to_json(u)}};
}

json strategy_probe(const BayesianStrategy& s) { return {{"sigma", to_json(s.rows())}}; }

double euler_dt(const Scenario& sc) { return std::min(sc.integrator.dt, 1.0); }

IntegratorConfig euler_config(const Scenario& sc, double horizon) {
  IntegratorConfig cfg;
  cfg.method = Method::Euler;
  cfg.dt = euler_dt(sc);
  cfg.horizon = std::max(horizon, cfg.dt);
  cfg.record_every = 1;
  return cfg;
}

/// Point at strong distance `dist` from sigma along a segment toward a random strategy.
BayesianStrategy nearby(const BayesianStrategy& sigma, const TypeSpace& types, double dist, std::uint64_t seed) {
  const BayesianStrategy rho = random_strategy(types, sigma.strategies(), seed);
  const double gap = strong_distance(rho, sigma, types);
  if (gap <= dist) return rho;
  return relax_toward(sigma, rho, dist / gap);
}

}  // namespace

const char* to_string(Status s) {
  switch (s) {
    case Status::Pass: return "PASS";
    case Status::Fail: return "FAIL";
    case Status::Skip: return "SKIP";
    case Status::Note: return "NOTE";
  }
  return "?";
}

std::vector<Line> regularizer_suite(const Scenario& sc) {
  constexpr const char* kSuite = "regularizers";
  const Regularizer& v = sc.regularizer;
  const NoiseLevel eps = sc.noise();
  const std::size_t n = sc.game.strategies();
  const double gamma = v.strong_convexity_modulus();
  Rng rng(mix_seed(sc.seed, 101));
  std::vector<Line> out;

  {
    double worst = 0.0;
    json probe;
    for (int i = 0; i < 200; ++i) {
      const Vec u = random_payoff(rng, n);
      const double r = kkt_residual(v, eps, u, conjugate_argmax(v, eps, u).entries()) / (1.0 + u.cwiseAbs().maxCoeff());
      if (r > worst) worst = r, probe = payoff_probe(sc, u);
    }
    out.push_back(judge(kSuite, "kkt_stationarity", worst, 1e-8, probe));
  }
  {
    double worst = -std::numeric_limits<double>::infinity();
    json probe;
    for (int i = 0; i < 200; ++i) {
      const Vec u = random_payoff(rng, n);
      const Vec y = conjugate_argmax(v, eps, u).entries();
      const double best = perturbed_objective(v, eps, u, y);
      for (int j = 0; j < 20; ++j) {
        Vec z = random_simplex_point(rng, n);
        if (j % 2 == 1) z = (1.0 - 1e-3) * y + 1e-3 * z;  // near the optimum
        const double gain = perturbed_objective(v, eps, u, z) - best;
        if (gain > worst) worst = gain, probe = payoff_probe(sc, u);
      }
    }
    out.push_back(judge(kSuite, "optimality", worst, 1e-12, probe));
  }
  {
    double worst = -std::numeric_limits<double>::infinity();
    json probe;
    for (int i = 0; i < 1000; ++i) {
      const Vec u = random_payoff(rng, n);
      Vec w = random_payoff(rng, n);
      if (i % 2 == 1) w = u + 1e-3 * w;
      const double lhs = (conjugate_argmax(v, eps, u).entries() - conjugate_argmax(v, eps, w).entries()).norm();
      const double excess = lhs - (u - w).norm() / (eps.value() * gamma);
      if (excess > worst) worst = excess, probe = {{"u", to_json(u)}, {"u_alt", to_json(w)}};
    }
    out.push_back(judge(kSuite, "lipschitz", worst, 1e-9, probe));
  }
  {
    double worst = 0.0;
    json probe;
    for (int i = 0; i < 200; ++i) {
      const Vec u = random_payoff(rng, n);
      const double c = rng.uniform(-10.0, 10.0);
      const Vec shifted = (u.array() + c).matrix();
      const double d =
          (conjugate_argmax(v, eps, u).entries() - conjugate_argmax(v, eps, shifted).entries()).cwiseAbs().maxCoeff();
      if (d > worst) worst = d, probe = {{"u", to_json(u)}, {"shift", c}};
    }
    out.push_back(judge(kSuite, "shift_invariance", worst, 1e-10, probe));
  }
  if (v.kind() == RegularizerKind::Shannon) {
    const Regularizer base = Regularizer::shannon();
    const NoiseLevel eff(eps.value() * v.scale());
    double worst = 0.0;
    json probe;
    for (int i = 0; i < 1000; ++i) {
      const Vec u = random_payoff(rng, n);
      const double d =
          (logit_map(eff, u).entries() - conjugate_argmax(base, eff, u).entries()).cwiseAbs().maxCoeff();
      if (d > worst) worst = d, probe = payoff_probe(sc, u);
    }
    out.push_back(judge(kSuite, "logit_identity", worst, 1e-10, probe));
  } else {
    out.push_back(skipped(kSuite, "logit_identity", "closed logit form applies to Shannon only"));
  }
  {
    constexpr double h = 1e-5;
    double worst = 0.0;
    json probe;
    for (int i = 0; i < 100; ++i) {
      const Vec u = random_payoff(rng, n);
      const Vec y = conjugate_argmax(v, eps, u).entries();
      for (std::size_t j = 0; j < n; ++j) {
        Vec up = u, dn = u;
        up(static_cast<Eigen::Index>(j)) += h;
        dn(static_cast<Eigen::Index>(j)) -= h;
        const double fd = (conjugate_value(v, eps, up) - conjugate_value(v, eps, dn)) / (2.0 * h);
        const double d = std::abs(fd - y(static_cast<Eigen::Index>(j)));
        if (d > worst) worst = d, probe = payoff_probe(sc, u);
      }
    }
    out.push_back(judge(kSuite, "conjugate_gradient", worst, 1e-6, probe));
  }
  return out;
}

std::vector<Line> dynamics_suite(const Scenario& sc) {
  constexpr const char* kSuite = "dynamics";
  const Game& g = sc.game;
  const Regularizer& v = sc.regularizer;
  const NoiseLevel eps = sc.noise();
  const TypeSpace& T = sc.types;
  const std::size_t n = g.strategies();
  const double alpha = 1.0 / (eps.value() * v.strong_convexity_modulus());
  const BayesianStrategy start = sc.initial_strategy(sc.initial);
  Rng rng(mix_seed(sc.seed, 202));
  std::vector<Line> out;

  {
    double worst = 0.0;
    json probe;
    for (int i = 0; i < 200; ++i) {
      const BayesianStrategy s = random_probe_strategy(rng, T, n);
      const double d = rbbr_field(g, v, eps, s, T).rows().rowwise().sum().cwiseAbs().maxCoeff();
      if (d > worst) worst = d, probe = strategy_probe(s);
    }
    out.push_back(judge(kSuite, "field_tangent", worst, 1e-12, probe));
  }

  const IntegratorConfig cfg = euler_config(sc, std::min(sc.integrator.horizon, 50.0));
  const Trajectory traj = integrate(g, v, eps, start, T, cfg);
  {
    double worst = 0.0;
    for (const BayesianStrategy& s : traj.states()) {
      const Mat& r = s.rows();
      worst = std::max({worst, (r.rowwise().sum().array() - 1.0).abs().maxCoeff(), -r.minCoeff()});
    }
    out.push_back(judge(kSuite, "euler_simplex", worst, 1e-12, strategy_probe(start)));
  }
  {
    IntegratorConfig gcfg = sc.integrator;
    gcfg.horizon = std::min(gcfg.horizon, 10.0);
    if (gcfg.horizon < gcfg.dt) gcfg.horizon = gcfg.dt;
    const BayesianStrategy alt = nearby(start, T, 1e-3, mix_seed(sc.seed, 203));
    const GronwallReport rep = gronwall_check(g, v, eps, start, alt, T, gcfg);
    Line l = judge(kSuite, "gronwall", rep.max_ratio, 1.0, json{{"sigma", to_json(start.rows())}, {"sigma_alt", to_json(alt.rows())}});
    l.status = rep.holds ? Status::Pass : Status::Fail;
    if (rep.holds) l.detail.clear();
    out.push_back(l);
  }
  if (!T.has_metric()) {
    out.push_back(skipped(kSuite, "invariance_interior", "scenario declares no type metric"));
    out.push_back(skipped(kSuite, "invariance_lipschitz", "scenario declares no type metric"));
    out.push_back(skipped(kSuite, "beta_type_lipschitz", "scenario declares no type metric"));
  } else {
    const InvarianceReport rep = invariance_check(g, v, eps, traj, T, alpha, min_row_entry(start));
    const double dip = std::max(0.0, rep.interior_floor - rep.min_entry);
    Line interior = judge(kSuite, "invariance_interior", dip, 1e-15, strategy_probe(start));
    if (rep.interior_holds) interior.status = Status::Pass, interior.detail.clear();
    else interior.status = Status::Fail;
    out.push_back(interior);
    if (rep.type_lipschitz_game && rep.initial_lipschitz) {
      out.push_back(judge(kSuite, "invariance_lipschitz", rep.max_lipschitz, alpha + kInvarianceSlack, strategy_probe(start)));
    } else {
      out.push_back(note(kSuite, "invariance_lipschitz", rep.max_lipschitz, alpha,
                         rep.type_lipschitz_game ? "initial strategy is not alpha-Lipschitz in type"
                                                 : "game is not 1-Lipschitz in type under this metric"));
    }
    if (rep.type_lipschitz_game) {
      double worst = 0.0;
      json probe;
      for (int i = 0; i < 1000; ++i) {
        const BayesianStrategy s = random_probe_strategy(rng, T, n);
        const double lip = lipschitz_in_type(rbbr_map(g, v, eps, s, T), T);
        if (lip > worst) worst = lip, probe = strategy_probe(s);
      }
      out.push_back(judge(kSuite, "beta_type_lipschitz", worst, alpha + kInvarianceSlack, probe));
    } else {
      out.push_back(skipped(kSuite, "beta_type_lipschitz", "game is not 1-Lipschitz in type under this metric"));
    }
  }
  {
    constexpr std::size_t kIters = 50;
    SolverConfig scfg = sc.solver;
    scfg.damping = euler_dt(sc);
    scfg.adaptive = false;
    scfg.newton_fallback = false;
    scfg.tol = std::numeric_limits<double>::min();
    scfg.max_iter = kIters;
    std::vector<BayesianStrategy> iterates;
    solve_fixed_point(g, v, eps, start, T, scfg, [&](std::size_t, const BayesianStrategy& s) { iterates.push_back(s); });
    IntegratorConfig ecfg = euler_config(sc, static_cast<double>(kIters) * scfg.damping);
    const Trajectory euler = integrate(g, v, eps, start, T, ecfg);
    double worst = 0.0;
    const std::size_t m = std::min(iterates.size(), euler.size());
    for (std::size_t i = 0; i < m; ++i)
      worst = std::max(worst, (iterates[i].rows() - euler.state(i).rows()).cwiseAbs().maxCoeff());
    out.push_back(judge(kSuite, "picard_euler_coincidence", worst, 1e-12, strategy_probe(start)));
  }
  return out;
}

std::vector<Line> potential_suite(const Scenario& sc) {
  constexpr const char* kSuite = "potential";
  const Game& g = sc.game;
  const TypeSpace& T = sc.types;
  std::vector<Line> out;
  if (!g.has_potential()) {
    for (const char* p : {"gradient_identity", "phi_tilde_monotone", "strict_increase"})
      out.push_back(skipped(kSuite, p, "game declares no potential"));
    return out;
  }
  const Regularizer& v = sc.regularizer;
  const NoiseLevel eps = sc.noise();
  const std::size_t n = g.strategies();
  {
    Rng rng(mix_seed(sc.seed, 301));
    const BayesianStrategy probe_at(0.5 * random_probe_strategy(rng, T, n).rows() +
                                    0.5 * BayesianStrategy::uniform(T.size(), n).rows());
    const PotentialGradientCheck chk = check_potential_gradient(g, T, probe_at, 100, rng.next());
    out.push_back(judge(kSuite, "gradient_identity", chk.max_residual, 1e-6, strategy_probe(probe_at)));
  }
  const BayesianStrategy start = sc.initial_strategy(sc.initial);
  IntegratorConfig cfg = sc.integrator;
  cfg.method = Method::Euler;
  cfg.dt = euler_dt(sc);
  cfg.record_every = 1;
  const Trajectory traj = integrate(g, v, eps, start, T, cfg, standard_probes(g, v, eps, T));
  const MonotonicityReport rep = audit_monotone(traj, "phi_tilde", Direction::Nondecreasing, 1e-9);
  json probe = strategy_probe(start);
  if (!rep.violations.empty()) probe["first_violation_time"] = rep.violations.front().time;
  out.push_back(judge(kSuite, "phi_tilde_monotone", rep.max_violation, rep.tolerance, probe));

  const std::vector<double> phi = traj.series("phi_tilde");
  const std::vector<double> res = traj.series("residual");
  double stalls = 0.0;
  for (std::size_t i = 0; i + 1 < phi.size(); ++i)
    if (res[i] > 1e-6 && !(phi[i + 1] > phi[i])) stalls += 1.0;
  out.push_back(judge(kSuite, "strict_increase", stalls, 0.0, probe));
  return out;
}

std::vector<Line> nsd_suite(const Scenario& sc) {
  constexpr const char* kSuite = "nsd";
  const Game& g = sc.game;
  const Regularizer& v = sc.regularizer;
  const NoiseLevel eps = sc.noise();
  const TypeSpace& T = sc.types;
  const std::size_t n = g.strategies();
  Rng rng(mix_seed(sc.seed, 401));
  std::vector<Line> out;

  const NsdReport rep = is_negative_semidefinite(g, T, 1000, rng.next());
  {
    std::string remark = rep.verdict ? "negative semidefinite" : "not negative semidefinite";
    if (rep.max_tangent_eigenvalue) remark += "; max tangent eigenvalue " + format_number(*rep.max_tangent_eigenvalue);
    out.push_back(note(kSuite, "nsd_precheck", rep.worst_value, kNsdSampleTol, remark));
  }
  if (rep.exact_verdict) {
    constexpr double kThreshold = 1e-7;
    double worst = -std::numeric_limits<double>::infinity();
    json probe;
    for (int i = 0; i < 1000; ++i) {
      const BayesianStrategy s = random_probe_strategy(rng, T, n);
      const SignedStrategy d = random_tangent_direction(rng, T, n);
      const double room = admissible_step(s, d);
      if (!(room > 0.0)) continue;
      const double form = sde_directional_form(g, T, s, d, std::min(kFiniteDifferenceStep, 0.5 * room));
      if (form > worst) worst = form, probe = {{"sigma", to_json(s.rows())}, {"direction", to_json(d.rows())}};
    }
    const bool sde = worst <= kThreshold;
    Line l{kSuite, "sde_equivalence", sde == *rep.exact_verdict ? Status::Pass : Status::Fail, worst, kThreshold, ""};
    if (l.status == Status::Fail) l.detail = probe.dump();
    out.push_back(l);
  } else {
    out.push_back(skipped(kSuite, "sde_equivalence", "exact verdict needs a matrix game"));
  }
  {
    double worst = -std::numeric_limits<double>::infinity();
    json probe;
    for (int i = 0; i < 1000; ++i) {
      const BayesianStrategy s = random_probe_strategy(rng, T, n);
      const double neg = -lyapunov_psi(g, v, eps, s, T);
      if (neg > worst) worst = neg, probe = strategy_probe(s);
    }
    out.push_back(judge(kSuite, "psi_nonnegative", worst, 1e-12, probe));
  }
  const BayesianStrategy start = sc.initial_strategy(sc.initial);
  {
    std::vector<BayesianStrategy> probes;
    for (int i = 0; i < 200; ++i) probes.push_back(random_probe_strategy(rng, T, n));
    SolverConfig scfg = sc.solver;
    scfg.tol = std::min(scfg.tol, 1e-10);
    const EquilibriumResult eq = solve_fixed_point(g, v, eps, start, T, scfg);
    if (eq.converged) probes.push_back(eq.strategy);
    double mismatches = 0.0;
    json probe;
    for (const BayesianStrategy& s : probes) {
      const bool flat = lyapunov_psi(g, v, eps, s, T) <= 1e-10;
      const bool rest = residual(g, v, eps, s, T) <= 1e-8;
      if (flat != rest) {
        mismatches += 1.0;
        probe = strategy_probe(s);
      }
    }
    out.push_back(judge(kSuite, "psi_rest_point", mismatches, 0.0, probe));
  }
  if (!rep.verdict) {
    for (const char* p : {"psi_monotone", "psi_terminal"})
      out.push_back(skipped(kSuite, p, "hypothesis unmet: game is not negative semidefinite"));
    return out;
  }
  IntegratorConfig cfg = euler_config(sc, 200.0);
  const Trajectory traj = integrate(g, v, eps, start, T, cfg, {{"psi", [&](const BayesianStrategy& s) {
                                                                  return lyapunov_psi(g, v, eps, s, T);
                                                                }}});
  const MonotonicityReport mono = audit_monotone(traj, "psi", Direction::Nonincreasing, 1e-9);
  json probe = strategy_probe(start);
  if (!mono.violations.empty()) probe["first_violation_time"] = mono.violations.front().time;
  out.push_back(judge(kSuite, "psi_monotone", mono.max_violation, mono.tolerance, probe));
  const double psi_end = traj.series("psi").back();
  const double res_end = traj.series("residual").back();
  Line term = judge(kSuite, "psi_terminal", psi_end, 1e-8, probe);
  if (res_end > 1e-6) term.status = Status::Fail;
  term.detail = (term.status == Status::Fail ? probe.dump() + " " : std::string()) +
                "terminal residual " + format_number(res_end);
  out.push_back(term);
  return out;
}

}  // namespace rbbr::checks
