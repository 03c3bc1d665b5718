#include "rbbr/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "check_suites.hpp"
#include "rbbr/diagnostics.hpp"

namespace rbbr {

namespace {

std::string banner(const char* command, const Scenario& sc) {
  return "# rbbr " + std::string(command) + " scenario=" + csv_field(sc.name) + " digest=" + sc.digest() + "\n";
}

std::string join(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  return line + "\n";
}

std::vector<std::string> aggregate_columns(std::size_t n) {
  std::vector<std::string> cols;
  for (std::size_t j = 1; j <= n; ++j) cols.push_back("E_" + std::to_string(j));
  return cols;
}

std::vector<std::string> strategy_columns(std::size_t k, std::size_t n) {
  std::vector<std::string> cols;
  for (std::size_t a = 1; a <= k; ++a)
    for (std::size_t j = 1; j <= n; ++j) cols.push_back("sigma_" + std::to_string(a) + "_" + std::to_string(j));
  return cols;
}

void append_numbers(std::vector<std::string>& cells, const Vec& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) cells.push_back(format_number(v(i)));
}

void append_rows(std::vector<std::string>& cells, const Mat& m) {
  for (Eigen::Index a = 0; a < m.rows(); ++a)
    for (Eigen::Index j = 0; j < m.cols(); ++j) cells.push_back(format_number(m(a, j)));
}

template <class... Parts>
std::vector<std::string> concat(std::vector<std::string> head, const Parts&... parts) {
  (head.insert(head.end(), parts.begin(), parts.end()), ...);
  return head;
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config:
    case ErrorKind::Domain:
    case ErrorKind::Shape:
      return kExitConfigError;
    case ErrorKind::Drift:
    case ErrorKind::Solver:
    case ErrorKind::Step:
      return kExitSolverError;
  }
  return kExitSolverError;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

CommandResult cmd_simulate(const Scenario& sc, const std::optional<InitialCondition>& initial) {
  const NoiseLevel eps = sc.noise();
  const BayesianStrategy start = sc.initial_strategy(initial.value_or(sc.initial));
  std::vector<Probe> probes = standard_probes(sc.game, sc.regularizer, eps, sc.types);
  probes.push_back({"distance", [&](const BayesianStrategy& s) { return strong_distance(s, start, sc.types); }});
  const Trajectory traj = integrate(sc.game, sc.regularizer, eps, start, sc.types, sc.integrator, probes);

  const bool potential = sc.game.has_potential();
  std::vector<std::string> names{"t", "residual"};
  if (potential) names.push_back("phi_tilde");
  names.push_back("psi");
  names.push_back("distance");

  std::string csv = banner("simulate", sc) + join(names);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const auto& d = traj.diagnostics(i);
    std::vector<std::string> cells{format_number(traj.times()[i])};
    for (std::size_t c = 1; c < names.size(); ++c) cells.push_back(format_number(d.at(names[c])));
    csv += join(cells);
  }
  const double final_residual = traj.diagnostics(traj.size() - 1).at("residual");
  CommandResult out;
  out.files.push_back({sc.outputs.simulate, std::move(csv)});
  out.summary = std::to_string(traj.size()) + " samples to t=" + format_number(traj.times().back()) +
                ", final residual " + format_number(final_residual);
  return out;
}

CommandResult cmd_equilibrium(const Scenario& sc, std::optional<std::size_t> starts_opt) {
  const std::size_t starts = starts_opt.value_or(sc.starts);
  if (starts == 0) throw Error(ErrorKind::Config, "starts must be at least 1");
  const NoiseLevel eps = sc.noise();
  const std::size_t k = sc.types.size();
  const std::size_t n = sc.game.strategies();
  const bool explicit_first = !std::holds_alternative<SeededStart>(sc.initial);

  struct Distinct {
    std::size_t first_start;
    std::size_t multiplicity;
    EquilibriumResult result;
  };
  std::vector<Distinct> distinct;

  std::string csv = banner("equilibrium", sc) +
                    join(concat(std::vector<std::string>{"start", "converged", "residual", "iterations", "method"},
                                aggregate_columns(n), strategy_columns(k, n)));
  std::size_t converged = 0;
  for (std::size_t s = 0; s < starts; ++s) {
    const BayesianStrategy init = (s == 0 && explicit_first)
                                      ? sc.initial_strategy(sc.initial)
                                      : random_strategy(sc.types, n, mix_seed(sc.seed, s));
    const EquilibriumResult r = solve_fixed_point(sc.game, sc.regularizer, eps, init, sc.types, sc.solver);
    std::vector<std::string> cells{std::to_string(s), r.converged ? "1" : "0", format_number(r.residual),
                                   std::to_string(r.iterations), r.newton ? "newton" : "picard"};
    append_numbers(cells, expectation(r.strategy, sc.types).entries());
    append_rows(cells, r.strategy.rows());
    csv += join(cells);
    if (!r.converged) continue;
    ++converged;
    auto hit = std::find_if(distinct.begin(), distinct.end(), [&](const Distinct& d) {
      return strong_distance(d.result.strategy, r.strategy, sc.types) <= kDedupDistance;
    });
    if (hit != distinct.end()) ++hit->multiplicity;
    else distinct.push_back({s, 1, r});
  }

  std::string dcsv = banner("equilibrium", sc) +
                     join(concat(std::vector<std::string>{"equilibrium", "first_start", "multiplicity", "residual"},
                                 aggregate_columns(n), strategy_columns(k, n)));
  for (std::size_t i = 0; i < distinct.size(); ++i) {
    const Distinct& d = distinct[i];
    std::vector<std::string> cells{std::to_string(i), std::to_string(d.first_start), std::to_string(d.multiplicity),
                                   format_number(d.result.residual)};
    append_numbers(cells, expectation(d.result.strategy, sc.types).entries());
    append_rows(cells, d.result.strategy.rows());
    dcsv += join(cells);
  }

  CommandResult out;
  out.files.push_back({sc.outputs.equilibrium, std::move(csv)});
  out.files.push_back({sc.outputs.equilibria, std::move(dcsv)});
  out.summary = std::to_string(converged) + " of " + std::to_string(starts) + " starts converged; " +
                std::to_string(distinct.size()) + " distinct equilibria";
  return out;
}

CommandResult cmd_check(const Scenario& sc, const std::string& suite) {
  std::vector<checks::Line> lines;
  auto run = [&](std::vector<checks::Line> part) { lines.insert(lines.end(), part.begin(), part.end()); };
  const bool all = suite == "all";
  if (!all && suite != "regularizers" && suite != "dynamics" && suite != "potential" && suite != "nsd")
    throw Error(ErrorKind::Config,
                "unknown check suite '" + suite + "' (expected regularizers, dynamics, potential, nsd or all)");
  if (all || suite == "regularizers") run(checks::regularizer_suite(sc));
  if (all || suite == "dynamics") run(checks::dynamics_suite(sc));
  if (all || suite == "potential") run(checks::potential_suite(sc));
  if (all || suite == "nsd") run(checks::nsd_suite(sc));

  std::string csv = banner("check", sc) + join({"suite", "property", "status", "worst", "limit", "detail"});
  std::size_t pass = 0, fail = 0, skip = 0;
  for (const checks::Line& l : lines) {
    csv += join({l.suite, l.property, checks::to_string(l.status), format_number(l.worst), format_number(l.limit),
                 csv_field(l.detail)});
    if (l.status == checks::Status::Pass) ++pass;
    if (l.status == checks::Status::Fail) ++fail;
    if (l.status == checks::Status::Skip) ++skip;
  }
  CommandResult out;
  out.exit_code = fail ? kExitPropertyFailed : kExitOk;
  out.files.push_back({sc.outputs.check, std::move(csv)});
  out.summary = std::to_string(pass) + " passed, " + std::to_string(fail) + " failed, " + std::to_string(skip) +
                " skipped";
  return out;
}

CommandResult cmd_sweep(const Scenario& sc, const std::optional<std::vector<double>>& eps_opt) {
  std::vector<double> eps_list = eps_opt.value_or(sc.sweep);
  if (eps_list.empty()) eps_list = {2.0, 1.0, 0.5, 0.1, 0.05};
  for (double e : eps_list)
    if (!(e > 0.0) || !std::isfinite(e)) throw Error(ErrorKind::Config, "noise levels must be positive and finite");
  const std::size_t n = sc.game.strategies();
  const auto points = epsilon_sweep(sc.game, sc.regularizer, eps_list, sc.types, sc.seed, sc.solver,
                                    sc.initial_strategy(sc.initial));

  std::string csv = banner("sweep", sc) +
                    join(concat(std::vector<std::string>{"epsilon", "converged", "residual", "iterations"},
                                aggregate_columns(n)));
  std::size_t converged = 0;
  for (const SweepPoint& p : points) {
    std::vector<std::string> cells{format_number(p.epsilon), p.result.converged ? "1" : "0",
                                   format_number(p.result.residual), std::to_string(p.result.iterations)};
    append_numbers(cells, expectation(p.result.strategy, sc.types).entries());
    csv += join(cells);
    converged += p.result.converged ? 1 : 0;
  }
  CommandResult out;
  out.files.push_back({sc.outputs.sweep, std::move(csv)});
  out.summary = std::to_string(converged) + " of " + std::to_string(points.size()) + " noise levels converged";
  return out;
}

}  // namespace rbbr
