#include "rbbr/rbbr.h"

#include <filesystem>
#include <fstream>
#include <string>

#include "rbbr/commands.hpp"

struct rbbr_scenario {
  rbbr::Scenario scenario;
  std::string digest;
};

struct rbbr_result {
  rbbr::CommandResult result;
};

namespace {

thread_local std::string last_error;

rbbr_status status_for(rbbr::ErrorKind kind) {
  return rbbr::exit_code_for(kind) == rbbr::kExitConfigError ? RBBR_CONFIG_ERROR : RBBR_SOLVER_ERROR;
}

rbbr_status fail(rbbr_status s, std::string message) {
  last_error = std::move(message);
  return s;
}

template <class F>
rbbr_status guarded(F&& body) {
  last_error.clear();
  try {
    return body();
  } catch (const rbbr::Error& e) {
    return fail(status_for(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(RBBR_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return fail(RBBR_INTERNAL_ERROR, e.what());
  }
}

rbbr_status deliver(rbbr::CommandResult r, rbbr_result** out) {
  const int code = r.exit_code;
  *out = new rbbr_result{std::move(r)};
  return code == rbbr::kExitPropertyFailed ? RBBR_PROPERTY_FAILED : RBBR_OK;
}

rbbr_status load(rbbr::Scenario sc, rbbr_scenario** out) {
  const std::string digest = sc.digest();
  *out = new rbbr_scenario{std::move(sc), digest};
  return RBBR_OK;
}

}  // namespace

extern "C" {

const char* rbbr_version(void) { return "0.1.0"; }

const char* rbbr_last_error(void) { return last_error.c_str(); }

rbbr_status rbbr_scenario_load_file(const char* path, rbbr_scenario** out) {
  if (!path || !out) return fail(RBBR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { return load(rbbr::load_scenario_file(path), out); });
}

rbbr_status rbbr_scenario_load_string(const char* json, const char* source_name, rbbr_scenario** out) {
  if (!json || !out) return fail(RBBR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { return load(rbbr::load_scenario_string(json, source_name ? source_name : "<scenario>"), out); });
}

void rbbr_scenario_free(rbbr_scenario* scenario) { delete scenario; }

rbbr_status rbbr_scenario_set_seed(rbbr_scenario* scenario, uint64_t seed) {
  if (!scenario) return fail(RBBR_INVALID_ARGUMENT, "null scenario");
  return guarded([&] {
    scenario->scenario.set_seed(seed);
    scenario->digest = scenario->scenario.digest();
    return RBBR_OK;
  });
}

const char* rbbr_scenario_digest(const rbbr_scenario* scenario) { return scenario ? scenario->digest.c_str() : ""; }

size_t rbbr_scenario_types(const rbbr_scenario* scenario) { return scenario ? scenario->scenario.types.size() : 0; }

size_t rbbr_scenario_strategies(const rbbr_scenario* scenario) {
  return scenario ? scenario->scenario.game.strategies() : 0;
}

rbbr_status rbbr_simulate(const rbbr_scenario* scenario, const char* initial, rbbr_result** out) {
  if (!scenario || !out) return fail(RBBR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    std::optional<rbbr::InitialCondition> init;
    if (initial) init = rbbr::parse_initial(initial);
    return deliver(rbbr::cmd_simulate(scenario->scenario, init), out);
  });
}

rbbr_status rbbr_equilibrium(const rbbr_scenario* scenario, size_t starts, rbbr_result** out) {
  if (!scenario || !out) return fail(RBBR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    std::optional<std::size_t> count;
    if (starts > 0) count = starts;
    return deliver(rbbr::cmd_equilibrium(scenario->scenario, count), out);
  });
}

rbbr_status rbbr_check(const rbbr_scenario* scenario, const char* suite, rbbr_result** out) {
  if (!scenario || !out) return fail(RBBR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { return deliver(rbbr::cmd_check(scenario->scenario, suite ? suite : "all"), out); });
}

rbbr_status rbbr_sweep(const rbbr_scenario* scenario, const double* eps, size_t count, rbbr_result** out) {
  if (!scenario || !out || (count > 0 && !eps)) return fail(RBBR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    std::optional<std::vector<double>> list;
    if (eps && count > 0) list.emplace(eps, eps + count);
    return deliver(rbbr::cmd_sweep(scenario->scenario, list), out);
  });
}

int rbbr_result_exit_code(const rbbr_result* result) { return result ? result->result.exit_code : -1; }

const char* rbbr_result_summary(const rbbr_result* result) { return result ? result->result.summary.c_str() : ""; }

size_t rbbr_result_file_count(const rbbr_result* result) { return result ? result->result.files.size() : 0; }

const char* rbbr_result_file_name(const rbbr_result* result, size_t index) {
  if (!result || index >= result->result.files.size()) return nullptr;
  return result->result.files[index].name.c_str();
}

const char* rbbr_result_file_content(const rbbr_result* result, size_t index) {
  if (!result || index >= result->result.files.size()) return nullptr;
  return result->result.files[index].content.c_str();
}

rbbr_status rbbr_result_write(const rbbr_result* result, const char* out_dir) {
  if (!result || !out_dir) return fail(RBBR_INVALID_ARGUMENT, "null argument");
  last_error.clear();
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) return fail(RBBR_CONFIG_ERROR, std::string(out_dir) + ": " + ec.message());
  for (const rbbr::OutputFile& f : result->result.files) {
    const fs::path path = fs::path(out_dir) / f.name;
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    os << f.content;
    if (!os) return fail(RBBR_CONFIG_ERROR, path.string() + ": write failed");
  }
  return RBBR_OK;
}

void rbbr_result_free(rbbr_result* result) { delete result; }

rbbr_status rbbr_conjugate_argmax(rbbr_regularizer_kind kind, double q, double eps, const double* u, size_t n,
                                  double* out) {
  if (!u || !out || n == 0) return fail(RBBR_INVALID_ARGUMENT, "null argument or empty payoff");
  return guarded([&] {
    rbbr::Regularizer v = rbbr::Regularizer::shannon();
    switch (kind) {
      case RBBR_SHANNON: break;
      case RBBR_TSALLIS: v = rbbr::Regularizer::tsallis(q); break;
      case RBBR_BURG: v = rbbr::Regularizer::burg(); break;
      default: return fail(RBBR_INVALID_ARGUMENT, "unknown regularizer kind");
    }
    const rbbr::Vec payoff = Eigen::Map<const rbbr::Vec>(u, static_cast<Eigen::Index>(n));
    const rbbr::SimplexPoint y = rbbr::conjugate_argmax(v, rbbr::NoiseLevel(eps), payoff);
    Eigen::Map<rbbr::Vec>(out, static_cast<Eigen::Index>(n)) = y.entries();
    return RBBR_OK;
  });
}

rbbr_status rbbr_logit(double eps, const double* u, size_t n, double* out) {
  if (!u || !out || n == 0) return fail(RBBR_INVALID_ARGUMENT, "null argument or empty payoff");
  return guarded([&] {
    const rbbr::Vec payoff = Eigen::Map<const rbbr::Vec>(u, static_cast<Eigen::Index>(n));
    Eigen::Map<rbbr::Vec>(out, static_cast<Eigen::Index>(n)) = rbbr::logit_map(rbbr::NoiseLevel(eps), payoff).entries();
    return RBBR_OK;
  });
}

}  // extern "C"
