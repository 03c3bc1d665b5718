#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rbbr/equilibrium.hpp"

namespace rbbr {

struct SeededStart {};
struct UniformStart {};
struct VertexStart {
  std::size_t index = 0;
};
struct ExplicitStart {
  Mat rows;
};
using InitialCondition = std::variant<SeededStart, UniformStart, VertexStart, ExplicitStart>;

/// "seed", "uniform" or "vertex:<k>".
InitialCondition parse_initial(const std::string& text);

struct OutputNames {
  std::string simulate = "trajectory.csv";
  std::string equilibrium = "equilibrium.csv";
  std::string equilibria = "equilibria_distinct.csv";
  std::string check = "check_report.csv";
  std::string sweep = "sweep.csv";
};

/// A fully validated scenario document.
struct Scenario {
  std::string name;
  TypeSpace types;
  Game game;
  Regularizer regularizer;
  double epsilon;
  IntegratorConfig integrator;
  SolverConfig solver;
  std::uint64_t seed;
  InitialCondition initial;
  std::size_t starts;
  std::vector<double> sweep;
  OutputNames outputs;
  /// Canonical (key-sorted, compact) JSON of the document with the effective seed.
  std::string canonical;

  NoiseLevel noise() const { return NoiseLevel(epsilon); }
  /// FNV-1a 64 of `canonical`, as 16 hex digits.
  std::string digest() const;
  /// Overrides the seed and refreshes the canonical text.
  void set_seed(std::uint64_t new_seed);
  BayesianStrategy initial_strategy(const InitialCondition& init) const;
};

/// Parses and validates a scenario. Any problem raises Error(Config) whose
/// message starts with "<source>:<line>:" and names the JSON pointer.
Scenario load_scenario_string(const std::string& text, const std::string& source = "<scenario>");
Scenario load_scenario_file(const std::string& path);

}  // namespace rbbr
