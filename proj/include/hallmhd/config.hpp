#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hallmhd/assembly.hpp"
#include "hallmhd/linalg.hpp"
#include "hallmhd/mesh.hpp"
#include "hallmhd/scheme.hpp"

namespace hallmhd {

enum class Scenario { temporal_convergence, spatial_convergence, structure_preservation, custom };
enum class InitialCondition { structure, manufactured };

std::string_view to_string(Scenario s);
std::string_view to_string(InitialCondition ic);

struct OutputConfig {
  std::string directory = "output";
  int vtk_every = 0;  // iterations between snapshots; 0 disables
  int vtk_samples = 3;
  int checkpoint_every = 0;
};

struct SweepConfig {
  std::vector<double> dt;  // temporal sweeps
  std::vector<int> K;      // spatial sweeps
  int reference_ratio = 0;
};

struct RunConfig {
  Scenario scenario = Scenario::custom;
  int K = 1;
  int N = 1;
  BoxDomain domain;
  MappingSpec mapping;
  SchemeParams scheme;
  bool m_in_B = true;
  bool m_in_H = true;
  InitialCondition initial = InitialCondition::structure;
  AssemblyOptions assembly;
  SolverOptions solver;
  OutputConfig output;
  SweepConfig sweep;
  std::string restart;  // checkpoint to resume from; empty starts at t = 0
  int threads = 0;      // 0 keeps HALLMHD_THREADS / hardware default
  bool force_scalar = false;

  bool is_sweep() const {
    return scenario == Scenario::temporal_convergence || scenario == Scenario::spatial_convergence;
  }
};

/// Parses a JSON document (empty text counts as {}), fills scenario defaults
/// and applies "dotted.key=value" overrides, where value is read as JSON and
/// falls back to a plain string. Throws ConfigError naming the offending path.
RunConfig parse_config(std::string_view text, const std::vector<std::string>& overrides = {});
/// Same, reading the document from a file. Throws ConfigError if unreadable.
RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

/// The fully resolved configuration as pretty-printed JSON; parse_config on it
/// reproduces the same RunConfig.
std::string to_json(const RunConfig& config);

}  // namespace hallmhd
