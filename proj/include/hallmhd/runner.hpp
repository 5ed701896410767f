#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "hallmhd/config.hpp"
#include "hallmhd/mms.hpp"

namespace hallmhd {

/// psi e_z with psi = -z (z - 1) cos(pi x) cos(pi y) / pi; its curl is the
/// structure-test initial field below.
VectorField structure_potential();
/// u0 = B0 = (z (z-1) cos pi x sin pi y, z (1-z) sin pi x cos pi y, 0).
VectorField structure_field();

struct RunSummary {
  int iterations = 0;
  int final_k = 0;
  double max_energy_residual = 0.0;
  double max_div_u = 0.0;
  double max_div_B = 0.0;
  double max_div_j = 0.0;
  std::map<std::string, double> errors;  // manufactured initial condition only
  SweepResult sweep;                     // sweep scenarios only
};

/// Runs one simulation (structure_preservation / custom) or a convergence sweep
/// and writes every output file into config.output.directory, creating it if
/// needed. Progress goes to `log`. Throws hallmhd::Error subclasses.
RunSummary execute(const RunConfig& config, std::ostream& log);

/// The header of errors.csv.
std::string errors_header();

}  // namespace hallmhd
