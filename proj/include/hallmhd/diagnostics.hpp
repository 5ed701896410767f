#pragma once

#include <fstream>
#include <string>

#include "hallmhd/scheme.hpp"

namespace hallmhd {

struct Energies {
  double kinetic = 0.0;        // K = 1/2 <u, u>
  double magnetic = 0.0;       // M = c/2 <B, B>
  double total = 0.0;          // E = K + M
  double dual_magnetic = 0.0;  // c/2 <H, H>
};

struct DivergenceNorms {
  double u = 0.0;
  double B = 0.0;
  double j = 0.0;  // div(curl0 H), formed in integer arithmetic
};

Energies energies(const Assembler& assembler, const SchemeParams& params,
                  const SimulationState& state);

/// R_f^{-1} <w, w> + c R_m^{-1} <jb, jb> with midpoint averages of prev and cur.
double dissipation(const Assembler& assembler, const SchemeParams& params,
                   const SimulationState& prev, const SimulationState& cur);

/// f_moment . (u^{k-1} + u^k)/2
double forcing_work(const Vector& f_moment, const SimulationState& prev,
                    const SimulationState& cur);

/// |(E^k - E^{k-1})/dt + dissipation - forcing work|
double energy_law_residual(const Assembler& assembler, const SchemeParams& params,
                           const SimulationState& prev, const SimulationState& cur,
                           const Vector& f_moment);

DivergenceNorms divergence_norms(const DeRhamComplex& complex, const SimulationState& state);

struct DiagnosticsRecord {
  int k = 0;
  double t = 0.0;
  double kinetic = 0.0;
  double magnetic = 0.0;
  double total = 0.0;
  double dual_magnetic = 0.0;
  double dissipation = 0.0;
  double forcing_work = 0.0;
  double energy_residual = 0.0;
  double div_u = 0.0;
  double div_B = 0.0;
  double div_j = 0.0;
  double step1_residual = 0.0;
  double step2_residual = 0.0;
};

DiagnosticsRecord make_record(const Assembler& assembler, const SchemeParams& params,
                              const SimulationState& prev, const SimulationState& cur,
                              const IterationInfo& info);

/// Column set version 1.
std::string diagnostics_header();
std::string to_csv(const DiagnosticsRecord& r);

class DiagnosticsWriter {
 public:
  explicit DiagnosticsWriter(const std::string& path);
  void write(const DiagnosticsRecord& r);

 private:
  std::ofstream out_;
};

}  // namespace hallmhd
