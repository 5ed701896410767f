#pragma once

#include <functional>
#include <optional>
#include <string_view>

#include "hallmhd/assembly.hpp"
#include "hallmhd/linalg.hpp"

namespace hallmhd {

/// Vorticity frozen in the convection term of step 1: omega^{k-1} as in the
/// leapfrog scheme, or the extrapolation (3 omega^{k-1} - omega^{k-2}) / 2.
enum class ConvectionVorticity { lagged, extrapolated };

std::string_view to_string(ConvectionVorticity v);
/// Throws ConfigError for unknown names.
ConvectionVorticity parse_convection_vorticity(std::string_view name);

struct SchemeParams {
  double dt = 0.01;
  double T = 1.0;
  double Rf = 100.0;
  double Rm = 100.0;
  double c = 1.0;  // Lorentz coupling
  double h = 1.0;  // Hall strength
  bool ideal = false;
  ConvectionVorticity convection = ConvectionVorticity::lagged;

  double inv_Rf() const { return ideal ? 0.0 : 1.0 / Rf; }
  double inv_Rm() const { return ideal ? 0.0 : 1.0 / Rm; }
  void validate() const;
};

/// Body force f (tested against D in the momentum equation) and magnetic
/// source m (tested against D in the B equation and against C0 in the H equation).
struct SourceSpec {
  VectorField f;
  VectorField m;
  bool m_in_B = true;
  bool m_in_H = true;
};

/// u, omega, B, j at step k; H at k + 1/2; P, E at k - 1/2. omega_prev holds
/// omega^{k-1} (empty at k = 0) and is only read by the extrapolated convection.
struct SimulationState {
  int k = 0;
  DiscreteField u{Space::D, {}, 0}, omega{Space::C, {}, 0};
  DiscreteField omega_prev{Space::C, {}, -2};
  DiscreteField B{Space::D, {}, 0}, j{Space::C, {}, 0};
  DiscreteField H{Space::C0, {}, 1};
  DiscreteField P{Space::S, {}, -1}, E{Space::C, {}, -1};
};

/// What one leapfrog iteration produced besides the new state.
struct IterationInfo {
  Vector f_moment;  // the exact vector used on the momentum right-hand side
  double step1_residual = 0.0;
  double step2_residual = 0.0;
  int solves = 0;
};

class HallMHDScheme {
 public:
  using Callback =
      std::function<void(const SimulationState& prev, const SimulationState& cur, const IterationInfo&)>;

  HallMHDScheme(const Assembler& assembler, SchemeParams params, SourceSpec sources = {},
                SolverOptions solver = {});

  const SchemeParams& params() const { return params_; }
  const Assembler& assembler() const { return assembler_; }

  DiscreteField init_omega(const DiscreteField& u0) const;
  DiscreteField init_j(const DiscreteField& B0) const;
  DiscreteField init_H_half(const DiscreteField& H0, const DiscreteField& u0,
                            const DiscreteField& B0) const;

  /// u0, B0 in D and H0 in C0 -> state at k = 0 with H at 1/2. Warns when u0 is
  /// not discretely divergence-free.
  SimulationState initialize(const DiscreteField& u0, const DiscreteField& B0,
                             const DiscreteField& H0) const;

  /// k-1 -> k for (u, omega, B, j) and P, E at k - 1/2.
  void step1(SimulationState& state, IterationInfo* info = nullptr) const;
  /// H^{k-1/2} -> H^{k+1/2} using u^k, B^k.
  void step2(SimulationState& state, IterationInfo* info = nullptr) const;

  /// Alternates step1/step2 until t^{k+1/2} > T. Returns the number of iterations.
  int run(SimulationState& state, const Callback& callback = {}) const;

  /// True when t^{k+1/2} of the given state exceeds T.
  bool finished(const SimulationState& state) const;

  /// First iteration from which the discrete energy law is expected to hold.
  int energy_law_from() const { return energy_law_from_; }

  long linear_solves() const { return solves_; }

  /// The step-1 monolithic system for the given state (exposed for testing).
  BlockSystem step1_system(const SimulationState& state, Vector* f_moment = nullptr) const;
  /// Left and right step-2 matrices for frozen u, B and a time-derivative weight.
  std::pair<SparseMatrix, SparseMatrix> step2_matrices(const DiscreteField& u,
                                                       const DiscreteField& B,
                                                       double inv_dt) const;

 private:
  Vector checked_solve(const SparseMatrix& a, const Vector& b, const char* what,
                       double* residual) const;

  const Assembler& assembler_;
  const DeRhamComplex& complex_;
  SchemeParams params_;
  SourceSpec sources_;
  SolverOptions solver_;

  SparseMatrix MD_, MC_, MS_, MC0_;
  SparseMatrix MD_curl_, curlT_MD_, divT_MS_, MS_div_, curl0T_MD_curl0_, curl0T_;
  mutable long solves_ = 0;
  mutable int energy_law_from_ = 1;
};

}  // namespace hallmhd
