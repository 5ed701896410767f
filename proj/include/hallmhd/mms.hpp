#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "hallmhd/scheme.hpp"

namespace hallmhd {

/// Manufactured solution on [0, 2pi]^3 built from
///   u = e^t (cos x sin y sin z, sin x cos y sin z, -2 sin x sin y cos z),
///   E' = e^t (sin x cos y, -sin y cos z, -cos x sin z),  B(0) = 0,
///   P = sin x sin y sin z e^{-t}.
/// B = -int_0^t curl E' dt, j = curl B, E = j/R_m - u x B + h j x B,
/// f balances the momentum equation and m = curl(E - E') the induction equation.
class ManufacturedCase {
 public:
  explicit ManufacturedCase(const SchemeParams& params);

  Vec3 u(const Vec3& x, double t) const;
  Vec3 omega(const Vec3& x, double t) const;
  double P(const Vec3& x, double t) const;
  Vec3 B(const Vec3& x, double t) const;
  Vec3 j(const Vec3& x, double t) const;
  Vec3 E(const Vec3& x, double t) const;
  Vec3 E_prime(const Vec3& x, double t) const;
  Vec3 f(const Vec3& x, double t) const;
  Vec3 m(const Vec3& x, double t) const;
  /// A with curl A = u (A = omega / 3).
  Vec3 u_potential(const Vec3& x, double t) const;

  VectorField field(const std::string& name) const;
  ScalarField pressure() const;
  SourceSpec sources() const;

  /// Largest finite-difference disagreement over `samples` random space-time
  /// points of: omega = curl u, j = curl B, div u = 0, B = -int curl E',
  /// and the strong momentum and induction equations.
  double self_check_residual(int samples = 20, unsigned seed = 20240611) const;
  /// Throws SelfCheckFailed when self_check_residual exceeds tol.
  void self_check(double tol = 1e-6, int samples = 20) const;

 private:
  SchemeParams p_;
};

ManufacturedCase build_case(const SchemeParams& params);

double l2_error(const Assembler& assembler, const DiscreteField& field, const VectorField& exact,
                double t);
double l2_error(const Assembler& assembler, const DiscreteField& field, const ScalarField& exact,
                double t);

struct MmsRun {
  SimulationState state;
  int iterations = 0;
  std::map<std::string, double> errors;  // u, omega, B, j, H, P, E
  /// L2 distance to a run on the same mesh with dt / reference_ratio, compared
  /// at the same time levels. Empty when no reference was requested.
  std::map<std::string, double> temporal_errors;
};

/// Called after every iteration of the primary (not the reference) run.
using MmsObserver = std::function<void(const Assembler&, const SimulationState& prev,
                                       const SimulationState& cur, const IterationInfo&)>;

struct MmsOptions {
  AssemblyOptions assembly;
  SolverOptions solver;
  /// 0 (no reference) or an odd integer >= 3 so that the reference run with
  /// dt / ratio has time levels coinciding with both t^k and t^{k+1/2}.
  int reference_ratio = 0;
  bool m_in_B = true;
  bool m_in_H = true;
  MmsObserver observer;
};

/// Runs the scheme on the manufactured case: affine K^3 mesh of [0, 2pi]^3, degree N.
MmsRun run_manufactured(int N, int K, const SchemeParams& params, const MmsOptions& options = {});

enum class SweepAxis { temporal, spatial };

struct SweepPoint {
  int N = 1;
  int K = 2;
  double dt = 0.1;
};

struct ErrorReport {
  SweepPoint point;
  int iterations = 0;
  std::map<std::string, double> errors;
  std::map<std::string, double> temporal_errors;
};

struct SweepResult {
  SweepAxis axis = SweepAxis::temporal;
  std::vector<ErrorReport> reports;
  std::map<std::string, double> orders;           // NaN when the fit is degenerate
  std::map<std::string, double> temporal_orders;  // fitted on temporal_errors
};



/// Least-squares slope of log(error) against log(step). NaN with fewer than two
/// distinct steps or non-positive data.
double fit_order(const std::vector<double>& steps, const std::vector<double>& errors);

/// Fits orders for every variable of the reports against dt (temporal) or 1/K (spatial).
void fit_orders(SweepResult& result);

/// Runs every grid point (params.dt replaced by the point's dt) and fits orders.
SweepResult convergence_sweep(SweepAxis axis, const std::vector<SweepPoint>& grid,
                              const SchemeParams& params, const MmsOptions& options = {},
                              const std::function<void(const ErrorReport&)>& on_report = {});

/// L2 interpolation errors of u (D) and B (D) at time T on each K; the reference rate oracle.
std::map<std::string, double> interpolation_orders(int N, const std::vector<int>& Ks,
                                                   const SchemeParams& params);

}  // namespace hallmhd
