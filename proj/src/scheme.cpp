#include "hallmhd/scheme.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

#include "hallmhd/errors.hpp"

namespace hallmhd {

namespace {

constexpr double kResidualLimit = 1e-10;
constexpr double kConservationTol = 1e-11;

double max_abs(const Vector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

SparseMatrix transposed(const SparseMatrix& m) { return SparseMatrix(m.transpose()); }

}  // namespace

std::string_view to_string(ConvectionVorticity v) {
  return v == ConvectionVorticity::lagged ? "lagged" : "extrapolated";
}

ConvectionVorticity parse_convection_vorticity(std::string_view name) {
  if (name == "lagged") return ConvectionVorticity::lagged;
  if (name == "extrapolated") return ConvectionVorticity::extrapolated;
  throw ConfigError("scheme.convection", "expected \"lagged\" or \"extrapolated\", got \"" +
                                             std::string(name) + "\"");
}

void SchemeParams::validate() const {
  if (!(dt > 0.0)) throw ConfigError("time.dt", "must be positive");
  if (!(T > 0.0)) throw ConfigError("time.T", "must be positive");
  if (!ideal) {
    if (!(Rf > 0.0)) throw ConfigError("physics.Rf", "must be positive unless ideal");
    if (!(Rm > 0.0)) throw ConfigError("physics.Rm", "must be positive unless ideal");
  }
}

HallMHDScheme::HallMHDScheme(const Assembler& assembler, SchemeParams params, SourceSpec sources,
                             SolverOptions solver)
    : assembler_(assembler),
      complex_(assembler.complex()),
      params_(params),
      sources_(std::move(sources)),
      solver_(solver) {
  params_.validate();
  MD_ = assembler.mass(Space::D);
  MC_ = assembler.mass(Space::C);
  MS_ = assembler.mass(Space::S);
  MC0_ = assembler.mass(Space::C0);
  MD_curl_ = MD_ * complex_.curl();
  curlT_MD_ = transposed(MD_curl_);
  MS_div_ = MS_ * complex_.div();
  divT_MS_ = transposed(MS_div_);
  curl0T_ = transposed(complex_.curl0());
  curl0T_MD_curl0_ = curl0T_ * (MD_ * complex_.curl0());
}

Vector HallMHDScheme::checked_solve(const SparseMatrix& a, const Vector& b, const char* what,
                                    double* residual) const {
  const SolveResult r = solve(a, b, solver_);
  ++solves_;
  if (r.relative_residual > kResidualLimit)
    throw ResidualTooLarge(what, r.relative_residual, kResidualLimit);
  if (residual) *residual = r.relative_residual;
  return r.x;
}

DiscreteField HallMHDScheme::init_omega(const DiscreteField& u0) const {
  if (u0.space != Space::D) throw SpaceMismatch("init_omega expects u0 in D");
  return {Space::C, checked_solve(MC_, curlT_MD_ * u0.coefficients, "init_omega", nullptr), 0};
}

DiscreteField HallMHDScheme::init_j(const DiscreteField& B0) const {
  if (B0.space != Space::D) throw SpaceMismatch("init_j expects B0 in D");
  return {Space::C, checked_solve(MC_, curlT_MD_ * B0.coefficients, "init_j", nullptr), 0};
}

std::pair<SparseMatrix, SparseMatrix> HallMHDScheme::step2_matrices(const DiscreteField& u,
                                                                    const DiscreteField& B,
                                                                    double inv_dt) const {
  const SparseMatrix Au = assembler_.trilinear(TrilinearKind::A_u, u);
  const SparseMatrix AB = assembler_.trilinear(TrilinearKind::A_B, B);
  const SparseMatrix CAu = curl0T_ * Au;
  const SparseMatrix CAB = curl0T_ * AB;
  const SparseMatrix transport =
      (0.5 * params_.inv_Rm()) * curl0T_MD_curl0_ - 0.5 * CAu + (0.5 * params_.h) * CAB;
  const SparseMatrix time = inv_dt * MC0_;
  return {time + transport, time - transport};
}

DiscreteField HallMHDScheme::init_H_half(const DiscreteField& H0, const DiscreteField& u0,
                                         const DiscreteField& B0) const {
  if (H0.space != Space::C0) throw SpaceMismatch("init_H_half expects H0 in C0");
  if (u0.space != Space::D || B0.space != Space::D)
    throw SpaceMismatch("init_H_half expects u0, B0 in D");
  const auto [L, R] = step2_matrices(u0, B0, 2.0 / params_.dt);
  Vector rhs = R * H0.coefficients;
  if (sources_.m && sources_.m_in_H) rhs += assembler_.moments(Space::C0, sources_.m, 0.25 * params_.dt);
  return {Space::C0, checked_solve(L, rhs, "init_H_half", nullptr), 1};
}

SimulationState HallMHDScheme::initialize(const DiscreteField& u0, const DiscreteField& B0,
                                          const DiscreteField& H0) const {
  const double div_u0 = max_abs(complex_.div() * u0.coefficients);
  energy_law_from_ = 1;
  if (div_u0 > 1e-12) {
    std::clog << "warning: initial velocity has discrete divergence " << div_u0
              << "; energy law checked from k = 2\n";
    energy_law_from_ = 2;
  }
  SimulationState s;
  s.k = 0;
  s.u = u0;
  s.B = B0;
  s.omega = init_omega(u0);
  s.j = init_j(B0);
  s.H = init_H_half(H0, u0, B0);
  s.P = {Space::S, Vector::Zero(complex_.dimension(Space::S)), -1};
  s.E = {Space::C, Vector::Zero(complex_.dimension(Space::C)), -1};
  return s;
}

BlockSystem HallMHDScheme::step1_system(const SimulationState& s, Vector* f_moment) const {
  const double dt = params_.dt;
  const double t_half = (s.k + 0.5) * dt;
  const int nD = complex_.dimension(Space::D), nC = complex_.dimension(Space::C),
            nS = complex_.dimension(Space::S);

  DiscreteField w = s.omega;
  if (params_.convection == ConvectionVorticity::extrapolated && s.k > 0 &&
      s.omega_prev.coefficients.size() == s.omega.coefficients.size())
    w.coefficients = 1.5 * s.omega.coefficients - 0.5 * s.omega_prev.coefficients;
  const SparseMatrix Aw = assembler_.trilinear(TrilinearKind::A_omega, w);
  const SparseMatrix AH = assembler_.trilinear(TrilinearKind::A_H, s.H);
  const SparseMatrix AAH = assembler_.trilinear(TrilinearKind::AA_H, s.H);
  const SparseMatrix MD_dt = (1.0 / dt) * MD_;
  const SparseMatrix ohm = (0.5 * params_.inv_Rm()) * MC_ + (0.5 * params_.h) * AAH;
  const SparseMatrix AHt = transposed(AH);

  BlockSystem sys({nD, nC, nS, nC, nD, nC}, {nD, nC, nS, nC, nD, nC});
  sys.set(0, 0, MD_dt + 0.5 * Aw);
  sys.set(0, 1, (0.5 * params_.inv_Rf()) * MD_curl_);
  sys.set(0, 2, -divT_MS_);
  sys.set(0, 5, (-0.5 * params_.c) * AH);
  sys.set(1, 0, -curlT_MD_);
  sys.set(1, 1, MC_);
  sys.set(2, 0, MS_div_);
  sys.set(3, 4, -curlT_MD_);
  sys.set(3, 5, MC_);
  sys.set(4, 3, MD_curl_);
  sys.set(4, 4, MD_dt);
  sys.set(5, 0, 0.5 * AHt);
  sys.set(5, 3, -MC_);
  sys.set(5, 5, ohm);

  Vector fm = Vector::Zero(nD);
  if (sources_.f) fm = assembler_.moments(Space::D, sources_.f, t_half);
  Vector r0 = MD_dt * s.u.coefficients - 0.5 * (Aw * s.u.coefficients) -
              (0.5 * params_.inv_Rf()) * (MD_curl_ * s.omega.coefficients) +
              (0.5 * params_.c) * (AH * s.j.coefficients) + fm;
  Vector r4 = MD_dt * s.B.coefficients;
  if (sources_.m && sources_.m_in_B) r4 += assembler_.moments(Space::D, sources_.m, t_half);
  Vector r5 = -0.5 * (AHt * s.u.coefficients) - ohm * s.j.coefficients;
  sys.set_rhs(0, std::move(r0));
  sys.set_rhs(4, std::move(r4));
  sys.set_rhs(5, std::move(r5));
  if (f_moment) *f_moment = std::move(fm);
  return sys;
}

void HallMHDScheme::step1(SimulationState& s, IterationInfo* info) const {
  const int nD = complex_.dimension(Space::D), nC = complex_.dimension(Space::C),
            nS = complex_.dimension(Space::S);
  Vector fm;
  const BlockSystem sys = step1_system(s, &fm);
  const ComposedSystem mono = compose(sys);
  double residual = 0.0;
  const Vector x = checked_solve(mono.matrix, mono.rhs, "step1", &residual);

  const Vector B_prev = s.B.coefficients;
  s.omega_prev = s.omega;
  int o = 0;
  s.u.coefficients = x.segment(o, nD); o += nD;
  s.omega.coefficients = x.segment(o, nC); o += nC;
  s.P.coefficients = x.segment(o, nS); o += nS;
  s.E.coefficients = x.segment(o, nC); o += nC;
  s.B.coefficients = x.segment(o, nD); o += nD;
  s.j.coefficients = x.segment(o, nC);
  ++s.k;
  s.u.half_steps = s.omega.half_steps = s.B.half_steps = s.j.half_steps = 2 * s.k;
  s.P.half_steps = s.E.half_steps = 2 * s.k - 1;

  const double div_u = max_abs(complex_.div() * s.u.coefficients);
  if (div_u > kConservationTol * max_abs(s.u.coefficients)) {
    std::ostringstream os;
    os << "step " << s.k << ": |div u|_inf = " << div_u;
    throw ConservationViolated(os.str());
  }
  if (!(sources_.m && sources_.m_in_B)) {
    const double change = max_abs(complex_.div() * (s.B.coefficients - B_prev));
    const double scale = std::max(max_abs(s.B.coefficients), max_abs(B_prev));
    if (change > kConservationTol * scale) {
      std::ostringstream os;
      os << "step " << s.k << ": div B changed by " << change;
      throw ConservationViolated(os.str());
    }
  }
  if (info) {
    info->f_moment = std::move(fm);
    info->step1_residual = residual;
    ++info->solves;
  }
}

void HallMHDScheme::step2(SimulationState& s, IterationInfo* info) const {
  const auto [L, R] = step2_matrices(s.u, s.B, 1.0 / params_.dt);
  Vector rhs = R * s.H.coefficients;
  if (sources_.m && sources_.m_in_H)
    rhs += assembler_.moments(Space::C0, sources_.m, s.k * params_.dt);
  double residual = 0.0;
  s.H.coefficients = checked_solve(L, rhs, "step2", &residual);
  s.H.half_steps = 2 * s.k + 1;
  if (info) {
    info->step2_residual = residual;
    ++info->solves;
  }
}

bool HallMHDScheme::finished(const SimulationState& s) const {
  return (s.k + 0.5) * params_.dt > params_.T * (1.0 + 1e-12);
}

int HallMHDScheme::run(SimulationState& s, const Callback& callback) const {
  int iterations = 0;
  while (!finished(s)) {
    const SimulationState prev = s;
    IterationInfo info;
    step1(s, &info);
    step2(s, &info);
    ++iterations;
    if (callback) callback(prev, s, info);
  }
  return iterations;
}

}  // namespace hallmhd
