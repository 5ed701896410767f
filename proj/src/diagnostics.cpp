#include "hallmhd/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "hallmhd/errors.hpp"

namespace hallmhd {

namespace {

double quad(const SparseMatrix& M, const Vector& x) { return x.dot(M * x); }

double max_abs(const Vector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

Energies energies(const Assembler& assembler, const SchemeParams& params,
                  const SimulationState& state) {
  Energies e;
  e.kinetic = 0.5 * quad(assembler.mass(Space::D), state.u.coefficients);
  e.magnetic = 0.5 * params.c * quad(assembler.mass(Space::D), state.B.coefficients);
  e.total = e.kinetic + e.magnetic;
  if (state.H.coefficients.size())
    e.dual_magnetic = 0.5 * params.c * quad(assembler.mass(Space::C0), state.H.coefficients);
  return e;
}

double dissipation(const Assembler& assembler, const SchemeParams& params,
                   const SimulationState& prev, const SimulationState& cur) {
  const Vector wbar = 0.5 * (prev.omega.coefficients + cur.omega.coefficients);
  const Vector jbar = 0.5 * (prev.j.coefficients + cur.j.coefficients);
  const auto& MC = assembler.mass(Space::C);
  return params.inv_Rf() * quad(MC, wbar) + params.c * params.inv_Rm() * quad(MC, jbar);
}

double forcing_work(const Vector& f_moment, const SimulationState& prev,
                    const SimulationState& cur) {
  if (f_moment.size() == 0) return 0.0;
  return f_moment.dot(0.5 * (prev.u.coefficients + cur.u.coefficients));
}

double energy_law_residual(const Assembler& assembler, const SchemeParams& params,
                           const SimulationState& prev, const SimulationState& cur,
                           const Vector& f_moment) {
  const double e0 = energies(assembler, params, prev).total;
  const double e1 = energies(assembler, params, cur).total;
  return std::abs((e1 - e0) / params.dt + dissipation(assembler, params, prev, cur) -
                  forcing_work(f_moment, prev, cur));
}

DivergenceNorms divergence_norms(const DeRhamComplex& complex, const SimulationState& state) {
  DivergenceNorms n;
  n.u = max_abs(complex.div() * state.u.coefficients);
  n.B = max_abs(complex.div() * state.B.coefficients);
  if (state.H.coefficients.size()) n.j = max_abs(complex.div_curl0() * state.H.coefficients);
  return n;
}

DiagnosticsRecord make_record(const Assembler& assembler, const SchemeParams& params,
                              const SimulationState& prev, const SimulationState& cur,
                              const IterationInfo& info) {
  DiagnosticsRecord r;
  r.k = cur.k;
  r.t = cur.k * params.dt;
  const Energies e = energies(assembler, params, cur);
  r.kinetic = e.kinetic;
  r.magnetic = e.magnetic;
  r.total = e.total;
  r.dual_magnetic = e.dual_magnetic;
  r.dissipation = dissipation(assembler, params, prev, cur);
  r.forcing_work = forcing_work(info.f_moment, prev, cur);
  const double e_prev = energies(assembler, params, prev).total;
  r.energy_residual = std::abs((e.total - e_prev) / params.dt + r.dissipation - r.forcing_work);
  const DivergenceNorms d = divergence_norms(assembler.complex(), cur);
  r.div_u = d.u;
  r.div_B = d.B;
  r.div_j = d.j;
  r.step1_residual = info.step1_residual;
  r.step2_residual = info.step2_residual;
  return r;
}

std::string diagnostics_header() {
  return "k,t,kinetic,magnetic,total_energy,dual_magnetic,dissipation,forcing_work,"
         "energy_residual,div_u,div_B,div_j,step1_residual,step2_residual";
}

std::string to_csv(const DiagnosticsRecord& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g",
                r.k, r.t, r.kinetic, r.magnetic, r.total, r.dual_magnetic, r.dissipation,
                r.forcing_work, r.energy_residual, r.div_u, r.div_B, r.div_j, r.step1_residual,
                r.step2_residual);
  return buf;
}

DiagnosticsWriter::DiagnosticsWriter(const std::string& path) : out_(path) {
  if (!out_) throw IoError("cannot open " + path + " for writing");
  out_ << diagnostics_header() << '\n';
}

void DiagnosticsWriter::write(const DiagnosticsRecord& r) {
  out_ << to_csv(r) << '\n';
  out_.flush();
}

}  // namespace hallmhd
