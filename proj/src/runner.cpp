#include "hallmhd/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>

#include "hallmhd/diagnostics.hpp"
#include "hallmhd/errors.hpp"
#include "hallmhd/io.hpp"
#include "hallmhd/kernels.hpp"
#include "hallmhd/parallel.hpp"

namespace hallmhd {

namespace fs = std::filesystem;

namespace {

constexpr const char* kVariables[] = {"u", "omega", "B", "j", "H", "P", "E"};

fs::path prepare_directory(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw IoError("cannot create output directory " + dir +
                  (ec ? " (" + ec.message() + ")" : std::string()));
  return fs::path(dir);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

std::string numbered(const char* stem, int k, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%04d.%s", stem, k, ext);
  return buf;
}

std::string csv_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string error_rows(const SweepPoint& p, const std::map<std::string, double>& errors,
                       const std::map<std::string, double>& temporal) {
  std::string out;
  for (const char* v : kVariables) {
    const auto e = errors.find(v);
    if (e == errors.end()) continue;
    const auto t = temporal.find(v);
    out += std::to_string(p.N) + "," + std::to_string(p.K) + "," + csv_double(p.dt) + "," + v +
           "," + csv_double(e->second) + "," +
           (t == temporal.end() ? std::string("nan") : csv_double(t->second)) + "\n";
  }
  return out;
}

void write_fields(const fs::path& path, const Assembler& asmb, const SimulationState& s,
                  int samples) {
  write_vtk(path.string(), asmb,
            {{"u", s.u}, {"omega", s.omega}, {"B", s.B}, {"j", s.j}, {"H", s.H}, {"P", s.P},
             {"E", s.E}},
            samples, "hallmhd k=" + std::to_string(s.k));
}

void track(RunSummary& summary, const DiagnosticsRecord& r) {
  summary.max_energy_residual = std::max(summary.max_energy_residual, r.energy_residual);
  summary.max_div_u = std::max(summary.max_div_u, r.div_u);
  summary.max_div_B = std::max(summary.max_div_B, r.div_B);
  summary.max_div_j = std::max(summary.max_div_j, r.div_j);
}

RunSummary run_single(const RunConfig& cfg, const fs::path& dir, std::ostream& log) {
  const HexMesh mesh = build_mesh(cfg.K, cfg.domain, cfg.mapping);
  const DeRhamComplex complex = build_complex(mesh, cfg.N);
  const Assembler asmb(complex, cfg.assembly);

  SourceSpec sources;
  std::optional<ManufacturedCase> mc;
  if (cfg.initial == InitialCondition::manufactured) {
    mc = build_case(cfg.scheme);
    sources = mc->sources();
    sources.m_in_B = cfg.m_in_B;
    sources.m_in_H = cfg.m_in_H;
  }
  const HallMHDScheme scheme(asmb, cfg.scheme, sources, cfg.solver);

  SimulationState state;
  if (!cfg.restart.empty()) {
    Checkpoint cp = load_checkpoint(cfg.restart);
    check_compatible(cp, complex, cfg.scheme.dt);
    state = std::move(cp.state);
    log << "resuming from " << cfg.restart << " at k = " << state.k << "\n";
  } else if (mc) {
    const DiscreteField u0{Space::D, asmb.interpolate_curl(mc->field("u_potential"), 0.0), 0};
    const DiscreteField B0{Space::D, Vector::Zero(complex.dimension(Space::D)), 0};
    const DiscreteField H0{Space::C0, Vector::Zero(complex.dimension(Space::C0)), 0};
    state = scheme.initialize(u0, B0, H0);
  } else {
    const DiscreteField u0{Space::D, asmb.interpolate_curl(structure_potential(), 0.0), 0};
    const DiscreteField H0{
        Space::C0, complex.restrict_to_c0(asmb.interpolate(Space::C, structure_field(), 0.0)), 0};
    state = scheme.initialize(u0, u0, H0);
  }

  if (cfg.output.vtk_every > 0) write_fields(dir / numbered("fields", state.k, "vtk"), asmb, state, cfg.output.vtk_samples);

  RunSummary summary;
  DiagnosticsWriter diagnostics((dir / "diagnostics.csv").string());
  summary.iterations = scheme.run(state, [&](const SimulationState& prev, const SimulationState& cur,
                                             const IterationInfo& info) {
    const DiagnosticsRecord r = make_record(asmb, cfg.scheme, prev, cur, info);
    diagnostics.write(r);
    track(summary, r);
    if (cfg.output.vtk_every > 0 && cur.k % cfg.output.vtk_every == 0)
      write_fields(dir / numbered("fields", cur.k, "vtk"), asmb, cur, cfg.output.vtk_samples);
    if (cfg.output.checkpoint_every > 0 && cur.k % cfg.output.checkpoint_every == 0)
      save_checkpoint((dir / numbered("checkpoint", cur.k, "json")).string(),
                      {cfg.N, cfg.K, cfg.scheme.dt, cur});
  });
  summary.final_k = state.k;
  log << "iterations: " << summary.iterations << ", final k = " << state.k
      << ", t = " << state.k * cfg.scheme.dt << "\n";

  if (mc) {
    const double tk = state.k * cfg.scheme.dt, dt = cfg.scheme.dt;
    auto& e = summary.errors;
    e["u"] = l2_error(asmb, state.u, mc->field("u"), tk);
    e["omega"] = l2_error(asmb, state.omega, mc->field("omega"), tk);
    e["B"] = l2_error(asmb, state.B, mc->field("B"), tk);
    e["j"] = l2_error(asmb, state.j, mc->field("j"), tk);
    e["H"] = l2_error(asmb, state.H, mc->field("H"), tk + 0.5 * dt);
    if (state.k > 0) {
      e["P"] = l2_error(asmb, state.P, mc->pressure(), tk - 0.5 * dt);
      e["E"] = l2_error(asmb, state.E, mc->field("E"), tk - 0.5 * dt);
    }
    write_text(dir / "errors.csv",
               errors_header() + error_rows({cfg.N, cfg.K, cfg.scheme.dt}, e, {}));
  }
  return summary;
}

RunSummary run_sweep(const RunConfig& cfg, const fs::path& dir, std::ostream& log) {
  const SweepAxis axis = cfg.scenario == Scenario::temporal_convergence ? SweepAxis::temporal
                                                                         : SweepAxis::spatial;
  std::vector<SweepPoint> grid;
  if (axis == SweepAxis::temporal)
    for (double dt : cfg.sweep.dt) grid.push_back({cfg.N, cfg.K, dt});
  else
    for (int K : cfg.sweep.K) grid.push_back({cfg.N, K, cfg.scheme.dt});

  RunSummary summary;
  summary.sweep.axis = axis;
  std::string rows = errors_header();
  for (const auto& point : grid) {
    char name[64];
    if (axis == SweepAxis::temporal) std::snprintf(name, sizeof name, "dt_%.6g", point.dt);
    else std::snprintf(name, sizeof name, "K_%d", point.K);
    const fs::path sub = prepare_directory((dir / name).string());
    DiagnosticsWriter diagnostics((sub / "diagnostics.csv").string());

    SchemeParams p = cfg.scheme;
    p.dt = point.dt;
    MmsOptions options;
    options.assembly = cfg.assembly;
    options.solver = cfg.solver;
    options.reference_ratio = axis == SweepAxis::temporal ? cfg.sweep.reference_ratio : 0;
    options.m_in_B = cfg.m_in_B;
    options.m_in_H = cfg.m_in_H;
    options.observer = [&](const Assembler& asmb, const SimulationState& prev,
                           const SimulationState& cur, const IterationInfo& info) {
      const DiagnosticsRecord r = make_record(asmb, p, prev, cur, info);
      diagnostics.write(r);
      track(summary, r);
    };
    const MmsRun run = run_manufactured(point.N, point.K, p, options);
    summary.iterations += run.iterations;
    summary.sweep.reports.push_back({point, run.iterations, run.errors, run.temporal_errors});
    rows += error_rows(point, run.errors, run.temporal_errors);
    write_text(dir / "errors.csv", rows);
    log << name << ": " << run.iterations << " iterations, L2 error u = " << run.errors.at("u")
        << ", B = " << run.errors.at("B") << ", H = " << run.errors.at("H") << "\n";
  }
  fit_orders(summary.sweep);

  std::string orders = "variable,order,temporal_order\n";
  for (const char* v : kVariables) {
    const auto o = summary.sweep.orders.find(v);
    if (o == summary.sweep.orders.end()) continue;
    const auto t = summary.sweep.temporal_orders.find(v);
    orders += std::string(v) + "," + csv_double(o->second) + "," +
              (t == summary.sweep.temporal_orders.end() ? std::string("nan")
                                                        : csv_double(t->second)) +
              "\n";
    log << "order " << v << ": " << o->second;
    if (t != summary.sweep.temporal_orders.end()) log << " (temporal " << t->second << ")";
    log << "\n";
  }
  write_text(dir / "orders.csv", orders);
  return summary;
}

}  // namespace

VectorField structure_potential() {
  return [](const Vec3& x, double) {
    const double pi = std::numbers::pi;
    return Vec3(0.0, 0.0, -x[2] * (x[2] - 1.0) * std::cos(pi * x[0]) * std::cos(pi * x[1]) / pi);
  };
}

VectorField structure_field() {
  return [](const Vec3& x, double) {
    const double pi = std::numbers::pi, z = x[2];
    return Vec3(z * (z - 1.0) * std::cos(pi * x[0]) * std::sin(pi * x[1]),
                z * (1.0 - z) * std::sin(pi * x[0]) * std::cos(pi * x[1]), 0.0);
  };
}

std::string errors_header() { return "N,K,dt,variable,error,temporal_error\n"; }

RunSummary execute(const RunConfig& cfg, std::ostream& log) {
  if (cfg.threads > 0) set_thread_count(cfg.threads);
  kernels::use_scalar(cfg.force_scalar);
  const fs::path dir = prepare_directory(cfg.output.directory);
  write_text(dir / "config.resolved.json", to_json(cfg));
  log << "scenario " << to_string(cfg.scenario) << ", kernels " << kernels::active().name
      << ", threads " << thread_count() << ", direct solver " << direct_backend() << "\n";
  return cfg.is_sweep() ? run_sweep(cfg, dir, log) : run_single(cfg, dir, log);
}

}  // namespace hallmhd
