#include <filesystem>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "hallmhd/diagnostics.hpp"
#include "hallmhd/errors.hpp"
#include "test_fields.hpp"

using namespace hallmhd;

namespace {

SimulationState zero_state(const DeRhamComplex& cx) {
  SimulationState s;
  for (DiscreteField* f : {&s.u, &s.omega, &s.omega_prev, &s.B, &s.j, &s.H, &s.P, &s.E})
    f->coefficients = Vector::Zero(cx.dimension(f->space));
  return s;
}

int count_fields(const std::string& line) {
  return static_cast<int>(std::count(line.begin(), line.end(), ',')) + 1;
}

}  // namespace

TEST(Diagnostics, ZeroState) {
  const DeRhamComplex cx = build_complex(build_mesh(2, BoxDomain{}, MappingSpec{}), 1);
  const Assembler asmb(cx);
  const SchemeParams p;
  const SimulationState s = zero_state(cx);
  const Energies e = energies(asmb, p, s);
  EXPECT_EQ(e.kinetic, 0.0);
  EXPECT_EQ(e.magnetic, 0.0);
  EXPECT_EQ(e.total, 0.0);
  EXPECT_EQ(e.dual_magnetic, 0.0);
  const DivergenceNorms d = divergence_norms(cx, s);
  EXPECT_EQ(d.u, 0.0);
  EXPECT_EQ(d.B, 0.0);
  EXPECT_EQ(d.j, 0.0);
  EXPECT_EQ(energy_law_residual(asmb, p, s, s, Vector::Zero(cx.dimension(Space::D))), 0.0);
}

TEST(Diagnostics, KineticEnergyOfUnitFlow) {
  const DeRhamComplex cx = build_complex(build_mesh(2, BoxDomain{}, MappingSpec{}), 2);
  const Assembler asmb(cx);
  SchemeParams p;
  p.c = 3.0;
  SimulationState s = zero_state(cx);
  const VectorField ex = [](const Vec3&, double) { return Vec3(1, 0, 0); };
  s.u.coefficients = asmb.interpolate(Space::D, ex, 0.0);
  s.B.coefficients = s.u.coefficients;
  const Energies e = energies(asmb, p, s);
  EXPECT_NEAR(e.kinetic, 0.5, 1e-12);
  EXPECT_NEAR(e.magnetic, 1.5, 1e-12);
  EXPECT_NEAR(e.total, 2.0, 1e-12);
}

TEST(Diagnostics, CurrentDivergenceVanishesForAnyH) {
  const DeRhamComplex cx = build_complex(build_mesh(3, BoxDomain{}, {MappingKind::crazy, 0.1}), 2);
  std::mt19937_64 rng(2);
  SimulationState s = zero_state(cx);
  for (int trial = 0; trial < 5; ++trial) {
    s.H.coefficients = test::random_vector(cx.dimension(Space::C0), rng, 1e3);
    EXPECT_EQ(divergence_norms(cx, s).j, 0.0);
  }
}

TEST(Diagnostics, ForcingWorkUsesMidpointVelocity) {
  const DeRhamComplex cx = build_complex(build_mesh(1, BoxDomain{}, MappingSpec{}), 1);
  SimulationState a = zero_state(cx), b = zero_state(cx);
  a.u.coefficients.setConstant(1.0);
  b.u.coefficients.setConstant(3.0);
  const Vector f = Vector::Constant(cx.dimension(Space::D), 0.5);
  EXPECT_DOUBLE_EQ(forcing_work(f, a, b), 0.5 * 2.0 * cx.dimension(Space::D));
}

TEST(Diagnostics, CsvRecord) {
  DiagnosticsRecord r;
  r.k = 7;
  r.t = 0.35;
  r.energy_residual = 1.25e-17;
  const std::string header = diagnostics_header();
  const std::string row = to_csv(r);
  EXPECT_EQ(count_fields(header), 14);
  EXPECT_EQ(count_fields(row), 14);
  EXPECT_EQ(header.substr(0, 4), "k,t,");
  EXPECT_EQ(row.substr(0, 7), "7,0.349");
  EXPECT_NE(row.find("1.25e-17"), std::string::npos);
}

TEST(Diagnostics, WriterProducesHeaderAndRows) {
  const std::string path = "diagnostics_writer_test.csv";
  {
    DiagnosticsWriter w(path);
    DiagnosticsRecord r;
    for (int k = 1; k <= 3; ++k) {
      r.k = k;
      w.write(r);
    }
  }
  std::ifstream in(path);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 4u);
  EXPECT_EQ(lines[0], diagnostics_header());
  EXPECT_EQ(lines[3].substr(0, 2), "3,");
  std::filesystem::remove(path);
  EXPECT_THROW(DiagnosticsWriter("no_such_directory/x/diagnostics.csv"), IoError);
}
