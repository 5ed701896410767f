#include <numbers>

#include <gtest/gtest.h>

#include "hallmhd/config.hpp"
#include "hallmhd/errors.hpp"

using namespace hallmhd;

namespace {

std::string error_path(const std::string& text, const std::vector<std::string>& overrides = {}) {
  try {
    parse_config(text, overrides);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<no error>";
}

}  // namespace

TEST(Config, EmptyDocumentNeedsScenario) {
  EXPECT_EQ(error_path(""), "scenario");
  EXPECT_EQ(error_path("{}"), "scenario");
  EXPECT_EQ(error_path(R"({"scenario": "unknown"})"), "scenario");
}

TEST(Config, StructureDefaults) {
  const RunConfig c = parse_config(R"({"scenario": "structure_preservation"})");
  EXPECT_EQ(c.scenario, Scenario::structure_preservation);
  EXPECT_EQ(c.K, 9);
  EXPECT_EQ(c.N, 2);
  EXPECT_EQ(c.domain.lo, Vec3::Zero());
  EXPECT_EQ(c.domain.hi, Vec3::Ones());
  EXPECT_EQ(c.mapping.kind, MappingKind::crazy);
  EXPECT_EQ(c.mapping.distortion, 0.1);
  EXPECT_EQ(c.scheme.Rf, 100.0);
  EXPECT_EQ(c.scheme.Rm, 100.0);
  EXPECT_EQ(c.scheme.c, 1.0);
  EXPECT_EQ(c.scheme.h, 1.0);
  EXPECT_FALSE(c.scheme.ideal);
  EXPECT_EQ(c.scheme.dt, 0.01);
  EXPECT_EQ(c.scheme.T, 1.0);
  EXPECT_EQ(c.scheme.convection, ConvectionVorticity::lagged);
  EXPECT_EQ(c.initial, InitialCondition::structure);
  EXPECT_EQ(c.solver.method, SolverMethod::direct);
  EXPECT_FALSE(c.is_sweep());
}

TEST(Config, ConvergenceDefaults) {
  const RunConfig t = parse_config(R"({"scenario": "temporal_convergence"})");
  EXPECT_TRUE(t.is_sweep());
  EXPECT_EQ(t.K, 4);
  EXPECT_EQ(t.N, 2);
  EXPECT_EQ(t.mapping.kind, MappingKind::affine);
  EXPECT_NEAR(t.domain.hi[2], 2 * std::numbers::pi, 1e-15);
  EXPECT_EQ(t.initial, InitialCondition::manufactured);
  EXPECT_EQ(t.sweep.dt, (std::vector<double>{0.25, 0.125, 0.0625}));
  EXPECT_EQ(t.sweep.reference_ratio, 3);
  EXPECT_EQ(t.scheme.Rf, 1.0);

  const RunConfig s = parse_config(R"({"scenario": "spatial_convergence"})");
  EXPECT_EQ(s.N, 1);
  EXPECT_EQ(s.sweep.K, (std::vector<int>{4, 6, 8}));
  EXPECT_EQ(s.scheme.dt, 0.01);
  EXPECT_EQ(s.scheme.T, 0.1);
}

TEST(Config, NonPositiveTimeStep) {
  EXPECT_EQ(error_path(R"({"scenario": "custom", "time": {"dt": 0}})"), "time.dt");
  EXPECT_EQ(error_path(R"({"scenario": "custom"})", {"time.dt=-1"}), "time.dt");
}

TEST(Config, UnknownKeysAndTypes) {
  EXPECT_EQ(error_path(R"({"scenario": "custom", "mesh": {"foo": 1}})"), "mesh.foo");
  EXPECT_EQ(error_path(R"({"scenario": "custom", "meshes": {}})"), "meshes");
  EXPECT_EQ(error_path(R"({"scenario": "custom", "mesh": {"K": "three"}})"), "mesh.K");
  EXPECT_EQ(error_path(R"({"scenario": "custom", "mesh": {"K": 2.5}})"), "mesh.K");
  EXPECT_EQ(error_path(R"({"scenario": "custom", "physics": {"ideal": 1}})"), "physics.ideal");
  EXPECT_EQ(error_path(R"({"scenario": "custom", "mesh": {"mapping": "twisted"}})"), "mesh.mapping");
  EXPECT_EQ(error_path(R"({"scenario": "custom", "degree": null})"), "degree");
  EXPECT_EQ(error_path(R"({"scenario": "custom", "mesh": {"domain": {"lower": [0, 0]}}})"),
            "mesh.domain.lower");
  EXPECT_EQ(error_path("[1, 2]"), "<document>");
  EXPECT_EQ(error_path("{"), "<document>");
}

TEST(Config, Overrides) {
  const RunConfig c = parse_config(R"({"scenario": "structure_preservation"})",
                                   {"mesh.K=3", "time.dt=0.05", "output.directory=out/x",
                                    "physics.ideal=true", "mesh.mapping=affine",
                                    "scheme.convection=extrapolated", "simd=scalar"});
  EXPECT_EQ(c.K, 3);
  EXPECT_EQ(c.scheme.dt, 0.05);
  EXPECT_EQ(c.output.directory, "out/x");
  EXPECT_TRUE(c.scheme.ideal);
  EXPECT_EQ(c.mapping.kind, MappingKind::affine);
  EXPECT_EQ(c.scheme.convection, ConvectionVorticity::extrapolated);
  EXPECT_TRUE(c.force_scalar);

  EXPECT_EQ(error_path(R"({"scenario": "custom"})", {"mesh.nope=1"}), "mesh.nope");
  EXPECT_EQ(error_path(R"({"scenario": "custom"})", {"mesh={}"}), "mesh");
  EXPECT_EQ(error_path(R"({"scenario": "custom"})", {"mesh.K"}), "mesh.K");
}

TEST(Config, OverrideCanSelectScenario) {
  const RunConfig c = parse_config("", {"scenario=spatial_convergence", "sweep.K=[2,3]"});
  EXPECT_EQ(c.scenario, Scenario::spatial_convergence);
  EXPECT_EQ(c.sweep.K, (std::vector<int>{2, 3}));
}

TEST(Config, SweepValidation) {
  EXPECT_EQ(error_path(R"({"scenario": "temporal_convergence", "sweep": {"dt": [0.1]}})"),
            "sweep.dt");
  EXPECT_EQ(error_path(R"({"scenario": "spatial_convergence", "sweep": {"K": [4]}})"), "sweep.K");
  EXPECT_EQ(error_path(R"({"scenario": "temporal_convergence", "mesh": {"mapping": "crazy"}})"),
            "mesh");
  EXPECT_EQ(error_path(R"({"scenario": "temporal_convergence", "initial_condition": "structure"})"),
            "initial_condition");
  EXPECT_EQ(error_path(R"({"scenario": "temporal_convergence", "sweep": {"reference_ratio": 2}})"),
            "sweep.reference_ratio");
}

TEST(Config, ResolvedJsonRoundTrips) {
  const RunConfig a =
      parse_config(R"({"scenario": "custom", "mesh": {"K": 2, "domain": {"upper": [1, 2, 0.3]}},
                       "physics": {"Rf": 3.5, "h": 0.25}, "time": {"dt": 0.1, "T": 0.7},
                       "output": {"vtk_every": 2}, "threads": 2})");
  const std::string text = to_json(a);
  const RunConfig b = parse_config(text);
  EXPECT_EQ(to_json(b), text);
  EXPECT_EQ(b.K, 2);
  EXPECT_EQ(b.domain.hi, Vec3(1, 2, 0.3));
  EXPECT_EQ(b.scheme.Rf, 3.5);
  EXPECT_EQ(b.scheme.h, 0.25);
  EXPECT_EQ(b.scheme.T, 0.7);
  EXPECT_EQ(b.output.vtk_every, 2);
  EXPECT_EQ(b.threads, 2);
}

TEST(Config, UnreadableFile) {
  try {
    load_config("definitely/not/here.json");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("definitely/not/here.json"), std::string::npos);
  }
}
