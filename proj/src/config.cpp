#include "hallmhd/config.hpp"

#include <fstream>
#include <json.hpp>
#include <numbers>
#include <sstream>

#include "hallmhd/errors.hpp"

namespace hallmhd {

namespace {

using json = nlohmann::json;

constexpr Scenario kScenarios[] = {Scenario::temporal_convergence, Scenario::spatial_convergence,
                                   Scenario::structure_preservation, Scenario::custom};

Scenario parse_scenario(const json& j) {
  if (!j.is_string()) throw ConfigError("scenario", "must be a string");
  const auto name = j.get<std::string>();
  for (Scenario s : kScenarios)
    if (to_string(s) == name) return s;
  throw ConfigError("scenario", "unknown scenario \"" + name + "\"");
}

json defaults(Scenario s) {
  const double two_pi = 2.0 * std::numbers::pi;
  json d = {
      {"scenario", std::string(to_string(s))},
      {"mesh",
       {{"K", 9},
        {"domain", {{"lower", {0.0, 0.0, 0.0}}, {"upper", {1.0, 1.0, 1.0}}}},
        {"mapping", "crazy"},
        {"distortion", 0.1}}},
      {"degree", 2},
      {"physics", {{"Rf", 100.0}, {"Rm", 100.0}, {"c", 1.0}, {"h", 1.0}, {"ideal", false}}},
      {"time", {{"dt", 0.01}, {"T", 1.0}}},
      {"scheme",
       {{"convection", "lagged"}, {"magnetic_source_in_B", true}, {"magnetic_source_in_H", true}}},
      {"initial_condition", "structure"},
      {"assembly", {{"quadrature_points", 0}, {"exact_symmetry", true}}},
      {"solver", {{"method", "direct"}, {"tolerance", 1e-12}, {"max_iterations", 2000}}},
      {"output",
       {{"directory", "output"}, {"vtk_every", 0}, {"vtk_samples", 3}, {"checkpoint_every", 0}}},
      {"sweep", {{"dt", json::array()}, {"K", json::array()}, {"reference_ratio", 0}}},
      {"restart", ""},
      {"threads", 0},
      {"simd", "auto"},
  };
  if (s == Scenario::temporal_convergence || s == Scenario::spatial_convergence) {
    d["mesh"]["domain"] = {{"lower", {0.0, 0.0, 0.0}}, {"upper", {two_pi, two_pi, two_pi}}};
    d["mesh"]["mapping"] = "affine";
    d["mesh"]["distortion"] = 0.0;
    d["physics"] = {{"Rf", 1.0}, {"Rm", 1.0}, {"c", 1.0}, {"h", 1.0}, {"ideal", false}};
    d["initial_condition"] = "manufactured";
  }
  if (s == Scenario::temporal_convergence) {
    d["mesh"]["K"] = 4;
    d["degree"] = 2;
    d["time"] = {{"dt", 0.25}, {"T", 1.0}};
    d["sweep"] = {{"dt", {0.25, 0.125, 0.0625}}, {"K", json::array()}, {"reference_ratio", 3}};
  }
  if (s == Scenario::spatial_convergence) {
    d["mesh"]["K"] = 4;
    d["degree"] = 1;
    d["time"] = {{"dt", 0.01}, {"T", 0.1}};
    d["sweep"] = {{"dt", json::array()}, {"K", {4, 6, 8}}, {"reference_ratio", 0}};
  }
  return d;
}

/// Every key of `doc` must exist in `schema`; objects are checked recursively.
void reject_unknown(const json& doc, const json& schema, const std::string& prefix) {
  if (!doc.is_object()) return;
  for (const auto& [key, value] : doc.items()) {
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    if (!schema.is_object() || !schema.contains(key)) throw ConfigError(path, "unknown key");
    if (value.is_null()) throw ConfigError(path, "must not be null");
    if (schema.at(key).is_object()) {
      if (!value.is_object()) throw ConfigError(path, "must be an object");
      reject_unknown(value, schema.at(key), path);
    }
  }
}

std::string pointer_of(const std::string& dotted) {
  std::string p;
  std::stringstream ss(dotted);
  std::string part;
  while (std::getline(ss, part, '.')) {
    if (part.empty()) throw ConfigError(dotted, "empty path component");
    p += "/" + part;
  }
  return p;
}

void apply_override(json& doc, const json& schema, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError(assignment, "override must look like key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  const json::json_pointer ptr(pointer_of(key));
  if (!schema.contains(ptr)) throw ConfigError(key, "unknown key");
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;
  if (value.is_null()) throw ConfigError(key, "must not be null");
  if (schema.at(ptr).is_object()) throw ConfigError(key, "cannot override a whole section");
  doc[ptr] = value;
}

template <class T>
T get(const json& doc, const std::string& dotted) {
  const json& v = doc.at(json::json_pointer(pointer_of(dotted)));
  try {
    if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) throw ConfigError(dotted, "must be a number");
    } else if constexpr (std::is_same_v<T, int>) {
      if (!v.is_number_integer()) throw ConfigError(dotted, "must be an integer");
    } else if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError(dotted, "must be true or false");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError(dotted, "must be a string");
    }
    return v.get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(dotted, e.what());
  }
}

Vec3 get_vec3(const json& doc, const std::string& dotted) {
  const json& v = doc.at(json::json_pointer(pointer_of(dotted)));
  if (!v.is_array() || v.size() != 3) throw ConfigError(dotted, "must be an array of 3 numbers");
  Vec3 out;
  for (int i = 0; i < 3; ++i) {
    if (!v[i].is_number()) throw ConfigError(dotted, "must be an array of 3 numbers");
    out[i] = v[i].get<double>();
  }
  return out;
}

template <class T>
std::vector<T> get_list(const json& doc, const std::string& dotted) {
  const json& v = doc.at(json::json_pointer(pointer_of(dotted)));
  if (!v.is_array()) throw ConfigError(dotted, "must be an array");
  std::vector<T> out;
  for (const auto& x : v) {
    if constexpr (std::is_same_v<T, int>) {
      if (!x.is_number_integer()) throw ConfigError(dotted, "entries must be integers");
    } else {
      if (!x.is_number()) throw ConfigError(dotted, "entries must be numbers");
    }
    out.push_back(x.get<T>());
  }
  return out;
}

RunConfig from_json(const json& doc) {
  RunConfig c;
  c.scenario = parse_scenario(doc.at("scenario"));
  c.K = get<int>(doc, "mesh.K");
  if (c.K < 1) throw ConfigError("mesh.K", "must be at least 1");
  c.domain.lo = get_vec3(doc, "mesh.domain.lower");
  c.domain.hi = get_vec3(doc, "mesh.domain.upper");
  if (!(c.domain.hi.array() > c.domain.lo.array()).all())
    throw ConfigError("mesh.domain", "upper must exceed lower in every direction");
  const auto mapping = get<std::string>(doc, "mesh.mapping");
  if (mapping == "affine") c.mapping.kind = MappingKind::affine;
  else if (mapping == "crazy") c.mapping.kind = MappingKind::crazy;
  else throw ConfigError("mesh.mapping", "expected \"affine\" or \"crazy\"");
  c.mapping.distortion = get<double>(doc, "mesh.distortion");
  c.N = get<int>(doc, "degree");
  if (c.N < 1) throw ConfigError("degree", "must be at least 1");

  c.scheme.Rf = get<double>(doc, "physics.Rf");
  c.scheme.Rm = get<double>(doc, "physics.Rm");
  c.scheme.c = get<double>(doc, "physics.c");
  c.scheme.h = get<double>(doc, "physics.h");
  c.scheme.ideal = get<bool>(doc, "physics.ideal");
  c.scheme.dt = get<double>(doc, "time.dt");
  c.scheme.T = get<double>(doc, "time.T");
  c.scheme.convection = parse_convection_vorticity(get<std::string>(doc, "scheme.convection"));
  c.m_in_B = get<bool>(doc, "scheme.magnetic_source_in_B");
  c.m_in_H = get<bool>(doc, "scheme.magnetic_source_in_H");

  const auto ic = get<std::string>(doc, "initial_condition");
  if (ic == "structure") c.initial = InitialCondition::structure;
  else if (ic == "manufactured") c.initial = InitialCondition::manufactured;
  else throw ConfigError("initial_condition", "expected \"structure\" or \"manufactured\"");

  c.assembly.quadrature_points = get<int>(doc, "assembly.quadrature_points");
  if (c.assembly.quadrature_points < 0)
    throw ConfigError("assembly.quadrature_points", "must be >= 0 (0 selects N + 2)");
  c.assembly.exact_symmetry = get<bool>(doc, "assembly.exact_symmetry");

  const auto method = get<std::string>(doc, "solver.method");
  if (method == "direct") c.solver.method = SolverMethod::direct;
  else if (method == "iterative") c.solver.method = SolverMethod::iterative;
  else throw ConfigError("solver.method", "expected \"direct\" or \"iterative\"");
  c.solver.tolerance = get<double>(doc, "solver.tolerance");
  if (!(c.solver.tolerance > 0.0)) throw ConfigError("solver.tolerance", "must be positive");
  c.solver.max_iterations = get<int>(doc, "solver.max_iterations");
  if (c.solver.max_iterations < 1) throw ConfigError("solver.max_iterations", "must be positive");

  c.output.directory = get<std::string>(doc, "output.directory");
  if (c.output.directory.empty()) throw ConfigError("output.directory", "must not be empty");
  c.output.vtk_every = get<int>(doc, "output.vtk_every");
  c.output.vtk_samples = get<int>(doc, "output.vtk_samples");
  c.output.checkpoint_every = get<int>(doc, "output.checkpoint_every");
  if (c.output.vtk_every < 0) throw ConfigError("output.vtk_every", "must be >= 0");
  if (c.output.vtk_samples < 2) throw ConfigError("output.vtk_samples", "must be >= 2");
  if (c.output.checkpoint_every < 0) throw ConfigError("output.checkpoint_every", "must be >= 0");

  c.sweep.dt = get_list<double>(doc, "sweep.dt");
  c.sweep.K = get_list<int>(doc, "sweep.K");
  c.sweep.reference_ratio = get<int>(doc, "sweep.reference_ratio");
  for (double dt : c.sweep.dt)
    if (!(dt > 0.0)) throw ConfigError("sweep.dt", "entries must be positive");
  for (int K : c.sweep.K)
    if (K < 1) throw ConfigError("sweep.K", "entries must be at least 1");
  if (c.sweep.reference_ratio != 0 &&
      (c.sweep.reference_ratio < 3 || c.sweep.reference_ratio % 2 == 0))
    throw ConfigError("sweep.reference_ratio", "must be 0 or an odd integer >= 3");

  c.restart = get<std::string>(doc, "restart");
  c.threads = get<int>(doc, "threads");
  if (c.threads < 0) throw ConfigError("threads", "must be >= 0");
  const auto simd = get<std::string>(doc, "simd");
  if (simd == "auto") c.force_scalar = false;
  else if (simd == "scalar") c.force_scalar = true;
  else throw ConfigError("simd", "expected \"auto\" or \"scalar\"");

  c.scheme.validate();
  if (c.scenario == Scenario::temporal_convergence && c.sweep.dt.size() < 2)
    throw ConfigError("sweep.dt", "a temporal sweep needs at least two time steps");
  if (c.scenario == Scenario::spatial_convergence && c.sweep.K.size() < 2)
    throw ConfigError("sweep.K", "a spatial sweep needs at least two meshes");
  if (c.is_sweep()) {
    const double two_pi = 2.0 * std::numbers::pi;
    if (c.mapping.kind != MappingKind::affine || !c.domain.lo.isZero() ||
        !c.domain.hi.isApprox(Vec3::Constant(two_pi)))
      throw ConfigError("mesh", "convergence sweeps use the affine [0, 2pi]^3 box");
    if (c.initial != InitialCondition::manufactured)
      throw ConfigError("initial_condition", "convergence sweeps need \"manufactured\"");
    if (!c.restart.empty()) throw ConfigError("restart", "not supported for sweeps");
  }
  return c;
}

}  // namespace

std::string_view to_string(Scenario s) {
  switch (s) {
    case Scenario::temporal_convergence: return "temporal_convergence";
    case Scenario::spatial_convergence: return "spatial_convergence";
    case Scenario::structure_preservation: return "structure_preservation";
    case Scenario::custom: return "custom";
  }
  return "?";
}

std::string_view to_string(InitialCondition ic) {
  return ic == InitialCondition::structure ? "structure" : "manufactured";
}

RunConfig parse_config(std::string_view text, const std::vector<std::string>& overrides) {
  json doc = json::object();
  if (text.find_first_not_of(" \t\r\n") != std::string_view::npos) {
    doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw ConfigError("<document>", "not valid JSON");
    if (!doc.is_object()) throw ConfigError("<document>", "top level must be an object");
  }
  // The scenario selects the defaults, so it is resolved before anything else.
  json scenario = doc.contains("scenario") ? doc["scenario"] : json();
  for (const auto& o : overrides)
    if (o.rfind("scenario=", 0) == 0) {
      scenario = json::parse(o.substr(9), nullptr, false);
      if (scenario.is_discarded()) scenario = o.substr(9);
    }
  if (scenario.is_null()) throw ConfigError("scenario", "required");
  const json schema = defaults(parse_scenario(scenario));
  reject_unknown(doc, schema, "");
  json merged = schema;
  merged.merge_patch(doc);
  for (const auto& o : overrides) apply_override(merged, schema, o);
  return from_json(merged);
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), overrides);
}

std::string to_json(const RunConfig& c) {
  json j = {
      {"scenario", std::string(to_string(c.scenario))},
      {"mesh",
       {{"K", c.K},
        {"domain",
         {{"lower", {c.domain.lo[0], c.domain.lo[1], c.domain.lo[2]}},
          {"upper", {c.domain.hi[0], c.domain.hi[1], c.domain.hi[2]}}}},
        {"mapping", c.mapping.kind == MappingKind::affine ? "affine" : "crazy"},
        {"distortion", c.mapping.distortion}}},
      {"degree", c.N},
      {"physics",
       {{"Rf", c.scheme.Rf}, {"Rm", c.scheme.Rm}, {"c", c.scheme.c}, {"h", c.scheme.h},
        {"ideal", c.scheme.ideal}}},
      {"time", {{"dt", c.scheme.dt}, {"T", c.scheme.T}}},
      {"scheme",
       {{"convection", std::string(to_string(c.scheme.convection))},
        {"magnetic_source_in_B", c.m_in_B},
        {"magnetic_source_in_H", c.m_in_H}}},
      {"initial_condition", std::string(to_string(c.initial))},
      {"assembly",
       {{"quadrature_points", c.assembly.quadrature_points},
        {"exact_symmetry", c.assembly.exact_symmetry}}},
      {"solver",
       {{"method", c.solver.method == SolverMethod::direct ? "direct" : "iterative"},
        {"tolerance", c.solver.tolerance},
        {"max_iterations", c.solver.max_iterations}}},
      {"output",
       {{"directory", c.output.directory},
        {"vtk_every", c.output.vtk_every},
        {"vtk_samples", c.output.vtk_samples},
        {"checkpoint_every", c.output.checkpoint_every}}},
      {"sweep",
       {{"dt", c.sweep.dt}, {"K", c.sweep.K}, {"reference_ratio", c.sweep.reference_ratio}}},
      {"restart", c.restart},
      {"threads", c.threads},
      {"simd", c.force_scalar ? "scalar" : "auto"},
  };
  return j.dump(2) + "\n";
}

}  // namespace hallmhd
