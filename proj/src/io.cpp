#include "hallmhd/io.hpp"

#include <cstdio>
#include <fstream>
#include <json.hpp>

#include "hallmhd/errors.hpp"

namespace hallmhd {

namespace {

using json = nlohmann::json;

constexpr const char* kFormat = "hallmhd-checkpoint";
constexpr int kVersion = 1;

Space parse_space(const std::string& name) {
  for (Space s : {Space::G, Space::C, Space::C0, Space::D, Space::S})
    if (to_string(s) == name) return s;
  throw IoError("checkpoint: unknown space '" + name + "'");
}

json field_to_json(const DiscreteField& f) {
  return {{"space", std::string(to_string(f.space))},
          {"half_steps", f.half_steps},
          {"coefficients", std::vector<double>(f.coefficients.begin(), f.coefficients.end())}};
}

DiscreteField field_from_json(const json& j) {
  DiscreteField f;
  f.space = parse_space(j.at("space").get<std::string>());
  f.half_steps = j.at("half_steps").get<int>();
  const auto c = j.at("coefficients").get<std::vector<double>>();
  f.coefficients = Eigen::Map<const Vector>(c.data(), static_cast<Eigen::Index>(c.size()));
  return f;
}

struct StateSlot {
  const char* name;
  DiscreteField SimulationState::*member;
};

constexpr StateSlot kSlots[] = {
    {"u", &SimulationState::u}, {"omega", &SimulationState::omega},
    {"omega_prev", &SimulationState::omega_prev}, {"B", &SimulationState::B},
    {"j", &SimulationState::j}, {"H", &SimulationState::H},
    {"P", &SimulationState::P}, {"E", &SimulationState::E},
};

}  // namespace

void save_checkpoint(const std::string& path, const Checkpoint& c) {
  json j;
  j["format"] = kFormat;
  j["version"] = kVersion;
  j["N"] = c.N;
  j["K"] = c.K;
  j["dt"] = c.dt;
  j["k"] = c.state.k;
  for (const auto& slot : kSlots) j["fields"][slot.name] = field_to_json(c.state.*slot.member);
  std::ofstream out(path);
  if (!out) throw IoError("cannot write checkpoint " + path);
  out << j.dump() << '\n';
  if (!out) throw IoError("failed writing checkpoint " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read checkpoint " + path);
  Checkpoint c;
  try {
    const json j = json::parse(in);
    if (j.at("format").get<std::string>() != kFormat)
      throw IoError(path + " is not a hallmhd checkpoint");
    if (j.at("version").get<int>() != kVersion)
      throw IoError(path + ": unsupported checkpoint version");
    c.N = j.at("N").get<int>();
    c.K = j.at("K").get<int>();
    c.dt = j.at("dt").get<double>();
    c.state.k = j.at("k").get<int>();
    for (const auto& slot : kSlots) c.state.*slot.member = field_from_json(j.at("fields").at(slot.name));
  } catch (const json::exception& e) {
    throw IoError(path + ": malformed checkpoint (" + e.what() + ")");
  }
  return c;
}

void check_compatible(const Checkpoint& c, const DeRhamComplex& complex, double dt) {
  if (c.N != complex.degree() || c.K != complex.mesh().elements_per_axis())
    throw IoError("checkpoint was written for N=" + std::to_string(c.N) + ", K=" +
                  std::to_string(c.K));
  if (c.dt != dt) throw IoError("checkpoint time step differs from the configured dt");
  for (const auto& slot : kSlots) {
    const DiscreteField& f = c.state.*slot.member;
    if (f.coefficients.size() == 0 && std::string(slot.name) == "omega_prev") continue;
    if (f.coefficients.size() != complex.dimension(f.space))
      throw IoError(std::string("checkpoint field ") + slot.name + " has the wrong length");
  }
}

void write_vtk(const std::string& path, const Assembler& assembler,
               const std::vector<NamedField>& fields, int samples, const std::string& title) {
  if (samples < 2) throw IoError("VTK sampling needs at least 2 points per direction");
  const DeRhamComplex& complex = assembler.complex();
  const HexMesh& mesh = complex.mesh();
  for (const auto& f : fields)
    if (f.field.coefficients.size() != complex.dimension(f.field.space))
      throw IoError("VTK field " + f.name + " does not match its space");

  const int n_el = mesh.element_count();
  const int per_el = samples * samples * samples;
  const int cells_per_el = (samples - 1) * (samples - 1) * (samples - 1);
  std::vector<Vec3> xi(per_el);
  for (int k = 0, p = 0; k < samples; ++k)
    for (int j = 0; j < samples; ++j)
      for (int i = 0; i < samples; ++i, ++p)
        xi[p] = Vec3(i, j, k) / double(samples - 1);

  std::FILE* out = std::fopen(path.c_str(), "w");
  if (!out) throw IoError("cannot write " + path);
  std::fprintf(out, "# vtk DataFile Version 3.0\n%s\nASCII\nDATASET UNSTRUCTURED_GRID\n",
               title.c_str());
  std::fprintf(out, "POINTS %d double\n", n_el * per_el);
  for (int e = 0; e < n_el; ++e)
    for (const Vec3& q : xi) {
      const Vec3 x = mesh.map(e, q);
      std::fprintf(out, "%.10g %.10g %.10g\n", x[0], x[1], x[2]);
    }
  const int n_cells = n_el * cells_per_el;
  std::fprintf(out, "CELLS %d %d\n", n_cells, 9 * n_cells);
  auto id = [samples](int i, int j, int k) { return i + samples * (j + samples * k); };
  for (int e = 0; e < n_el; ++e) {
    const int base = e * per_el;
    for (int k = 0; k + 1 < samples; ++k)
      for (int j = 0; j + 1 < samples; ++j)
        for (int i = 0; i + 1 < samples; ++i)
          std::fprintf(out, "8 %d %d %d %d %d %d %d %d\n", base + id(i, j, k),
                       base + id(i + 1, j, k), base + id(i + 1, j + 1, k), base + id(i, j + 1, k),
                       base + id(i, j, k + 1), base + id(i + 1, j, k + 1),
                       base + id(i + 1, j + 1, k + 1), base + id(i, j + 1, k + 1));
  }
  std::fprintf(out, "CELL_TYPES %d\n", n_cells);
  for (int c = 0; c < n_cells; ++c) std::fprintf(out, "12\n");
  if (!fields.empty()) std::fprintf(out, "POINT_DATA %d\n", n_el * per_el);
  for (const auto& f : fields) {
    const Space s = f.field.space;
    if (is_vector_space(s)) {
      std::fprintf(out, "VECTORS %s double\n", f.name.c_str());
      for (int e = 0; e < n_el; ++e)
        for (const Vec3& q : xi) {
          const Vec3 v = assembler.evaluate(s, f.field.coefficients, e, q);
          std::fprintf(out, "%.10g %.10g %.10g\n", v[0], v[1], v[2]);
        }
    } else {
      std::fprintf(out, "SCALARS %s double 1\nLOOKUP_TABLE default\n", f.name.c_str());
      for (int e = 0; e < n_el; ++e)
        for (const Vec3& q : xi)
          std::fprintf(out, "%.10g\n", assembler.evaluate_scalar(s, f.field.coefficients, e, q));
    }
  }
  const bool failed = std::ferror(out);
  std::fclose(out);
  if (failed) throw IoError("failed writing " + path);
}

}  // namespace hallmhd
