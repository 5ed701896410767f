#pragma once

#include <string>
#include <vector>

#include "hallmhd/assembly.hpp"
#include "hallmhd/scheme.hpp"

namespace hallmhd {

/// Everything needed to resume a run bit-for-bit, plus the discretization it
/// belongs to so a mismatched restart is rejected.
struct Checkpoint {
  int N = 0;
  int K = 0;
  double dt = 0.0;
  SimulationState state;
};

/// JSON with round-trip double precision. Throws IoError.
void save_checkpoint(const std::string& path, const Checkpoint& checkpoint);
/// Throws IoError for unreadable or malformed files.
Checkpoint load_checkpoint(const std::string& path);
/// Throws IoError when the checkpoint does not fit the complex or time step.
void check_compatible(const Checkpoint& checkpoint, const DeRhamComplex& complex, double dt);

struct NamedField {
  std::string name;
  DiscreteField field;
};

/// Legacy ASCII VTK unstructured grid. Every element is sampled on a uniform
/// samples^3 lattice (samples >= 2) and split into (samples-1)^3 hexahedra;
/// vector spaces are written as VECTORS, G and S as SCALARS. Throws IoError.
void write_vtk(const std::string& path, const Assembler& assembler,
               const std::vector<NamedField>& fields, int samples = 3,
               const std::string& title = "hallmhd");

}  // namespace hallmhd
