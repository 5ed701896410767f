#pragma once

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "hallmhd/basis1d.hpp"
#include "hallmhd/mesh.hpp"
#include "hallmhd/types.hpp"

namespace hallmhd {

/// G in H1, C in H(curl), C0 the C-subspace with vanishing tangential trace,
/// D in H(div), S in L2.
enum class Space { G, C, C0, D, S };

std::string_view to_string(Space space);
bool is_vector_space(Space space);

enum class AxisKind : unsigned char { node, edge };

/// One tensor-product block of a space: per-axis node/edge polynomials and
/// (for vector spaces) the reference direction it points in.
struct Component {
  std::array<AxisKind, 3> kinds{};
  int direction = -1;  // -1 for scalar spaces
  std::array<int, 3> local_extent{};
  int local_offset = 0;
  std::array<int, 3> global_extent{};
  int global_offset = 0;

  int local_index(int i, int j, int k) const {
    return local_offset + i + local_extent[0] * (j + local_extent[1] * k);
  }
  int global_index(int i, int j, int k) const {
    return global_offset + i + global_extent[0] * (j + global_extent[1] * k);
  }
};

/// Coefficient vector tagged with its space and a time label measured in half steps.
struct DiscreteField {
  Space space = Space::D;
  Vector coefficients;
  int half_steps = 0;

  double time_label() const { return 0.5 * half_steps; }
};

struct IncidenceMatrices {
  IntSparse grad;   // C x G
  IntSparse curl;   // D x C
  IntSparse div;    // S x D
  IntSparse curl0;  // D x C0
};

/// Conforming mimetic spectral complex G -> C -> D -> S of degree N on a hex mesh.
///
/// Global DOFs live on the tensor lattice of NK+1 Gauss-Lobatto nodes (and NK
/// edges) per axis, oriented along increasing axis index; element-local DOFs
/// map to them with sign +1.
class DeRhamComplex {
 public:
  DeRhamComplex(const HexMesh& mesh, int degree);

  const HexMesh& mesh() const { return mesh_; }
  int degree() const { return degree_; }
  const Basis1D& basis() const { return basis_; }

  int dimension(Space space) const;
  /// Local basis count per element (C0 shares C's local basis).
  int local_dimension(Space space) const;
  const std::vector<Component>& components(Space space) const;

  /// Global indices of the element's local basis. For C0, boundary DOFs map to -1.
  std::span<const int> element_dofs(Space space, int element) const;

  /// C-index -> C0-index (or -1 on the boundary), and the inverse.
  const std::vector<int>& c_to_c0() const { return c_to_c0_; }
  const std::vector<int>& c0_to_c() const { return c0_to_c_; }
  /// True for C DOFs carrying a tangential trace on the domain boundary.
  const std::vector<bool>& boundary_mask() const { return boundary_; }

  const IncidenceMatrices& incidence() const { return incidence_; }
  const SparseMatrix& grad() const { return grad_; }
  const SparseMatrix& curl() const { return curl_; }
  const SparseMatrix& div() const { return div_; }
  const SparseMatrix& curl0() const { return curl0_; }
  /// div∘curl0 formed in integer arithmetic (structurally empty).
  const SparseMatrix& div_curl0() const { return div_curl0_; }

  Vector restrict_to_c0(const Vector& c) const;
  Vector embed_c0(const Vector& c0) const;

  /// Global reference coordinates (in [0,1]) of the NK+1 lattice nodes per axis.
  const std::vector<double>& lattice_nodes() const { return lattice_; }

  /// Reference (un-mapped) values of all local basis functions of `space` at
  /// local points xi. Vector spaces: rows (b*3 + d), scalar: rows b; each row
  /// holds one value per point (structure-of-arrays).
  std::vector<double> reference_values(Space space, std::span<const Vec3> points) const;

 private:
  void build_components();
  void build_dof_tables();
  void build_incidence();

  HexMesh mesh_;
  int degree_;
  Basis1D basis_;
  std::array<std::vector<Component>, 4> comps_;  // G, C, D, S
  std::array<int, 4> dims_{};
  std::array<int, 4> local_dims_{};
  std::array<std::vector<int>, 5> tables_;
  std::vector<int> c_to_c0_, c0_to_c_;
  std::vector<bool> boundary_;
  std::vector<double> lattice_;
  IncidenceMatrices incidence_;
  SparseMatrix grad_, curl_, div_, curl0_, div_curl0_;
};

DeRhamComplex build_complex(const HexMesh& mesh, int degree);

/// The four integer incidence matrices (grad, curl, div, curl restricted to C0).
IncidenceMatrices incidence_matrices(const DeRhamComplex& complex);

/// Drop boundary-tangential DOFs of a C field. Throws SpaceMismatch otherwise.
DiscreteField restrict_boundary(const DeRhamComplex& complex, const DiscreteField& field);
/// Zero-padding embedding C0 -> C. Throws SpaceMismatch otherwise.
DiscreteField embed_boundary(const DeRhamComplex& complex, const DiscreteField& field);

/// Piola-mapped local basis values at local points of one element.
struct BasisEvaluation {
  Space space = Space::S;
  int count = 0;
  int points = 0;
  bool is_vector = false;
  std::vector<double> values;  // SoA like DeRhamComplex::reference_values

  Vec3 vector_value(int b, int p) const {
    return Vec3(values[(b * 3 + 0) * points + p], values[(b * 3 + 1) * points + p],
                values[(b * 3 + 2) * points + p]);
  }
  double scalar_value(int b, int p) const { return values[b * points + p]; }
};

/// Covariant Piola for C/C0, contravariant (J v / det J) for D, 1/det J for S.
BasisEvaluation evaluate_basis(const DeRhamComplex& complex, Space space, int element,
                               std::span<const Vec3> points);

}  // namespace hallmhd
