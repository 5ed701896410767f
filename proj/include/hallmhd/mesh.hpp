#pragma once

#include <array>
#include <vector>

#include "hallmhd/quadrature.hpp"
#include "hallmhd/types.hpp"

namespace hallmhd {

struct BoxDomain {
  Vec3 lo = Vec3::Zero();
  Vec3 hi = Vec3::Ones();

  Vec3 extent() const { return hi - lo; }
  void validate() const;
};

enum class MappingKind { affine, crazy };

/// kind=crazy distorts the reference cube by
///   x_d = r_d + (c/2) sin(2 pi r) sin(2 pi s) sin(2 pi t)   for every d,
/// before scaling to the domain box. The sine product vanishes on the cube
/// boundary, so boundary faces stay on the boundary.
struct MappingSpec {
  MappingKind kind = MappingKind::affine;
  double distortion = 0.0;
};

/// K^3 hexahedra. Each element owns the local cube xi in [0,1]^3, composed
/// with the global reference coordinate r = (element_coords + xi)/K and then
/// the global mapping. Faces are shared conformingly because every element
/// inherits the same global parameterization.
class HexMesh {
 public:
  HexMesh(int K, const BoxDomain& domain, const MappingSpec& mapping);

  int elements_per_axis() const { return K_; }
  int element_count() const { return K_ * K_ * K_; }
  const BoxDomain& domain() const { return domain_; }
  const MappingSpec& mapping() const { return mapping_; }

  std::array<int, 3> element_coords(int element) const;
  int element_index(int ex, int ey, int ez) const { return ex + K_ * (ey + K_ * ez); }

  /// Global reference coordinate r in [0,1]^3 of local point xi in an element.
  Vec3 reference_point(int element, const Vec3& xi) const;

  /// Global map r -> x and its closed-form derivative dx/dr.
  Vec3 map_reference(const Vec3& r) const;
  Mat3 reference_jacobian(const Vec3& r) const;

  /// Element map xi -> x and its derivative dx/dxi.
  Vec3 map(int element, const Vec3& xi) const;
  Mat3 jacobian(int element, const Vec3& xi) const;

 private:
  int K_;
  BoxDomain domain_;
  MappingSpec mapping_;
};

/// Throws NonPositiveJacobian if det J <= 0 at any sample of a 5-point Gauss
/// rule or at any element vertex.
HexMesh build_mesh(int K, const BoxDomain& domain, const MappingSpec& mapping);

/// Per-quadrature-point metric data of one element.
struct ElementGeometry {
  std::vector<Vec3> points;  // physical coordinates
  std::vector<Mat3> jacobian;
  std::vector<Mat3> inverse_transpose;
  std::vector<double> det;
};

ElementGeometry jacobian_data(const HexMesh& mesh, int element, const TensorRule& rule);

}  // namespace hallmhd
