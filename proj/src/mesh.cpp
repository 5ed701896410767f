#include "hallmhd/mesh.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "hallmhd/errors.hpp"

namespace hallmhd {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

std::string describe(const Vec3& xi) {
  std::ostringstream os;
  os << "xi=(" << xi[0] << ", " << xi[1] << ", " << xi[2] << ")";
  return os.str();
}

}  // namespace

void BoxDomain::validate() const {
  for (int d = 0; d < 3; ++d)
    if (!(hi[d] > lo[d])) throw std::invalid_argument("BoxDomain: hi must exceed lo on every axis");
}

HexMesh::HexMesh(int K, const BoxDomain& domain, const MappingSpec& mapping)
    : K_(K), domain_(domain), mapping_(mapping) {
  if (K < 1) throw std::invalid_argument("HexMesh: K must be >= 1");
  domain_.validate();
}

std::array<int, 3> HexMesh::element_coords(int element) const {
  return {element % K_, (element / K_) % K_, element / (K_ * K_)};
}

Vec3 HexMesh::reference_point(int element, const Vec3& xi) const {
  const auto c = element_coords(element);
  return Vec3((c[0] + xi[0]) / K_, (c[1] + xi[1]) / K_, (c[2] + xi[2]) / K_);
}

Vec3 HexMesh::map_reference(const Vec3& r) const {
  Vec3 x = r;
  if (mapping_.kind == MappingKind::crazy && mapping_.distortion != 0.0) {
    const double s = 0.5 * mapping_.distortion * std::sin(two_pi * r[0]) * std::sin(two_pi * r[1]) *
                     std::sin(two_pi * r[2]);
    x.array() += s;
  }
  return domain_.lo + domain_.extent().cwiseProduct(x);
}

Mat3 HexMesh::reference_jacobian(const Vec3& r) const {
  Mat3 J = Mat3::Identity();
  if (mapping_.kind == MappingKind::crazy && mapping_.distortion != 0.0) {
    const double sx = std::sin(two_pi * r[0]), sy = std::sin(two_pi * r[1]),
                 sz = std::sin(two_pi * r[2]);
    const double cx = std::cos(two_pi * r[0]), cy = std::cos(two_pi * r[1]),
                 cz = std::cos(two_pi * r[2]);
    const double a = 0.5 * mapping_.distortion * two_pi;
    const Vec3 grad(a * cx * sy * sz, a * sx * cy * sz, a * sx * sy * cz);
    for (int d = 0; d < 3; ++d) J.row(d) += grad.transpose();
  }
  return domain_.extent().asDiagonal() * J;
}

Vec3 HexMesh::map(int element, const Vec3& xi) const {
  return map_reference(reference_point(element, xi));
}

Mat3 HexMesh::jacobian(int element, const Vec3& xi) const {
  return reference_jacobian(reference_point(element, xi)) / static_cast<double>(K_);
}

HexMesh build_mesh(int K, const BoxDomain& domain, const MappingSpec& mapping) {
  HexMesh mesh(K, domain, mapping);
  if (mapping.kind == MappingKind::affine) return mesh;

  auto samples = tensor_rule(gauss_rule(5)).points;
  for (int c = 0; c < 8; ++c) samples.emplace_back(c & 1, (c >> 1) & 1, (c >> 2) & 1);
  for (int e = 0; e < mesh.element_count(); ++e)
    for (const auto& xi : samples) {
      const double det = mesh.jacobian(e, xi).determinant();
      if (!(det > 0.0)) throw NonPositiveJacobian(e, det, describe(xi));
    }
  return mesh;
}

ElementGeometry jacobian_data(const HexMesh& mesh, int element, const TensorRule& rule) {
  if (element < 0 || element >= mesh.element_count())
    throw std::out_of_range("jacobian_data: element index out of range");
  ElementGeometry g;
  const std::size_t n = rule.size();
  g.points.resize(n);
  g.jacobian.resize(n);
  g.inverse_transpose.resize(n);
  g.det.resize(n);
  for (std::size_t q = 0; q < n; ++q) {
    const Mat3 J = mesh.jacobian(element, rule.points[q]);
    const double det = J.determinant();
    if (!(det > 0.0)) throw NonPositiveJacobian(element, det, describe(rule.points[q]));
    g.points[q] = mesh.map(element, rule.points[q]);
    g.jacobian[q] = J;
    g.det[q] = det;
    g.inverse_transpose[q] = J.inverse().transpose();
  }
  return g;
}

}  // namespace hallmhd
