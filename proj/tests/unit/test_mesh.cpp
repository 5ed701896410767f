#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "hallmhd/errors.hpp"
#include "hallmhd/mesh.hpp"
#include "hallmhd/quadrature.hpp"
#include "test_fields.hpp"

using namespace hallmhd;

namespace {

constexpr double pi = std::numbers::pi;

MappingSpec crazy(double c) { return {MappingKind::crazy, c}; }

}  // namespace

TEST(HexMesh, SingleAffineElementHasUnitDeterminant) {
  const HexMesh mesh = build_mesh(1, BoxDomain{}, MappingSpec{});
  const TensorRule rule = tensor_rule(gauss_rule(3));
  const ElementGeometry g = jacobian_data(mesh, 0, rule);
  for (double det : g.det) EXPECT_DOUBLE_EQ(det, 1.0);
  double volume = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) volume += rule.weights[q] * g.det[q];
  EXPECT_NEAR(volume, 1.0, 1e-14);
}

TEST(HexMesh, AffineBoxScalesDeterminant) {
  const BoxDomain box{Vec3(0, 0, 0), Vec3(2 * pi, 2 * pi, 2 * pi)};
  const HexMesh mesh = build_mesh(4, box, MappingSpec{});
  const Mat3 J = mesh.jacobian(17, Vec3(0.3, 0.6, 0.1));
  EXPECT_NEAR(J.determinant(), std::pow(2 * pi / 4, 3), 1e-12);
  EXPECT_NEAR((J - Mat3::Identity() * (2 * pi / 4)).norm(), 0.0, 1e-14);
}

TEST(HexMesh, CrazyWithZeroDistortionIsAffine) {
  const HexMesh affine = build_mesh(3, BoxDomain{}, MappingSpec{});
  const HexMesh zero = build_mesh(3, BoxDomain{}, crazy(0.0));
  std::mt19937_64 rng(7);
  for (int e = 0; e < affine.element_count(); ++e) {
    const Vec3 xi = test::random_point(rng);
    EXPECT_EQ((affine.map(e, xi) - zero.map(e, xi)).norm(), 0.0);
    EXPECT_EQ((affine.jacobian(e, xi) - zero.jacobian(e, xi)).norm(), 0.0);
  }
}

TEST(HexMesh, CrazyInteriorVertexDisplacement) {
  const HexMesh mesh = build_mesh(3, BoxDomain{}, crazy(0.1));
  const int e = mesh.element_index(1, 1, 1);
  const Vec3 x = mesh.map(e, Vec3::Zero());
  const double expected = 1.0 / 3.0 + 0.05 * std::pow(std::sin(2 * pi / 3), 3);
  for (int d = 0; d < 3; ++d) EXPECT_NEAR(x[d], expected, 1e-15);
}

TEST(HexMesh, JacobianMatchesFiniteDifferences) {
  const BoxDomain box{Vec3(-1, 0, 0.5), Vec3(1, 3, 2)};
  const HexMesh mesh = build_mesh(2, box, crazy(0.1));
  std::mt19937_64 rng(11);
  const double eps = 1e-6;
  for (int trial = 0; trial < 20; ++trial) {
    const int e = static_cast<int>(rng() % mesh.element_count());
    const Vec3 xi = test::random_point(rng, 0.1, 0.9);
    const Mat3 J = mesh.jacobian(e, xi);
    for (int c = 0; c < 3; ++c) {
      Vec3 dp = xi, dm = xi;
      dp[c] += eps;
      dm[c] -= eps;
      const Vec3 fd = (mesh.map(e, dp) - mesh.map(e, dm)) / (2 * eps);
      EXPECT_LT((fd - J.col(c)).cwiseAbs().maxCoeff(), 1e-7);
    }
  }
}

TEST(HexMesh, BoundaryFacesStayOnBoundary) {
  const BoxDomain box{Vec3(0, 0, 0), Vec3(2, 1, 3)};
  const int K = 3;
  const HexMesh mesh = build_mesh(K, box, crazy(0.2));
  std::mt19937_64 rng(3);
  for (int axis = 0; axis < 3; ++axis) {
    for (int side = 0; side < 2; ++side) {
      for (int trial = 0; trial < 30; ++trial) {
        std::array<int, 3> ec{static_cast<int>(rng() % K), static_cast<int>(rng() % K),
                              static_cast<int>(rng() % K)};
        ec[axis] = side ? K - 1 : 0;
        Vec3 xi = test::random_point(rng);
        xi[axis] = side;
        const Vec3 x = mesh.map(mesh.element_index(ec[0], ec[1], ec[2]), xi);
        const double wall = side ? box.hi[axis] : box.lo[axis];
        EXPECT_NEAR(x[axis], wall, 1e-14);
      }
    }
  }
}

TEST(HexMesh, NeighbouringElementsShareFaces) {
  const HexMesh mesh = build_mesh(3, BoxDomain{}, crazy(0.1));
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec3 xi = test::random_point(rng);
    const Vec3 left = mesh.map(mesh.element_index(0, 1, 2), Vec3(1.0, xi[1], xi[2]));
    const Vec3 right = mesh.map(mesh.element_index(1, 1, 2), Vec3(0.0, xi[1], xi[2]));
    EXPECT_LT((left - right).norm(), 1e-15);
  }
}

TEST(HexMesh, LargeDistortionIsRejected) {
  EXPECT_THROW(build_mesh(3, BoxDomain{}, crazy(0.5)), NonPositiveJacobian);
  EXPECT_NO_THROW(build_mesh(3, BoxDomain{}, crazy(0.1)));
}

TEST(HexMesh, InvalidArguments) {
  EXPECT_THROW(build_mesh(0, BoxDomain{}, MappingSpec{}), std::invalid_argument);
  EXPECT_THROW(build_mesh(2, BoxDomain{Vec3(0, 0, 0), Vec3(1, 0, 1)}, MappingSpec{}),
               std::invalid_argument);
}

TEST(HexMesh, GeometryInverseTransposeIsConsistent) {
  const HexMesh mesh = build_mesh(2, BoxDomain{}, crazy(0.15));
  const TensorRule rule = tensor_rule(gauss_rule(3));
  const ElementGeometry g = jacobian_data(mesh, 5, rule);
  ASSERT_EQ(g.det.size(), rule.size());
  for (std::size_t q = 0; q < rule.size(); ++q) {
    EXPECT_NEAR(g.det[q], g.jacobian[q].determinant(), 1e-14);
    EXPECT_LT((g.inverse_transpose[q].transpose() * g.jacobian[q] - Mat3::Identity()).norm(),
              1e-13);
    EXPECT_LT((g.points[q] - mesh.map(5, rule.points[q])).norm(), 1e-15);
  }
}

TEST(HexMesh, CurvedVolumeIsPreserved) {
  const HexMesh mesh = build_mesh(3, BoxDomain{}, crazy(0.1));
  const TensorRule rule = tensor_rule(gauss_rule(8));
  double volume = 0.0;
  for (int e = 0; e < mesh.element_count(); ++e) {
    const ElementGeometry g = jacobian_data(mesh, e, rule);
    for (std::size_t q = 0; q < rule.size(); ++q) volume += rule.weights[q] * g.det[q];
  }
  EXPECT_NEAR(volume, 1.0, 1e-12);
}
