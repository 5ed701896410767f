#include <cmath>
#include <random>

#include <Eigen/Cholesky>
#include <gtest/gtest.h>

#include "hallmhd/assembly.hpp"
#include "hallmhd/errors.hpp"
#include "hallmhd/mms.hpp"
#include "hallmhd/parallel.hpp"
#include "test_fields.hpp"

using namespace hallmhd;

namespace {

MappingSpec crazy(double c) { return {MappingKind::crazy, c}; }

VectorField constant(const Vec3& v) {
  return [v](const Vec3&, double) { return v; };
}

double max_abs(const SparseMatrix& m) {
  double r = 0.0;
  for (int i = 0; i < m.outerSize(); ++i)
    for (SparseMatrix::InnerIterator it(m, i); it; ++it) r = std::max(r, std::abs(it.value()));
  return r;
}

DiscreteField random_field(const DeRhamComplex& cx, Space s, std::mt19937_64& rng) {
  return {s, test::random_vector(cx.dimension(s), rng), 0};
}

}  // namespace

TEST(Assembly, ScalarMassOnUnitCube) {
  const DeRhamComplex cx = build_complex(build_mesh(1, BoxDomain{}, MappingSpec{}), 1);
  const Assembler asmb(cx);
  const SparseMatrix& m = mass_matrix(asmb, Space::S);
  ASSERT_EQ(m.rows(), 1);
  ASSERT_EQ(m.cols(), 1);
  EXPECT_NEAR(m.coeff(0, 0), 1.0, 1e-15);
}

TEST(Assembly, MassMatricesAreSymmetricPositiveDefinite) {
  const DeRhamComplex cx = build_complex(build_mesh(2, BoxDomain{}, crazy(0.1)), 2);
  for (bool exact : {true, false}) {
    const Assembler asmb(cx, {.exact_symmetry = exact});
    for (Space s : {Space::G, Space::C, Space::C0, Space::D, Space::S}) {
      const Eigen::MatrixXd m = Eigen::MatrixXd(asmb.mass(s));
      const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
      if (exact)
        EXPECT_EQ(asym, 0.0) << to_string(s);
      else
        EXPECT_LE(asym, 1e-15 * m.cwiseAbs().maxCoeff()) << to_string(s);
      Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (m + m.transpose()));
      EXPECT_EQ(llt.info(), Eigen::Success) << to_string(s);
    }
  }
}

TEST(Assembly, MassOfConstantFieldIsSquaredNormTimesVolume) {
  const BoxDomain box{Vec3(0, 0, 0), Vec3(1, 2, 3)};
  const DeRhamComplex cx = build_complex(build_mesh(2, box, MappingSpec{}), 2);
  const Assembler asmb(cx);
  const Vec3 v(1.0, -2.0, 0.5);
  for (Space s : {Space::C, Space::D}) {
    const Vector x = asmb.interpolate(s, constant(v), 0.0);
    EXPECT_NEAR(x.dot(asmb.mass(s) * x), v.squaredNorm() * 6.0, 1e-11) << to_string(s);
  }
}

TEST(Assembly, ConstantTrilinearValue) {
  const DeRhamComplex cx = build_complex(build_mesh(2, BoxDomain{}, MappingSpec{}), 1);
  const Assembler asmb(cx);
  const DiscreteField a{Space::C, asmb.interpolate(Space::C, constant(Vec3(1, 0, 0)), 0.0), 0};
  const Vector b = asmb.interpolate(Space::D, constant(Vec3(0, 1, 0)), 0.0);
  const Vector c = asmb.interpolate(Space::D, constant(Vec3(0, 0, 1)), 0.0);
  const SparseMatrix A = trilinear_matrix(asmb, TrilinearKind::A_omega, a);
  EXPECT_NEAR(c.dot(A * b), 1.0, 1e-13);
  EXPECT_NEAR(b.dot(A * c), -1.0, 1e-13);
}

TEST(Assembly, ZeroFrozenFieldGivesZeroMatrix) {
  const DeRhamComplex cx = build_complex(build_mesh(2, BoxDomain{}, crazy(0.1)), 2);
  const Assembler asmb(cx);
  const struct {
    TrilinearKind kind;
    Space space;
  } cases[] = {{TrilinearKind::A_omega, Space::C}, {TrilinearKind::A_H, Space::C0},
               {TrilinearKind::AA_H, Space::C0}, {TrilinearKind::A_u, Space::D},
               {TrilinearKind::A_B, Space::D}};
  for (const auto& c : cases) {
    const SparseMatrix m =
        asmb.trilinear(c.kind, {c.space, Vector::Zero(cx.dimension(c.space)), 0});
    EXPECT_EQ(max_abs(m), 0.0) << to_string(c.kind);
  }
}

TEST(Assembly, TrilinearShapes) {
  const DeRhamComplex cx = build_complex(build_mesh(2, BoxDomain{}, MappingSpec{}), 2);
  const Assembler asmb(cx);
  std::mt19937_64 rng(1);
  const int d = cx.dimension(Space::D), c = cx.dimension(Space::C), c0 = cx.dimension(Space::C0);
  const SparseMatrix Aw = asmb.trilinear(TrilinearKind::A_omega, random_field(cx, Space::C, rng));
  const SparseMatrix AH = asmb.trilinear(TrilinearKind::A_H, random_field(cx, Space::C0, rng));
  const SparseMatrix AAH = asmb.trilinear(TrilinearKind::AA_H, random_field(cx, Space::C0, rng));
  const SparseMatrix Au = asmb.trilinear(TrilinearKind::A_u, random_field(cx, Space::D, rng));
  EXPECT_EQ(Aw.rows(), d);
  EXPECT_EQ(Aw.cols(), d);
  EXPECT_EQ(AH.rows(), d);
  EXPECT_EQ(AH.cols(), c);
  EXPECT_EQ(AAH.rows(), c);
  EXPECT_EQ(AAH.cols(), c);
  EXPECT_EQ(Au.rows(), d);
  EXPECT_EQ(Au.cols(), c0);
}

TEST(Assembly, WrongFrozenSpaceIsRejected) {
  const DeRhamComplex cx = build_complex(build_mesh(2, BoxDomain{}, MappingSpec{}), 1);
  const Assembler asmb(cx);
  const DiscreteField d{Space::D, Vector::Zero(cx.dimension(Space::D)), 0};
  const DiscreteField c{Space::C, Vector::Zero(cx.dimension(Space::C)), 0};
  EXPECT_THROW(asmb.trilinear(TrilinearKind::A_omega, d), SpaceMismatch);
  EXPECT_THROW(asmb.trilinear(TrilinearKind::A_u, c), SpaceMismatch);
  EXPECT_THROW(asmb.trilinear(TrilinearKind::AA_H, d), SpaceMismatch);
  const DiscreteField short_c{Space::C, Vector::Zero(3), 0};
  EXPECT_THROW(asmb.trilinear(TrilinearKind::A_omega, short_c), ShapeMismatch);
  EXPECT_THROW(asmb.moments(Space::S, constant(Vec3(1, 0, 0)), 0.0), SpaceMismatch);
}

TEST(Assembly, SkewSymmetryWithAndWithoutExactSymmetrization) {
  const DeRhamComplex cx = build_complex(build_mesh(2, BoxDomain{}, crazy(0.1)), 2);
  std::mt19937_64 rng(4);
  for (bool exact : {true, false}) {
    const Assembler asmb(cx, {.exact_symmetry = exact});
    for (int trial = 0; trial < 3; ++trial) {
      const SparseMatrix Aw =
          asmb.trilinear(TrilinearKind::A_omega, random_field(cx, Space::C, rng));
      const SparseMatrix AAH =
          asmb.trilinear(TrilinearKind::AA_H, random_field(cx, Space::C0, rng));
      EXPECT_LE(max_abs(SparseMatrix(Aw + SparseMatrix(Aw.transpose()))), 1e-13 * max_abs(Aw));
      EXPECT_LE(max_abs(SparseMatrix(AAH + SparseMatrix(AAH.transpose()))),
                1e-13 * max_abs(AAH));
    }
  }
}

TEST(Assembly, VelocityAndMagneticKindsAreNegatives) {
  const DeRhamComplex cx = build_complex(build_mesh(2, BoxDomain{}, crazy(0.1)), 2);
  const Assembler asmb(cx);
  std::mt19937_64 rng(6);
  const DiscreteField F = random_field(cx, Space::D, rng);
  const SparseMatrix Au = asmb.trilinear(TrilinearKind::A_u, F);
  const SparseMatrix AB = asmb.trilinear(TrilinearKind::A_B, F);
  EXPECT_LE(max_abs(SparseMatrix(Au + AB)), 1e-14 * max_abs(Au));
}

TEST(Assembly, AdjointPairOfHallMatrices) {
  const DeRhamComplex cx = build_complex(build_mesh(2, BoxDomain{}, crazy(0.1)), 2);
  const Assembler asmb(cx);
  std::mt19937_64 rng(8);
  const DiscreteField H = random_field(cx, Space::C0, rng);
  const SparseMatrix AH = asmb.trilinear(TrilinearKind::A_H, H);
  const SparseMatrix AAH = asmb.trilinear(TrilinearKind::AA_H, H);
  for (int trial = 0; trial < 5; ++trial) {
    const Vector u = test::random_vector(cx.dimension(Space::D), rng);
    const Vector j = test::random_vector(cx.dimension(Space::C), rng);
    const Vector k = test::random_vector(cx.dimension(Space::C), rng);
    const double lhs = u.dot(AH * j), rhs = -j.dot(SparseMatrix(-AH.transpose()) * u);
    EXPECT_NEAR(lhs, rhs, 1e-13 * (std::abs(lhs) + 1.0));
    EXPECT_NEAR(k.dot(AAH * j), -j.dot(AAH * k), 1e-13 * (std::abs(k.dot(AAH * j)) + 1.0));
  }
}

TEST(Assembly, HallMatrixAgreesWithVorticityMatrixForConstantField) {
  const DeRhamComplex cx = build_complex(build_mesh(2, BoxDomain{}, MappingSpec{}), 2);
  const Assembler asmb(cx);
  std::mt19937_64 rng(12);
  const Vec3 h(0.4, -0.7, 1.3);
  const DiscreteField Hc{Space::C, asmb.interpolate(Space::C, constant(h), 0.0), 0};
  const Vector Hd = asmb.interpolate(Space::D, constant(h), 0.0);
  const DiscreteField s = random_field(cx, Space::C, rng);
  const Vector y = test::random_vector(cx.dimension(Space::D), rng);
  const double lhs = y.dot(asmb.trilinear(TrilinearKind::A_H, Hc) * s.coefficients);
  const double rhs = y.dot(asmb.trilinear(TrilinearKind::A_omega, s) * Hd);
  EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, std::abs(lhs)));
}

TEST(Assembly, LoadVectorOfConstantEqualsMassTimesInterpolant) {
  const DeRhamComplex cx = build_complex(build_mesh(2, BoxDomain{}, MappingSpec{}), 2);
  const Assembler asmb(cx);
  const VectorField f = constant(Vec3(0, 0, 1));
  const Vector lhs = load_vector(asmb, f, 0.0);
  const Vector rhs = asmb.mass(Space::D) * interpolate(asmb, Space::D, f, 0.0).coefficients;
  EXPECT_LE(test::max_abs(lhs - rhs), 1e-12);
  EXPECT_EQ(test::max_abs(load_vector(asmb, constant(Vec3::Zero()), 0.0)), 0.0);
}

TEST(Assembly, ManufacturedForcingIsStableUnderQuadratureRefinement) {
  const BoxDomain box{Vec3::Zero(), Vec3::Constant(2 * std::numbers::pi)};
  const DeRhamComplex cx = build_complex(build_mesh(2, box, MappingSpec{}), 1);
  SchemeParams p;
  p.Rf = p.Rm = 1.0;
  const ManufacturedCase mc(p);
  const Vector coarse = load_vector(Assembler(cx, {.quadrature_points = 10}), mc.field("f"), 0.5);
  const Vector fine = load_vector(Assembler(cx, {.quadrature_points = 14}), mc.field("f"), 0.5);
  ASSERT_TRUE(fine.allFinite());
  EXPECT_LE((coarse - fine).norm(), 1e-8 * fine.norm());
}

TEST(Assembly, PolynomialReproductionOnAffineMesh) {
  const DeRhamComplex cx = build_complex(build_mesh(2, BoxDomain{}, MappingSpec{}), 2);
  const Assembler asmb(cx);
  const VectorField p = [](const Vec3& x, double) {
    return Vec3(x[1] * x[2], x[0] - x[2], 2.0 * x[0] * x[1]);
  };
  const ScalarField q = [](const Vec3& x, double) { return x[0] * x[1] * x[2] + x[1] * x[1]; };
  for (Space s : {Space::C, Space::D}) {
    EXPECT_LE(asmb.l2_error(s, asmb.interpolate(s, p, 0.0), p, 0.0), 1e-12) << to_string(s);
  }
  EXPECT_LE(asmb.l2_error(Space::G, asmb.interpolate(Space::G, q, 0.0), q, 0.0), 1e-12);
}

TEST(Assembly, InterpolationErrorDecreasesWithRefinement) {
  const VectorField f = [](const Vec3& x, double) {
    return Vec3(std::sin(3 * x[1]), std::cos(2 * x[2]) * x[0], std::exp(x[0] * x[1]));
  };
  double previous = 1e300;
  for (int K : {2, 4, 8}) {
    const DeRhamComplex cx = build_complex(build_mesh(K, BoxDomain{}, crazy(0.1)), 1);
    const Assembler asmb(cx);
    const double err = asmb.l2_error(Space::D, asmb.interpolate(Space::D, f, 0.0), f, 0.0);
    EXPECT_LT(err, 0.7 * previous) << "K=" << K;
    previous = err;
  }
}

TEST(Assembly, ThreadCountDoesNotChangeResults) {
  const DeRhamComplex cx = build_complex(build_mesh(3, BoxDomain{}, crazy(0.1)), 2);
  std::mt19937_64 rng(14);
  const DiscreteField w = random_field(cx, Space::C, rng);
  set_thread_count(1);
  const Assembler serial(cx);
  const SparseMatrix a = serial.trilinear(TrilinearKind::A_omega, w);
  set_thread_count(4);
  const Assembler threaded(cx);
  const SparseMatrix b = threaded.trilinear(TrilinearKind::A_omega, w);
  set_thread_count(0);
  EXPECT_EQ(max_abs(SparseMatrix(a - b)), 0.0);
  EXPECT_EQ(max_abs(SparseMatrix(serial.mass(Space::C) - threaded.mass(Space::C))), 0.0);
}
