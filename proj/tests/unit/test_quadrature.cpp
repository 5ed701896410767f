#include <cmath>

#include <gtest/gtest.h>

#include "hallmhd/basis1d.hpp"
#include "hallmhd/quadrature.hpp"

using namespace hallmhd;

namespace {

double integrate(const QuadratureRule& rule, auto f) {
  double s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) s += rule.weights[i] * f(rule.points[i]);
  return s;
}

}  // namespace

TEST(GaussRule, OnePoint) {
  const QuadratureRule r = gauss_rule(1);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_DOUBLE_EQ(r.points[0], 0.0);
  EXPECT_DOUBLE_EQ(r.weights[0], 2.0);
}

TEST(GaussRule, TwoPoint) {
  const QuadratureRule r = gauss_rule(2);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_NEAR(std::abs(r.points[0]), 1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(r.points[0], -r.points[1], 1e-15);
  EXPECT_NEAR(r.weights[0], 1.0, 1e-15);
  EXPECT_NEAR(r.weights[1], 1.0, 1e-15);
}

TEST(GaussRule, ExactForDegree2nMinus1) {
  const QuadratureRule r = gauss_rule(5);
  EXPECT_NEAR(integrate(r, [](double x) { return std::pow(x, 8); }), 2.0 / 9.0, 1e-15);
  for (int p = 0; p <= 9; ++p) {
    const double exact = p % 2 ? 0.0 : 2.0 / (p + 1);
    EXPECT_NEAR(integrate(r, [p](double x) { return std::pow(x, p); }), exact, 1e-14) << p;
  }
}

TEST(GaussRule, RejectsZeroPoints) { EXPECT_THROW(gauss_rule(0), std::invalid_argument); }

TEST(GaussLobatto, EndpointsAndSymmetry) {
  for (int N = 1; N <= 6; ++N) {
    const auto x = gauss_lobatto_nodes(N);
    ASSERT_EQ(static_cast<int>(x.size()), N + 1);
    EXPECT_DOUBLE_EQ(x.front(), -1.0);
    EXPECT_DOUBLE_EQ(x.back(), 1.0);
    for (int i = 0; i <= N; ++i) EXPECT_NEAR(x[i], -x[N - i], 1e-15);
    for (int i = 0; i < N; ++i) EXPECT_LT(x[i], x[i + 1]);
  }
  const auto x2 = gauss_lobatto_nodes(2);
  EXPECT_NEAR(x2[1], 0.0, 1e-16);
  const auto x3 = gauss_lobatto_nodes(3);
  EXPECT_NEAR(x3[2], 1.0 / std::sqrt(5.0), 1e-15);
}

TEST(TensorRule, IntegratesTrilinearMonomialOnUnitCube) {
  const TensorRule t = tensor_rule(gauss_rule(3));
  ASSERT_EQ(t.size(), 27u);
  double vol = 0.0, s = 0.0;
  for (std::size_t q = 0; q < t.size(); ++q) {
    vol += t.weights[q];
    s += t.weights[q] * t.points[q][0] * t.points[q][1] * t.points[q][1] * std::pow(t.points[q][2], 3);
  }
  EXPECT_NEAR(vol, 1.0, 1e-14);
  EXPECT_NEAR(s, 0.5 / 3.0 / 4.0, 1e-14);
}

TEST(Basis1D, NodalAndHistopolationProperties) {
  for (int N = 1; N <= 4; ++N) {
    const Basis1D b(N);
    const auto& t = b.nodes();
    for (int i = 0; i <= N; ++i)
      for (int l = 0; l <= N; ++l) EXPECT_NEAR(b.node(i, t[l]), i == l ? 1.0 : 0.0, 1e-13);
    const QuadratureRule g = gauss_rule(N + 2);
    for (int j = 0; j < N; ++j) {
      for (int l = 0; l < N; ++l) {
        const double a = t[l], h = t[l + 1] - t[l];
        double s = 0.0;
        for (std::size_t q = 0; q < g.size(); ++q)
          s += 0.5 * h * g.weights[q] * b.edge(j, a + 0.5 * h * (g.points[q] + 1.0));
        EXPECT_NEAR(s, j == l ? 1.0 : 0.0, 1e-13) << "N=" << N << " j=" << j << " l=" << l;
      }
    }
  }
}

TEST(Basis1D, DerivativeOfNodalExpansionIsEdgeDifference) {
  const Basis1D b(3);
  const double a[4] = {0.3, -1.2, 2.0, 0.7};
  for (double t : {0.05, 0.31, 0.5, 0.88}) {
    double lhs = 0.0, rhs = 0.0;
    for (int i = 0; i < 4; ++i) lhs += a[i] * b.node_derivative(i, t);
    for (int j = 0; j < 3; ++j) rhs += (a[j + 1] - a[j]) * b.edge(j, t);
    EXPECT_NEAR(lhs, rhs, 1e-12);
  }
}
