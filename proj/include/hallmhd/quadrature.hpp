#pragma once

#include <vector>

#include "hallmhd/types.hpp"

namespace hallmhd {

/// One-dimensional rule on [-1, 1].
struct QuadratureRule {
  std::vector<double> points;
  std::vector<double> weights;

  std::size_t size() const { return points.size(); }
};

/// n-point Gauss-Legendre rule on [-1, 1]; exact for polynomials of degree <= 2n-1.
QuadratureRule gauss_rule(int n);

/// Gauss-Lobatto-Legendre nodes (N+1 of them, endpoints included) on [-1, 1], ascending.
std::vector<double> gauss_lobatto_nodes(int N);

/// Tensor-product rule on the unit cube [0,1]^3. Point index q = q0 + n0*(q1 + n1*q2).
struct TensorRule {
  std::vector<Vec3> points;
  std::vector<double> weights;
  int n = 0;  // points per direction

  std::size_t size() const { return points.size(); }
};

TensorRule tensor_rule(const QuadratureRule& rule);

}  // namespace hallmhd
