#pragma once

#include <vector>

namespace hallmhd {

/// Mimetic 1D pair on [0,1]: Lagrange polynomials h_i (degree N) through the
/// Gauss-Lobatto nodes and histopolation "edge" polynomials e_j (degree N-1)
/// with integral of e_j over [t_l, t_{l+1}] equal to delta_jl.
///
/// d/dt sum_i a_i h_i = sum_j (a_{j+1} - a_j) e_j, which is what makes the
/// incidence matrices metric-free.
class Basis1D {
 public:
  explicit Basis1D(int degree);

  int degree() const { return degree_; }
  const std::vector<double>& nodes() const { return nodes_; }

  double node(int i, double t) const;
  double node_derivative(int i, double t) const;
  double edge(int j, double t) const;

  /// All N+1 node values / N edge values at t.
  void eval_nodes(double t, double* out) const;
  void eval_edges(double t, double* out) const;

 private:
  int degree_;
  std::vector<double> nodes_;
  std::vector<double> denom_;  // prod_{k != i} (t_i - t_k)
};

}  // namespace hallmhd
