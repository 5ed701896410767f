#include "hallmhd/basis1d.hpp"

#include <stdexcept>

#include "hallmhd/quadrature.hpp"

namespace hallmhd {

Basis1D::Basis1D(int degree) : degree_(degree) {
  if (degree < 1) throw std::invalid_argument("Basis1D: degree must be >= 1");
  const auto gll = gauss_lobatto_nodes(degree);
  nodes_.resize(gll.size());
  for (std::size_t i = 0; i < gll.size(); ++i) nodes_[i] = 0.5 * (1.0 + gll[i]);
  nodes_.front() = 0.0;
  nodes_.back() = 1.0;
  denom_.assign(nodes_.size(), 1.0);
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    for (std::size_t k = 0; k < nodes_.size(); ++k)
      if (k != i) denom_[i] *= nodes_[i] - nodes_[k];
}

double Basis1D::node(int i, double t) const {
  double p = 1.0;
  for (int k = 0; k <= degree_; ++k)
    if (k != i) p *= t - nodes_[k];
  return p / denom_[i];
}

double Basis1D::node_derivative(int i, double t) const {
  double sum = 0.0;
  for (int m = 0; m <= degree_; ++m) {
    if (m == i) continue;
    double p = 1.0;
    for (int k = 0; k <= degree_; ++k)
      if (k != i && k != m) p *= t - nodes_[k];
    sum += p;
  }
  return sum / denom_[i];
}

double Basis1D::edge(int j, double t) const {
  double s = 0.0;
  for (int k = 0; k <= j; ++k) s -= node_derivative(k, t);
  return s;
}

void Basis1D::eval_nodes(double t, double* out) const {
  for (int i = 0; i <= degree_; ++i) out[i] = node(i, t);
}

void Basis1D::eval_edges(double t, double* out) const {
  double s = 0.0;
  for (int j = 0; j < degree_; ++j) {
    s -= node_derivative(j, t);
    out[j] = s;
  }
}

}  // namespace hallmhd
