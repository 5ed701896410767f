#include "hallmhd/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hallmhd {

namespace {

// Legendre P_n(x) and its derivative by the three-term recurrence.
void legendre(int n, double x, double& p, double& dp) {
  double p0 = 1.0, p1 = x;
  if (n == 0) {
    p = 1.0;
    dp = 0.0;
    return;
  }
  for (int k = 2; k <= n; ++k) {
    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = pk;
  }
  p = p1;
  dp = n * (x * p1 - p0) / (x * x - 1.0);
}

}  // namespace

QuadratureRule gauss_rule(int n) {
  if (n < 1) throw std::invalid_argument("gauss_rule: n must be >= 1");
  QuadratureRule rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double p = 0, dp = 0;
    for (int it = 0; it < 100; ++it) {
      legendre(n, x, p, dp);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre(n, x, p, dp);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.points[i] = -x;
    rule.points[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.points[n / 2] = 0.0;
  return rule;
}

std::vector<double> gauss_lobatto_nodes(int N) {
  if (N < 1) throw std::invalid_argument("gauss_lobatto_nodes: N must be >= 1");
  const int n1 = N + 1;
  std::vector<double> x(n1), xold(n1);
  for (int i = 0; i < n1; ++i) x[i] = std::cos(std::numbers::pi * i / N);
  std::vector<double> pn(n1), pnm1(n1);
  for (int it = 0; it < 200; ++it) {
    double change = 0.0;
    for (int i = 0; i < n1; ++i) {
      double p0 = 1.0, p1 = x[i];
      for (int k = 2; k <= N; ++k) {
        const double pk = ((2.0 * k - 1.0) * x[i] * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      // p1 = P_N, p0 = P_{N-1}
      xold[i] = x[i];
      x[i] = xold[i] - (x[i] * p1 - p0) / (n1 * p1);
      change = std::max(change, std::abs(x[i] - xold[i]));
    }
    if (change < 1e-16) break;
  }
  std::vector<double> asc(x.rbegin(), x.rend());
  asc.front() = -1.0;
  asc.back() = 1.0;
  return asc;
}

TensorRule tensor_rule(const QuadratureRule& rule) {
  const int n = static_cast<int>(rule.size());
  TensorRule t;
  t.n = n;
  t.points.reserve(n * n * n);
  t.weights.reserve(n * n * n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        t.points.emplace_back(0.5 * (1.0 + rule.points[i]), 0.5 * (1.0 + rule.points[j]),
                              0.5 * (1.0 + rule.points[k]));
        t.weights.push_back(0.125 * rule.weights[i] * rule.weights[j] * rule.weights[k]);
      }
  return t;
}

}  // namespace hallmhd
