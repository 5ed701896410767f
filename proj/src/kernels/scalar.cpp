#include "hallmhd/kernels.hpp"

namespace hallmhd::kernels {

namespace {

void gram(const double* a, int m, const double* b, int n, int len, double* out) {
  for (int i = 0; i < m; ++i) {
    const double* ai = a + static_cast<long>(i) * len;
    for (int j = 0; j < n; ++j) {
      const double* bj = b + static_cast<long>(j) * len;
      double s = 0.0;
      for (int p = 0; p < len; ++p) s += ai[p] * bj[p];
      out[static_cast<long>(i) * n + j] = s;
    }
  }
}

void transform3(const double* mat, double* v, int nb, int q) {
  for (int b = 0; b < nb; ++b) {
    double* x = v + static_cast<long>(b) * 3 * q;
    double* y = x + q;
    double* z = y + q;
    for (int p = 0; p < q; ++p) {
      const double vx = x[p], vy = y[p], vz = z[p];
      x[p] = mat[0 * q + p] * vx + mat[1 * q + p] * vy + mat[2 * q + p] * vz;
      y[p] = mat[3 * q + p] * vx + mat[4 * q + p] * vy + mat[5 * q + p] * vz;
      z[p] = mat[6 * q + p] * vx + mat[7 * q + p] * vy + mat[8 * q + p] * vz;
    }
  }
}

void cross_scaled(const double* f, const double* w, const double* v, int nb, int q, double* out) {
  const double* fx = f;
  const double* fy = f + q;
  const double* fz = f + 2 * q;
  for (int b = 0; b < nb; ++b) {
    const double* x = v + static_cast<long>(b) * 3 * q;
    const double* y = x + q;
    const double* z = y + q;
    double* ox = out + static_cast<long>(b) * 3 * q;
    double* oy = ox + q;
    double* oz = oy + q;
    for (int p = 0; p < q; ++p) {
      ox[p] = w[p] * (fy[p] * z[p] - fz[p] * y[p]);
      oy[p] = w[p] * (fz[p] * x[p] - fx[p] * z[p]);
      oz[p] = w[p] * (fx[p] * y[p] - fy[p] * x[p]);
    }
  }
}

void scale(const double* w, double* v, int rows, int q) {
  for (int r = 0; r < rows; ++r) {
    double* row = v + static_cast<long>(r) * q;
    for (int p = 0; p < q; ++p) row[p] *= w[p];
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{"scalar", gram, transform3, cross_scaled, scale};
  return table;
}

}  // namespace hallmhd::kernels
