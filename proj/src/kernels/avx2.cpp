#include <immintrin.h>

#include "hallmhd/kernels.hpp"

namespace hallmhd::kernels {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void gram(const double* a, int m, const double* b, int n, int len, double* out) {
  const int vec = len & ~3;
  for (int i = 0; i < m; ++i) {
    const double* ai = a + static_cast<long>(i) * len;
    for (int j = 0; j < n; ++j) {
      const double* bj = b + static_cast<long>(j) * len;
      __m256d acc = _mm256_setzero_pd();
      int p = 0;
      for (; p < vec; p += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(ai + p), _mm256_loadu_pd(bj + p), acc);
      double s = hsum(acc);
      for (; p < len; ++p) s += ai[p] * bj[p];
      out[static_cast<long>(i) * n + j] = s;
    }
  }
}

void transform3(const double* mat, double* v, int nb, int q) {
  const int vec = q & ~3;
  for (int b = 0; b < nb; ++b) {
    double* x = v + static_cast<long>(b) * 3 * q;
    double* y = x + q;
    double* z = y + q;
    int p = 0;
    for (; p < vec; p += 4) {
      const __m256d vx = _mm256_loadu_pd(x + p);
      const __m256d vy = _mm256_loadu_pd(y + p);
      const __m256d vz = _mm256_loadu_pd(z + p);
      __m256d r[3];
      for (int d = 0; d < 3; ++d) {
        __m256d acc = _mm256_mul_pd(_mm256_loadu_pd(mat + (d * 3 + 0) * q + p), vx);
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(mat + (d * 3 + 1) * q + p), vy, acc);
        r[d] = _mm256_fmadd_pd(_mm256_loadu_pd(mat + (d * 3 + 2) * q + p), vz, acc);
      }
      _mm256_storeu_pd(x + p, r[0]);
      _mm256_storeu_pd(y + p, r[1]);
      _mm256_storeu_pd(z + p, r[2]);
    }
    for (; p < q; ++p) {
      const double vx = x[p], vy = y[p], vz = z[p];
      x[p] = mat[0 * q + p] * vx + mat[1 * q + p] * vy + mat[2 * q + p] * vz;
      y[p] = mat[3 * q + p] * vx + mat[4 * q + p] * vy + mat[5 * q + p] * vz;
      z[p] = mat[6 * q + p] * vx + mat[7 * q + p] * vy + mat[8 * q + p] * vz;
    }
  }
}

void cross_scaled(const double* f, const double* w, const double* v, int nb, int q, double* out) {
  const int vec = q & ~3;
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
    int p = 0;
    for (; p < vec; p += 4) {
      const __m256d wx = _mm256_loadu_pd(w + p);
      const __m256d ax = _mm256_loadu_pd(fx + p), ay = _mm256_loadu_pd(fy + p),
                    az = _mm256_loadu_pd(fz + p);
      const __m256d bx = _mm256_loadu_pd(x + p), by = _mm256_loadu_pd(y + p),
                    bz = _mm256_loadu_pd(z + p);
      _mm256_storeu_pd(ox + p, _mm256_mul_pd(wx, _mm256_fmsub_pd(ay, bz, _mm256_mul_pd(az, by))));
      _mm256_storeu_pd(oy + p, _mm256_mul_pd(wx, _mm256_fmsub_pd(az, bx, _mm256_mul_pd(ax, bz))));
      _mm256_storeu_pd(oz + p, _mm256_mul_pd(wx, _mm256_fmsub_pd(ax, by, _mm256_mul_pd(ay, bx))));
    }
    for (; p < q; ++p) {
      ox[p] = w[p] * (fy[p] * z[p] - fz[p] * y[p]);
      oy[p] = w[p] * (fz[p] * x[p] - fx[p] * z[p]);
      oz[p] = w[p] * (fx[p] * y[p] - fy[p] * x[p]);
    }
  }
}

void scale(const double* w, double* v, int rows, int q) {
  const int vec = q & ~3;
  for (int r = 0; r < rows; ++r) {
    double* row = v + static_cast<long>(r) * q;
    int p = 0;
    for (; p < vec; p += 4)
      _mm256_storeu_pd(row + p, _mm256_mul_pd(_mm256_loadu_pd(row + p), _mm256_loadu_pd(w + p)));
    for (; p < q; ++p) row[p] *= w[p];
  }
}

}  // namespace

const KernelTable& avx2_kernels() {
  static const KernelTable table{"avx2", gram, transform3, cross_scaled, scale};
  return table;
}

}  // namespace hallmhd::kernels
