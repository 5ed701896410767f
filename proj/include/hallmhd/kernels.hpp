#pragma once

#include <string_view>

namespace hallmhd::kernels {

/// Element-level contractions used by assembly. All arrays are
/// structure-of-arrays over quadrature points (length q per row).
struct KernelTable {
  std::string_view name;

  /// out[i*n + j] = sum_p a[i*len + p] * b[j*len + p]
  void (*gram)(const double* a, int m, const double* b, int n, int len, double* out);

  /// In place: v[(b*3+d)*q + p] <- sum_e mat[(d*3+e)*q + p] * v[(b*3+e)*q + p] for nb functions.
  void (*transform3)(const double* mat, double* v, int nb, int q);

  /// out[(b*3+d)*q + p] = w[p] * (f(p) x v_b(p))_d, f laid out as f[d*q + p].
  void (*cross_scaled)(const double* f, const double* w, const double* v, int nb, int q,
                       double* out);

  /// v[b*q + p] *= w[p]
  void (*scale)(const double* w, double* v, int rows, int q);
};

const KernelTable& scalar_table();
/// nullptr when the binary was built without AVX2 or the CPU lacks AVX2/FMA.
const KernelTable* avx2_table();

/// The table used by assembly. AVX2 when available unless HALLMHD_SIMD=scalar.
const KernelTable& active();
void use_scalar(bool force);

}  // namespace hallmhd::kernels
