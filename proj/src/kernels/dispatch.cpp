#include <atomic>
#include <cstdlib>
#include <string_view>

#include "hallmhd/kernels.hpp"

namespace hallmhd::kernels {

#ifdef HALLMHD_HAVE_AVX2
const KernelTable& avx2_kernels();
#endif

namespace {

std::atomic<bool> force_scalar{[] {
  const char* env = std::getenv("HALLMHD_SIMD");
  return env != nullptr && std::string_view(env) == "scalar";
}()};

}  // namespace

const KernelTable* avx2_table() {
#ifdef HALLMHD_HAVE_AVX2
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &avx2_kernels() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  if (!force_scalar.load(std::memory_order_relaxed))
    if (const auto* t = avx2_table()) return *t;
  return scalar_table();
}

void use_scalar(bool force) { force_scalar.store(force); }

}  // namespace hallmhd::kernels
