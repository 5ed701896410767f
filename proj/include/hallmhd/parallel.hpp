#pragma once

#include <functional>

namespace hallmhd {

/// Worker count for element loops: set_thread_count() if called with n > 0,
/// otherwise HALLMHD_THREADS, otherwise hardware concurrency.
int thread_count();
void set_thread_count(int n);

/// Calls body(i) for i in [0, n) using up to thread_count() threads. Work is
/// split into contiguous chunks; body must only write to per-i storage.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace hallmhd
