#pragma once

namespace fusegrow {

/// Applies the FUSEGROW_THREADS cap to the OpenMP runtime. 0 or unset means
/// the runtime default. Returns the thread count now in effect.
int configure_threads_from_env();

/// Explicit override; n <= 0 restores the runtime default.
void set_thread_count(int n);
int thread_count();

}  // namespace fusegrow
