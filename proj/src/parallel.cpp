#include "fusegrow/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace fusegrow {
namespace {
int default_threads = -1;
}

void set_thread_count(int n) {
  if (default_threads < 0) default_threads = omp_get_max_threads();
  omp_set_num_threads(n > 0 ? n : default_threads);
}

int thread_count() { return omp_get_max_threads(); }

int configure_threads_from_env() {
  if (const char* env = std::getenv("FUSEGROW_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n >= 0) set_thread_count(static_cast<int>(n));
  }
  return thread_count();
}

}  // namespace fusegrow
