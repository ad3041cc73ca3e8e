#pragma once

// Some OpenBLAS builds pick a kernel at load time that miscomputes dgemm on
// CPUs they misidentify. The kernel cannot be changed once the library is
// loaded, so the remedy is to re-execute the process with OPENBLAS_CORETYPE set.

#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <random>

#include "hent/core/types.hpp"

namespace hent {

// Compares a BLAS-backed product against a naive triple loop.
inline double blas_selftest_error(int n = 200) {
  std::mt19937_64 gen(12345);
  std::normal_distribution<double> nd;
  RMatrix a(n, n), b(n, n);
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    a.data()[i] = nd(gen);
    b.data()[i] = nd(gen);
  }
  RMatrix c;
  c.noalias() = a * b;
  double err = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      double ref = 0.0;
      for (int k = 0; k < n; ++k) ref += a(i, k) * b(k, j);
      err = std::max(err, std::abs(ref - c(i, j)));
    }
  return err;
}

// Call first thing in main(). Returns normally when BLAS is sound; otherwise
// re-executes with a conservative kernel, or throws if that was already tried.
inline void ensure_working_blas(char** argv, const char* fallback_core = "Haswell") {
  if (blas_selftest_error() < 1e-9) return;
  if (std::getenv("OPENBLAS_CORETYPE") != nullptr)
    throw Error("BLAS self-test failed even with OPENBLAS_CORETYPE set");
  std::cerr << "hent: BLAS self-test failed, restarting with OPENBLAS_CORETYPE=" << fallback_core << "\n";
  ::setenv("OPENBLAS_CORETYPE", fallback_core, 1);
  ::execv("/proc/self/exe", argv);
  throw Error("BLAS self-test failed and re-exec was not possible");
}

}  // namespace hent
