#include <gtest/gtest.h>

#include "hent/core/blas_guard.hpp"

int main(int argc, char** argv) {
  hent::ensure_working_blas(argv);
  testing::InitGoogleTest(&argc, argv);
  return RUN_ALL_TESTS();
}
