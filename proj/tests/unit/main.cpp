#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include "ccsb/runner.hpp"

int main(int argc, char** argv) {
  ccsb::pin_linear_algebra_threads();
  return doctest::Context(argc, argv).run();
}
