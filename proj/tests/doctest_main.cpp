#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include "tarski/sign_oracle.hpp"

int main(int argc, char** argv) {
  // Corner certificates and ledger checks are on in tests.
  tarski::set_debug_checks_default(true);
  doctest::Context ctx;
  ctx.applyCommandLine(argc, argv);
  return ctx.run();
}
