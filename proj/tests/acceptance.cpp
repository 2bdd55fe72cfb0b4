// Prints one PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

#include <cstdio>
#include <cstdlib>
#include <string>

#include "arcwidom/acceptance.hpp"

int main(int argc, char** argv) {
  arcwidom::AcceptanceConfig cfg;
  if (argc > 1) cfg.nodes = static_cast<std::size_t>(std::strtoul(argv[1], nullptr, 10));
  bool failed = false;
  for (const auto& r : arcwidom::run_acceptance(cfg)) {
    std::printf("%s\n", arcwidom::format_result(r).c_str());
    std::fflush(stdout);
    failed = failed || r.verdict == arcwidom::Verdict::Fail;
  }
  return failed ? 1 : 0;
}
