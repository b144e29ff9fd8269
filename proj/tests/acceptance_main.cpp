// Runs the full acceptance checklist and prints one verdict line per
// criterion.  Exit status 0 only when every criterion passes.

#include "walklift/selftest.hpp"

#include <cstdio>
#include <string>

int main(int argc, char** argv) {
  std::string filter = argc > 1 ? argv[1] : "";
  auto results = walklift::run_acceptance_criteria(filter);
  bool all_pass = !results.empty();
  for (const auto& r : results) {
    std::puts(walklift::format_criterion_line(r).c_str());
    all_pass = all_pass && r.pass;
  }
  if (results.empty()) std::puts("no criteria matched the filter");
  return all_pass ? 0 : 1;
}
