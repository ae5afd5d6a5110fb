// One PASS/FAIL line per acceptance criterion; exit status 0 iff all pass.
#include "multibrot/verify.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  multibrot::VerifyOptions opts;
  std::vector<int> only;
  app.add_option("--threads,-j", opts.threads, "Worker threads (0 = all cores)");
  app.add_option("--seed", opts.seed, "Seed for the randomized suites");
  app.add_option("--criterion", only, "Run only these criteria");
  CLI11_PARSE(app, argc, argv);
  opts.progress = [](const std::string& s) { std::cerr << "  .. " << s << "\n"; };

  std::vector<multibrot::CheckResult> results;
  if (only.empty()) {
    results = multibrot::acceptance_suite(opts);
  } else {
    for (int id : only) results.push_back(multibrot::acceptance_criterion(id, opts));
  }
  int failed = 0;
  for (const auto& r : results) {
    std::cout << multibrot::format_check(r) << "\n";
    failed += !r.passed;
  }
  std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed\n";
  return failed ? 1 : 0;
}
