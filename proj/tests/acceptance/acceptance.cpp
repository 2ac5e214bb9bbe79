#include <cstdlib>
#include <iomanip>
#include <iostream>

#include "toeplab/verify.hpp"

int main(int argc, char** argv) {
  toeplab::VerifyOptions options;
  if (argc > 1) options.seed = std::strtoull(argv[1], nullptr, 10);
  options.on_result = [](const toeplab::CriterionResult& r) {
    std::cout << (r.pass ? "PASS" : "FAIL") << " criterion " << r.id << " " << r.name << " (" << std::fixed
              << std::setprecision(1) << r.seconds << " s): " << r.detail << std::endl;
  };
  const auto results = toeplab::run_acceptance(options);
  int failed = 0;
  for (const auto& r : results) {
    if (!r.pass) ++failed;
  }
  std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
