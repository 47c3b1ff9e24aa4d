#pragma once

#include "realnc/common.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace realnc {

struct CaseOutcome {
  bool pass = true;
  bool indeterminate = false;
  std::string message;
};

struct VerifyFailure {
  std::string case_name;
  std::uint64_t seed = 0;  // instance seed; `verify --case NAME --seed S` replays it
  std::string message;
};

struct VerifyReport {
  std::string suite;
  int cases = 0;
  int passed = 0;
  int indeterminate = 0;
  std::vector<VerifyFailure> failures;
  double seconds = 0.0;
};

struct PropertyCase {
  std::string suite;
  std::string name;
  int instances = 1;
  std::function<CaseOutcome(std::mt19937_64&)> run;
};

/// systems, sdp, structure, extremal, envelope.
std::vector<std::string> suite_names();
const std::vector<PropertyCase>& property_cases();

/// Instance seed of repetition `index` of a case under a master seed.
std::uint64_t instance_seed(std::uint64_t master, const std::string& case_name, int index);

/// Runs every case of the suite ("all" for every suite); instances run concurrently when parallel is set.
VerifyReport run_suite(const std::string& suite, std::uint64_t seed, bool parallel = true);
/// Replays one instance with its instance seed.
CaseOutcome run_case(const std::string& case_name, std::uint64_t instance_seed);

}  // namespace realnc
