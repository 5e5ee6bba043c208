#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "sicta/evaluators.hpp"

namespace sicta {

/// The evaluators under test. Swappable so a suite's sensitivity can be
/// checked against a deliberately broken implementation.
struct EvaluatorSet {
  std::function<int(const SplitTree&)> corrected = corrected_length;
  std::function<int(const SplitTree&)> yg = yg_length;
  std::function<int(const SplitTree&)> standard = standard_ta_length;
  std::function<CriBreakdown(const SplitTree&)> slot_level = slot_level_cri;
};

struct VerifyOptions {
  int trees = 100'000;
  std::uint64_t seed = 7;
  int strict_trees = 10'000;  // trees at n = 10, d = 3 searched for corrected < yg
  int relation_n_max = 30;
  EvaluatorSet evaluators;
};

struct SuiteResult {
  std::string name;
  long long checked = 0;
  long long violations = 0;
  std::string first_failure;  // empty when passed

  bool passed() const { return violations == 0; }
};

struct VerifyReport {
  std::uint64_t seed = 0;
  int trees = 0;
  std::vector<SuiteResult> suites;

  bool passed() const;
  void print(std::ostream& os) const;
  nlohmann::json to_json() const;
};

/// The random tree that verify checks at position `index`: d in 2..5,
/// fair or biased, n in 2..50, all picked from derive_seed(seed, index).
struct VerifyTree {
  std::uint64_t tree_seed;
  int n;
  SplitPolicy policy;
  SplitTree tree;
};
VerifyTree verify_tree(std::uint64_t seed, int index);

VerifyReport run_verify(const VerifyOptions& options);

}  // namespace sicta
