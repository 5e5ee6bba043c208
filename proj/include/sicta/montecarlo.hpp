#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "sicta/evaluators.hpp"
#include "sicta/policy.hpp"
#include "sicta/tree.hpp"

namespace sicta {

/// Per-run random engine. Output metadata records kGeneratorName so that a
/// result can be traced back to the exact stream it was drawn from.
using Engine = std::mt19937_64;
inline constexpr std::string_view kGeneratorName = "std::mt19937_64";
inline constexpr std::string_view kSeedDerivation = "splitmix64(master_seed, run_index)";
inline constexpr std::string_view kVersion = "1.0.0";

/// SplitMix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of run `run_index`; a pure function of its two arguments.
constexpr std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t run_index) noexcept {
  return mix64(mix64(master_seed) ^ mix64(run_index + 0x632be59bd9b4e019ULL));
}

enum class Estimator { kCorrected, kYg, kStandard, kSlotLevel };
inline constexpr std::size_t kEstimatorCount = 4;
inline constexpr std::array<Estimator, kEstimatorCount> kAllEstimators = {
    Estimator::kCorrected, Estimator::kYg, Estimator::kStandard, Estimator::kSlotLevel};

std::string_view to_string(Estimator e) noexcept;
Estimator parse_estimator(std::string_view name);

struct ExperimentConfig {
  int n = 0;
  SplitPolicy policy = fair(2);
  int runs = 10'000;
  std::uint64_t master_seed = 42;
  std::vector<Estimator> variants = {Estimator::kCorrected, Estimator::kYg, Estimator::kStandard};
  int max_depth = kDefaultMaxDepth;
  int threads = 1;
  bool keep_per_run = false;  // retain every tree's lengths and breakdown
};

struct VariantSummary {
  Estimator variant = Estimator::kCorrected;
  int runs = 0;
  double mean = 0;
  double stddev = 0;            // sample standard deviation
  double ci95 = 0;              // half-width, normal approximation
  double throughput_rom = 0;    // n / mean
  double throughput_mor = 0;    // mean over runs of n / l
  double throughput_ci95 = 0;   // delta-method half-width of n / mean

  double standard_error() const;
};

/// Everything measured on one tree.
struct RunRecord {
  int corrected = 0;
  int yg = 0;
  int standard = 0;
  CriBreakdown slots;
  std::string tree_text;  // only filled when dumping trees
};

struct RunSummary {
  ExperimentConfig config;
  std::vector<VariantSummary> variants;  // in config.variants order
  std::vector<RunRecord> per_run;        // only when config.keep_per_run
  int depth_errors = 0;

  const VariantSummary& at(Estimator e) const;
};

/// Failure of a whole experiment; carries how many runs went wrong.
class ExperimentError : public std::runtime_error {
 public:
  ExperimentError(const std::string& what, int failed_runs)
      : std::runtime_error(what), failed_runs_(failed_runs) {}
  int failed_runs() const noexcept { return failed_runs_; }

 private:
  int failed_runs_;
};

/// Generates one tree per run from its derived seed, evaluates every
/// requested estimator on that same tree and reduces in run-index order.
/// The result does not depend on config.threads.
/// When `dump_trees` is set, each tree's text form is kept in per_run.
RunSummary run_experiment(const ExperimentConfig& config, bool dump_trees = false);

struct SweepRow {
  int d = 0;
  PolicyKind policy = PolicyKind::kFair;
  RunSummary summary;
  double yg_closed_form = 0;
};

/// Runs base with every (d, policy) pair; d outer, policy inner.
std::vector<SweepRow> sweep(const std::vector<int>& d_values,
                            const std::vector<PolicyKind>& policies,
                            const ExperimentConfig& base);

}  // namespace sicta
