#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sicta/errors.hpp"

namespace sicta {

enum class PolicyKind { kFair, kBiased, kCustom };

/// Why a probability vector was rejected by custom().
enum class PolicyError {
  kTooFewGroups,
  kNegativeEntry,
  kSumNotOne,
  kFewerThanTwoPositive,
};

class PolicyValidationError : public ValidationError {
 public:
  PolicyValidationError(PolicyError reason, const std::string& what)
      : ValidationError(what), reason_(reason) {}

  PolicyError reason() const noexcept { return reason_; }

 private:
  PolicyError reason_;
};

inline constexpr double kProbabilityTolerance = 1e-12;

/// Splitting factor d plus the probability of picking each group 1..d.
///
/// Immutable once built. Construct through fair(), biased() or custom(),
/// all of which enforce the invariants (d >= 2, non-negative entries summing
/// to one, at least two groups that can actually be chosen).
class SplitPolicy {
 public:
  int d() const noexcept { return static_cast<int>(probs_.size()); }
  std::span<const double> probs() const& noexcept { return probs_; }
  std::span<const double> probs() const&& = delete;
  double prob(int group) const { return probs_.at(group); }
  PolicyKind kind() const noexcept { return kind_; }

  /// "fair", "biased" or "custom".
  std::string_view name() const noexcept;

  /// Cumulative thresholds used for categorical draws; entries at and after
  /// the last positive group are pushed above 1 so rounding can never select
  /// a zero-probability tail group.
  std::span<const double> thresholds() const& noexcept { return thresholds_; }
  std::span<const double> thresholds() const&& = delete;

  friend bool operator==(const SplitPolicy& a, const SplitPolicy& b) {
    return a.kind_ == b.kind_ && a.probs_ == b.probs_;
  }

 private:
  SplitPolicy(PolicyKind kind, std::vector<double> probs);

  friend SplitPolicy fair(int d);
  friend SplitPolicy biased(int d);
  friend SplitPolicy custom(std::vector<double> probs);

  PolicyKind kind_;
  std::vector<double> probs_;
  std::vector<double> thresholds_;
};

SplitPolicy fair(int d);

/// p_j = 0.5^j for j < d and p_d = 0.5^(d-1); fair at d = 2.
SplitPolicy biased(int d);

SplitPolicy custom(std::vector<double> probs);

/// Builds a policy from its CLI spelling. `probs` is only read for "custom".
SplitPolicy make_policy(std::string_view name, int d,
                        const std::vector<double>& probs = {});

/// Group counts I_1..I_d produced by one split.
struct Occupancy {
  std::vector<int> counts;

  int total() const noexcept;
  int d() const noexcept { return static_cast<int>(counts.size()); }
  friend bool operator==(const Occupancy&, const Occupancy&) = default;
};

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit draw.
template <class Urbg>
double unit_uniform(Urbg& rng) {
  static_assert(sizeof(typename Urbg::result_type) == 8,
                "a 64-bit generator is required");
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// One categorical draw; returns a zero-based group index.
template <class Urbg>
int sample_group(const SplitPolicy& policy, Urbg& rng) {
  const double u = unit_uniform(rng);
  const auto thr = policy.thresholds();
  int j = 0;
  while (u >= thr[j]) ++j;
  return j;
}

/// Assigns n users to groups, each independently per the policy.
template <class Urbg>
Occupancy sample_split(const SplitPolicy& policy, int n, Urbg& rng) {
  if (n < 0) throw ContractViolation("sample_split: n must be >= 0");
  Occupancy occ{std::vector<int>(policy.d(), 0)};
  for (int u = 0; u < n; ++u) ++occ.counts[sample_group(policy, rng)];
  return occ;
}

}  // namespace sicta
