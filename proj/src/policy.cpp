#include "sicta/policy.hpp"

#include <cmath>
#include <numeric>

namespace sicta {

namespace {

void require_groups(int d) {
  if (d < 2) {
    throw PolicyValidationError(
        PolicyError::kTooFewGroups,
        "splitting factor d must satisfy d >= 2 (got " + std::to_string(d) + ")");
  }
}

}  // namespace

SplitPolicy::SplitPolicy(PolicyKind kind, std::vector<double> probs)
    : kind_(kind), probs_(std::move(probs)), thresholds_(probs_.size()) {
  int last_positive = 0;
  for (int j = 0; j < d(); ++j) {
    if (probs_[j] > 0.0) last_positive = j;
  }
  double cum = 0.0;
  for (int j = 0; j < d(); ++j) {
    cum += probs_[j];
    thresholds_[j] = j >= last_positive ? 2.0 : cum;
  }
}

std::string_view SplitPolicy::name() const noexcept {
  switch (kind_) {
    case PolicyKind::kFair:
      return "fair";
    case PolicyKind::kBiased:
      return "biased";
    case PolicyKind::kCustom:
      break;
  }
  return "custom";
}

SplitPolicy fair(int d) {
  require_groups(d);
  return SplitPolicy(PolicyKind::kFair, std::vector<double>(d, 1.0 / d));
}

SplitPolicy biased(int d) {
  require_groups(d);
  std::vector<double> p(d);
  for (int j = 0; j < d - 1; ++j) p[j] = std::ldexp(1.0, -(j + 1));
  p[d - 1] = std::ldexp(1.0, -(d - 1));
  return SplitPolicy(PolicyKind::kBiased, std::move(p));
}

SplitPolicy custom(std::vector<double> probs) {
  const int d = static_cast<int>(probs.size());
  require_groups(d);
  int positive = 0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw PolicyValidationError(PolicyError::kNegativeEntry,
                                  "group probabilities must be finite and >= 0");
    }
    if (p > 0.0) ++positive;
  }
  const double sum = std::accumulate(probs.begin(), probs.end(), 0.0);
  if (std::abs(sum - 1.0) > kProbabilityTolerance) {
    throw PolicyValidationError(
        PolicyError::kSumNotOne,
        "group probabilities must sum to 1 (sum = " + std::to_string(sum) + ")");
  }
  if (positive < 2) {
    throw PolicyValidationError(
        PolicyError::kFewerThanTwoPositive,
        "at least two groups need a positive probability, otherwise a "
        "collision never splits");
  }
  return SplitPolicy(PolicyKind::kCustom, std::move(probs));
}

SplitPolicy make_policy(std::string_view name, int d,
                        const std::vector<double>& probs) {
  if (name == "fair") return fair(d);
  if (name == "biased") return biased(d);
  if (name == "custom") return custom(probs);
  throw ValidationError("unknown policy '" + std::string(name) +
                        "' (expected fair, biased or custom)");
}

int Occupancy::total() const noexcept {
  return std::accumulate(counts.begin(), counts.end(), 0);
}

}  // namespace sicta
