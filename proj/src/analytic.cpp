#include "sicta/analytic.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <type_traits>

#include "sicta/errors.hpp"

namespace sicta {

std::string_view to_string(Variant v) noexcept {
  switch (v) {
    case Variant::kStandard:
      return "standard";
    case Variant::kYg:
      return "yg";
    case Variant::kCorrected:
      break;
  }
  return "corrected";
}

Variant parse_variant(std::string_view name) {
  if (name == "standard") return Variant::kStandard;
  if (name == "yg") return Variant::kYg;
  if (name == "corrected") return Variant::kCorrected;
  throw ValidationError("unknown variant '" + std::string(name) +
                        "' (expected standard, yg or corrected)");
}

template <class Scalar>
std::vector<Scalar> exact_probabilities(const SplitPolicy& policy) {
  const int d = policy.d();
  if constexpr (std::is_floating_point_v<Scalar>) {
    return {policy.probs().begin(), policy.probs().end()};
  } else {
    std::vector<Scalar> p(d);
    switch (policy.kind()) {
      case PolicyKind::kFair:
        for (auto& x : p) {
          x = Scalar(1, d);
          x.canonicalize();
        }
        break;
      case PolicyKind::kBiased: {
        Scalar half(1, 2);
        Scalar power(1);
        for (int j = 0; j < d - 1; ++j) {
          power *= half;
          p[j] = power;
        }
        p[d - 1] = p[d - 2];
        break;
      }
      case PolicyKind::kCustom: {
        Scalar sum(0);
        for (int j = 0; j < d; ++j) {
          p[j] = Scalar(policy.prob(j));
          sum += p[j];
        }
        for (auto& x : p) x /= sum;
        break;
      }
    }
    return p;
  }
}

namespace {

// Multinomial weights for splits of up to n_max users. Doubles go through
// logarithms (n! overflows past 170); Rationals are exact.
template <class Scalar>
class SplitWeights {
 public:
  SplitWeights(const SplitPolicy& policy, int n_max) {
    const auto p = exact_probabilities<Scalar>(policy);
    const int d = policy.d();
    if constexpr (std::is_floating_point_v<Scalar>) {
      log_fact_.resize(n_max + 1);
      for (int k = 0; k <= n_max; ++k) log_fact_[k] = std::lgamma(k + 1.0);
      log_p_.resize(d);
      for (int j = 0; j < d; ++j) log_p_[j] = p[j] > 0 ? std::log(p[j]) : -INFINITY;
    } else {
      fact_.resize(n_max + 1);
      fact_[0] = 1;
      for (int k = 1; k <= n_max; ++k) fact_[k] = fact_[k - 1] * k;
      pow_.assign(d, std::vector<Scalar>(n_max + 1));
      for (int j = 0; j < d; ++j) {
        pow_[j][0] = 1;
        for (int k = 1; k <= n_max; ++k) pow_[j][k] = pow_[j][k - 1] * p[j];
      }
    }
  }

  Scalar operator()(std::span<const int> counts, int n) const {
    if constexpr (std::is_floating_point_v<Scalar>) {
      Scalar log_w = log_fact_[n];
      for (std::size_t j = 0; j < counts.size(); ++j) {
        if (counts[j] == 0) continue;
        if (std::isinf(log_p_[j])) return 0;
        log_w += counts[j] * log_p_[j] - log_fact_[counts[j]];
      }
      return std::exp(log_w);
    } else {
      mpz_class denom = 1;
      Scalar w = fact_[n];
      for (std::size_t j = 0; j < counts.size(); ++j) {
        denom *= fact_[counts[j]];
        w *= pow_[j][counts[j]];
      }
      w /= denom;
      return w;
    }
  }

 private:
  std::vector<double> log_fact_, log_p_;
  std::vector<mpz_class> fact_;
  std::vector<std::vector<Scalar>> pow_;
};

// Steps `a` to the next composition of the same total in colexicographic
// order; returns false after the last one (everything in the final part).
bool next_composition(std::vector<int>& a) {
  const std::size_t d = a.size();
  std::size_t i = 0;
  while (i < d && a[i] == 0) ++i;
  if (i + 1 >= d) return false;
  const int v = a[i];
  a[i] = 0;
  a[0] = v - 1;
  ++a[i + 1];
  return true;
}

template <class Scalar>
bool scalar_equal(const Scalar& a, const Scalar& b) {
  if constexpr (std::is_floating_point_v<Scalar>) {
    const double scale = std::max({1.0, std::abs(a), std::abs(b)});
    return std::abs(a - b) <= kRelationTolerance * scale;
  } else {
    return a == b;
  }
}

}  // namespace

template <class Scalar>
Scalar multinomial_pmf(const Occupancy& occ, int n, const SplitPolicy& policy) {
  if (occ.d() != policy.d()) throw ContractViolation("multinomial_pmf: group count mismatch");
  for (int c : occ.counts) {
    if (c < 0) throw ContractViolation("multinomial_pmf: negative group count");
  }
  if (occ.total() != n) throw ContractViolation("multinomial_pmf: occupancy does not sum to n");
  return SplitWeights<Scalar>(policy, n)(occ.counts, n);
}

double composition_count(int n_max, int d) {
  // C(n + d - 1, d - 1) summed over n = 2..n_max.
  double total = 0;
  for (int n = 2; n <= n_max; ++n) {
    total += std::exp(std::lgamma(n + d) - std::lgamma(d) - std::lgamma(n + 1.0));
  }
  return total;
}

template <class Scalar>
ExpectedCriTable<Scalar> expected_cri_table(int n_max, const SplitPolicy& policy, Variant variant,
                                            const TableOptions& options) {
  if (n_max < 0) throw ValidationError("n_max must be >= 0");
  const int d = policy.d();
  const double count = composition_count(n_max, d);
  if (count > options.composition_budget) {
    throw BudgetExceeded("exact table for n_max = " + std::to_string(n_max) +
                         ", d = " + std::to_string(d) + " needs about " +
                         std::to_string(static_cast<long long>(count)) +
                         " compositions, over the budget of " +
                         std::to_string(static_cast<long long>(options.composition_budget)));
  }

  ExpectedCriTable<Scalar> table{variant, policy, std::vector<Scalar>(n_max + 1, Scalar(1))};
  std::vector<Scalar>& L = table.values;
  const SplitWeights<Scalar> weight(policy, n_max);
  std::vector<int> a(d);

  for (int n = 2; n <= n_max; ++n) {
    Scalar b = 0;  // constant part of E[l_n]
    Scalar c = 0;  // total weight on L_n itself
    std::fill(a.begin(), a.end(), 0);
    a[0] = n;
    do {
      const Scalar w = weight(a, n);
      if (w == 0) continue;
      Scalar known = variant == Variant::kYg ? 0 : 1;
      bool self = false;
      int cum = 0;
      int visited = 0;
      for (int j = 0; j < d; ++j) {
        if (a[j] == n) {
          self = true;
        } else {
          known += L[a[j]];
        }
        ++visited;
        cum += a[j];
        if (variant == Variant::kCorrected && cum >= n - 1) break;
      }
      if (variant == Variant::kCorrected && visited == d) known -= 1;
      b += w * known;
      if (self) c += w;
    } while (next_composition(a));
    L[n] = b / (Scalar(1) - c);
  }
  return table;
}

template <class Scalar>
std::vector<RelationRow<Scalar>> check_yg_relation(const ExpectedCriTable<Scalar>& standard,
                                                   const ExpectedCriTable<Scalar>& variant) {
  if (standard.variant != Variant::kStandard) {
    throw ContractViolation("check_yg_relation: first table must be the standard variant");
  }
  if (!(standard.policy == variant.policy)) {
    throw ContractViolation("check_yg_relation: tables use different policies");
  }
  const int d = standard.policy.d();
  const int n_max = std::min(standard.n_max(), variant.n_max());
  std::vector<RelationRow<Scalar>> rows;
  rows.reserve(n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    RelationRow<Scalar> row;
    row.n = n;
    row.lhs = Scalar(d - 1) * (standard[n] - Scalar(1));
    row.rhs = Scalar(d) * (variant[n] - Scalar(1));
    row.holds = scalar_equal(row.lhs, row.rhs);
    rows.push_back(std::move(row));
  }
  return rows;
}

template <class Scalar>
std::vector<RelationRow<Scalar>> check_yg_relation(int n_max, const SplitPolicy& policy,
                                                   Variant variant, const TableOptions& options) {
  const auto standard = expected_cri_table<Scalar>(n_max, policy, Variant::kStandard, options);
  const auto other = expected_cri_table<Scalar>(n_max, policy, variant, options);
  return check_yg_relation(standard, other);
}

template <class Scalar>
ThroughputCurve<Scalar> throughput_estimate(const ExpectedCriTable<Scalar>& table) {
  if (table.n_max() < 2) throw ValidationError("throughput_estimate: needs n_max >= 2");
  ThroughputCurve<Scalar> curve;
  curve.per_n.reserve(table.values.size());
  for (int n = 0; n <= table.n_max(); ++n) {
    curve.per_n.push_back(Scalar(n) / table[n]);
  }
  curve.mst_proxy = curve.per_n.back();
  return curve;
}

double yg_closed_form_mst(int d) {
  if (d < 2) throw ValidationError("splitting factor d must satisfy d >= 2");
  return std::log(static_cast<double>(d)) / (d - 1);
}

std::string format_scalar(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return {buf, res.ptr};
}

std::string format_scalar(const Rational& v) { return v.get_str(); }

template std::vector<double> exact_probabilities<double>(const SplitPolicy&);
template std::vector<Rational> exact_probabilities<Rational>(const SplitPolicy&);
template double multinomial_pmf<double>(const Occupancy&, int, const SplitPolicy&);
template Rational multinomial_pmf<Rational>(const Occupancy&, int, const SplitPolicy&);
template ExpectedCriTable<double> expected_cri_table<double>(int, const SplitPolicy&, Variant,
                                                              const TableOptions&);
template ExpectedCriTable<Rational> expected_cri_table<Rational>(int, const SplitPolicy&, Variant,
                                                                  const TableOptions&);
template std::vector<RelationRow<double>> check_yg_relation<double>(
    const ExpectedCriTable<double>&, const ExpectedCriTable<double>&);
template std::vector<RelationRow<Rational>> check_yg_relation<Rational>(
    const ExpectedCriTable<Rational>&, const ExpectedCriTable<Rational>&);
template std::vector<RelationRow<double>> check_yg_relation<double>(int, const SplitPolicy&,
                                                                     Variant,
                                                                     const TableOptions&);
template std::vector<RelationRow<Rational>> check_yg_relation<Rational>(int, const SplitPolicy&,
                                                                         Variant,
                                                                         const TableOptions&);
template ThroughputCurve<double> throughput_estimate<double>(const ExpectedCriTable<double>&);
template ThroughputCurve<Rational> throughput_estimate<Rational>(
    const ExpectedCriTable<Rational>&);

}  // namespace sicta
