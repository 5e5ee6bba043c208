#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

#include "sicta/policy.hpp"

namespace sicta {

using Rational = mpq_class;

enum class Variant { kStandard, kYg, kCorrected };

std::string_view to_string(Variant v) noexcept;
Variant parse_variant(std::string_view name);

/// The policy's probabilities in the requested scalar. Fair and biased
/// policies are exact in Rational; custom ones are converted from their
/// binary doubles and renormalised so they sum to exactly one.
template <class Scalar>
std::vector<Scalar> exact_probabilities(const SplitPolicy& policy);

/// n! / prod(I_j!) * prod(p_j^I_j).
template <class Scalar>
Scalar multinomial_pmf(const Occupancy& occ, int n, const SplitPolicy& policy);

/// Exact conditional expectations L_0..L_max of the CRI length for one
/// variant and policy.
template <class Scalar>
struct ExpectedCriTable {
  Variant variant;
  SplitPolicy policy;
  std::vector<Scalar> values;

  int n_max() const noexcept { return static_cast<int>(values.size()) - 1; }
  const Scalar& operator[](int n) const { return values.at(n); }
};

struct TableOptions {
  double composition_budget = 1e7;
};

/// Number of compositions of every n in [2, n_max] into d parts.
double composition_count(int n_max, int d);

/// Dynamic programme over all multinomial splits of n users into d groups.
/// Given a split, the subtrees are independent, so the conditional
/// expectation is a linear function of smaller L values; the only unknown on
/// the right-hand side is L_n itself (all users in one group), collected into
/// a scalar coefficient c and solved as L_n = b / (1 - c).
/// Throws BudgetExceeded when composition_count exceeds the budget.
template <class Scalar>
ExpectedCriTable<Scalar> expected_cri_table(int n_max, const SplitPolicy& policy, Variant variant,
                                            const TableOptions& options = {});

/// One n of the relation (d - 1)(L'_n - 1) = d (L_n - 1).
template <class Scalar>
struct RelationRow {
  int n = 0;
  Scalar lhs;
  Scalar rhs;
  bool holds = false;
};

inline constexpr double kRelationTolerance = 1e-9;

/// Evaluates the relation between standard-TA and `variant` tables. Exact
/// comparison for Rational, kRelationTolerance (relative) for double.
template <class Scalar>
std::vector<RelationRow<Scalar>> check_yg_relation(const ExpectedCriTable<Scalar>& standard,
                                                   const ExpectedCriTable<Scalar>& variant);

template <class Scalar>
std::vector<RelationRow<Scalar>> check_yg_relation(int n_max, const SplitPolicy& policy,
                                                   Variant variant,
                                                   const TableOptions& options = {});

/// T_n = n / L_n for every n; the last entry doubles as the MST proxy.
template <class Scalar>
struct ThroughputCurve {
  std::vector<Scalar> per_n;
  Scalar mst_proxy;
};

template <class Scalar>
ThroughputCurve<Scalar> throughput_estimate(const ExpectedCriTable<Scalar>& table);

/// ln(d) / (d - 1): the MST claimed for fair d-ary splitting under the
/// Yu-Giannakis recursion.
double yg_closed_form_mst(int d);

/// Prints a scalar the way the CSV writers want it: fractions for Rational,
/// shortest round-trip decimal for double.
std::string format_scalar(double v);
std::string format_scalar(const Rational& v);

extern template std::vector<double> exact_probabilities<double>(const SplitPolicy&);
extern template std::vector<Rational> exact_probabilities<Rational>(const SplitPolicy&);
extern template double multinomial_pmf<double>(const Occupancy&, int, const SplitPolicy&);
extern template Rational multinomial_pmf<Rational>(const Occupancy&, int, const SplitPolicy&);
extern template ExpectedCriTable<double> expected_cri_table<double>(int, const SplitPolicy&,
                                                                     Variant, const TableOptions&);
extern template ExpectedCriTable<Rational> expected_cri_table<Rational>(int, const SplitPolicy&,
                                                                         Variant,
                                                                         const TableOptions&);
extern template std::vector<RelationRow<double>> check_yg_relation<double>(
    const ExpectedCriTable<double>&, const ExpectedCriTable<double>&);
extern template std::vector<RelationRow<Rational>> check_yg_relation<Rational>(
    const ExpectedCriTable<Rational>&, const ExpectedCriTable<Rational>&);
extern template std::vector<RelationRow<double>> check_yg_relation<double>(int,
                                                                            const SplitPolicy&,
                                                                            Variant,
                                                                            const TableOptions&);
extern template std::vector<RelationRow<Rational>> check_yg_relation<Rational>(
    int, const SplitPolicy&, Variant, const TableOptions&);
extern template ThroughputCurve<double> throughput_estimate<double>(
    const ExpectedCriTable<double>&);
extern template ThroughputCurve<Rational> throughput_estimate<Rational>(
    const ExpectedCriTable<Rational>&);

}  // namespace sicta
