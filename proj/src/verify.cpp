#include "sicta/verify.hpp"

#include <algorithm>
#include <ostream>

#include "sicta/analytic.hpp"
#include "sicta/montecarlo.hpp"

namespace sicta {

bool VerifyReport::passed() const {
  return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.passed(); });
}

void VerifyReport::print(std::ostream& os) const {
  os << "verify: seed " << seed << ", " << trees << " random trees\n";
  for (const auto& s : suites) {
    os << (s.passed() ? "  PASS " : "  FAIL ") << s.name << " (" << s.checked << " checks, "
       << s.violations << " violations)";
    if (!s.passed()) os << "\n       first: " << s.first_failure;
    os << '\n';
  }
  os << (passed() ? "all suites passed\n" : "invariant violations found\n");
}

nlohmann::json VerifyReport::to_json() const {
  nlohmann::json j;
  j["seed"] = seed;
  j["trees"] = trees;
  j["passed"] = passed();
  j["generator"] = kGeneratorName;
  j["version"] = kVersion;
  j["suites"] = nlohmann::json::array();
  for (const auto& s : suites) {
    j["suites"].push_back({{"name", s.name},
                           {"passed", s.passed()},
                           {"checked", s.checked},
                           {"violations", s.violations},
                           {"first_failure", s.first_failure}});
  }
  return j;
}

VerifyTree verify_tree(std::uint64_t seed, int index) {
  const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(index));
  const int d = 2 + static_cast<int>(s % 4);
  SplitPolicy policy = ((s >> 8) & 1) ? biased(d) : fair(d);
  const int n = 2 + static_cast<int>((s >> 16) % 49);
  Engine rng(s);
  SplitTree tree = generate(n, policy, rng);
  return {s, n, std::move(policy), std::move(tree)};
}

namespace {

class Suite {
 public:
  explicit Suite(std::string name) { result_.name = std::move(name); }

  void check(bool ok, const std::function<std::string()>& describe) {
    ++result_.checked;
    if (ok) return;
    if (result_.violations++ == 0) result_.first_failure = describe();
  }

  SuiteResult done() { return std::move(result_); }

 private:
  SuiteResult result_;
};

std::string describe(const VerifyTree& t, int index, const std::string& what) {
  std::string text = t.tree.to_string();
  if (text.size() > 200) text = text.substr(0, 200) + "...";
  return what + " on tree #" + std::to_string(index) + " (tree seed " +
         std::to_string(t.tree_seed) + ", n=" + std::to_string(t.n) +
         ", d=" + std::to_string(t.policy.d()) + ", " + std::string(t.policy.name()) +
         "): " + text;
}

SuiteResult counterexamples(const EvaluatorSet& ev) {
  Suite suite("paper_counterexamples");
  struct Case {
    const char* text;
    int corrected, yg, idle;
  };
  for (const Case& c : {Case{"2(1,1,0)", 2, 3, 0}, Case{"2(0,1,1)", 3, 3, 1},
                        Case{"2(0,0,2(1,1,0))", 4, 5, 2}}) {
    const SplitTree tree = SplitTree::parse(c.text);
    const CriBreakdown slots = ev.slot_level(tree);
    const int corrected = ev.corrected(tree);
    const int yg = ev.yg(tree);
    suite.check(corrected == c.corrected && slots.total_slots == c.corrected && yg == c.yg &&
                    slots.idle_slots == c.idle,
                [&] {
                  return std::string(c.text) + ": corrected " + std::to_string(corrected) +
                         ", slot-level " + std::to_string(slots.total_slots) + ", yg " +
                         std::to_string(yg);
                });
  }
  return suite.done();
}

template <class Scalar>
std::string fmt(const Scalar& x) {
  return format_scalar(x);
}

}  // namespace

VerifyReport run_verify(const VerifyOptions& options) {
  const EvaluatorSet& ev = options.evaluators;
  VerifyReport report;
  report.seed = options.seed;
  report.trees = options.trees;

  report.suites.push_back(counterexamples(ev));

  Suite truth("ground_truth_equivalence");
  Suite binary("binary_equivalence");
  Suite dominance("dominance");
  Suite accounting("no_sic_accounting");
  Suite bounds("bounds");
  Suite purity("purity");
  for (int i = 0; i < options.trees; ++i) {
    const VerifyTree t = verify_tree(options.seed, i);
    const int corrected = ev.corrected(t.tree);
    const int yg = ev.yg(t.tree);
    const int standard = ev.standard(t.tree);
    const CriBreakdown slots = ev.slot_level(t.tree);

    truth.check(corrected == slots.total_slots, [&] {
      return describe(t, i, "corrected " + std::to_string(corrected) + " != slot-level " +
                                std::to_string(slots.total_slots));
    });
    if (t.policy.d() == 2) {
      binary.check(corrected == yg, [&] {
        return describe(t, i, "corrected " + std::to_string(corrected) + " != yg " +
                                  std::to_string(yg));
      });
    }
    dominance.check(corrected <= yg, [&] {
      return describe(t, i, "corrected " + std::to_string(corrected) + " > yg " +
                                std::to_string(yg));
    });
    accounting.check(standard - yg == t.tree.internal_count(), [&] {
      return describe(t, i, "standard - yg = " + std::to_string(standard - yg) +
                                " but internal nodes = " +
                                std::to_string(t.tree.internal_count()));
    });
    const bool slot_sum = slots.total_slots ==
                          slots.collision_slots + slots.singleton_slots + slots.idle_slots;
    bounds.check(corrected >= 2 && slot_sum, [&] {
      return describe(t, i, "corrected " + std::to_string(corrected) +
                                " below 2 or slot counts do not add up");
    });
    if (i % 16 == 0) {
      purity.check(ev.corrected(t.tree) == corrected && ev.yg(t.tree) == yg &&
                       ev.standard(t.tree) == standard && ev.slot_level(t.tree) == slots,
                   [&] { return describe(t, i, "repeated evaluation disagrees"); });
    }
  }

  // Corrected must beat yg somewhere at d = 3; otherwise the two evaluators
  // are indistinguishable and the dominance suite proves nothing.
  int strict = 0;
  const SplitPolicy three = fair(3);
  for (int i = 0; i < options.strict_trees && strict == 0; ++i) {
    Engine rng(derive_seed(options.seed ^ 0x5eedULL, static_cast<std::uint64_t>(i)));
    const SplitTree tree = generate(10, three, rng);
    if (ev.corrected(tree) < ev.yg(tree)) ++strict;
  }
  dominance.check(strict > 0, [&] {
    return "no tree with corrected < yg among " + std::to_string(options.strict_trees) +
           " trees at n=10, d=3";
  });

  report.suites.push_back(truth.done());
  report.suites.push_back(binary.done());
  report.suites.push_back(dominance.done());
  report.suites.push_back(accounting.done());
  report.suites.push_back(bounds.done());
  report.suites.push_back(purity.done());

  // Exact tables.
  Suite relation("yg_relation_exact");
  Suite binary_tables("binary_tables_identical");
  Suite ordering("table_ordering");
  const int n_max = options.relation_n_max;
  for (int d : {2, 3, 4}) {
    const SplitPolicy policy = fair(d);
    const auto standard = expected_cri_table<Rational>(n_max, policy, Variant::kStandard);
    const auto yg = expected_cri_table<Rational>(n_max, policy, Variant::kYg);
    const auto corrected = expected_cri_table<Rational>(n_max, policy, Variant::kCorrected);
    for (const auto& row : check_yg_relation(standard, yg)) {
      relation.check(row.holds, [&] {
        return "d=" + std::to_string(d) + " n=" + std::to_string(row.n) + ": " + fmt(row.lhs) +
               " != " + fmt(row.rhs);
      });
    }
    if (d == 3 && n_max >= 2) {
      const auto row = check_yg_relation(standard, corrected)[2];
      relation.check(!row.holds && row.lhs == 9 && row.rhs == Rational(13, 2), [&] {
        return "corrected variant at d=3 n=2 gave " + fmt(row.lhs) + " vs " + fmt(row.rhs) +
               ", expected 9 vs 13/2";
      });
    }
    for (int n = 0; n <= n_max; ++n) {
      if (d == 2) {
        binary_tables.check(corrected[n] == yg[n], [&] {
          return "n=" + std::to_string(n) + ": corrected " + fmt(corrected[n]) + " != yg " +
                 fmt(yg[n]);
        });
      }
      ordering.check(corrected[n] <= yg[n] && yg[n] <= standard[n], [&] {
        return "d=" + std::to_string(d) + " n=" + std::to_string(n) + ": " + fmt(corrected[n]) +
               ", " + fmt(yg[n]) + ", " + fmt(standard[n]);
      });
    }
  }
  report.suites.push_back(relation.done());
  report.suites.push_back(binary_tables.done());
  report.suites.push_back(ordering.done());
  return report;
}

}  // namespace sicta
