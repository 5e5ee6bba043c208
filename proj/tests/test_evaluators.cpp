#include <doctest.h>

#include <random>

#include "sicta/evaluators.hpp"

using namespace sicta;

TEST_CASE("d_min picks the first prefix covering all but one user") {
  CHECK(d_min(Occupancy{{1, 1, 0}}, 2) == 1);
  CHECK(d_min(Occupancy{{0, 1, 1}}, 2) == 2);
  CHECK(d_min(Occupancy{{0, 0, 2}}, 2) == 3);
  CHECK(d_min(Occupancy{{2, 0, 0}}, 2) == 1);
  CHECK(d_min(Occupancy{{1, 1, 1, 2}}, 5) == 4);
  CHECK_THROWS_AS(d_min(Occupancy{{1, 1, 0}}, 3), ContractViolation);
  CHECK_THROWS_AS(d_min(Occupancy{{1, 0}}, 1), ContractViolation);
}

TEST_CASE("d_min agrees with a direct search over prefixes") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 5000; ++i) {
    const int d = 2 + static_cast<int>(rng() % 6);
    const int n = 2 + static_cast<int>(rng() % 20);
    const auto occ = sample_split(fair(d), n, rng);
    int expected = 0;
    for (int o = 1; o <= d && expected == 0; ++o) {
      int s = 0;
      for (int j = 0; j < o; ++j) s += occ.counts[j];
      if (s >= n - 1) expected = o;
    }
    REQUIRE(d_min(occ, n) == expected);
  }
}

TEST_CASE("single user is decoded in the first group, ending the interval in two slots") {
  const auto tree = SplitTree::parse("2(1,1,0)");
  CHECK(corrected_length(tree) == 2);
  CHECK(yg_length(tree) == 3);
  CHECK(standard_ta_length(tree) == 4);
  const auto slots = slot_level_cri(tree);
  CHECK(slots.total_slots == 2);
  CHECK(slots.collision_slots == 1);
  CHECK(slots.singleton_slots == 1);
  CHECK(slots.idle_slots == 0);
  CHECK(slots.sic_recoveries == 1);
  CHECK(slots.derived_signals == 0);
}

TEST_CASE("empty first group costs an idle slot") {
  const auto tree = SplitTree::parse("2(0,1,1)");
  CHECK(corrected_length(tree) == 3);
  CHECK(yg_length(tree) == 3);
  const auto slots = slot_level_cri(tree);
  CHECK(slots.total_slots == 3);
  CHECK(slots.idle_slots == 1);
  CHECK(slots.sic_recoveries == 1);
}

TEST_CASE("last group signal is derived from the parent") {
  // Root collision, idle, idle, group 3 derived (no slot) and split again:
  // one singleton slot, then the second user falls out by cancellation.
  const auto tree = SplitTree::parse("2(0,0,2(1,1,0))");
  CHECK(corrected_length(tree) == 4);
  CHECK(yg_length(tree) == 5);
  const auto slots = slot_level_cri(tree);
  CHECK(slots == CriBreakdown{4, 1, 1, 2, 1, 1});
}

TEST_CASE("leaves cost exactly one slot") {
  for (const char* text : {"0", "1"}) {
    const auto tree = SplitTree::parse(text);
    CHECK(corrected_length(tree) == 1);
    CHECK(yg_length(tree) == 1);
    CHECK(standard_ta_length(tree) == 1);
    CHECK(slot_level_cri(tree).total_slots == 1);
  }
  CHECK(slot_level_cri(SplitTree::parse("0")).idle_slots == 1);
  CHECK(slot_level_cri(SplitTree::parse("1")).singleton_slots == 1);
}

TEST_CASE("binary trees reproduce the SICTA recursion l_n = l_I1 + l_I2") {
  // Root, left collision and one singleton slot; the rest by cancellation.
  const auto tree = SplitTree::parse("3(2(1,1),1)");
  CHECK(corrected_length(tree) == 3);
  CHECK(yg_length(tree) == 3);
  CHECK(slot_level_cri(tree).total_slots == 3);
}

TEST_CASE("a fully resolved subtree stops before its remaining groups") {
  // Group 1 resolves both of its users after one singleton slot, so its
  // groups 2 and 3 are never polled.
  const auto tree = SplitTree::parse("4(2(1,1,0),2(1,0,1),0)");
  const auto slots = slot_level_cri(tree);
  CHECK(slots.total_slots == corrected_length(tree));
  CHECK(corrected_length(tree) == 1 + 2 + 2);
}

TEST_CASE("evaluator invariants on random trees") {
  std::mt19937_64 rng(99);
  int strict = 0;
  for (int i = 0; i < 20000; ++i) {
    const int d = 2 + i % 4;
    const auto policy = (i / 4) % 2 ? biased(d) : fair(d);
    const int n = 2 + static_cast<int>(rng() % 49);
    const auto tree = generate(n, policy, rng);
    const int corrected = corrected_length(tree);
    const int yg = yg_length(tree);
    const int standard = standard_ta_length(tree);
    const auto slots = slot_level_cri(tree);
    REQUIRE(corrected == slots.total_slots);
    REQUIRE(corrected <= yg);
    REQUIRE(corrected >= 2);
    REQUIRE(standard - yg == tree.internal_count());
    REQUIRE(slots.total_slots == slots.collision_slots + slots.singleton_slots + slots.idle_slots);
    // Every user is either heard in a clean singleton slot or recovered.
    REQUIRE(slots.singleton_slots + slots.sic_recoveries == n);
    if (d == 2) REQUIRE(corrected == yg);
    strict += corrected < yg;
  }
  CHECK(strict > 0);
}

TEST_CASE("strict improvement over yg shows up at n = 10, d = 3") {
  std::mt19937_64 rng(10);
  int strict = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto tree = generate(10, fair(3), rng);
    strict += corrected_length(tree) < yg_length(tree);
  }
  CHECK(strict >= 1);
}
