#include <doctest.h>

#include <random>

#include "sicta/tree.hpp"

using namespace sicta;

namespace {

// Structural invariants checked node by node.
bool well_formed(const SplitTree& t) {
  for (NodeId id = 0; id < t.size(); ++id) {
    const auto kids = t.children(id);
    if (t.occupancy(id) <= 1) {
      if (!kids.empty()) return false;
      continue;
    }
    if (static_cast<int>(kids.size()) != t.d()) return false;
    int sum = 0;
    for (NodeId c : kids) sum += t.occupancy(c);
    if (sum != t.occupancy(id)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("small trees") {
  std::mt19937_64 rng(1);
  const auto t0 = generate(0, fair(3), rng);
  CHECK(t0.size() == 1);
  CHECK(t0.root_occupancy() == 0);
  CHECK(t0.to_string() == "0");
  const auto t1 = generate(1, biased(4), rng);
  CHECK(t1.size() == 1);
  CHECK(t1.to_string() == "1");

  const auto t2 = generate(2, fair(3), rng);
  CHECK(t2.root_occupancy() == 2);
  CHECK(t2.children(SplitTree::kRoot).size() == 3);
  int sum = 0;
  for (NodeId c : t2.children(SplitTree::kRoot)) sum += t2.occupancy(c);
  CHECK(sum == 2);
}

TEST_CASE("occupancy is conserved at every internal node") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 100000; ++i) {
    const int d = 2 + i % 4;
    const int n = static_cast<int>(rng() % 51);
    const auto policy = (i / 4) % 2 ? biased(d) : fair(d);
    const auto tree = generate(n, policy, rng);
    REQUIRE(well_formed(tree));
    REQUIRE(tree.root_occupancy() == n);
  }
}

TEST_CASE("parse and print are inverse") {
  for (const char* text : {"0", "1", "2(1,1,0)", "2(0,0,2(1,1,0))", "3(2(0,2(1,1)),1)"}) {
    CAPTURE(text);
    CHECK(SplitTree::parse(text).to_string() == text);
  }
  std::mt19937_64 rng(9);
  for (int i = 0; i < 200; ++i) {
    const auto tree = generate(static_cast<int>(rng() % 40), biased(3), rng);
    const auto again = SplitTree::parse(tree.to_string());
    CHECK(again.to_string() == tree.to_string());
    CHECK(again.internal_count() == tree.internal_count());
  }
}

TEST_CASE("parse rejects malformed trees") {
  CHECK_THROWS_AS(SplitTree::parse("2(1,0)x"), ValidationError);
  CHECK_THROWS_AS(SplitTree::parse("2(1,1,1)"), ValidationError);      // sum mismatch
  CHECK_THROWS_AS(SplitTree::parse("2"), ValidationError);             // collision leaf
  CHECK_THROWS_AS(SplitTree::parse("1(1,0)"), ValidationError);        // split singleton
  CHECK_THROWS_AS(SplitTree::parse("3(2(1,1),1,0)"), ValidationError);  // mixed d
  CHECK_THROWS_AS(SplitTree::parse("2(1,1"), ValidationError);
}

TEST_CASE("tree metrics") {
  const auto t = SplitTree::parse("2(0,0,2(1,1,0))");
  CHECK(t.d() == 3);
  CHECK(t.size() == 7);
  CHECK(t.internal_count() == 2);
  CHECK(t.height() == 2);
}

TEST_CASE("depth bound raises DepthExceeded with the offending depth") {
  // A policy that almost never separates users forces deep trees.
  const auto sticky = custom({1.0 - 1e-9, 1e-9});
  std::mt19937_64 rng(3);
  try {
    generate(5, sticky, rng, 50);
    FAIL("expected DepthExceeded");
  } catch (const DepthExceeded& e) {
    CHECK(e.depth() == 51);
  }
  CHECK_THROWS_AS(generate(3, fair(2), rng, 0), ContractViolation);
  CHECK_THROWS_AS(generate(-1, fair(2), rng), ContractViolation);
}

TEST_CASE("generation is a pure function of the random stream") {
  std::mt19937_64 a(77), b(77);
  for (int i = 0; i < 100; ++i) {
    CHECK(generate(40, fair(4), a).to_string() == generate(40, fair(4), b).to_string());
  }
}
