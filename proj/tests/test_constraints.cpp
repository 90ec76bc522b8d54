#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "constraints.hpp"

using namespace liftcount;

namespace {

ConstraintStore two_vars(uint32_t domain) {
  ConstraintStore s;
  s.add_var(0, domain);
  s.add_var(0, domain);
  return s;
}

}  // namespace

TEST_CASE("fresh variables range over the full domain") {
  ConstraintStore s = two_vars(3);
  CHECK(s.consistent());
  CHECK(s.live(0).count() == 3);
  CHECK(s.count_assignments() == doctest::Approx(9));
}

TEST_CASE("equality merges and intersects domains") {
  ConstraintStore s = two_vars(3);
  Bitset only01(3);
  only01.set(0);
  only01.set(1);
  CHECK(s.restrict_live(0, only01));
  CHECK(s.require_eq(0, 1));
  CHECK(s.find(0) == s.find(1));
  CHECK(s.live(0).count() == 2);
  CHECK(s.count_assignments() == doctest::Approx(2));
}

TEST_CASE("constant pinning collapses a variable") {
  ConstraintStore s = two_vars(3);
  CHECK(s.require_eq_const(0, 1));
  Term t = s.resolve(Term::var(0));
  CHECK(t.is_const());
  CHECK(t.idx == 1);
}

TEST_CASE("inequality with a pinned partner removes the value") {
  ConstraintStore s = two_vars(3);
  CHECK(s.require_neq(0, 1));
  CHECK(s.require_eq_const(0, 1));
  CHECK(s.propagate());
  CHECK(!s.live(1).test(1));
  CHECK(s.live(1).count() == 2);
}

TEST_CASE("equality contradicting an inequality is inconsistent") {
  ConstraintStore s = two_vars(3);
  CHECK(s.require_neq(0, 1));
  CHECK(!s.require_eq(0, 1));
  CHECK(!s.consistent());
}

TEST_CASE("neq over a two-value domain forces the complement") {
  ConstraintStore s = two_vars(2);
  CHECK(s.require_neq(0, 1));
  CHECK(s.require_eq_const(0, 0));
  CHECK(s.propagate());
  Term t = s.resolve(Term::var(1));
  CHECK(t.is_const());
  CHECK(t.idx == 1);
}

TEST_CASE("assignment counts respect inequality edges") {
  ConstraintStore s = two_vars(3);
  REQUIRE(s.require_neq(0, 1));
  CHECK(s.count_assignments() == doctest::Approx(6));

  ConstraintStore t;
  t.add_var(0, 3);
  t.add_var(0, 3);
  t.add_var(0, 3);
  REQUIRE(t.require_neq(0, 1));
  REQUIRE(t.require_neq(1, 2));
  REQUIRE(t.require_neq(0, 2));
  CHECK(t.count_assignments() == doctest::Approx(6));  // 3!

  ConstraintStore u;
  u.add_var(0, 2);
  u.add_var(0, 2);
  u.add_var(0, 2);
  REQUIRE(u.require_neq(0, 1));
  REQUIRE(u.require_neq(1, 2));
  u.require_neq(0, 2);
  u.propagate();
  CHECK(u.count_assignments() == doctest::Approx(0));
}

TEST_CASE("grounding counts of an atom tuple") {
  // R(x, y) with x != FirstConstant over 3 constants: 2 * 3.
  ConstraintStore s = two_vars(3);
  REQUIRE(s.require_neq_const(0, 0));
  CHECK(s.count_groundings({Term::var(0), Term::var(1)}) == doctest::Approx(6));
  // R(x, y) with x != y over 3 constants.
  ConstraintStore t = two_vars(3);
  REQUIRE(t.require_neq(0, 1));
  CHECK(t.count_groundings({Term::var(0), Term::var(1)}) == doctest::Approx(6));
  // R(x, x): the tuple collapses to the diagonal.
  CHECK(two_vars(3).count_groundings({Term::var(0), Term::var(0)}) == doctest::Approx(3));
  // Tuples mentioning only some variables count distinct tuple values, not
  // assignments: R(x) over the store {x, y} still has 3 groundings.
  CHECK(two_vars(3).count_groundings({Term::var(0)}) == doctest::Approx(3));
  // ... but an unmentioned variable that can starve the store removes values:
  // x != y over a 1-value domain leaves nothing.
  ConstraintStore v = two_vars(1);
  v.require_neq(0, 1);
  v.propagate();
  CHECK(v.count_groundings({Term::var(0)}) == doctest::Approx(0));
}

TEST_CASE("enumerate agrees with count_assignments") {
  for (uint32_t seed = 0; seed < 20; ++seed) {
    ConstraintStore s;
    uint32_t domain = 2 + seed % 3;
    for (int v = 0; v < 3; ++v) s.add_var(0, domain);
    if (seed & 1) s.require_neq(0, 1);
    if (seed & 2) s.require_neq(1, 2);
    if (seed & 4) s.require_eq(0, 2);
    if (seed & 8) s.require_eq_const(1, 0);
    s.propagate();
    std::set<std::vector<ConstId>> seen;
    s.enumerate([&](const std::vector<ConstId> &a) {
      CHECK(seen.insert(a).second);  // distinct
      for (auto [x, y] : s.neq_edges()) CHECK(a[x] != a[y]);
    });
    CHECK(double(seen.size()) == doctest::Approx(s.count_assignments()));
  }
}

TEST_CASE("signature blocks group constants by domain membership") {
  ConstraintStore s;
  Bitset d01(3), d012(3, true);
  d01.set(0);
  d01.set(1);
  s.add_var(0, d01);
  s.add_var(0, d012);
  auto blocks = s.signature_blocks({0, 1}, 0, 3);
  REQUIRE(blocks.size() == 2);
  CHECK(blocks[0].test(0));
  CHECK(blocks[0].test(1));
  CHECK(blocks[0].count() == 2);
  CHECK(blocks[1].test(2));
  CHECK(blocks[1].count() == 1);
}

TEST_CASE("emptied domains mark the store inconsistent") {
  ConstraintStore s = two_vars(2);
  CHECK(s.require_neq_const(0, 0));
  CHECK(!s.require_neq_const(0, 1));
  CHECK(!s.consistent());
  CHECK(s.count_assignments() == doctest::Approx(0));
}

TEST_CASE("neq edges survive union-find merges") {
  ConstraintStore s;
  for (int v = 0; v < 3; ++v) s.add_var(0, 4);
  REQUIRE(s.require_eq(0, 1));
  REQUIRE(s.require_neq(1, 2));
  CHECK(s.has_neq(0, 2));
  CHECK(s.has_neq(2, 1));
}

TEST_CASE("content hash distinguishes different stores") {
  ConstraintStore a = two_vars(3), b = two_vars(3);
  CHECK(a.content_hash() == b.content_hash());
  b.require_neq(0, 1);
  CHECK(a.content_hash() != b.content_hash());
}
