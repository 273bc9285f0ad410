#include <doctest.h>

#include <random>

#include "obddlab/boolfn.hpp"
#include "obddlab/errors.hpp"
#include "obddlab/reorder.hpp"
#include "obddlab/subfunctions.hpp"
#include "obddlab/zoo.hpp"
#include "oracles.hpp"

using namespace obddlab;

namespace {

BoolFn random_fn(int n, std::mt19937_64 &rng) {
  std::bernoulli_distribution coin(0.5);
  return BoolFn::from_index(n, [&](std::uint64_t) { return coin(rng); });
}

std::vector<int> perm_of(const VarOrder &o) { return o.perm(); }

} // namespace

TEST_CASE("evaluate") {
  const Bits any = {0, 1, 1};
  CHECK(evaluate(BoolFn::constant(3, true), any));
  CHECK(evaluate(eq(4), Bits{1, 0, 1, 0}));
  CHECK_FALSE(evaluate(eq(4), Bits{1, 0, 0, 0}));
  CHECK_THROWS_AS(evaluate(eq(4), Bits{1, 0}), ShapeError);

  const PartialBoolFn p(2, BitVec::from_hex("5", 4), BitVec::from_hex("4", 4));
  CHECK_FALSE(evaluate(p, Bits{0, 0}).has_value());
  CHECK(*evaluate(p, Bits{0, 1}) == true);
  CHECK(*evaluate(p, Bits{1, 1}) == false);
}

TEST_CASE("index convention puts x1 in the most significant bit") {
  CHECK(var_bit(3, 1) == 4);
  CHECK(index_of(Bits{1, 0, 0}) == 4);
  CHECK(bits_of(1, 3) == Bits{0, 0, 1});
  const BoolFn x1 = BoolFn::from_bits(3, [](auto x) { return x[0] == 1; });
  CHECK(to_hex(x1) == "0f");
}

TEST_CASE("hex round trip") {
  std::mt19937_64 rng(5);
  for (int n = 0; n <= 9; ++n) {
    const BoolFn f = random_fn(n, rng);
    CHECK(bool_fn_from_hex(n, to_hex(f)) == f);
  }
  const PartialBoolFn p = reorder_function(eq(2), BlockLayout(2), AddressMode::direct);
  const PartialHex h = to_hex(p);
  CHECK(partial_fn_from_hex(4, h.mask, h.values) == p);
  CHECK_THROWS(bool_fn_from_hex(3, "zz"));
}

TEST_CASE("subfunction_count examples") {
  CHECK(subfunction_count(eq(4), Partition(VarOrder::identity(4), 2)) == 4);
  CHECK(subfunction_count(BoolFn::constant(4, false),
                          Partition(VarOrder({3, 1, 4, 2}), 1)) == 1);
  CHECK(subfunction_count(eq(4), Partition(VarOrder({1, 3, 2, 4}), 3)) == 3);
  CHECK_THROWS_AS(Partition(VarOrder::identity(4), 0), ShapeError);
  CHECK_THROWS_AS(Partition(VarOrder::identity(4), 4), ShapeError);
}

TEST_CASE("subfunction_count matches the brute-force oracle") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + trial % 5;
    const BoolFn f = random_fn(n, rng);
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 1);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (int cut = 1; cut < n; ++cut) {
      const std::uint64_t want = oracle::subfunctions(
          n, perm, cut, [&](const oracle::Bits &x) { return f.at(oracle::index(x)); });
      const std::uint64_t got = subfunction_count(f, Partition(VarOrder(perm), cut));
      CHECK(got == want);
      CHECK(got >= 1);
      CHECK(got <= (std::uint64_t{1} << cut));
      if (n - cut < 6)
        CHECK(got <= (std::uint64_t{1} << (std::uint64_t{1} << (n - cut))));
      CHECK(subfunction_count(PartialBoolFn(f), Partition(VarOrder(perm), cut)) == got);
    }
  }
}

TEST_CASE("n_pi examples") {
  CHECK(n_pi(eq(4), VarOrder::identity(4)) == 4);
  CHECK(n_pi(eq(4), VarOrder({1, 3, 2, 4})) == 3);
  CHECK(n_pi(BoolFn::constant(5, false), VarOrder({5, 4, 3, 2, 1})) == 1);
  for (int n : {2, 4, 6, 8, 10})
    CHECK(subfunction_count(eq(n), Partition(VarOrder::identity(n), n / 2)) ==
          (std::uint64_t{1} << (n / 2)));
}

TEST_CASE("n_min examples") {
  CHECK(n_min(eq(4)).value == 3);
  CHECK(n_min_enumerate(eq(4)).value == 3);
  CHECK(n_min(BoolFn::constant(7, false)).value == 1);
  const MinWidth r = n_min(req(BlockLayout(2)));
  CHECK(r.value >= 2);
  CHECK(n_pi(req(BlockLayout(2)), r.order) == r.value);
}

TEST_CASE("n_min DP equals enumeration") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + trial % 6;
    const BoolFn f = random_fn(n, rng);
    const MinWidth dp = n_min(f);
    CHECK(dp.value == n_min_enumerate(f).value);
    CHECK(n_pi(f, dp.order) == dp.value);
  }
  for (const BoolFn &f : {eq(6), mod_p(3, 6), ws(6), ws_b(6, 2), req(BlockLayout(2))})
    CHECK(n_min(f).value == n_min_enumerate(f).value);
}

TEST_CASE("n_min equals the minimum over orders of the brute-force count") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 15; ++trial) {
    const int n = 2 + trial % 4;
    const BoolFn f = random_fn(n, rng);
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 1);
    std::uint64_t best = ~std::uint64_t{0};
    do {
      std::uint64_t worst = 1;
      for (int cut = 1; cut < n; ++cut)
        worst = std::max(worst, oracle::subfunctions(n, perm, cut, [&](const oracle::Bits &x) {
                           return f.at(oracle::index(x));
                         }));
      best = std::min(best, worst);
    } while (std::next_permutation(perm.begin(), perm.end()));
    CHECK(n_min(f).value == best);
  }
}

TEST_CASE("n_min respects its caps") {
  CHECK_THROWS_AS(n_min_enumerate(BoolFn::constant(kMaxEnumerationVars + 1, false)),
                  CapacityError);
  CHECK_THROWS_AS(n_min(BoolFn::constant(kMaxMinWidthVars + 1, false)), CapacityError);
}

TEST_CASE("partial subfunctions: undefined points never separate") {
  // Rows of x1 = 0 and x1 = 1 over x2: (1, ?) and (1, 0) agree where both
  // are defined.
  const PartialBoolFn f(2, BitVec::from_hex("b", 4), BitVec::from_hex("a", 4));
  CHECK(subfunction_count(f, Partition(VarOrder::identity(2), 1)) == 1);
  // (0, ?) (1, ?) (?, ?) -> the first two differ, the third matches both.
  const PartialBoolFn g(3, BitVec::from_hex("a0", 8), BitVec::from_hex("20", 8));
  CHECK(subfunction_count(g, Partition(VarOrder::identity(3), 2)) == 2);
}

TEST_CASE("restrict") {
  const BoolFn r = restrict(eq(4), {{1, true}, {2, false}});
  CHECK(r.arity() == 2);
  CHECK(r == BoolFn::from_bits(2, [](auto x) { return x[0] == 1 && x[1] == 0; }));
  CHECK(restrict(eq(4), {}) == eq(4));
  CHECK_THROWS_AS(restrict(eq(4), {{5, true}}), ShapeError);
  CHECK_THROWS_AS(restrict(eq(4), {{1, true}, {1, false}}), ShapeError);

  // REQ over q = 4, block 1 fixed to address field 00 and value 1.
  const BlockLayout layout(4);
  const BoolFn f = req(layout);
  const BoolFn sub = restrict(f, {{1, false}, {2, false}, {3, true}});
  CHECK(sub.arity() == 9);
  for (std::uint64_t i = 0; i < sub.domain_size(); ++i) {
    oracle::Bits rest = oracle::bits(i, 9);
    oracle::Bits x = {0, 0, 1};
    x.insert(x.end(), rest.begin(), rest.end());
    CHECK(sub.at(i) == oracle::req(x, 4, 2));
  }
}

TEST_CASE("variable orders") {
  const VarOrder o = VarOrder::parse("3,1,2");
  CHECK(o.at(1) == 3);
  CHECK(o.position_of(3) == 1);
  CHECK(o.to_string() == "3,1,2");
  CHECK(perm_of(VarOrder::identity(3)) == std::vector<int>{1, 2, 3});
  CHECK_THROWS_AS(VarOrder({1, 1, 2}), ShapeError);
  CHECK_THROWS_AS(VarOrder::parse("1,x"), ShapeError);
  OrderSampling s;
  s.exhaustive_up_to = 0;
  s.trials = 7;
  CHECK(candidate_orders(6, s).size() == 7);
  CHECK(candidate_orders(4, {}).size() == 24);
}
