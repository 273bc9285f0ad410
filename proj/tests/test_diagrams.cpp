#include <doctest.h>

#include <random>

#include "obddlab/diagrams.hpp"
#include "obddlab/errors.hpp"
#include "obddlab/pointer_jumping.hpp"
#include "obddlab/zoo.hpp"
#include "oracles.hpp"

using namespace obddlab;

namespace {

LeveledObdd single_var_x1() {
  LeveledObdd p;
  p.n = 1;
  p.order = VarOrder::identity(1);
  p.levels.push_back({1, {0, 1}});
  p.accept = {0, 1};
  return p;
}

// x1 and not x2 whose tables only make sense in their own positions.
LeveledObdd andnot() {
  LeveledObdd p;
  p.n = 2;
  p.order = VarOrder::identity(2);
  p.levels.push_back({1, {0, 1}});
  p.levels.push_back({2, {0, 0, 1, 0}});
  p.accept = {0, 1};
  return p;
}

LeveledObdd parity_obdd(int n) {
  LeveledObdd p;
  p.n = n;
  p.order = VarOrder::identity(n);
  for (int v = 1; v <= n; ++v)
    p.levels.push_back({v, {0, 1, 1, 0}});
  p.accept = {0, 1};
  return p;
}

Nobdd or_nobdd(int n) {
  Nobdd p;
  p.n = n;
  p.order = VarOrder::identity(n);
  for (int v = 1; v <= n; ++v)
    p.levels.push_back({v, {{0}, {0, 1}, {1}, {1}}});
  p.accept = {0, 1};
  return p;
}

} // namespace

TEST_CASE("eval_obdd") {
  CHECK(eval_obdd(single_var_x1(), Bits{1}));
  CHECK_FALSE(eval_obdd(single_var_x1(), Bits{0}));
  const BoolFn f = eq(4);
  const LeveledObdd tree = build_binary_tree_obdd(f, {1, 2, 3, 4});
  CHECK(eval_obdd(tree, Bits{1, 1, 1, 1}));
  CHECK(truth_table(tree) == f);
  CHECK_THROWS_AS(eval_obdd(tree, Bits{1, 1}), ShapeError);
}

TEST_CASE("validate rejects malformed programs") {
  LeveledObdd p = single_var_x1();
  p.levels[0].edges[1] = 5;
  CHECK_THROWS_AS(validate(p), StructuralError);
  Pobdd q = embed_probabilistic(single_var_x1());
  q.levels[0].edges[0] = {{0, 0.5}};
  CHECK_THROWS_AS(validate(q), StructuralError);
}

TEST_CASE("eval_nobdd") {
  std::mt19937_64 rng(2);
  std::bernoulli_distribution coin(0.5);
  for (int n = 1; n <= 8; ++n) {
    const BoolFn f = BoolFn::from_index(n, [&](std::uint64_t) { return coin(rng); });
    std::vector<int> live(static_cast<std::size_t>(n));
    std::iota(live.begin(), live.end(), 1);
    const LeveledObdd p = build_binary_tree_obdd(f, live);
    CHECK(truth_table(embed_nondeterministic(p)) == f);
  }
  Nobdd dead = or_nobdd(3);
  for (auto &level : dead.levels)
    for (auto &e : level.edges)
      e.clear();
  CHECK(truth_table(dead) == BoolFn::constant(3, false));

  const Nobdd any = or_nobdd(4);
  CHECK_FALSE(eval_nobdd(any, Bits{0, 0, 0, 0}));
  CHECK(truth_table(any) ==
        BoolFn::from_bits(4, [](auto x) { return oracle::popcount({x.begin(), x.end()}) > 0; }));
}

TEST_CASE("eval_pobdd") {
  const LeveledObdd det = parity_obdd(3);
  const Pobdd emb = embed_probabilistic(det);
  for (std::uint64_t i = 0; i < 8; ++i) {
    const double pr = eval_pobdd(emb, bits_of(i, 3));
    CHECK((pr == 0.0 || pr == 1.0));
    CHECK((pr == 1.0) == eval_obdd(det, bits_of(i, 3)));
  }

  // A fair coin into two copies of an accepting chain.
  Pobdd coin;
  coin.n = 2;
  coin.order = VarOrder::identity(2);
  coin.levels.push_back({1, {{{0, 0.5}, {1, 0.5}}, {{0, 0.5}, {1, 0.5}}}});
  coin.levels.push_back({2, {{{0, 1.0}}, {{0, 1.0}}, {{1, 1.0}}, {{1, 1.0}}}});
  coin.accept = {1, 1};
  for (std::uint64_t i = 0; i < 4; ++i)
    CHECK(eval_pobdd(coin, bits_of(i, 2)) == doctest::Approx(1.0));

  const BoolFn wsb = ws_b(6, 2);
  const Pobdd tree = embed_probabilistic(build_binary_tree_obdd(wsb, {1, 2}));
  for (std::uint64_t i = 0; i < 64; ++i)
    CHECK(eval_pobdd(tree, bits_of(i, 6)) == (wsb.at(i) ? 1.0 : 0.0));
}

TEST_CASE("width and binary trees") {
  CHECK(width(parity_obdd(5)) == 2);
  LeveledObdd one;
  one.n = 2;
  one.order = VarOrder::identity(2);
  one.levels = {{1, {0, 0}}, {2, {0, 0}}};
  one.accept = {1};
  CHECK(width(one) == 1);

  const BoolFn x1 = BoolFn::from_bits(3, [](auto x) { return x[0] == 1; });
  const LeveledObdd t1 = build_binary_tree_obdd(x1, {1});
  CHECK(width(t1) == 2);
  CHECK(truth_table(t1) == x1);

  const LeveledObdd t4 = build_binary_tree_obdd(eq(4), {1, 2, 3, 4});
  CHECK(t4.level_size(2) == 4);

  // WS^b with b = 3 reads x1..x4.
  const BoolFn wsb = ws_b(9, 3);
  const std::vector<int> padding = ws_b_padding(9, 3);
  std::vector<int> live;
  for (int v = 1; v <= 9; ++v)
    if (std::find(padding.begin(), padding.end(), v) == padding.end())
      live.push_back(v);
  CHECK(live == std::vector<int>{1, 2, 3, 4});
  const LeveledObdd tw = build_binary_tree_obdd(wsb, live);
  CHECK(width(tw) <= (std::size_t{1} << live.size()));
  CHECK(truth_table(tw) == wsb);
  for (std::uint64_t i = 0; i < 512; ++i)
    CHECK(wsb.at(i) == oracle::ws_b(oracle::bits(i, 9), 3));

  CHECK_THROWS_AS(build_binary_tree_obdd(eq(4), {1, 2}), DependencyError);
}

TEST_CASE("is_commutative") {
  CHECK(is_commutative(parity_obdd(4)));
  CHECK(is_commutative(or_nobdd(3)));
  CHECK(is_commutative(pj_2k_obdd(1, 2)));
  CHECK_FALSE(is_commutative(andnot()));

  // The violating swap: reading x2's table first computes a different
  // function.
  const LeveledObdd swapped = reorder_levels(normalized(andnot()), VarOrder({2, 1}));
  bool differs = false;
  for (std::uint64_t i = 0; i < 4; ++i)
    differs = differs || eval_obdd(swapped, bits_of(i, 2)) != eval_obdd(andnot(), bits_of(i, 2));
  CHECK(differs);
}

TEST_CASE("reorder_levels keeps the function of a commutative program") {
  const LeveledObdd p = normalized(parity_obdd(4));
  const LeveledObdd r = reorder_levels(p, VarOrder({4, 2, 3, 1}));
  CHECK(r.order == VarOrder({4, 2, 3, 1}));
  CHECK(truth_table(r) == truth_table(p));
}

TEST_CASE("text round trip") {
  const LeveledObdd det = pj_2k_obdd(2, 2);
  CHECK(obdd_from_text(to_text(det)) == det);
  const Nobdd nd = or_nobdd(3);
  CHECK(nobdd_from_text(to_text(nd)) == nd);
  Pobdd pr = embed_probabilistic(parity_obdd(2));
  pr.levels[0].edges[0] = {{0, 0.25}, {1, 0.75}};
  const Pobdd back = pobdd_from_text(to_text(pr));
  CHECK(back == pr);
  CHECK_THROWS_AS(obdd_from_text("obdd 2 1 garbage"), ShapeError);
}

TEST_CASE("the pointer-jumping program on a worked instance") {
  // a = 2, f_A: 0->2, 1->3, f_B: 2->1, 3->0; three steps end at vertex 3.
  PjInstance inst;
  inst.a = 2;
  inst.f_a = {2, 3};
  inst.f_b = {1, 0};
  CHECK(pj_eval(inst, 3) == 3);
  const Bits x = encode_pj(inst);
  CHECK(pj_bool_eval(3, 2, x) == false);
  for (int k = 1; k <= 2; ++k)
    CHECK(eval_obdd(pj_2k_obdd(k, 2), x) == pj_bool_eval(k, 2, x));
}
