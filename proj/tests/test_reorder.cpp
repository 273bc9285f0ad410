#include <doctest.h>

#include <random>

#include "obddlab/errors.hpp"
#include "obddlab/fingerprint.hpp"
#include "obddlab/reorder.hpp"
#include "obddlab/zoo.hpp"
#include "oracles.hpp"

using namespace obddlab;

namespace {

// q = 4 input with address fields (00, 01, 11, 01) and the given values.
Bits q4_input(const std::vector<std::uint8_t> &values) {
  const int fields[4][2] = {{0, 0}, {0, 1}, {1, 1}, {0, 1}};
  Bits x;
  for (int b = 0; b < 4; ++b) {
    x.push_back(fields[b][0]);
    x.push_back(fields[b][1]);
    x.push_back(values[b]);
  }
  return x;
}

LeveledObdd counter(int n, int m) {
  LeveledObdd p;
  p.n = n;
  p.order = VarOrder::identity(n);
  for (int v = 1; v <= n; ++v) {
    Level<DetEdge> level{v, {}};
    for (int s = 0; s < m; ++s) {
      level.edges.push_back(s);
      level.edges.push_back((s + 1) % m);
    }
    p.levels.push_back(level);
  }
  p.accept.assign(m, 0);
  p.accept[0] = 1;
  return p;
}

LeveledObdd accept_all(int n) {
  LeveledObdd p;
  p.n = n;
  p.order = VarOrder::identity(n);
  for (int v = 1; v <= n; ++v)
    p.levels.push_back({v, {0, 0}});
  p.accept = {1};
  return p;
}

LeveledObdd andnot() {
  LeveledObdd p;
  p.n = 2;
  p.order = VarOrder::identity(2);
  p.levels.push_back({1, {0, 1}});
  p.levels.push_back({2, {0, 0, 1, 0}});
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

// Routes value bits by hand, independently of route_values.
std::optional<oracle::Bits> routed(const Bits &x, int q, int p, bool xor_mode) {
  std::vector<int> adr;
  int carry = 0;
  for (int b = 0; b < q; ++b) {
    int field = 0;
    for (int j = 0; j < p; ++j)
      field = field * 2 + x[b * (p + 1) + j];
    carry = xor_mode ? (carry ^ field) : field;
    adr.push_back(carry);
  }
  oracle::Bits out(static_cast<std::size_t>(q), 2);
  for (int b = 0; b < q; ++b) {
    if (out[adr[b]] != 2)
      return std::nullopt;
    out[adr[b]] = x[b * (p + 1) + p];
  }
  return out;
}

} // namespace

TEST_CASE("block layout") {
  const BlockLayout l(4);
  CHECK(l.p() == 2);
  CHECK(l.n() == 12);
  CHECK(l.address_var(2, 1) == 4);
  CHECK(l.value_var(2) == 6);
  CHECK_THROWS_AS(BlockLayout(3), ParameterError);
  CHECK_THROWS_AS(BlockLayout(1), ParameterError);
  CHECK(parse_address_mode("xor") == AddressMode::prefix_xor);
  CHECK_THROWS_AS(parse_address_mode("both"), ParameterError);
}

TEST_CASE("adr") {
  const BlockLayout l(4);
  const Bits x = q4_input({0, 0, 0, 0});
  CHECK(addresses(l, x, AddressMode::prefix_xor) == std::vector<int>{1, 2, 3, 4});
  CHECK(adr(l, x, 4, AddressMode::prefix_xor) == 4);
  CHECK(adr(l, Bits(12, 0), 1, AddressMode::direct) == 1);
  Bits y(12, 0);
  y[0] = y[1] = 1;
  CHECK(adr(l, y, 1, AddressMode::direct) == 4);
  CHECK_THROWS_AS(adr(l, x, 5, AddressMode::direct), ShapeError);
}

TEST_CASE("is_allowed") {
  const BlockLayout l(4);
  CHECK(is_allowed(l, q4_input({1, 0, 1, 0}), AddressMode::prefix_xor));
  CHECK_FALSE(is_allowed(l, q4_input({1, 0, 1, 0}), AddressMode::direct));
  const BlockLayout l2(2);
  CHECK_FALSE(is_allowed(l2, Bits{0, 1, 0, 1}, AddressMode::direct));
  CHECK_FALSE(is_allowed(l2, Bits{0, 0, 0, 1}, AddressMode::direct));
  // allowed inputs: (q! address patterns) * 2^q values.
  for (AddressMode mode : {AddressMode::direct, AddressMode::prefix_xor}) {
    int count = 0;
    for (std::uint64_t i = 0; i < 4096; ++i)
      count += is_allowed(l, bits_of(i, 12), mode);
    CHECK(count == 24 * 16);
  }
}

TEST_CASE("reorder_function") {
  const BlockLayout l(2);
  const PartialBoolFn f = reorder_function(eq(2), l, AddressMode::prefix_xor);
  // (0,1,1,1): fields 0 then 1, so addresses (1,2) and values (1,1).
  CHECK(*evaluate(f, Bits{0, 1, 1, 1}) == true);
  CHECK(*evaluate(f, Bits{0, 1, 1, 0}) == false);
  CHECK_FALSE(evaluate(f, Bits{0, 1, 0, 1}).has_value());

  const PartialBoolFn one = reorder_function(BoolFn::constant(4, true), BlockLayout(4),
                                             AddressMode::direct);
  for (std::uint64_t i = 0; i < 4096; ++i)
    CHECK(one.at(i) == (is_allowed(BlockLayout(4), bits_of(i, 12), AddressMode::direct)
                            ? std::optional<bool>(true)
                            : std::nullopt));
  CHECK_THROWS_AS(reorder_function(eq(4), l, AddressMode::direct), ShapeError);

  // Against hand routing, both modes, a random f over 4 variables.
  std::mt19937_64 rng(9);
  std::bernoulli_distribution coin(0.5);
  const BoolFn g = BoolFn::from_index(4, [&](std::uint64_t) { return coin(rng); });
  for (bool xor_mode : {false, true}) {
    const PartialBoolFn gp = reorder_function(
        g, BlockLayout(4), xor_mode ? AddressMode::prefix_xor : AddressMode::direct);
    for (std::uint64_t i = 0; i < 4096; ++i) {
      const auto r = routed(bits_of(i, 12), 4, 2, xor_mode);
      if (!r)
        CHECK_FALSE(gp.is_defined(i));
      else
        CHECK(gp.at(i) == std::optional<bool>(g.at(oracle::index(*r))));
    }
  }
}

TEST_CASE("xor_reorder_qobdd on the EQ fingerprint") {
  for (int q : {2, 4}) {
    const std::vector<int> ks = q == 2 ? std::vector<int>{1} : std::vector<int>{1, 1, 2};
    const QuantumProgram p = fingerprint_eq_qobdd(q, ks);
    const BlockLayout l(q);
    const QuantumProgram lifted = xor_reorder_qobdd(p, l);
    CHECK(lifted.dim == q * p.dim);
    const PartialBoolFn target = reorder_function(eq(q), l, AddressMode::prefix_xor);
    const double worst = multiplier_worst_error(1 << (q / 2), ks);
    const BoundedErrorVerdict v = computes_with_bounded_error(lifted, target, 0.5 - worst);
    CHECK(v.pass);
    CHECK(v.min_accept_on_ones == doctest::Approx(1.0));
    // Disallowed inputs still get a probability.
    const double pr = accept_probability(lifted, Bits(l.n(), 0));
    CHECK(pr >= 0.0);
    CHECK(pr <= 1.0 + 1e-9);
  }
}

TEST_CASE("xor_reorder_qobdd rejects what it cannot lift") {
  QuantumProgram nc = fingerprint_eq_qobdd(2, {1});
  const double h = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXcd had(2, 2);
  had << h, h, h, -h;
  Eigen::MatrixXcd quarter(2, 2);
  quarter << h, -h, h, h;
  nc.steps[0].g1.topLeftCorner(2, 2) = had;
  nc.steps[1].g1.topLeftCorner(2, 2) = quarter;
  CHECK_THROWS_AS(xor_reorder_qobdd(nc, BlockLayout(2)), NotCommutativeError);
  QuantumProgram two = fingerprint_eq_qobdd(2, {1});
  two.layers = 2;
  two.steps.insert(two.steps.end(), two.steps.begin(), two.steps.end());
  CHECK_THROWS_AS(xor_reorder_qobdd(two, BlockLayout(2)), ParameterError);
}

TEST_CASE("classical lifts") {
  for (int q : {2, 4})
    for (AddressMode mode : {AddressMode::direct, AddressMode::prefix_xor}) {
      const BlockLayout l(q);
      for (int m : {2, 3}) {
        const LeveledObdd p = counter(q, m);
        const LeveledObdd lifted = reorder_obdd(p, l, mode);
        CHECK(width(lifted) <= q * width(p));
        const PartialBoolFn target = reorder_function(truth_table(p), l, mode);
        for (std::uint64_t i = 0; i < target.domain_size(); ++i)
          if (target.is_defined(i))
            CHECK(eval_obdd(lifted, bits_of(i, l.n())) == *target.at(i));
      }
      const LeveledObdd all = reorder_obdd(accept_all(q), l, mode);
      CHECK(truth_table(all) == BoolFn::constant(l.n(), true));

      const Nobdd nd = reorder_nobdd(or_nobdd(q), l, mode);
      CHECK(width(nd) <= q * 2);
      const PartialBoolFn any = reorder_function(truth_table(or_nobdd(q)), l, mode);
      for (std::uint64_t i = 0; i < any.domain_size(); ++i)
        if (any.is_defined(i))
          CHECK(eval_nobdd(nd, bits_of(i, l.n())) == *any.at(i));

      const Pobdd pr = reorder_pobdd(embed_probabilistic(counter(q, 3)), l, mode);
      const PartialBoolFn c3 = reorder_function(truth_table(counter(q, 3)), l, mode);
      for (std::uint64_t i = 0; i < c3.domain_size(); ++i)
        if (c3.is_defined(i))
          CHECK(eval_pobdd(pr, bits_of(i, l.n())) == (*c3.at(i) ? 1.0 : 0.0));
    }
}

TEST_CASE("lifts reject non-commutative programs") {
  for (AddressMode mode : {AddressMode::direct, AddressMode::prefix_xor}) {
    CHECK_THROWS_AS(reorder_obdd(andnot(), BlockLayout(2), mode), NotCommutativeError);
    CHECK_THROWS_AS(reorder_nobdd(embed_nondeterministic(andnot()), BlockLayout(2), mode),
                    NotCommutativeError);
  }
  CHECK_THROWS_AS(reorder_obdd(counter(2, 2), BlockLayout(4), AddressMode::direct),
                  ShapeError);
}

TEST_CASE("totalize") {
  const BoolFn f = mod_p(3, 4);
  CHECK(totalize(PartialBoolFn(f), embed_probabilistic(counter(4, 3))) == f);

  const PartialBoolFn gaps = reorder_function(BoolFn::constant(2, true), BlockLayout(2),
                                              AddressMode::direct);
  CHECK(totalize(gaps, accept_all(4)) == BoolFn::constant(4, true));
  CHECK_THROWS_AS(totalize(PartialBoolFn(BoolFn::constant(4, false)), accept_all(4)),
                  ConsistencyError);
}

TEST_CASE("totalize of the lifted EQ fingerprint follows the address split") {
  // The lifted program rotates each value bit by the angle of the EQ
  // variable its address names, so it accepts exactly when the
  // first-half-address blocks balance the second-half-address blocks
  // modulo 2^{q/2}.
  for (int q : {2, 4}) {
    const std::vector<int> ks = q == 2 ? std::vector<int>{1} : std::vector<int>{1, 1, 2};
    const BlockLayout l(q);
    const int p = l.p();
    const QuantumProgram lifted = xor_reorder_qobdd(fingerprint_eq_qobdd(q, ks), l);
    const BoolFn total = totalize(reorder_function(eq(q), l, AddressMode::prefix_xor), lifted);
    const int half = q / 2;
    for (std::uint64_t i = 0; i < total.domain_size(); ++i) {
      const oracle::Bits x = oracle::bits(i, l.n());
      const auto adr = oracle::xor_addresses(x, q, p);
      long long delta = 0;
      for (int b = 0; b < q; ++b) {
        if (!x[b * (p + 1) + p])
          continue;
        delta += adr[b] < half ? (1LL << adr[b]) : -(1LL << (adr[b] - half));
      }
      const long long mod = 1LL << half;
      CHECK(total.at(i) == (((delta % mod) + mod) % mod == 0));
    }
  }
}

TEST_CASE("the literal REQ formula differs from the totalized program") {
  const BlockLayout l(2);
  const BoolFn literal = req(l);
  CHECK(literal.at(index_of(Bits{0, 1, 0, 1})));
  CHECK_FALSE(literal.at(index_of(Bits{0, 1, 1, 1})));
  const QuantumProgram lifted = xor_reorder_qobdd(fingerprint_eq_qobdd(2, {1}), l);
  const BoolFn total = totalize(reorder_function(eq(2), l, AddressMode::prefix_xor), lifted);
  CHECK(total.at(index_of(Bits{0, 1, 1, 1})));
}
