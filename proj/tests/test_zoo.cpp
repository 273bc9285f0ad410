#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include <json.hpp>

#include "obddlab/errors.hpp"
#include "obddlab/fingerprint.hpp"
#include "obddlab/pointer_jumping.hpp"
#include "obddlab/subfunctions.hpp"
#include "obddlab/zoo.hpp"
#include "oracles.hpp"

using namespace obddlab;

namespace {

// Direct-mode blocks for a = 2: addresses 1..4 in order, given values.
Bits rpj_input(const std::vector<std::uint8_t> &values,
               const std::vector<int> &fields = {0, 1, 2, 3}) {
  Bits x;
  for (std::size_t b = 0; b < values.size(); ++b) {
    x.push_back((fields[b] >> 1) & 1);
    x.push_back(fields[b] & 1);
    x.push_back(values[b]);
  }
  return x;
}

PjInstance random_instance(int a, std::mt19937_64 &rng) {
  std::uniform_int_distribution<int> pick(0, a - 1);
  PjInstance inst;
  inst.a = a;
  for (int v = 0; v < a; ++v) {
    inst.f_a.push_back(a + pick(rng));
    inst.f_b.push_back(pick(rng));
  }
  return inst;
}

int direct_walk(const PjInstance &inst, int k) {
  int v = inst.v0;
  for (int step = 0; step < k; ++step)
    v = v < inst.a ? inst.f_a[v] : inst.f_b[v - inst.a];
  return v;
}

double eq_closed_form(int q, const std::vector<int> &ks, const oracle::Bits &x) {
  const int half = q / 2;
  long long delta = 0;
  for (int i = 1; i <= half; ++i)
    delta += (static_cast<long long>(x[i - 1]) - x[half + i - 1]) << (i - 1);
  double sum = 0.0;
  for (int k : ks) {
    const double c = std::cos(std::numbers::pi * k * static_cast<double>(delta) / (1 << half));
    sum += c * c;
  }
  return sum / static_cast<double>(ks.size());
}

} // namespace

TEST_CASE("eq") {
  CHECK(eq(4).at(index_of(Bits{1, 0, 1, 0})));
  CHECK_FALSE(eq(4).at(index_of(Bits{1, 1, 0, 1})));
  for (int n : {2, 4, 6, 8})
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << n); ++i)
      CHECK(eq(n).at(i) == oracle::eq(oracle::bits(i, n)));
  CHECK_THROWS_AS(eq(3), ParameterError);
}

TEST_CASE("req") {
  const BoolFn f = req(BlockLayout(2));
  CHECK(f.at(index_of(Bits{0, 1, 0, 1})));
  CHECK_FALSE(f.at(index_of(Bits{0, 1, 1, 1})));
  CHECK(f.at(index_of(Bits{1, 0, 1, 0})));
  for (int q : {2, 4}) {
    const BlockLayout l(q);
    const BoolFn g = req(l);
    for (std::uint64_t i = 0; i < g.domain_size(); ++i)
      CHECK(g.at(i) == oracle::req(oracle::bits(i, l.n()), q, l.p()));
  }
}

TEST_CASE("mod_p") {
  CHECK(mod_p(3, 4).at(index_of(Bits{1, 1, 1, 0})));
  CHECK_FALSE(mod_p(3, 4).at(index_of(Bits{1, 1, 0, 0})));
  for (int p : {2, 3, 5})
    for (int n = 1; n <= 12; ++n) {
      const BoolFn f = mod_p(p, n);
      for (std::uint64_t i = 0; i < f.domain_size(); ++i)
        CHECK(f.at(i) == (oracle::popcount(oracle::bits(i, n)) % p == 0));
    }
  CHECK_THROWS_AS(mod_p(1, 3), ParameterError);
}

TEST_CASE("ws and ws_b") {
  const BoolFn f = ws_b(9, 3);
  CHECK_FALSE(f.at(index_of(Bits{1, 1, 0, 0, 0, 0, 0, 0, 0})));
  CHECK(f.at(index_of(Bits{1, 0, 0, 0, 0, 0, 0, 0, 0})));
  CHECK_FALSE(f.at(0));
  for (std::uint64_t i = 0; i < f.domain_size(); ++i)
    CHECK(f.at(i) == oracle::ws_b(oracle::bits(i, 9), 3));
  for (int n = 1; n <= 10; ++n) {
    const BoolFn w = ws(n);
    for (std::uint64_t i = 0; i < w.domain_size(); ++i)
      CHECK(w.at(i) == oracle::ws_b(oracle::bits(i, n), n));
  }
  CHECK_THROWS_AS(ws_b(6, 3), ParameterError);
  CHECK_THROWS_AS(ws_b(6, 0), ParameterError);
}

TEST_CASE("msw_b") {
  const BoolFn f = msw_b(12, 4);
  Bits x(12, 0);
  x[0] = x[2] = 1;
  x[6] = 1; // x_7 = x_{1 + n/2}
  CHECK_FALSE(f.at(index_of(x)));
  x[6] = 0;
  CHECK(f.at(index_of(x)));
  CHECK_FALSE(f.at(0));
  for (std::uint64_t i = 0; i < f.domain_size(); ++i)
    CHECK(f.at(i) == oracle::msw_b(oracle::bits(i, 12), 4));
  CHECK_THROWS_AS(msw_b(12, 3), ParameterError);
}

TEST_CASE("padding independence") {
  std::mt19937_64 rng(21);
  struct Case {
    BoolFn f;
    std::vector<int> padding;
  };
  const std::vector<Case> cases = {
      {ws_b(12, 3), ws_b_padding(12, 3)},
      {msw_b(12, 4), msw_b_padding(12, 4)},
      {req_b(14, 4), req_b_padding(14, 4)},
  };
  for (const Case &c : cases) {
    REQUIRE_FALSE(c.padding.empty());
    const int n = c.f.arity();
    std::uniform_int_distribution<std::uint64_t> pick(0, c.f.domain_size() - 1);
    std::uniform_int_distribution<std::size_t> which(0, c.padding.size() - 1);
    for (int trial = 0; trial < 2000; ++trial) {
      const std::uint64_t i = pick(rng);
      const std::uint64_t j = i ^ var_bit(n, c.padding[which(rng)]);
      CHECK(c.f.at(i) == c.f.at(j));
    }
  }
}

TEST_CASE("req_b is req over the first b bits") {
  const BoolFn f = req_b(7, 4);
  const BoolFn r = req(BlockLayout(2));
  for (std::uint64_t i = 0; i < f.domain_size(); ++i)
    CHECK(f.at(i) == r.at(i >> 3));
  CHECK(restrict(f, {{5, false}, {6, true}, {7, true}}) == r);
  CHECK_THROWS_AS(req_b(7, 5), ParameterError);
  CHECK_THROWS_AS(req_b(3, 4), ParameterError);
}

TEST_CASE("width facts") {
  CHECK(n_min(req(BlockLayout(2))).value >= 2);
  CHECK(n_min(req(BlockLayout(4))).value >= 4);
  for (int n : {2, 4, 6, 8})
    CHECK(subfunction_count(eq(n), Partition(VarOrder::identity(n), n / 2)) ==
          (std::uint64_t{1} << (n / 2)));
}

TEST_CASE("pj_eval") {
  PjInstance inst;
  inst.a = 2;
  inst.f_a = {2, 3};
  inst.f_b = {1, 0};
  CHECK(pj_eval(inst, 3) == 3);
  CHECK(pj_eval(inst, 0) == 0);
  CHECK(pj_eval(inst, 1) == 2);
  CHECK_FALSE(pj_bool_eval(3, 2, encode_pj(inst)));
  CHECK_FALSE(pj_bool_eval(0, 2, encode_pj(inst)));
  CHECK(pj_bool_eval(1, 2, encode_pj(inst)));

  PjInstance bad = inst;
  bad.f_a = {0, 3};
  CHECK_THROWS(validate(bad));
}

TEST_CASE("pj_bool is the parity of the walked vertex") {
  std::mt19937_64 rng(4);
  for (int a : {2, 4})
    for (int k = 0; k <= 4; ++k)
      for (int trial = 0; trial < 50; ++trial) {
        const PjInstance inst = random_instance(a, rng);
        const int v = direct_walk(inst, k);
        CHECK(pj_eval(inst, k) == v);
        const Bits x = encode_pj(inst);
        CHECK(static_cast<int>(x.size()) == 2 * a * pj_word_bits(a));
        CHECK(pj_bool_eval(k, a, x) == (std::popcount(static_cast<unsigned>(v)) % 2 == 1));
        const PjInstance back = decode_pj(a, x);
        CHECK(back.f_a == inst.f_a);
        CHECK(back.f_b == inst.f_b);
      }
}

TEST_CASE("rpj") {
  const RpjLayout layout(2);
  CHECK(layout.w() == 1);
  CHECK(layout.b() == 4);
  CHECK(layout.n() == 12);
  CHECK_FALSE(rpj_eval(1, layout, rpj_input({1, 0, 1, 0})));
  CHECK_FALSE(rpj_eval(1, layout, rpj_input({0, 0, 0, 0})));
  CHECK_FALSE(rpj_eval(3, layout, rpj_input({0, 0, 0, 0})));
  // Duplicate addresses still evaluate.
  CHECK_NOTHROW(rpj_eval(2, layout, rpj_input({1, 1, 1, 1}, {0, 0, 0, 0})));

  // On allowed inputs rpj is pj on the instance the routed values spell.
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<int> fields = {0, 1, 2, 3};
    std::shuffle(fields.begin(), fields.end(), rng);
    std::vector<std::uint8_t> values(4);
    for (auto &v : values)
      v = rng() & 1;
    // Vertex v owns address v + 1, so its successor is BV + a or BV.
    std::vector<int> val_at(4);
    for (int b = 0; b < 4; ++b)
      val_at[fields[b]] = values[b];
    PjInstance inst;
    inst.a = 2;
    inst.f_a = {2 + val_at[0], 2 + val_at[1]};
    inst.f_b = {val_at[2], val_at[3]};
    for (int k = 1; k <= 3; ++k) {
      const int r = pj_eval(inst, k);
      CHECK(rpj_eval(k, layout, rpj_input(values, fields)) == (val_at[r] == 1));
    }
  }
}

TEST_CASE("pj programs") {
  for (int k : {1, 2}) {
    const LeveledObdd p = pj_2k_obdd(k, 2);
    CHECK(truth_table(p) == pj_bool(k, 2));
    CHECK(p.layers == 2 * k);
    CHECK(width(p) <= 4 * 3);
  }
  const RpjLayout layout(2);
  const LeveledObdd r = rpj_2k_obdd(1, layout);
  CHECK(truth_table(r) == rpj(1, layout));
  CHECK(r.layers == 2);
  CHECK(width(r) <= static_cast<std::size_t>(layout.b()) *
                        width(pj_2k_obdd(1, 2, PjReadout::range_xor)));
  CHECK_THROWS_AS(pj_2k_obdd(1, 3), ParameterError);
}

TEST_CASE("fingerprint programs follow the closed form") {
  for (int q : {2, 4, 6}) {
    const std::vector<int> ks = q == 2 ? std::vector<int>{1} : std::vector<int>{1, 3};
    const QuantumProgram p = fingerprint_eq_qobdd(q, ks);
    CHECK(p.dim == 2 * static_cast<int>(ks.size()));
    const std::vector<double> table = acceptance_table(p);
    for (std::uint64_t i = 0; i < table.size(); ++i) {
      const oracle::Bits x = oracle::bits(i, q);
      CHECK(table[i] == doctest::Approx(eq_closed_form(q, ks, x)).epsilon(1e-9));
      if (oracle::eq(x))
        CHECK(table[i] == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  CHECK(accept_probability(fingerprint_eq_qobdd(2, {1}), Bits{1, 0}) ==
        doctest::Approx(0.0).epsilon(1e-12));

  for (int p : {2, 3, 5, 7}) {
    const std::vector<int> ks = {1, 2};
    const QuantumProgram prog = fingerprint_modp_qobdd(p, 6, ks);
    for (std::uint64_t i = 0; i < 64; ++i) {
      const int m = oracle::popcount(oracle::bits(i, 6));
      double want = 0.0;
      for (int k : ks)
        want += std::pow(std::cos(std::numbers::pi * k * m / p), 2) / 2.0;
      CHECK(accept_probability(prog, bits_of(i, 6)) == doctest::Approx(want));
    }
  }
  CHECK(accept_probability(fingerprint_modp_qobdd(2, 1, {1}), Bits{1}) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(fingerprint_eq_qobdd(3, {1}), ParameterError);
  CHECK_THROWS_AS(fingerprint_eq_qobdd(4, {}), ParameterError);
  CHECK_THROWS_AS(fingerprint_modp_qobdd(1, 3, {1}), ParameterError);
}

TEST_CASE("multiplier search") {
  const MultiplierSearch two = search_good_multipliers(2, 1, 0.0);
  CHECK(two.found);
  CHECK(two.multipliers == std::vector<int>{1});
  CHECK(two.worst_error == doctest::Approx(0.0));

  CHECK(multiplier_worst_error(4, {1}) == doctest::Approx(0.5));
  const MultiplierSearch one = search_good_multipliers(4, 1, 1.0 / 3.0);
  CHECK_FALSE(one.found);
  CHECK(one.worst_error == doctest::Approx(0.5));

  const MultiplierSearch three = search_good_multipliers(4, 3, 1.0 / 3.0);
  CHECK(three.found);
  CHECK(three.worst_error <= 1.0 / 3.0 + 1e-12);
  CHECK(multiplier_worst_error(4, {1, 1, 2}) == doctest::Approx(1.0 / 3.0));

  // Same seed, same answer.
  SearchBudget budget;
  budget.max_candidates = 500;
  budget.seed = 7;
  const MultiplierSearch a = search_good_multipliers(31, 4, 0.01, budget);
  const MultiplierSearch b = search_good_multipliers(31, 4, 0.01, budget);
  CHECK(a.multipliers == b.multipliers);
  CHECK(a.candidates_tried <= 500);
}

TEST_CASE("fixture multipliers reproduce their recorded errors") {
  std::ifstream in(std::string(OBDDLAB_FIXTURES_DIR) + "/multipliers.json");
  REQUIRE(in.good());
  const nlohmann::json j = nlohmann::json::parse(in);
  for (const char *family : {"eq", "modp"})
    for (const auto &entry : j.at(family)) {
      const int modulus = entry.at("modulus").get<int>();
      const auto ks = entry.at("multipliers").get<std::vector<int>>();
      const double worst = multiplier_worst_error(modulus, ks);
      CHECK(worst == doctest::Approx(entry.at("worst_error").get<double>()));
      CHECK(entry.at("target_met").get<bool>() ==
            (worst <= entry.at("target").get<double>() + 1e-12));
    }
}
