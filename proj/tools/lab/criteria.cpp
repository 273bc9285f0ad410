#include "criteria.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "obddlab/errors.hpp"
#include "obddlab/fingerprint.hpp"
#include "obddlab/pointer_jumping.hpp"
#include "obddlab/subfunctions.hpp"
#include "obddlab/zoo.hpp"
#include "registry.hpp"

namespace obddlab::lab {

namespace {

constexpr double kTol = 1e-9;
constexpr std::uint64_t kSeed = 1;

std::string bits_text(std::span<const std::uint8_t> x) {
  std::string s;
  for (auto b : x)
    s.push_back(b ? '1' : '0');
  return s;
}

int ceil_log2(int v) {
  int r = 0;
  while ((1 << r) < v)
    ++r;
  return r;
}

Report a1() {
  Report r;
  r.claim = "N^id(EQ_n) at the middle cut equals 2^(n/2)";
  for (int n : {2, 4, 6, 8}) {
    const std::uint64_t count =
        subfunction_count(eq(n), Partition(VarOrder::identity(n), n / 2));
    const std::uint64_t want = std::uint64_t{1} << (n / 2);
    r.add("EQ_" + std::to_string(n), count == want, count,
          {{"expr", "2^(n/2)"}, {"n", n}, {"value", want}});
  }
  return r;
}

Report a2() {
  Report r;
  r.claim = "n_min(REQ) >= 2^(q/2)";
  {
    const BoolFn f = req(BlockLayout(2));
    const MinWidth w = n_min_enumerate(f);
    r.add("q=2 (all orders)", w.value >= 2,
          {{"n_min", w.value}, {"order", w.order.to_string()}},
          {{"expr", "2^(q/2)"}, {"q", 2}, {"value", 2}});
  }
  {
    const BoolFn f = req(BlockLayout(4));
    const MinWidth w = n_min(f);
    r.add("q=4 (subset DP)", w.value >= 4,
          {{"n_min", w.value}, {"order", w.order.to_string()}},
          {{"expr", "2^(q/2)"}, {"q", 4}, {"value", 4}});
  }
  return r;
}

Report a3() {
  Report r;
  r.claim = "the xor-lifted EQ fingerprint has dimension q * dim and computes "
            "EQ'' with one-sided bounded error";
  for (int q : {2, 4}) {
    const MultiplierFixture fx = eq_multipliers(q);
    const QuantumProgram base = fingerprint_eq_qobdd(q, fx.multipliers);
    const BlockLayout layout(q);
    const QuantumProgram lifted = xor_reorder_qobdd(base, layout);
    const std::string tag = "q=" + std::to_string(q);
    r.add(tag + " dimension", lifted.dim == q * base.dim, lifted.dim,
          {{"expr", "q * dim"}, {"dim", base.dim}, {"value", q * base.dim}});
    const PartialBoolFn target =
        reorder_function(eq(q), layout, AddressMode::prefix_xor);
    const double eps = 0.5 - fx.worst_error;
    const Simulator sim(lifted);
    double min_one = 1.0, max_zero = 0.0;
    std::uint64_t allowed = 0;
    for (std::uint64_t i = 0; i < target.domain_size(); ++i) {
      const auto want = target.at(i);
      if (!want)
        continue;
      ++allowed;
      const double pr = sim.accept_probability(bits_of(i, layout.n()));
      if (*want)
        min_one = std::min(min_one, pr);
      else
        max_zero = std::max(max_zero, pr);
    }
    r.add(tag + " acceptance on 1-inputs", std::abs(min_one - 1.0) <= kTol,
          {{"min", min_one}, {"allowed_inputs", allowed}},
          {{"value", 1.0}, {"tolerance", kTol}});
    r.add(tag + " acceptance on 0-inputs", max_zero <= 0.5 - eps + kTol,
          {{"max", max_zero}, {"multipliers", fx.multipliers}},
          {{"expr", "1/2 - eps"}, {"eps", eps}, {"value", 0.5 - eps}});
  }
  return r;
}

Report a4() {
  Report r;
  r.claim = "totalize(EQ'', lifted fingerprint) equals REQ bitwise";
  for (int q : {2, 4}) {
    const MultiplierFixture fx = eq_multipliers(q);
    const BlockLayout layout(q);
    const QuantumProgram lifted =
        xor_reorder_qobdd(fingerprint_eq_qobdd(q, fx.multipliers), layout);
    const BoolFn total =
        totalize(reorder_function(eq(q), layout, AddressMode::prefix_xor), lifted);
    const BoolFn oracle = req(layout);
    std::uint64_t diff = 0;
    std::optional<std::uint64_t> first;
    for (std::uint64_t i = 0; i < oracle.domain_size(); ++i)
      if (total.at(i) != oracle.at(i)) {
        ++diff;
        if (!first)
          first = i;
      }
    nlohmann::json measured = {{"disagreements", diff},
                               {"inputs", oracle.domain_size()}};
    if (first)
      measured["witness"] = bits_text(bits_of(*first, layout.n()));
    r.add("q=" + std::to_string(q), diff == 0, measured, "0 disagreements");
  }
  return r;
}

Report a5() {
  Report r;
  r.claim = "the MOD_p fingerprint accepts weight 0 mod p with probability 1 "
            "and other weights with probability <= 1/3, using t <= 4 ceil(log2 p)";
  for (int p : {2, 3, 5, 7, 11, 13}) {
    const MultiplierFixture fx = modp_multipliers(p);
    const int t = static_cast<int>(fx.multipliers.size());
    const int t_max = 4 * std::max(1, ceil_log2(p));
    const std::string tag = "p=" + std::to_string(p);
    r.add(tag + " size", t <= t_max, {{"t", t}, {"width", 2 * t}},
          {{"expr", "4 ceil(log2 p)"}, {"value", t_max}});
    const QuantumProgram prog = fingerprint_modp_qobdd(p, p, fx.multipliers);
    const Simulator sim(prog);
    double min_zero_residue = 1.0, max_other = 0.0;
    for (int m = 0; m <= p; ++m) {
      Bits x(static_cast<std::size_t>(p), 0);
      std::fill(x.begin(), x.begin() + m, 1);
      const double pr = sim.accept_probability(x);
      if (m % p == 0)
        min_zero_residue = std::min(min_zero_residue, pr);
      else
        max_other = std::max(max_other, pr);
    }
    r.add(tag + " weight 0 mod p", std::abs(min_zero_residue - 1.0) <= kTol,
          min_zero_residue, {{"value", 1.0}, {"tolerance", kTol}});
    r.add(tag + " other weights", max_other <= 1.0 / 3.0 + kTol,
          {{"max", max_other}, {"multipliers", fx.multipliers}},
          {{"value", 1.0 / 3.0}, {"tolerance", kTol}});
  }
  return r;
}

template <class Program>
void lift_checks(Report &r, const std::string &id, const Program &p, int q,
                 AddressMode mode, double eps) {
  const BlockLayout layout(q);
  Program lifted;
  if constexpr (std::is_same_v<Program, LeveledObdd>)
    lifted = reorder_obdd(p, layout, mode);
  else if constexpr (std::is_same_v<Program, Nobdd>)
    lifted = reorder_nobdd(p, layout, mode);
  else
    lifted = reorder_pobdd(p, layout, mode);
  const std::string tag = id + " " + to_string(mode);
  const std::size_t d = width(p);
  r.add(tag + " width", width(lifted) <= q * d, width(lifted),
        {{"expr", "q * d"}, {"q", q}, {"d", d}, {"value", q * d}});

  // The oracle: P's own acceptance on the routed values, and f' from P's
  // truth table (or its rounding, for the probabilistic program).
  const AnyProgram any_p = p, any_lifted = lifted;
  const BoolFn f = BoolFn::from_bits(
      q, [&](std::span<const std::uint8_t> x) { return program_accept(any_p, x) > 0.5; });
  const PartialBoolFn target = reorder_function(f, layout, mode);
  std::uint64_t checked = 0, bad = 0;
  std::optional<std::string> witness;
  auto visit = [&](std::span<const std::uint8_t> x) {
    const auto want = evaluate(target, x);
    if (!want)
      return;
    ++checked;
    const double got = program_accept(any_lifted, x);
    const double base = program_accept(any_p, route_values(layout, x, mode));
    const bool value_ok = *want ? got >= 0.5 + eps - kTol : got <= 0.5 - eps + kTol;
    if (!value_ok || std::abs(got - base) > kTol) {
      ++bad;
      if (!witness)
        witness = bits_text(x);
    }
  };
  Enumeration all;
  for_each_input(layout.n(), all, &layout, mode, visit);
  nlohmann::json measured = {{"allowed_inputs", checked}, {"disagreements", bad}};
  if (witness)
    measured["witness"] = *witness;
  r.add(tag + " exhaustive", bad == 0 && checked > 0, measured, "0 disagreements");
  if (q >= 4) {
    Enumeration sampled{false, 10000, kSeed};
    checked = bad = 0;
    witness.reset();
    for_each_input(layout.n(), sampled, &layout, mode, visit);
    nlohmann::json m2 = {{"samples", checked}, {"seed", kSeed}, {"disagreements", bad}};
    if (witness)
      m2["witness"] = *witness;
    r.add(tag + " sampled", bad == 0 && checked >= 10000, m2,
          ">= 10000 allowed samples, 0 disagreements");
  }
}

Report a6() {
  Report r;
  r.claim = "lifted OBDD, NOBDD and POBDD programs have width <= q * d and "
            "compute the reordered function";
  for (int q : {2, 4}) {
    for (AddressMode mode : {AddressMode::direct, AddressMode::prefix_xor}) {
      for (const std::string id : {"counter:m=2,n=", "counter:m=3,n=", "or-nobdd:n=",
                                   "or-pobdd:n="}) {
        const NamedProgram np = make_program(id + std::to_string(q));
        std::visit(
            [&](const auto &p) {
              using T = std::decay_t<decltype(p)>;
              if constexpr (!std::is_same_v<T, QuantumProgram>)
                lift_checks(r, np.id, p, q, mode, np.program.index() == 2 ? np.epsilon : 0.5);
            },
            np.program);
      }
    }
  }
  return r;
}

Report a7() {
  Report r;
  const int a = 2;
  r.claim = "the 2k-layer pointer-jumping OBDD is commutative, computes PJ, and "
            "its lift computes RPJ within width (2a)(a+1)b";
  for (int k : {1, 2}) {
    const std::string tag = "k=" + std::to_string(k);
    const LeveledObdd p = pj_2k_obdd(k, a);
    const BoolFn want = pj_bool(k, a);
    r.add(tag + " equals pj_bool", truth_table(p) == want,
          {{"inputs", want.domain_size()}}, "all inputs equal");
    r.add(tag + " layers", p.layers == 2 * k, p.layers, 2 * k);
    r.add(tag + " width", width(p) <= std::size_t(2 * a * (a + 1)), width(p),
          {{"expr", "(2a)(a+1)"}, {"value", 2 * a * (a + 1)}});
    CommutativityOptions all;
    all.orders.all = true;
    r.add(tag + " commutative (all orders)", is_commutative(p, all),
          {{"orders", candidate_orders(p.n, all.orders).size()}}, "every order");
    CommutativityOptions sampled;
    sampled.orders.exhaustive_up_to = 0;
    sampled.orders.trials = 1000;
    sampled.orders.seed = kSeed;
    r.add(tag + " commutative (sampled orders)", is_commutative(p, sampled),
          {{"orders", sampled.orders.trials}, {"seed", kSeed}}, ">= 1000 orders");
  }
  const RpjLayout layout(a);
  const LeveledObdd lifted = rpj_2k_obdd(1, layout);
  const BoolFn want = rpj(1, layout);
  r.add("rpj k=1 equals rpj", truth_table(lifted) == want,
        {{"inputs", want.domain_size()}}, "all inputs equal");
  r.add("rpj k=1 layers", lifted.layers == 2, lifted.layers, 2);
  const std::size_t bound = std::size_t(2 * a * (a + 1) * layout.b());
  r.add("rpj k=1 width", width(lifted) <= bound, width(lifted),
        {{"expr", "(2a)(a+1)b"}, {"b", layout.b()}, {"value", bound}});
  return r;
}

std::vector<std::pair<std::string, QuantumProgram>> quantum_programs() {
  std::vector<std::pair<std::string, QuantumProgram>> out;
  for (const std::string id :
       {"fp-eq:q=2", "fp-eq:q=4", "fp-eq:q=8", "xor-fp-eq:q=2", "xor-fp-eq:q=4",
        "fp-modp:p=2,n=4", "fp-modp:p=3,n=6", "fp-modp:p=5,n=6", "fp-modp:p=7,n=8",
        "fp-modp:p=11,n=12", "fp-modp:p=13,n=14", "nc-qobdd"})
    out.emplace_back(id, std::get<QuantumProgram>(make_program(id).program));
  return out;
}

Report a8() {
  Report r;
  r.claim = "unitarity, norm conservation, padding independence, DP = "
            "enumeration, deterministic reports";
  double worst_unitary = 0.0, worst_drift = 0.0;
  std::mt19937_64 rng(kSeed);
  for (const auto &[id, p] : quantum_programs()) {
    worst_unitary = std::max(worst_unitary, check_unitary(p).max_deviation);
    const Simulator sim(p);
    Enumeration e;
    if (p.n > 12)
      e = Enumeration{false, 256, kSeed};
    for_each_input(p.n, e, nullptr, AddressMode::direct,
                   [&](std::span<const std::uint8_t> x) {
                     worst_drift = std::max(worst_drift, sim.max_norm_drift(x));
                   });
  }
  r.add("unitarity", worst_unitary <= kTol, worst_unitary, kTol);
  r.add("norm conservation per step", worst_drift <= kTol, worst_drift, kTol);

  struct Padded {
    std::string id;
    BoolFn f;
    std::vector<int> padding;
  };
  const std::vector<Padded> padded = {
      {"reqb:n=12,b=4", req_b(12, 4), req_b_padding(12, 4)},
      {"wsb:n=12,b=3", ws_b(12, 3), ws_b_padding(12, 3)},
      {"mswb:n=12,b=4", msw_b(12, 4), msw_b_padding(12, 4)}};
  for (const auto &[id, f, padding] : padded) {
    std::uniform_int_distribution<std::uint64_t> input(0, f.domain_size() - 1);
    std::uniform_int_distribution<std::size_t> pick(0, padding.size() - 1);
    int changed = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      const std::uint64_t x = input(rng);
      const int var = padding[pick(rng)];
      if (f.at(x) != f.at(x ^ var_bit(f.arity(), var)))
        ++changed;
    }
    r.add("padding independence " + id, changed == 0 && !padding.empty(),
          {{"flips", 1000}, {"changed", changed}, {"padding_bits", padding.size()}},
          "0 changed");
  }

  int mismatches = 0;
  std::uniform_int_distribution<int> arity(1, 6);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = arity(rng);
    std::bernoulli_distribution coin(0.5);
    const BoolFn f = BoolFn::from_index(n, [&](std::uint64_t) { return coin(rng); });
    if (n_min(f).value != n_min_enumerate(f).value)
      ++mismatches;
  }
  r.add("n_min DP equals enumeration", mismatches == 0,
        {{"functions", 50}, {"mismatches", mismatches}}, "0 mismatches");

  std::vector<ExperimentSpec> specs(3);
  specs[0].kind = "error-margin";
  specs[0].function = "modp:p=3,n=6";
  specs[0].program = "fp-modp:p=3,n=6";
  specs[1].kind = "reorder-roundtrip";
  specs[1].program = "counter:m=3,n=4";
  specs[1].layout = 4;
  specs[1].inputs = Enumeration{false, 2000, 7};
  specs[2].kind = "width-exact";
  specs[2].function = "req:q=2";
  std::vector<Report> first, second;
  for (const auto &s : specs)
    first.push_back(run(s));
  for (const auto &s : specs)
    second.push_back(run(s));
  const bool same = emit(first, "json") == emit(second, "json") &&
                    emit(first, "csv") == emit(second, "csv");
  r.add("reports are byte-identical across runs", same, same, true);
  return r;
}

Report a9() {
  Report r;
  r.claim = "non-commutative programs are rejected by both reorder transforms; "
            "the EQ fingerprint does not compute not-EQ";
  for (const std::string id : {"andnot:n=2", "nc-qobdd"}) {
    ExperimentSpec s;
    s.kind = "hierarchy-probe";
    s.program = id;
    for (const Check &c : run(s).checks)
      r.checks.push_back({id + " " + c.name, c.pass, c.measured, c.bound});
  }
  for (int q : {2, 4}) {
    const MultiplierFixture fx = eq_multipliers(q);
    const QuantumProgram p = fingerprint_eq_qobdd(q, fx.multipliers);
    const BoundedErrorVerdict v =
        computes_with_bounded_error(p, ~eq(q), 0.5 - fx.worst_error);
    r.add("fp-eq q=" + std::to_string(q) + " fails against not-EQ", !v.pass,
          {{"pass", v.pass},
           {"min_accept_on_ones", v.min_accept_on_ones},
           {"max_accept_on_zeros", v.max_accept_on_zeros}},
          "verdict fails");
  }
  return r;
}

} // namespace

const std::vector<Criterion> &criteria() {
  static const std::vector<Criterion> all = {
      {"A1", "N^id(EQ_n) at cut n/2 equals 2^(n/2) for n in {2,4,6,8}", a1},
      {"A2", "n_min(REQ) >= 2^(q/2) for q in {2,4}", a2},
      {"A3", "xor-lifted EQ fingerprint: dimension q*dim, exact on allowed inputs", a3},
      {"A4", "totalize(EQ'', lifted fingerprint) equals REQ for q in {2,4}", a4},
      {"A5", "MOD_p fingerprint error <= 1/3 with t <= 4 ceil(log2 p)", a5},
      {"A6", "classical lifts: width <= q*d and agreement with f'", a6},
      {"A7", "pointer jumping 2k-OBDD and its lift", a7},
      {"A8", "property suites", a8},
      {"A9", "negative controls", a9},
  };
  return all;
}

Report run_criterion(const std::string &id, bool timing) {
  for (const Criterion &c : criteria())
    if (c.id == id) {
      const auto start = std::chrono::steady_clock::now();
      Report r = c.run();
      r.kind = c.id;
      r.spec = {{"criterion", c.id}, {"title", c.title}};
      if (timing)
        r.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
      return r;
    }
  throw ParameterError("unknown criterion '" + id + "'");
}

std::vector<std::string> suite_members(const std::string &suite) {
  if (suite.empty())
    throw ParameterError("empty suite id");
  if (suite == "paper-core") {
    std::vector<std::string> ids;
    for (const Criterion &c : criteria())
      ids.push_back(c.id);
    return ids;
  }
  if (suite == "quick")
    return {"A1", "A3", "A5", "A9"};
  for (const Criterion &c : criteria())
    if (c.id == suite)
      return {c.id};
  throw ParameterError("unknown suite '" + suite + "' (paper-core, quick, A1..A9)");
}

std::vector<Report> run_suite(const std::string &suite, bool timing) {
  std::vector<Report> out;
  for (const std::string &id : suite_members(suite))
    out.push_back(run_criterion(id, timing));
  return out;
}

} // namespace obddlab::lab
