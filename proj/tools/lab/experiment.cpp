#include "experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include "obddlab/errors.hpp"
#include "obddlab/subfunctions.hpp"
#include "registry.hpp"

namespace obddlab::lab {

bool Report::pass() const {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(),
                     [](const Check &c) { return c.pass; });
}

Check &Report::add(std::string name, bool ok, nlohmann::json measured,
                   nlohmann::json bound) {
  checks.push_back({std::move(name), ok, std::move(measured), std::move(bound)});
  return checks.back();
}

nlohmann::json to_json(const Report &r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const Check &c : r.checks)
    checks.push_back({{"name", c.name},
                      {"pass", c.pass},
                      {"measured", c.measured},
                      {"bound", c.bound}});
  nlohmann::json j = {{"kind", r.kind},
                      {"spec", r.spec},
                      {"checks", checks},
                      {"claim", r.claim},
                      {"pass", r.pass()}};
  if (r.seconds)
    j["seconds"] = *r.seconds;
  return j;
}

Report report_from_json(const nlohmann::json &j) {
  Report r;
  try {
    r.kind = j.at("kind").get<std::string>();
    r.spec = j.at("spec");
    r.claim = j.at("claim").get<std::string>();
    for (const auto &c : j.at("checks"))
      r.checks.push_back({c.at("name").get<std::string>(), c.at("pass").get<bool>(),
                          c.at("measured"), c.at("bound")});
    if (j.contains("seconds"))
      r.seconds = j.at("seconds").get<double>();
  } catch (const nlohmann::json::exception &e) {
    throw ParameterError("malformed report: " + std::string(e.what()));
  }
  return r;
}

namespace {

std::string csv_field(const std::string &text) {
  if (text.find_first_of(",\"\n") == std::string::npos)
    return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"')
      out.push_back('"');
    out.push_back(c);
  }
  return out + "\"";
}

std::string compact(const nlohmann::json &j) {
  return j.is_string() ? j.get<std::string>() : j.dump();
}

} // namespace

std::string emit(const std::vector<Report> &reports, const std::string &format) {
  if (format == "json") {
    if (reports.size() == 1)
      return to_json(reports.front()).dump(2) + "\n";
    nlohmann::json all = nlohmann::json::array();
    bool ok = true;
    for (const Report &r : reports) {
      all.push_back(to_json(r));
      ok = ok && r.pass();
    }
    return nlohmann::json{{"pass", ok}, {"reports", all}}.dump(2) + "\n";
  }
  if (format == "csv") {
    std::ostringstream out;
    out << "kind,check,pass,measured,bound";
    const bool timed = std::any_of(reports.begin(), reports.end(),
                                   [](const Report &r) { return r.seconds.has_value(); });
    if (timed)
      out << ",seconds";
    out << "\n";
    for (const Report &r : reports)
      for (const Check &c : r.checks) {
        out << csv_field(r.kind) << ',' << csv_field(c.name) << ','
            << (c.pass ? "pass" : "fail") << ',' << csv_field(compact(c.measured))
            << ',' << csv_field(compact(c.bound));
        if (timed)
          out << ',' << (r.seconds ? std::to_string(*r.seconds) : "");
        out << "\n";
      }
    return out.str();
  }
  throw ParameterError("unknown report format '" + format + "' (json or csv)");
}

std::string emit(const Report &report, const std::string &format) {
  return emit(std::vector<Report>{report}, format);
}

nlohmann::json to_json(const ExperimentSpec &spec) {
  nlohmann::json j = {{"kind", spec.kind}};
  if (!spec.function.empty())
    j["function"] = spec.function;
  if (!spec.program.empty())
    j["program"] = spec.program;
  if (!spec.order.empty())
    j["order"] = spec.order;
  if (spec.cut != 0)
    j["cut"] = spec.cut;
  if (spec.layout) {
    j["layout"] = *spec.layout;
    j["mode"] = spec.mode == AddressMode::direct ? "direct" : "xor";
  }
  if (spec.epsilon)
    j["epsilon"] = *spec.epsilon;
  if (spec.expected)
    j["expected"] = *spec.expected;
  j["tolerance"] = spec.tolerance;
  if (spec.inputs.exhaustive) {
    j["inputs"] = "exhaustive";
  } else {
    j["inputs"] = "sampled";
    j["samples"] = spec.inputs.samples;
    if (spec.inputs.seed)
      j["seed"] = *spec.inputs.seed;
  }
  return j;
}

ExperimentSpec spec_from_json(const nlohmann::json &j) {
  static const std::vector<std::string> keys = {
      "kind",    "function", "program",   "order",  "cut",     "layout", "mode",
      "epsilon", "expected", "tolerance", "inputs", "samples", "seed"};
  if (!j.is_object())
    throw ParameterError("experiment spec must be a JSON object");
  for (const auto &item : j.items())
    if (std::find(keys.begin(), keys.end(), item.key()) == keys.end())
      throw ParameterError("unknown spec key '" + item.key() + "'");
  ExperimentSpec s;
  try {
    s.kind = j.at("kind").get<std::string>();
    s.function = j.value("function", "");
    s.program = j.value("program", "");
    s.order = j.value("order", "");
    s.cut = j.value("cut", 0);
    if (j.contains("layout"))
      s.layout = j.at("layout").get<int>();
    if (j.contains("mode"))
      s.mode = parse_address_mode(j.at("mode").get<std::string>());
    if (j.contains("epsilon"))
      s.epsilon = j.at("epsilon").get<double>();
    if (j.contains("expected"))
      s.expected = j.at("expected").get<std::uint64_t>();
    s.tolerance = j.value("tolerance", 1e-9);
    const std::string inputs = j.value("inputs", "exhaustive");
    if (inputs == "sampled") {
      s.inputs.exhaustive = false;
      s.inputs.samples = j.at("samples").get<std::size_t>();
      if (j.contains("seed"))
        s.inputs.seed = j.at("seed").get<std::uint64_t>();
    } else if (inputs != "exhaustive") {
      throw ParameterError("inputs is exhaustive or sampled");
    }
  } catch (const nlohmann::json::exception &e) {
    throw ParameterError("malformed experiment spec: " + std::string(e.what()));
  }
  validate(s);
  return s;
}

void validate(const ExperimentSpec &s) {
  if (std::find(kExperimentKinds.begin(), kExperimentKinds.end(), s.kind) ==
      kExperimentKinds.end())
    throw ParameterError("unknown experiment kind '" + s.kind + "'");
  const bool needs_function = s.kind == "width-exact" || s.kind == "nsub" ||
                              s.kind == "equivalence" || s.kind == "error-margin";
  const bool needs_program = s.kind == "equivalence" || s.kind == "error-margin" ||
                             s.kind == "reorder-roundtrip" ||
                             s.kind == "hierarchy-probe";
  if (needs_function && s.function.empty())
    throw ParameterError(s.kind + " needs a function id");
  if (needs_program && s.program.empty())
    throw ParameterError(s.kind + " needs a program id");
  if (!s.inputs.exhaustive && !s.inputs.seed)
    throw ParameterError("sampled inputs need a seed");
  if (!s.inputs.exhaustive && s.inputs.samples == 0)
    throw ParameterError("sampled inputs need a positive sample count");
}

Bits random_allowed_input(const BlockLayout &layout, AddressMode mode,
                          std::mt19937_64 &rng) {
  std::vector<int> fields(static_cast<std::size_t>(layout.q()));
  std::iota(fields.begin(), fields.end(), 0);
  std::shuffle(fields.begin(), fields.end(), rng);
  std::bernoulli_distribution coin(0.5);
  Bits x(static_cast<std::size_t>(layout.n()), 0);
  int carry = 0;
  for (int block = 1; block <= layout.q(); ++block) {
    const int target = fields[block - 1];
    const int field = mode == AddressMode::direct ? target : (carry ^ target);
    carry = target;
    for (int j = 1; j <= layout.p(); ++j)
      x[layout.address_var(block, j) - 1] =
          static_cast<std::uint8_t>((field >> (layout.p() - j)) & 1);
    x[layout.value_var(block) - 1] = coin(rng) ? 1 : 0;
  }
  return x;
}

namespace {

bool is_bounded_error(const AnyProgram &p) { return p.index() >= 2; }

struct Agreement {
  std::uint64_t inputs = 0;
  std::uint64_t skipped = 0;
  std::uint64_t disagreements = 0;
  double min_one = 1.0;
  double max_zero = 0.0;
  std::optional<Bits> witness;
};

// Compares acceptance of p with f on defined inputs.
Agreement compare(const AnyProgram &p, const PartialBoolFn &f,
                  const Enumeration &e, const BlockLayout *layout,
                  AddressMode mode, double eps, double tol) {
  if (program_arity(p) != f.arity())
    throw ParameterError("program has " + std::to_string(program_arity(p)) +
                         " variables, function has " + std::to_string(f.arity()));
  Agreement a;
  std::optional<Simulator> sim;
  if (const auto *q = std::get_if<QuantumProgram>(&p))
    sim.emplace(*q);
  for_each_input(f.arity(), e, layout, mode, [&](std::span<const std::uint8_t> x) {
    const auto want = evaluate(f, x);
    if (!want) {
      ++a.skipped;
      return;
    }
    ++a.inputs;
    const double pr = sim ? sim->accept_probability(x) : program_accept(p, x);
    bool ok;
    if (*want) {
      a.min_one = std::min(a.min_one, pr);
      ok = is_bounded_error(p) ? pr >= 0.5 + eps - tol : pr > 0.5;
    } else {
      a.max_zero = std::max(a.max_zero, pr);
      ok = is_bounded_error(p) ? pr <= 0.5 - eps + tol : pr < 0.5;
    }
    if (!ok) {
      ++a.disagreements;
      if (!a.witness)
        a.witness = Bits(x.begin(), x.end());
    }
  });
  return a;
}

std::string bits_text(const Bits &x) {
  std::string s;
  for (auto b : x)
    s.push_back(b ? '1' : '0');
  return s;
}

nlohmann::json enumeration_json(const Enumeration &e, std::uint64_t inputs) {
  nlohmann::json j = {{"inputs", inputs}, {"exhaustive", e.exhaustive}};
  if (!e.exhaustive)
    j["seed"] = *e.seed;
  return j;
}

void add_agreement(Report &r, const Agreement &a, const AnyProgram &p,
                   double eps, const Enumeration &e) {
  nlohmann::json measured = enumeration_json(e, a.inputs);
  measured["disagreements"] = a.disagreements;
  if (a.witness)
    measured["witness"] = bits_text(*a.witness);
  r.add("agrees on defined inputs", a.disagreements == 0 && a.inputs > 0,
        measured, "0 disagreements");
  if (is_bounded_error(p)) {
    r.add("min acceptance on 1-inputs", a.min_one >= 0.5 + eps - 1e-9, a.min_one,
          nlohmann::json{{"expr", "1/2 + eps"}, {"eps", eps}, {"value", 0.5 + eps}});
    r.add("max acceptance on 0-inputs", a.max_zero <= 0.5 - eps + 1e-9, a.max_zero,
          nlohmann::json{{"expr", "1/2 - eps"}, {"eps", eps}, {"value", 0.5 - eps}});
  }
}

Report run_width_exact(const ExperimentSpec &s) {
  Report r;
  const NamedFunction f = make_function(s.function);
  const MinWidth w = n_min(f.fn);
  r.claim = f.claim.empty() ? "N(f) = min over orders of max over cuts of N^theta(f)"
                            : f.claim;
  if (f.width_bound)
    r.add("n_min >= bound", w.value >= *f.width_bound,
          {{"n_min", w.value}, {"order", w.order.to_string()}},
          {{"value", *f.width_bound}});
  if (s.expected)
    r.add("n_min equals expected", w.value == *s.expected,
          {{"n_min", w.value}, {"order", w.order.to_string()}}, *s.expected);
  if (!f.width_bound && !s.expected)
    r.add("n_min computed", true,
          {{"n_min", w.value}, {"order", w.order.to_string()}}, nullptr);
  return r;
}

Report run_nsub(const ExperimentSpec &s) {
  Report r;
  const NamedFunction f = make_function(s.function);
  const VarOrder order = s.order.empty() ? VarOrder::identity(f.fn.arity())
                                         : VarOrder::parse(s.order);
  if (order.size() != f.fn.arity())
    throw ParameterError("order has the wrong length");
  std::uint64_t count;
  if (s.cut == 0) {
    count = n_pi(f.fn, order);
    r.claim = "N^pi(f) = max over cuts of the number of distinct subfunctions";
  } else {
    count = subfunction_count(f.fn, Partition(order, s.cut));
    r.claim = "N^theta(f) = number of distinct subfunctions at the cut";
  }
  const nlohmann::json measured = {
      {"count", count}, {"order", order.to_string()}, {"cut", s.cut}};
  if (s.expected)
    r.add("count equals expected", count == *s.expected, measured, *s.expected);
  else
    r.add("count computed", true, measured, nullptr);
  return r;
}

Report run_equivalence(const ExperimentSpec &s) {
  Report r;
  const NamedFunction f = make_function(s.function);
  const NamedProgram p = make_program(s.program);
  const double eps = s.epsilon.value_or(p.epsilon);
  std::optional<BlockLayout> layout;
  if (s.layout)
    layout.emplace(*s.layout);
  const Agreement a = compare(p.program, f.fn, s.inputs,
                              layout ? &*layout : nullptr, s.mode, eps, s.tolerance);
  r.claim = std::string(program_kind(p.program)) + " program computes " + s.function;
  add_agreement(r, a, p.program, eps, s.inputs);
  return r;
}

Report run_error_margin(const ExperimentSpec &s) {
  Report r;
  const NamedFunction f = make_function(s.function);
  const NamedProgram p = make_program(s.program);
  const double eps = s.epsilon.value_or(p.epsilon);
  std::optional<BlockLayout> layout;
  if (s.layout)
    layout.emplace(*s.layout);
  const Agreement a = compare(p.program, f.fn, s.inputs,
                              layout ? &*layout : nullptr, s.mode, eps, s.tolerance);
  r.claim = "acceptance >= 1/2 + eps on 1-inputs and <= 1/2 - eps on 0-inputs";
  r.add("min acceptance on 1-inputs", a.min_one >= 0.5 + eps - s.tolerance,
        a.min_one, {{"expr", "1/2 + eps"}, {"eps", eps}, {"value", 0.5 + eps}});
  r.add("max acceptance on 0-inputs", a.max_zero <= 0.5 - eps + s.tolerance,
        a.max_zero, {{"expr", "1/2 - eps"}, {"eps", eps}, {"value", 0.5 - eps}});
  r.add("inputs checked", a.inputs > 0, enumeration_json(s.inputs, a.inputs),
        "> 0");
  return r;
}

AnyProgram lift(const AnyProgram &p, const BlockLayout &layout, AddressMode mode) {
  return std::visit(
      [&](const auto &prog) -> AnyProgram {
        using T = std::decay_t<decltype(prog)>;
        if constexpr (std::is_same_v<T, QuantumProgram>) {
          if (mode != AddressMode::prefix_xor)
            throw ParameterError("quantum programs lift with xor addressing only");
          return xor_reorder_qobdd(prog, layout);
        } else if constexpr (std::is_same_v<T, LeveledObdd>) {
          return reorder_obdd(prog, layout, mode);
        } else if constexpr (std::is_same_v<T, Nobdd>) {
          return reorder_nobdd(prog, layout, mode);
        } else {
          return reorder_pobdd(prog, layout, mode);
        }
      },
      p);
}

std::size_t base_width(const AnyProgram &p) {
  return std::visit(
      [](const auto &prog) -> std::size_t {
        using T = std::decay_t<decltype(prog)>;
        if constexpr (std::is_same_v<T, QuantumProgram>)
          return static_cast<std::size_t>(prog.dim);
        else
          return width(normalized(prog));
      },
      p);
}

Report run_reorder_roundtrip(const ExperimentSpec &s) {
  Report r;
  const NamedProgram p = make_program(s.program);
  const int q = s.layout.value_or(program_arity(p.program));
  if (q != program_arity(p.program))
    throw ParameterError("layout q must equal the program's arity");
  const BlockLayout layout(q);
  const AnyProgram lifted = lift(p.program, layout, s.mode);
  r.claim = "the lifted program has width <= q * d and computes the reordered "
            "function on allowed inputs";
  const std::size_t d = base_width(p.program);
  const std::size_t w = program_width(lifted);
  r.add(lifted.index() == 3 ? "dimension == q * d" : "width <= q * d",
        lifted.index() == 3 ? w == q * d : w <= q * d, w,
        {{"expr", "q * d"}, {"q", q}, {"d", d}, {"value", q * d}});

  std::optional<Simulator> base_sim, lifted_sim;
  if (const auto *x = std::get_if<QuantumProgram>(&p.program))
    base_sim.emplace(*x);
  if (const auto *x = std::get_if<QuantumProgram>(&lifted))
    lifted_sim.emplace(*x);
  std::uint64_t checked = 0, disagreements = 0;
  double max_gap = 0.0;
  std::optional<Bits> witness;
  for_each_input(layout.n(), s.inputs, &layout, s.mode,
                 [&](std::span<const std::uint8_t> x) {
                   if (!is_allowed(layout, x, s.mode))
                     return;
                   ++checked;
                   const Bits routed = route_values(layout, x, s.mode);
                   const double want = base_sim ? base_sim->accept_probability(routed)
                                                : program_accept(p.program, routed);
                   const double got = lifted_sim ? lifted_sim->accept_probability(x)
                                                 : program_accept(lifted, x);
                   max_gap = std::max(max_gap, std::abs(want - got));
                   if (std::abs(want - got) > s.tolerance) {
                     ++disagreements;
                     if (!witness)
                       witness = Bits(x.begin(), x.end());
                   }
                 });
  nlohmann::json measured = enumeration_json(s.inputs, checked);
  measured["disagreements"] = disagreements;
  measured["max_probability_gap"] = max_gap;
  if (witness)
    measured["witness"] = bits_text(*witness);
  r.add("acceptance equals the original on routed values",
        disagreements == 0 && checked > 0, measured,
        {{"tolerance", s.tolerance}});
  return r;
}

Report run_hierarchy_probe(const ExperimentSpec &s) {
  Report r;
  const NamedProgram p = make_program(s.program);
  const int q = program_arity(p.program);
  r.claim = "non-commutative programs are rejected by the reordering transforms";
  auto rejected = [&](AddressMode mode) -> std::pair<bool, std::string> {
    try {
      lift(p.program, BlockLayout(q), mode);
      return {false, "accepted"};
    } catch (const NotCommutativeError &e) {
      return {true, e.what()};
    }
  };
  if (p.program.index() != 3) {
    const auto [ok, what] = rejected(AddressMode::direct);
    r.add("direct reorder rejects", ok, what, "NotCommutativeError");
  }
  const auto [ok, what] = rejected(AddressMode::prefix_xor);
  r.add("xor reorder rejects", ok, what, "NotCommutativeError");
  if (!s.function.empty()) {
    const NamedFunction f = make_function(s.function);
    const double eps = s.epsilon.value_or(p.epsilon);
    const Agreement a =
        compare(p.program, f.fn, s.inputs, nullptr, s.mode, eps, s.tolerance);
    r.add("program fails against " + s.function, a.disagreements > 0,
          {{"disagreements", a.disagreements},
           {"min_one", a.min_one},
           {"max_zero", a.max_zero}},
          "> 0 disagreements");
  }
  return r;
}

} // namespace

Report run(const ExperimentSpec &spec, bool timing) {
  validate(spec);
  const auto start = std::chrono::steady_clock::now();
  Report r;
  if (spec.kind == "width-exact")
    r = run_width_exact(spec);
  else if (spec.kind == "nsub")
    r = run_nsub(spec);
  else if (spec.kind == "equivalence")
    r = run_equivalence(spec);
  else if (spec.kind == "error-margin")
    r = run_error_margin(spec);
  else if (spec.kind == "reorder-roundtrip")
    r = run_reorder_roundtrip(spec);
  else
    r = run_hierarchy_probe(spec);
  r.kind = spec.kind;
  r.spec = to_json(spec);
  if (timing)
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                    .count();
  return r;
}

} // namespace obddlab::lab
