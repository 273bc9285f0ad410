#include "registry.hpp"

#include <bit>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "obddlab/errors.hpp"
#include "obddlab/fingerprint.hpp"
#include "obddlab/pointer_jumping.hpp"
#include "obddlab/subfunctions.hpp"
#include "obddlab/zoo.hpp"

#ifndef OBDDLAB_FIXTURES_DIR
#define OBDDLAB_FIXTURES_DIR "fixtures"
#endif

namespace obddlab::lab {

namespace {

int to_int(const std::string &key, const std::string &value) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(value, &used);
    if (used == value.size())
      return v;
  } catch (const std::logic_error &) {
  }
  throw ParameterError("parameter " + key + " expects an integer, got '" +
                       value + "'");
}

std::vector<int> int_list(const std::string &key, const std::string &value) {
  std::vector<int> out;
  std::stringstream in(value);
  std::string item;
  while (std::getline(in, item, '-'))
    out.push_back(to_int(key, item));
  if (out.empty())
    throw ParameterError("parameter " + key + " expects a '-'-separated list");
  return out;
}

void reject_unknown(const ParsedId &id, std::initializer_list<const char *> known) {
  for (const auto &[key, value] : id.params) {
    bool ok = false;
    for (const char *k : known)
      ok = ok || key == k;
    if (!ok)
      throw ParameterError("'" + id.name + "' does not take parameter '" + key +
                           "'");
  }
}

} // namespace

int ParsedId::integer(const std::string &key) const {
  const auto it = params.find(key);
  if (it == params.end())
    throw ParameterError("'" + name + "' needs parameter " + key);
  return to_int(key, it->second);
}

int ParsedId::integer(const std::string &key, int fallback) const {
  return has(key) ? integer(key) : fallback;
}

double ParsedId::real(const std::string &key, double fallback) const {
  const auto it = params.find(key);
  if (it == params.end())
    return fallback;
  try {
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used == it->second.size())
      return v;
  } catch (const std::logic_error &) {
  }
  throw ParameterError("parameter " + key + " expects a number");
}

std::string ParsedId::text(const std::string &key,
                           const std::string &fallback) const {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

ParsedId parse_id(const std::string &id) {
  ParsedId out;
  const auto colon = id.find(':');
  out.name = id.substr(0, colon);
  if (out.name.empty())
    throw ParameterError("empty function or program id");
  if (colon == std::string::npos)
    return out;
  std::stringstream in(id.substr(colon + 1));
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ParameterError("expected key=value in '" + id + "', got '" + item +
                           "'");
    if (!out.params.emplace(item.substr(0, eq), item.substr(eq + 1)).second)
      throw ParameterError("parameter '" + item.substr(0, eq) +
                           "' given twice in '" + id + "'");
  }
  return out;
}

NamedFunction make_function(const std::string &text) {
  const ParsedId id = parse_id(text);
  NamedFunction out{text, PartialBoolFn(BoolFn::constant(1, false)), true, {}, {}};
  std::optional<BoolFn> total;
  std::optional<PartialBoolFn> partial;

  if (id.name == "const") {
    reject_unknown(id, {"n", "v", "not", "reorder"});
    total = BoolFn::constant(id.integer("n"), id.integer("v", 0) != 0);
  } else if (id.name == "eq") {
    reject_unknown(id, {"n", "not", "reorder"});
    total = eq(id.integer("n"));
  } else if (id.name == "req") {
    reject_unknown(id, {"q", "not", "reorder"});
    const int q = id.integer("q");
    total = req(BlockLayout(q));
    out.width_bound = std::uint64_t{1} << (q / 2);
    out.claim = "N(REQ) >= 2^(q/2)";
  } else if (id.name == "modp") {
    reject_unknown(id, {"p", "n", "not", "reorder"});
    total = mod_p(id.integer("p"), id.integer("n"));
  } else if (id.name == "ws") {
    reject_unknown(id, {"n", "not", "reorder"});
    total = ws(id.integer("n"));
  } else if (id.name == "wsb") {
    reject_unknown(id, {"n", "b", "not", "reorder"});
    total = ws_b(id.integer("n"), id.integer("b"));
  } else if (id.name == "mswb") {
    reject_unknown(id, {"n", "b", "not", "reorder"});
    total = msw_b(id.integer("n"), id.integer("b"));
  } else if (id.name == "reqb") {
    reject_unknown(id, {"n", "b", "not", "reorder"});
    const int b = id.integer("b");
    total = req_b(id.integer("n"), b);
    for (int q = 2; q * (std::countr_zero(static_cast<unsigned>(q)) + 1) <= b; q *= 2)
      if (q * (std::countr_zero(static_cast<unsigned>(q)) + 1) == b)
        out.width_bound = std::uint64_t{1} << (q / 2);
    out.claim = "N(REQ^b) >= 2^(q/2) with b = q(log2 q + 1)";
  } else if (id.name == "pj") {
    reject_unknown(id, {"k", "a", "not", "reorder"});
    total = pj_bool(id.integer("k"), id.integer("a"));
  } else if (id.name == "rpj") {
    reject_unknown(id, {"k", "a", "not", "reorder"});
    total = rpj(id.integer("k"), RpjLayout(id.integer("a")));
  } else if (id.name == "hex") {
    reject_unknown(id, {"n", "t", "mask", "not", "reorder"});
    const int n = id.integer("n");
    if (id.has("mask"))
      partial = partial_fn_from_hex(n, id.text("mask", ""), id.text("t", ""));
    else
      total = bool_fn_from_hex(n, id.text("t", ""));
  } else {
    throw ParameterError("unknown function '" + id.name + "'");
  }

  if (total)
    partial = PartialBoolFn(*total);
  out.total = !id.has("mask");

  if (id.integer("not", 0) != 0) {
    BitVec flipped = ~partial->values();
    flipped &= partial->defined();
    partial = PartialBoolFn(partial->arity(), partial->defined(), std::move(flipped));
  }

  if (id.has("reorder")) {
    if (!out.total)
      throw ParameterError("reorder= needs a total function");
    const BoolFn base(partial->arity(), partial->values());
    const AddressMode mode = parse_address_mode(id.text("reorder", ""));
    partial = reorder_function(base, BlockLayout(base.arity()), mode);
    out.total = false;
    out.width_bound = n_pi(base, VarOrder::identity(base.arity()));
    out.claim = "N(f reordered) >= N^id(f)";
  }
  out.fn = std::move(*partial);
  return out;
}

namespace {

LeveledObdd counter_obdd(int n, int m) {
  if (m < 1 || n < 1)
    throw ParameterError("counter needs m >= 1 and n >= 1");
  LeveledObdd p;
  p.n = n;
  p.order = VarOrder::identity(n);
  for (int v = 1; v <= n; ++v) {
    Level<DetEdge> level;
    level.var = v;
    for (int s = 0; s < m; ++s) {
      level.edges.push_back(static_cast<NodeId>(s));
      level.edges.push_back(static_cast<NodeId>((s + 1) % m));
    }
    p.levels.push_back(std::move(level));
  }
  p.accept.assign(static_cast<std::size_t>(m), 0);
  p.accept[0] = 1;
  return p;
}

// x1 and not x2 with tables that only work in their own positions.
LeveledObdd andnot_obdd(int n) {
  if (n < 2)
    throw ParameterError("andnot needs n >= 2");
  LeveledObdd p;
  p.n = n;
  p.order = VarOrder::identity(n);
  p.levels.push_back({1, {0, 1}});
  p.levels.push_back({2, {0, 0, 1, 0}});
  for (int v = 3; v <= n; ++v)
    p.levels.push_back({v, {0, 0, 1, 1}});
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

Pobdd or_pobdd(int n) {
  Pobdd p;
  p.n = n;
  p.order = VarOrder::identity(n);
  for (int v = 1; v <= n; ++v)
    p.levels.push_back(
        {v, {{{0, 1.0}}, {{0, 0.1}, {1, 0.9}}, {{1, 1.0}}, {{1, 1.0}}}});
  p.accept = {0, 1};
  return p;
}

LeveledObdd accept_all_obdd(int n) {
  LeveledObdd p;
  p.n = n;
  p.order = VarOrder::identity(n);
  for (int v = 1; v <= n; ++v)
    p.levels.push_back({v, {0, 0}});
  p.accept = {1};
  return p;
}

// Hadamard on x1, a pi/4 rotation on x2: swapping them moves the
// acceptance probability of input 11 from 0 to 1.
QuantumProgram noncommutative_qobdd() {
  QuantumProgram p;
  p.n = 2;
  p.dim = 2;
  p.order = VarOrder::identity(2);
  p.initial = Eigen::VectorXcd::Zero(2);
  p.initial[0] = 1.0;
  p.accept = {0};
  const double h = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXcd hadamard(2, 2);
  hadamard << h, h, h, -h;
  const double c = std::cos(std::numbers::pi / 4);
  const double s = std::sin(std::numbers::pi / 4);
  Eigen::MatrixXcd rotation(2, 2);
  rotation << c, -s, s, c;
  const Eigen::MatrixXcd identity = Eigen::MatrixXcd::Identity(2, 2);
  p.steps = {{identity, hadamard}, {identity, rotation}};
  return p;
}

template <class Program>
Program permuted(const Program &p, const std::vector<int> &perm) {
  return reorder_levels(normalized(p), VarOrder(perm));
}

} // namespace

NamedProgram make_program(const std::string &text) {
  const ParsedId id = parse_id(text);
  NamedProgram out{text, LeveledObdd{}, 0.5};
  auto common = {"lift", "perm", "embed"};
  auto allow = [&](std::initializer_list<const char *> own) {
    std::vector<const char *> all(own);
    all.insert(all.end(), common.begin(), common.end());
    for (const auto &[key, value] : id.params) {
      bool ok = false;
      for (const char *k : all)
        ok = ok || key == k;
      if (!ok)
        throw ParameterError("'" + id.name + "' does not take parameter '" +
                             key + "'");
    }
  };

  if (id.name == "fp-eq" || id.name == "xor-fp-eq") {
    allow({"q", "ks"});
    const int q = id.integer("q");
    MultiplierFixture fx;
    if (id.has("ks")) {
      fx.multipliers = int_list("ks", id.text("ks", ""));
      fx.worst_error = multiplier_worst_error(1 << (q / 2), fx.multipliers);
    } else {
      fx = eq_multipliers(q);
    }
    QuantumProgram p = fingerprint_eq_qobdd(q, fx.multipliers);
    if (id.name == "xor-fp-eq")
      p = xor_reorder_qobdd(p, BlockLayout(q));
    out.program = std::move(p);
    out.epsilon = 0.5 - fx.worst_error;
  } else if (id.name == "fp-modp") {
    allow({"p", "n", "ks"});
    const int prime = id.integer("p");
    MultiplierFixture fx;
    if (id.has("ks")) {
      fx.multipliers = int_list("ks", id.text("ks", ""));
      fx.worst_error = multiplier_worst_error(prime, fx.multipliers);
    } else {
      fx = modp_multipliers(prime);
    }
    out.program = fingerprint_modp_qobdd(prime, id.integer("n"), fx.multipliers);
    out.epsilon = 0.5 - fx.worst_error;
  } else if (id.name == "counter") {
    allow({"m", "n", "q"});
    out.program = counter_obdd(id.integer("n", id.integer("q", 2)), id.integer("m"));
  } else if (id.name == "andnot") {
    allow({"n"});
    out.program = andnot_obdd(id.integer("n", 2));
  } else if (id.name == "accept-all") {
    allow({"n"});
    out.program = accept_all_obdd(id.integer("n"));
  } else if (id.name == "or-nobdd") {
    allow({"n"});
    out.program = or_nobdd(id.integer("n", 2));
  } else if (id.name == "or-pobdd") {
    allow({"n"});
    out.program = or_pobdd(id.integer("n", 2));
    out.epsilon = 0.4;
  } else if (id.name == "nc-qobdd") {
    allow({});
    out.program = noncommutative_qobdd();
  } else if (id.name == "pj2k") {
    allow({"k", "a", "readout"});
    const std::string readout = id.text("readout", "parity");
    if (readout != "parity" && readout != "xor")
      throw ParameterError("readout is parity or xor");
    out.program = pj_2k_obdd(id.integer("k"), id.integer("a"),
                             readout == "xor" ? PjReadout::range_xor
                                              : PjReadout::vertex_parity);
  } else if (id.name == "rpj2k") {
    allow({"k", "a"});
    out.program = rpj_2k_obdd(id.integer("k"), RpjLayout(id.integer("a")));
  } else {
    throw ParameterError("unknown program '" + id.name + "'");
  }

  if (id.has("embed")) {
    const auto *det = std::get_if<LeveledObdd>(&out.program);
    if (!det)
      throw ParameterError("embed= applies to deterministic programs");
    const std::string target = id.text("embed", "");
    if (target == "nobdd")
      out.program = embed_nondeterministic(*det);
    else if (target == "pobdd")
      out.program = embed_probabilistic(*det);
    else
      throw ParameterError("embed is nobdd or pobdd");
  }

  if (id.has("perm")) {
    const std::vector<int> perm = int_list("perm", id.text("perm", ""));
    out.program = std::visit(
        [&](const auto &p) -> AnyProgram {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, QuantumProgram>)
            return reorder_quantum(p, VarOrder(perm));
          else
            return permuted(p, perm);
        },
        out.program);
  }

  if (id.has("lift")) {
    const AddressMode mode = parse_address_mode(id.text("lift", ""));
    out.program = std::visit(
        [&](const auto &p) -> AnyProgram {
          using T = std::decay_t<decltype(p)>;
          const BlockLayout layout(p.n);
          if constexpr (std::is_same_v<T, QuantumProgram>) {
            if (mode != AddressMode::prefix_xor)
              throw ParameterError("quantum programs lift with xor addressing only");
            return xor_reorder_qobdd(p, layout);
          } else if constexpr (std::is_same_v<T, LeveledObdd>) {
            return reorder_obdd(p, layout, mode);
          } else if constexpr (std::is_same_v<T, Nobdd>) {
            return reorder_nobdd(p, layout, mode);
          } else {
            return reorder_pobdd(p, layout, mode);
          }
        },
        out.program);
  }
  return out;
}

int program_arity(const AnyProgram &p) {
  return std::visit([](const auto &x) { return x.n; }, p);
}

std::size_t program_width(const AnyProgram &p) {
  return std::visit(
      [](const auto &x) -> std::size_t {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, QuantumProgram>)
          return static_cast<std::size_t>(x.dim);
        else
          return width(x);
      },
      p);
}

const char *program_kind(const AnyProgram &p) {
  switch (p.index()) {
  case 0:
    return "obdd";
  case 1:
    return "nobdd";
  case 2:
    return "pobdd";
  default:
    return "qobdd";
  }
}

double program_accept(const AnyProgram &p, std::span<const std::uint8_t> x) {
  return std::visit(
      [&](const auto &prog) -> double {
        using T = std::decay_t<decltype(prog)>;
        if constexpr (std::is_same_v<T, LeveledObdd>)
          return eval_obdd(prog, x) ? 1.0 : 0.0;
        else if constexpr (std::is_same_v<T, Nobdd>)
          return eval_nobdd(prog, x) ? 1.0 : 0.0;
        else if constexpr (std::is_same_v<T, Pobdd>)
          return eval_pobdd(prog, x);
        else
          return accept_probability(prog, x);
      },
      p);
}

std::string serialize(const AnyProgram &p) {
  return std::visit(
      [](const auto &prog) -> std::string {
        using T = std::decay_t<decltype(prog)>;
        if constexpr (std::is_same_v<T, QuantumProgram>)
          return to_json(prog) + "\n";
        else
          return to_text(prog);
      },
      p);
}

namespace {

std::string &fixtures_path_storage() {
  static std::string path = std::string(OBDDLAB_FIXTURES_DIR) + "/multipliers.json";
  return path;
}

MultiplierFixture lookup_fixture(const char *family, const char *key, int value) {
  std::ifstream in(fixtures_path());
  if (!in)
    throw ParameterError("cannot open fixtures file " + fixtures_path());
  nlohmann::json j;
  try {
    in >> j;
    for (const auto &entry : j.at(family)) {
      if (entry.at(key).get<int>() != value)
        continue;
      MultiplierFixture fx;
      fx.modulus = entry.at("modulus").get<int>();
      fx.multipliers = entry.at("multipliers").get<std::vector<int>>();
      fx.worst_error = entry.at("worst_error").get<double>();
      fx.target = entry.at("target").get<double>();
      fx.target_met = entry.at("target_met").get<bool>();
      return fx;
    }
  } catch (const nlohmann::json::exception &e) {
    throw ParameterError("malformed fixtures file: " + std::string(e.what()));
  }
  throw ParameterError(std::string("no ") + family + " multiplier fixture for " +
                       key + " = " + std::to_string(value));
}

} // namespace

void set_fixtures_path(const std::string &path) { fixtures_path_storage() = path; }
const std::string &fixtures_path() { return fixtures_path_storage(); }

MultiplierFixture eq_multipliers(int q) { return lookup_fixture("eq", "q", q); }
MultiplierFixture modp_multipliers(int p) { return lookup_fixture("modp", "p", p); }

std::string describe_ids() {
  return R"(Functions (name:key=value,...):
  const:n=,v=      eq:n=          req:q=         modp:p=,n=
  ws:n=            wsb:n=,b=      mswb:n=,b=     reqb:n=,b=
  pj:k=,a=         rpj:k=,a=      hex:n=,t=[,mask=]
  modifiers: not=1, reorder=direct|xor (layout q = arity)
Programs:
  fp-eq:q=[,ks=1-1-2]   xor-fp-eq:q=   fp-modp:p=,n=[,ks=]
  counter:m=,n=   andnot:n=   accept-all:n=   or-nobdd:n=   or-pobdd:n=
  nc-qobdd        pj2k:k=,a=[,readout=parity|xor]   rpj2k:k=,a=
  modifiers: embed=nobdd|pobdd, perm=3-1-2, lift=direct|xor
)";
}

} // namespace obddlab::lab
