#include "obddlab/reorder.hpp"

#include <bit>

#include "obddlab/errors.hpp"

namespace obddlab {

const char *to_string(AddressMode mode) noexcept {
  return mode == AddressMode::direct ? "direct" : "xor";
}

AddressMode parse_address_mode(const std::string &text) {
  if (text == "direct")
    return AddressMode::direct;
  if (text == "xor")
    return AddressMode::prefix_xor;
  throw ParameterError("unknown address mode '" + text +
                       "' (expected direct or xor)");
}

BlockLayout::BlockLayout(int q) : q_(q), p_(0) {
  if (q < 2 || !std::has_single_bit(static_cast<unsigned>(q)))
    throw ParameterError("layout needs q a power of two >= 2, got " +
                         std::to_string(q));
  p_ = std::countr_zero(static_cast<unsigned>(q));
}

namespace {

void check_layout_input(const BlockLayout &layout,
                        std::span<const std::uint8_t> x) {
  if (x.size() != static_cast<std::size_t>(layout.n()))
    throw ShapeError("encoded input has " + std::to_string(x.size()) +
                     " bits, layout expects " + std::to_string(layout.n()));
}

} // namespace

int address_field(const BlockLayout &layout, std::span<const std::uint8_t> x,
                  int block) {
  int field = 0;
  for (int j = 1; j <= layout.p(); ++j)
    field = (field << 1) | (x[layout.address_var(block, j) - 1] ? 1 : 0);
  return field;
}

std::vector<int> addresses(const BlockLayout &layout,
                           std::span<const std::uint8_t> x, AddressMode mode) {
  check_layout_input(layout, x);
  std::vector<int> out(static_cast<std::size_t>(layout.q()));
  int carry = 0;
  for (int i = 1; i <= layout.q(); ++i) {
    const int field = address_field(layout, x, i);
    carry = mode == AddressMode::direct ? field : (carry ^ field);
    out[i - 1] = carry + 1;
  }
  return out;
}

int adr(const BlockLayout &layout, std::span<const std::uint8_t> x, int block,
        AddressMode mode) {
  if (block < 1 || block > layout.q())
    throw ShapeError("block index " + std::to_string(block) + " outside 1.." +
                     std::to_string(layout.q()));
  return addresses(layout, x, mode)[block - 1];
}

bool is_allowed(const BlockLayout &layout, std::span<const std::uint8_t> x,
                AddressMode mode) {
  std::vector<bool> seen(static_cast<std::size_t>(layout.q()) + 1, false);
  for (int a : addresses(layout, x, mode)) {
    if (seen[a])
      return false;
    seen[a] = true;
  }
  return true;
}

Bits route_values(const BlockLayout &layout, std::span<const std::uint8_t> x,
                  AddressMode mode) {
  const std::vector<int> adrs = addresses(layout, x, mode);
  Bits routed(static_cast<std::size_t>(layout.q()), 0);
  for (int i = 1; i <= layout.q(); ++i)
    routed[adrs[i - 1] - 1] = x[layout.value_var(i) - 1];
  return routed;
}

PartialBoolFn reorder_function(const BoolFn &f, const BlockLayout &layout,
                               AddressMode mode) {
  if (f.arity() != layout.q())
    throw ShapeError("function has " + std::to_string(f.arity()) +
                     " variables, layout has q = " + std::to_string(layout.q()));
  const int n = layout.n();
  BitVec defined(BoolFn::checked_size(n));
  BitVec values(defined.size());
  for (std::uint64_t i = 0; i < defined.size(); ++i) {
    const Bits x = bits_of(i, n);
    if (!is_allowed(layout, x, mode))
      continue;
    defined.set(i, true);
    values.set(i, evaluate(f, route_values(layout, x, mode)));
  }
  return PartialBoolFn(n, std::move(defined), std::move(values));
}

namespace {

template <class Fn> DetEdge map_targets(const DetEdge &e, Fn &&fn) {
  return fn(e);
}
template <class Fn> NondetEdge map_targets(const NondetEdge &e, Fn &&fn) {
  NondetEdge out;
  out.reserve(e.size());
  for (NodeId t : e)
    out.push_back(fn(t));
  return out;
}
template <class Fn> ProbEdge map_targets(const ProbEdge &e, Fn &&fn) {
  ProbEdge out;
  out.reserve(e.size());
  for (const auto &wt : e)
    out.push_back({fn(wt.target), wt.probability});
  return out;
}

template <class Edge>
void require_commutative(const LeveledProgram<Edge> &p,
                         const LiftOptions &options) {
  if (options.assume_commutative)
    return;
  if (p.n > kMaxCommutativityVars)
    throw CapacityError("cannot check commutativity of a program over " +
                        std::to_string(p.n) + " variables");
  if (!is_commutative(p, options.commutativity))
    throw NotCommutativeError(
        "program is not commutative; reordering its transitions changes the "
        "computed function");
}

template <class Edge>
LeveledProgram<Edge> lift(const LeveledProgram<Edge> &source,
                          const BlockLayout &layout, AddressMode mode,
                          const LiftOptions &options) {
  if (source.n != layout.q())
    throw ShapeError("program has " + std::to_string(source.n) +
                     " variables, layout has q = " + std::to_string(layout.q()));
  require_commutative(source, options);
  const LeveledProgram<Edge> p = normalized(source);
  const NodeId d = static_cast<NodeId>(p.level_size(0));
  const int q = layout.q();
  const int bits = layout.p();
  const NodeId wide = static_cast<NodeId>(q) * d;
  const bool carry = mode == AddressMode::prefix_xor;

  LeveledProgram<Edge> out;
  out.n = layout.n();
  out.order = VarOrder::identity(out.n);
  out.layers = p.layers;
  out.start = p.start; // a = 0
  out.accept = p.accept;

  for (int layer = 0; layer < p.layers; ++layer) {
    const std::size_t base =
        static_cast<std::size_t>(layer) * static_cast<std::size_t>(p.n);
    const bool last_layer = layer + 1 == p.layers;
    for (int block = 1; block <= q; ++block) {
      for (int j = 1; j <= bits; ++j) {
        Level<Edge> level;
        level.var = layout.address_var(block, j);
        level.edges.resize(2 * static_cast<std::size_t>(wide));
        const NodeId flip = NodeId{1} << (bits - j);
        for (NodeId node = 0; node < wide; ++node) {
          const NodeId a = node / d;
          const NodeId s = node % d;
          const NodeId set = carry ? (a ^ flip) : (a | flip);
          if constexpr (std::is_same_v<Edge, DetEdge>) {
            level.edge(node, false) = node;
            level.edge(node, true) = set * d + s;
          } else if constexpr (std::is_same_v<Edge, NondetEdge>) {
            level.edge(node, false) = {node};
            level.edge(node, true) = {set * d + s};
          } else {
            level.edge(node, false) = {{node, 1.0}};
            level.edge(node, true) = {{set * d + s, 1.0}};
          }
        }
        out.levels.push_back(std::move(level));
      }

      Level<Edge> value;
      value.var = layout.value_var(block);
      const bool to_final = last_layer && block == q;
      value.edges.resize(2 * static_cast<std::size_t>(wide));
      for (NodeId node = 0; node < wide; ++node) {
        const NodeId a = node / d;
        const NodeId s = node % d;
        const int var = static_cast<int>(a) + 1;
        const auto &table =
            p.levels[base + static_cast<std::size_t>(p.order.position_of(var) - 1)];
        const NodeId next_a = carry ? a : 0;
        auto target = [&](NodeId t) {
          return to_final ? t : next_a * d + t;
        };
        value.edge(node, false) = map_targets(table.edge(s, false), target);
        value.edge(node, true) = map_targets(table.edge(s, true), target);
      }
      out.levels.push_back(std::move(value));
    }

    if (!last_layer) {
      // Hand-off between layers: apply P's junction and clear the address.
      const std::vector<NodeId> *j = p.junction_after(base + p.n - 1);
      std::vector<NodeId> map(wide);
      for (NodeId node = 0; node < wide; ++node) {
        const NodeId s = node % d;
        map[node] = j ? (*j)[s] : s;
      }
      out.junctions.push_back(std::move(map));
    }
  }
  validate(out);
  return out;
}

} // namespace

LeveledObdd reorder_obdd(const LeveledObdd &p, const BlockLayout &layout,
                         AddressMode mode, const LiftOptions &options) {
  return lift(p, layout, mode, options);
}

Nobdd reorder_nobdd(const Nobdd &p, const BlockLayout &layout, AddressMode mode,
                    const LiftOptions &options) {
  return lift(p, layout, mode, options);
}

Pobdd reorder_pobdd(const Pobdd &p, const BlockLayout &layout, AddressMode mode,
                    const LiftOptions &options) {
  return lift(p, layout, mode, options);
}

QuantumProgram xor_reorder_qobdd(const QuantumProgram &p,
                                 const BlockLayout &layout,
                                 const OrderSampling &orders) {
  if (p.n != layout.q())
    throw ShapeError("program has " + std::to_string(p.n) +
                     " variables, layout has q = " + std::to_string(layout.q()));
  if (p.layers != 1)
    throw ParameterError("the quantum lift is defined for single-layer programs");
  validate(p);
  if (!is_commutative_quantum(p, orders))
    throw NotCommutativeError(
        "quantum program is not commutative; reordering its unitaries changes "
        "acceptance probabilities");

  const int g = p.dim;
  const int q = layout.q();
  const int dim = g * q;
  if (dim > kMaxQuantumDim)
    throw CapacityError("lifted dimension " + std::to_string(dim) +
                        " exceeds the cap of " + std::to_string(kMaxQuantumDim));

  QuantumProgram out;
  out.n = layout.n();
  out.dim = dim;
  out.order = VarOrder::identity(out.n);
  out.layers = 1;
  out.initial = Eigen::VectorXcd::Zero(dim);
  out.initial.head(g) = p.initial;
  for (int a = 0; a < q; ++a)
    for (int s : p.accept)
      out.accept.push_back(a * g + s);

  const Eigen::MatrixXcd identity = Eigen::MatrixXcd::Identity(dim, dim);
  std::vector<Eigen::MatrixXcd> flips;
  for (int j = 1; j <= layout.p(); ++j) {
    const int mask = 1 << (layout.p() - j);
    Eigen::MatrixXcd flip = Eigen::MatrixXcd::Zero(dim, dim);
    for (int a = 0; a < q; ++a)
      for (int s = 0; s < g; ++s)
        flip((a ^ mask) * g + s, a * g + s) = 1.0;
    flips.push_back(std::move(flip));
  }
  UnitaryPair value{Eigen::MatrixXcd::Zero(dim, dim),
                    Eigen::MatrixXcd::Zero(dim, dim)};
  for (int a = 0; a < q; ++a) {
    const UnitaryPair &pair = p.pair_for_var(a + 1);
    value.g0.block(a * g, a * g, g, g) = pair.g0;
    value.g1.block(a * g, a * g, g, g) = pair.g1;
  }

  for (int block = 1; block <= q; ++block) {
    for (int j = 1; j <= layout.p(); ++j)
      out.steps.push_back({identity, flips[j - 1]});
    out.steps.push_back(value);
  }
  return out;
}

namespace {

template <class Eval>
BoolFn totalize_with(const PartialBoolFn &fp, int program_n, Eval &&eval) {
  const int n = fp.arity();
  if (program_n != n)
    throw ShapeError("program has " + std::to_string(program_n) +
                     " variables, partial function has " + std::to_string(n));
  BitVec table(BoolFn::checked_size(n));
  for (std::uint64_t i = 0; i < table.size(); ++i) {
    const bool out = eval(i);
    if (fp.defined().get(i) && fp.values().get(i) != out)
      throw ConsistencyError("program output " + std::to_string(out) +
                             " disagrees with the partial function at input " +
                             std::to_string(i));
    table.set(i, fp.defined().get(i) ? fp.values().get(i) : out);
  }
  return BoolFn(n, std::move(table));
}

} // namespace

BoolFn totalize(const PartialBoolFn &fp, const LeveledObdd &p) {
  validate(p);
  return totalize_with(fp, p.n, [&](std::uint64_t i) {
    return eval_obdd(p, bits_of(i, p.n));
  });
}

BoolFn totalize(const PartialBoolFn &fp, const Nobdd &p) {
  validate(p);
  return totalize_with(fp, p.n, [&](std::uint64_t i) {
    return eval_nobdd(p, bits_of(i, p.n));
  });
}

BoolFn totalize(const PartialBoolFn &fp, const Pobdd &p) {
  validate(p);
  return totalize_with(fp, p.n, [&](std::uint64_t i) {
    return round_probability(eval_pobdd(p, bits_of(i, p.n)));
  });
}

BoolFn totalize(const PartialBoolFn &fp, const QuantumProgram &p) {
  if (p.n != fp.arity())
    throw ShapeError("program has " + std::to_string(p.n) +
                     " variables, partial function has " +
                     std::to_string(fp.arity()));
  const std::vector<double> table = acceptance_table(p);
  return totalize_with(fp, p.n, [&](std::uint64_t i) {
    return round_probability(table[i]);
  });
}

} // namespace obddlab
