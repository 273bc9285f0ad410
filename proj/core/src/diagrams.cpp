#include "obddlab/diagrams.hpp"

#include <algorithm>
#include <cmath>

#include "obddlab/errors.hpp"

namespace obddlab {

namespace {

std::string where(std::size_t level, NodeId node) {
  return "level " + std::to_string(level + 1) + ", node " +
         std::to_string(node);
}

void check_edge(const DetEdge &e, std::size_t next, std::size_t l, NodeId s) {
  if (e >= next)
    throw StructuralError("transition to missing node " + std::to_string(e) +
                          " at " + where(l, s));
}

void check_edge(const NondetEdge &e, std::size_t next, std::size_t l,
                NodeId s) {
  for (NodeId t : e)
    check_edge(t, next, l, s);
}

void check_row(const ProbEdge &e, std::size_t l, NodeId s) {
  double total = 0.0;
  for (const auto &[t, pr] : e) {
    if (!(pr >= 0.0))
      throw StructuralError("negative probability at " + where(l, s));
    total += pr;
  }
  if (std::abs(total - 1.0) > kStochasticTolerance)
    throw StructuralError("probabilities sum to " + std::to_string(total) +
                          " at " + where(l, s));
}

void check_edge(const ProbEdge &e, std::size_t next, std::size_t l, NodeId s) {
  for (const auto &wt : e)
    check_edge(wt.target, next, l, s);
  check_row(e, l, s);
}

DetEdge remap_edge(const DetEdge &e, const std::vector<NodeId> &map) {
  return map[e];
}
NondetEdge remap_edge(const NondetEdge &e, const std::vector<NodeId> &map) {
  NondetEdge out;
  out.reserve(e.size());
  for (NodeId t : e)
    out.push_back(map[t]);
  return out;
}
ProbEdge remap_edge(const ProbEdge &e, const std::vector<NodeId> &map) {
  ProbEdge out;
  out.reserve(e.size());
  for (const auto &wt : e)
    out.push_back({map[wt.target], wt.probability});
  return out;
}

DetEdge padding_edge(DetEdge) { return 0; }
NondetEdge padding_edge(const NondetEdge &) { return {}; }
ProbEdge padding_edge(const ProbEdge &) { return {{0, 1.0}}; }

} // namespace

template <class Edge> void validate(const LeveledProgram<Edge> &p) {
  if (p.n < 0 || p.order.size() != p.n)
    throw StructuralError("order length " + std::to_string(p.order.size()) +
                          " differs from n = " + std::to_string(p.n));
  if (p.layers < 1)
    throw StructuralError("a program needs at least one layer");
  const std::size_t expected =
      static_cast<std::size_t>(p.layers) * static_cast<std::size_t>(p.n);
  if (p.levels.size() != expected)
    throw StructuralError("expected " + std::to_string(expected) +
                          " levels, found " + std::to_string(p.levels.size()));
  if (p.accept.empty())
    throw StructuralError("final level is empty");
  if (p.start >= p.level_size(0))
    throw StructuralError("start node outside level 1");
  if (!p.junctions.empty() &&
      p.junctions.size() != static_cast<std::size_t>(p.layers - 1))
    throw StructuralError("junction list must be empty or have k-1 entries");

  for (std::size_t l = 0; l < p.levels.size(); ++l) {
    const auto &level = p.levels[l];
    const int expected_var =
        p.order.at(static_cast<int>(l % static_cast<std::size_t>(p.n)) + 1);
    if (level.var != expected_var)
      throw StructuralError("level " + std::to_string(l + 1) + " tests x" +
                            std::to_string(level.var) + " but the order says x" +
                            std::to_string(expected_var));
    if (level.edges.size() % 2 != 0 || level.edges.empty())
      throw StructuralError("level " + std::to_string(l + 1) +
                            " has an incomplete transition table");
    const std::size_t next = p.level_size(l + 1);
    for (NodeId s = 0; s < level.size(); ++s) {
      check_edge(level.edge(s, false), next, l, s);
      check_edge(level.edge(s, true), next, l, s);
    }
    if (const auto *j = p.junction_after(l)) {
      if (j->size() != next)
        throw StructuralError("junction after level " + std::to_string(l + 1) +
                              " does not cover the boundary level");
      for (NodeId t : *j)
        if (t >= next)
          throw StructuralError("junction maps to missing node " +
                                std::to_string(t));
    }
  }
}

NodeId final_node(const LeveledObdd &p, std::span<const std::uint8_t> x) {
  if (x.size() != static_cast<std::size_t>(p.n))
    throw ShapeError("assignment has " + std::to_string(x.size()) +
                     " bits, program expects " + std::to_string(p.n));
  NodeId s = p.start;
  for (std::size_t l = 0; l < p.levels.size(); ++l) {
    const auto &level = p.levels[l];
    if (s >= level.size())
      throw StructuralError("path reached missing node at " + where(l, s));
    s = level.edge(s, x[level.var - 1] != 0);
    if (const auto *j = p.junction_after(l)) {
      if (s >= j->size())
        throw StructuralError("path reached missing node at a junction");
      s = (*j)[s];
    }
  }
  if (s >= p.accept.size())
    throw StructuralError("path reached missing final node " +
                          std::to_string(s));
  return s;
}

bool eval_obdd(const LeveledObdd &p, std::span<const std::uint8_t> x) {
  return p.accept[final_node(p, x)] != 0;
}

bool eval_nobdd(const Nobdd &p, std::span<const std::uint8_t> x) {
  if (x.size() != static_cast<std::size_t>(p.n))
    throw ShapeError("assignment has " + std::to_string(x.size()) +
                     " bits, program expects " + std::to_string(p.n));
  std::vector<std::uint8_t> current(p.level_size(0), 0);
  current.at(p.start) = 1;
  for (std::size_t l = 0; l < p.levels.size(); ++l) {
    const auto &level = p.levels[l];
    std::vector<std::uint8_t> next(p.level_size(l + 1), 0);
    const bool bit = x[level.var - 1] != 0;
    for (NodeId s = 0; s < current.size(); ++s) {
      if (!current[s])
        continue;
      for (NodeId t : level.edge(s, bit)) {
        if (t >= next.size())
          throw StructuralError("transition to missing node at " + where(l, s));
        next[t] = 1;
      }
    }
    if (const auto *j = p.junction_after(l)) {
      std::vector<std::uint8_t> relabeled(next.size(), 0);
      for (NodeId s = 0; s < next.size(); ++s)
        if (next[s])
          relabeled[(*j)[s]] = 1;
      next = std::move(relabeled);
    }
    current = std::move(next);
  }
  for (NodeId s = 0; s < current.size(); ++s)
    if (current[s] && p.accept[s])
      return true;
  return false;
}

double eval_pobdd(const Pobdd &p, std::span<const std::uint8_t> x) {
  if (x.size() != static_cast<std::size_t>(p.n))
    throw ShapeError("assignment has " + std::to_string(x.size()) +
                     " bits, program expects " + std::to_string(p.n));
  std::vector<double> current(p.level_size(0), 0.0);
  current.at(p.start) = 1.0;
  for (std::size_t l = 0; l < p.levels.size(); ++l) {
    const auto &level = p.levels[l];
    std::vector<double> next(p.level_size(l + 1), 0.0);
    const bool bit = x[level.var - 1] != 0;
    for (NodeId s = 0; s < current.size(); ++s) {
      if (current[s] == 0.0)
        continue;
      const ProbEdge &row = level.edge(s, bit);
      check_row(row, l, s);
      for (const auto &[t, pr] : row) {
        if (t >= next.size())
          throw StructuralError("transition to missing node at " + where(l, s));
        next[t] += current[s] * pr;
      }
    }
    if (const auto *j = p.junction_after(l)) {
      std::vector<double> relabeled(next.size(), 0.0);
      for (NodeId s = 0; s < next.size(); ++s)
        relabeled[(*j)[s]] += next[s];
      next = std::move(relabeled);
    }
    current = std::move(next);
  }
  double accepted = 0.0;
  for (NodeId s = 0; s < current.size(); ++s)
    if (p.accept[s])
      accepted += current[s];
  return std::clamp(accepted, 0.0, 1.0);
}

template <class Edge> std::size_t width(const LeveledProgram<Edge> &p) {
  std::size_t w = 0;
  for (const auto &level : p.levels)
    w = std::max(w, level.size());
  return p.levels.empty() ? p.accept.size() : w;
}

template <class Edge> std::size_t size(const LeveledProgram<Edge> &p) {
  std::size_t total = p.accept.size();
  for (const auto &level : p.levels)
    total += level.size();
  return total;
}

namespace {

template <class To, class Convert>
LeveledProgram<To> convert_edges(const LeveledObdd &p, Convert &&convert) {
  LeveledProgram<To> out;
  out.n = p.n;
  out.order = p.order;
  out.layers = p.layers;
  out.start = p.start;
  out.junctions = p.junctions;
  out.accept = p.accept;
  out.levels.reserve(p.levels.size());
  for (const auto &level : p.levels) {
    Level<To> copy;
    copy.var = level.var;
    copy.edges.reserve(level.edges.size());
    for (NodeId t : level.edges)
      copy.edges.push_back(convert(t));
    out.levels.push_back(std::move(copy));
  }
  return out;
}

} // namespace

Nobdd embed_nondeterministic(const LeveledObdd &p) {
  return convert_edges<NondetEdge>(p, [](NodeId t) { return NondetEdge{t}; });
}

Pobdd embed_probabilistic(const LeveledObdd &p) {
  return convert_edges<ProbEdge>(p,
                                 [](NodeId t) { return ProbEdge{{t, 1.0}}; });
}

LeveledObdd build_binary_tree_obdd(const BoolFn &f,
                                   const std::vector<int> &live) {
  const int n = f.arity();
  if (n < 1)
    throw ShapeError("binary tree needs at least one variable");
  std::vector<bool> is_live(static_cast<std::size_t>(n) + 1, false);
  for (int v : live) {
    if (v < 1 || v > n)
      throw ShapeError("live set names unknown variable " + std::to_string(v));
    is_live[v] = true;
  }
  for (int v = 1; v <= n; ++v) {
    if (is_live[v])
      continue;
    const std::uint64_t bit = var_bit(n, v);
    for (std::uint64_t i = 0; i < f.domain_size(); ++i)
      if (!(i & bit) && f.at(i) != f.at(i | bit))
        throw DependencyError("function depends on x" + std::to_string(v) +
                              ", which is not in the live set");
  }

  LeveledObdd p;
  p.n = n;
  p.order = VarOrder::identity(n);
  p.start = 0;
  std::size_t nodes = 1;
  for (int v = 1; v <= n; ++v) {
    Level<DetEdge> level;
    level.var = v;
    level.edges.resize(2 * nodes);
    for (NodeId s = 0; s < nodes; ++s) {
      if (is_live[v]) {
        level.edge(s, false) = 2 * s;
        level.edge(s, true) = 2 * s + 1;
      } else {
        level.edge(s, false) = s;
        level.edge(s, true) = s;
      }
    }
    if (is_live[v])
      nodes *= 2;
    p.levels.push_back(std::move(level));
  }
  // A final node is the binary word of live values, first live variable
  // most significant; dead variables are read as 0.
  p.accept.resize(nodes);
  for (NodeId s = 0; s < nodes; ++s) {
    std::uint64_t index = 0;
    int remaining = static_cast<int>(std::count(is_live.begin(), is_live.end(), true));
    for (int v = 1; v <= n; ++v) {
      if (!is_live[v])
        continue;
      --remaining;
      if ((s >> remaining) & 1U)
        index |= var_bit(n, v);
    }
    p.accept[s] = f.at(index) ? 1 : 0;
  }
  return p;
}

template <class Edge>
LeveledProgram<Edge> normalized(const LeveledProgram<Edge> &p) {
  validate(p);
  LeveledProgram<Edge> out = p;
  std::size_t common = width(p);
  if (out.accept.size() > common) {
    // Collapse the final level to a reject node 0 and an accept node 1.
    std::vector<NodeId> collapse(out.accept.size());
    for (std::size_t s = 0; s < collapse.size(); ++s)
      collapse[s] = out.accept[s] ? 1 : 0;
    auto &last = out.levels.back();
    for (auto &e : last.edges)
      e = remap_edge(e, collapse);
    out.accept = {0, 1};
    common = std::max<std::size_t>(common, 2);
  }
  for (auto &level : out.levels)
    while (level.size() < common) {
      level.edges.push_back(padding_edge(Edge{}));
      level.edges.push_back(padding_edge(Edge{}));
    }
  out.accept.resize(common, 0);
  for (auto &j : out.junctions) {
    if (j.empty())
      continue;
    for (std::size_t s = j.size(); s < common; ++s)
      j.push_back(static_cast<NodeId>(s));
  }
  return out;
}

template <class Edge>
LeveledProgram<Edge> reorder_levels(const LeveledProgram<Edge> &p,
                                    const VarOrder &new_order) {
  if (new_order.size() != p.n)
    throw ShapeError("new order length differs from n");
  const std::size_t common = p.level_size(0);
  for (std::size_t l = 0; l <= p.levels.size(); ++l)
    if (p.level_size(l) != common)
      throw StructuralError(
          "transition reordering needs a program of uniform level size");
  LeveledProgram<Edge> out = p;
  out.order = new_order;
  const std::size_t n = static_cast<std::size_t>(p.n);
  for (int layer = 0; layer < p.layers; ++layer) {
    const std::size_t base = static_cast<std::size_t>(layer) * n;
    for (int i = 1; i <= p.n; ++i) {
      const int var = new_order.at(i);
      const int source_pos = p.order.position_of(var);
      out.levels[base + static_cast<std::size_t>(i - 1)] =
          p.levels[base + static_cast<std::size_t>(source_pos - 1)];
    }
  }
  return out;
}

BoolFn truth_table(const LeveledObdd &p) {
  return BoolFn::from_bits(p.n, [&](std::span<const std::uint8_t> x) {
    return eval_obdd(p, x);
  });
}

BoolFn truth_table(const Nobdd &p) {
  return BoolFn::from_bits(p.n, [&](std::span<const std::uint8_t> x) {
    return eval_nobdd(p, x);
  });
}

namespace {

std::vector<double> acceptance_table(const Pobdd &p) {
  std::vector<double> out(BoolFn::checked_size(p.n));
  for (std::uint64_t i = 0; i < out.size(); ++i)
    out[i] = eval_pobdd(p, bits_of(i, p.n));
  return out;
}

void check_commutativity_capacity(int n) {
  if (n > kMaxCommutativityVars)
    throw CapacityError("commutativity is checked exhaustively only up to " +
                        std::to_string(kMaxCommutativityVars) + " variables");
}

} // namespace

template <class Edge>
bool is_commutative(const LeveledProgram<Edge> &p,
                    const CommutativityOptions &options) {
  check_commutativity_capacity(p.n);
  const LeveledProgram<Edge> base = normalized(p);
  if constexpr (std::is_same_v<Edge, ProbEdge>) {
    const std::vector<double> reference = acceptance_table(p);
    for (const VarOrder &order : candidate_orders(p.n, options.orders)) {
      const auto moved = acceptance_table(reorder_levels(base, order));
      for (std::size_t i = 0; i < reference.size(); ++i)
        if (std::abs(moved[i] - reference[i]) > options.tolerance)
          return false;
    }
    return true;
  } else {
    const BoolFn reference = truth_table(p);
    for (const VarOrder &order : candidate_orders(p.n, options.orders))
      if (truth_table(reorder_levels(base, order)) != reference)
        return false;
    return true;
  }
}

#define OBDDLAB_INSTANTIATE(Edge)                                              \
  template void validate(const LeveledProgram<Edge> &);                        \
  template std::size_t width(const LeveledProgram<Edge> &);                    \
  template std::size_t size(const LeveledProgram<Edge> &);                     \
  template LeveledProgram<Edge> normalized(const LeveledProgram<Edge> &);      \
  template LeveledProgram<Edge> reorder_levels(const LeveledProgram<Edge> &,   \
                                               const VarOrder &);              \
  template bool is_commutative(const LeveledProgram<Edge> &,                   \
                               const CommutativityOptions &);

OBDDLAB_INSTANTIATE(DetEdge)
OBDDLAB_INSTANTIATE(NondetEdge)
OBDDLAB_INSTANTIATE(ProbEdge)

#undef OBDDLAB_INSTANTIATE

} // namespace obddlab
