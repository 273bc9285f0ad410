/// @file  diagrams.hpp
/// @brief Leveled deterministic, nondeterministic and probabilistic
///        (k-)OBDDs in explicit table form.
///
/// A program over n variables with k layers has k*n transition levels plus
/// one final level. Level l (0-based) tests variable order.at((l % n) + 1);
/// its table sends (node, bit) to node(s) of level l+1. Nodes of the final
/// level carry an accept flag. Programs are stored exactly as built: no
/// reduction or node sharing is ever applied, since width is measured on
/// the leveled program itself.
///
/// Between two layers an optional junction map relabels the nodes of the
/// boundary level before the next layer starts. It lets a layer hand its
/// result to the next one without baking the hand-off into the transition
/// of whichever variable happens to be read last.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "obddlab/boolfn.hpp"

namespace obddlab {

using NodeId = std::uint32_t;

struct WeightedTarget {
  NodeId target = 0;
  double probability = 0.0;

  friend bool operator==(const WeightedTarget &, const WeightedTarget &) = default;
};

using DetEdge = NodeId;
using NondetEdge = std::vector<NodeId>;
using ProbEdge = std::vector<WeightedTarget>;

template <class Edge> struct Level {
  int var = 0;
  /// edges[2 * node + bit]
  std::vector<Edge> edges;

  std::size_t size() const noexcept { return edges.size() / 2; }
  const Edge &edge(NodeId node, bool bit) const {
    return edges[2 * static_cast<std::size_t>(node) + (bit ? 1 : 0)];
  }
  Edge &edge(NodeId node, bool bit) {
    return edges[2 * static_cast<std::size_t>(node) + (bit ? 1 : 0)];
  }

  friend bool operator==(const Level &, const Level &) = default;
};

template <class Edge> struct LeveledProgram {
  int n = 0;
  VarOrder order;
  int layers = 1;
  NodeId start = 0;
  std::vector<Level<Edge>> levels;
  /// junctions[l] relabels the boundary level after layer l+1; an empty
  /// vector is the identity. Either empty or of size layers - 1.
  std::vector<std::vector<NodeId>> junctions;
  /// Accept flag for each node of the final level.
  std::vector<std::uint8_t> accept;

  std::size_t level_count() const noexcept { return levels.size(); }
  /// Node count of level l, where l == level_count() is the final level.
  std::size_t level_size(std::size_t l) const {
    return l == levels.size() ? accept.size() : levels[l].size();
  }
  const std::vector<NodeId> *junction_after(std::size_t l) const {
    if ((l + 1) % static_cast<std::size_t>(n) != 0)
      return nullptr;
    const std::size_t layer = (l + 1) / static_cast<std::size_t>(n) - 1;
    if (layer >= junctions.size() || junctions[layer].empty())
      return nullptr;
    return &junctions[layer];
  }

  friend bool operator==(const LeveledProgram &, const LeveledProgram &) = default;
};

using LeveledObdd = LeveledProgram<DetEdge>;
using Nobdd = LeveledProgram<NondetEdge>;
using Pobdd = LeveledProgram<ProbEdge>;

/// Tolerance for stochastic rows.
inline constexpr double kStochasticTolerance = 1e-9;

/// Throws StructuralError on dangling targets, wrong level variables,
/// missing levels, negative or non-normalised probabilities.
template <class Edge> void validate(const LeveledProgram<Edge> &p);

bool eval_obdd(const LeveledObdd &p, std::span<const std::uint8_t> x);
bool eval_nobdd(const Nobdd &p, std::span<const std::uint8_t> x);
double eval_pobdd(const Pobdd &p, std::span<const std::uint8_t> x);

/// Node of the final level reached by a deterministic program.
NodeId final_node(const LeveledObdd &p, std::span<const std::uint8_t> x);

/// Maximum node count over the transition levels.
template <class Edge> std::size_t width(const LeveledProgram<Edge> &p);
/// Node count summed over all levels including the final one.
template <class Edge> std::size_t size(const LeveledProgram<Edge> &p);

Nobdd embed_nondeterministic(const LeveledObdd &p);
Pobdd embed_probabilistic(const LeveledObdd &p);

/// Complete decision tree over the `live` variables; other variables pass
/// through unchanged. Width is at most 2^|live|. Throws DependencyError if
/// f depends on a variable outside `live`.
LeveledObdd build_binary_tree_obdd(const BoolFn &f, const std::vector<int> &live);

/// Same program with every level (final level included) padded to one
/// common node count; a final level wider than the transition levels is
/// first collapsed to at most two sinks. Padding nodes are unreachable.
template <class Edge>
LeveledProgram<Edge> normalized(const LeveledProgram<Edge> &p);

/// P' with tr_{P'}(i, s, x_{pi'(i)}) = tr_P(pi^{-1}(pi'(i)), s, x_{pi'(i)}),
/// applied inside each layer; junctions and the final level stay put.
/// Expects a normalized program.
template <class Edge>
LeveledProgram<Edge> reorder_levels(const LeveledProgram<Edge> &p,
                                    const VarOrder &new_order);

struct CommutativityOptions {
  OrderSampling orders;
  double tolerance = 1e-9;
};

/// Largest arity for which commutativity is checked on all inputs.
inline constexpr int kMaxCommutativityVars = 12;

/// True iff every candidate reordering computes the same function on all
/// 2^n inputs (acceptance probabilities within `tolerance` for POBDDs).
template <class Edge>
bool is_commutative(const LeveledProgram<Edge> &p,
                    const CommutativityOptions &options = {});

/// Truth table of a deterministic or nondeterministic program.
BoolFn truth_table(const LeveledObdd &p);
BoolFn truth_table(const Nobdd &p);

// Text form ----------------------------------------------------------------
//
//   obdd <n> <k> <width> order=<v,v,...> start=<node>
//   L<level> var=<v>: <node>:<t0>,<t1> ...
//   J<layer>: <node>=<target> ...
//   sinks: <node>=<0|1> ...
//
// NOBDD edges print as {t;t;...}, POBDD edges as (p->t;p->t;...).

std::string to_text(const LeveledObdd &p);
std::string to_text(const Nobdd &p);
std::string to_text(const Pobdd &p);

LeveledObdd obdd_from_text(const std::string &text);
Nobdd nobdd_from_text(const std::string &text);
Pobdd pobdd_from_text(const std::string &text);

} // namespace obddlab
