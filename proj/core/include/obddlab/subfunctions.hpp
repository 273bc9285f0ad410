/// @file  subfunctions.hpp
/// @brief Subfunction counting N^theta, N^pi and the exact minimum N(f)
///        over all variable orders.
///
/// For total functions a subfunction count is the number of distinct
/// restrictions f|_rho over assignments rho to the prefix variables.
///
/// For partial functions two restrictions are *distinct* iff some
/// assignment to the remaining variables is defined in both and gets
/// different values there; undefined points never witness a difference.
/// That relation is not transitive, so the count reported is the size of
/// the largest family of pairwise-distinct restrictions. On a fully
/// defined function this is exactly the number of distinct restrictions,
/// and it is a lower bound on the node count at that cut of any OBDD that
/// agrees with the partial function.

#pragma once

#include <cstdint>

#include "obddlab/boolfn.hpp"

namespace obddlab {

/// Largest arity accepted by the subset dynamic program.
inline constexpr int kMaxMinWidthVars = 16;
/// Largest arity accepted by the n! enumeration.
inline constexpr int kMaxEnumerationVars = 8;

/// Count with X_A = `prefix` (any subset, order inside the set is irrelevant).
std::uint64_t subfunction_count(const BoolFn &f, VarSet prefix);
std::uint64_t subfunction_count(const PartialBoolFn &f, VarSet prefix);

std::uint64_t subfunction_count(const BoolFn &f, const Partition &theta);
std::uint64_t subfunction_count(const PartialBoolFn &f, const Partition &theta);

/// max over the cuts u = 1..n-1 of `order`. Functions of arity < 2 have no
/// cut and report 1.
std::uint64_t n_pi(const BoolFn &f, const VarOrder &order);
std::uint64_t n_pi(const PartialBoolFn &f, const VarOrder &order);

struct MinWidth {
  std::uint64_t value = 1;
  VarOrder order; ///< one order attaining `value`
};

/// Exact N(f) by a bottleneck shortest path over the subset lattice: the
/// count at a cut depends only on the set of variables already read.
MinWidth n_min(const BoolFn &f);
MinWidth n_min(const PartialBoolFn &f);

/// Exact N(f) by trying all n! orders, n <= kMaxEnumerationVars.
MinWidth n_min_enumerate(const BoolFn &f);
MinWidth n_min_enumerate(const PartialBoolFn &f);

} // namespace obddlab
