/// @file  boolfn.hpp
/// @brief Explicit truth tables for total and partial Boolean functions,
///        variable orders and partitions.
///
/// Variables are numbered 1..n. A truth table stores f(x) at index
/// bin(x_1 ... x_n), so x_1 is the most significant bit of the index.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "obddlab/bitvec.hpp"

namespace obddlab {

/// Largest arity accepted for explicit truth tables.
inline constexpr int kMaxTableVars = 24;

/// One input assignment, `bits[i]` is the value of variable i+1.
using Bits = std::vector<std::uint8_t>;

/// Index bit that carries variable `var` (1-based) in an n-variable table.
constexpr std::uint64_t var_bit(int n, int var) noexcept {
  return std::uint64_t{1} << (n - var);
}

std::uint64_t index_of(std::span<const std::uint8_t> x);
Bits bits_of(std::uint64_t index, int n);

/// Total Boolean function f : {0,1}^n -> {0,1}.
class BoolFn {
public:
  BoolFn() = default;
  BoolFn(int n, BitVec table);

  static BoolFn constant(int n, bool value);

  /// Builds the table from a predicate on the table index.
  template <class Pred> static BoolFn from_index(int n, Pred &&pred) {
    BitVec table(checked_size(n));
    for (std::uint64_t i = 0; i < table.size(); ++i)
      if (pred(i))
        table.set(i);
    return BoolFn(n, std::move(table));
  }

  /// Builds the table from a predicate on the assignment vector.
  template <class Pred> static BoolFn from_bits(int n, Pred &&pred) {
    BitVec table(checked_size(n));
    Bits x(static_cast<std::size_t>(n), 0);
    for (std::uint64_t i = 0; i < table.size(); ++i) {
      for (int v = 1; v <= n; ++v)
        x[v - 1] = (i & var_bit(n, v)) ? 1 : 0;
      if (pred(std::span<const std::uint8_t>(x)))
        table.set(i);
    }
    return BoolFn(n, std::move(table));
  }

  int arity() const noexcept { return n_; }
  std::uint64_t domain_size() const noexcept { return table_.size(); }
  const BitVec &table() const noexcept { return table_; }
  bool at(std::uint64_t index) const noexcept { return table_.get(index); }

  BoolFn operator~() const { return BoolFn(n_, ~table_); }

  friend bool operator==(const BoolFn &, const BoolFn &) = default;

  static std::size_t checked_size(int n);

private:
  int n_ = 0;
  BitVec table_;
};

/// Partial Boolean function; `values` is zero wherever `defined` is zero.
class PartialBoolFn {
public:
  PartialBoolFn() = default;
  PartialBoolFn(int n, BitVec defined, BitVec values);
  explicit PartialBoolFn(const BoolFn &total);

  int arity() const noexcept { return n_; }
  std::uint64_t domain_size() const noexcept { return defined_.size(); }
  const BitVec &defined() const noexcept { return defined_; }
  const BitVec &values() const noexcept { return values_; }

  bool is_defined(std::uint64_t index) const noexcept {
    return defined_.get(index);
  }
  std::optional<bool> at(std::uint64_t index) const noexcept {
    if (!defined_.get(index))
      return std::nullopt;
    return values_.get(index);
  }

  friend bool operator==(const PartialBoolFn &, const PartialBoolFn &) = default;

private:
  int n_ = 0;
  BitVec defined_;
  BitVec values_;
};

bool evaluate(const BoolFn &f, std::span<const std::uint8_t> x);
std::optional<bool> evaluate(const PartialBoolFn &f,
                             std::span<const std::uint8_t> x);

/// A permutation (j_1, ..., j_n) of 1..n; position i (1-based) reads x_{j_i}.
class VarOrder {
public:
  VarOrder() = default;
  explicit VarOrder(std::vector<int> perm);

  static VarOrder identity(int n);

  int size() const noexcept { return static_cast<int>(perm_.size()); }
  /// Variable read at position `pos` (both 1-based).
  int at(int pos) const { return perm_.at(static_cast<std::size_t>(pos - 1)); }
  /// Position at which `var` is read (both 1-based).
  int position_of(int var) const {
    return inverse_.at(static_cast<std::size_t>(var - 1));
  }
  const std::vector<int> &perm() const noexcept { return perm_; }

  std::string to_string() const;
  static VarOrder parse(const std::string &text);

  friend bool operator==(const VarOrder &a, const VarOrder &b) {
    return a.perm_ == b.perm_;
  }

private:
  std::vector<int> perm_;
  std::vector<int> inverse_;
};

/// Set of variables encoded with bit (v-1) for variable v.
using VarSet = std::uint32_t;

/// (X_A, X_B): the first `cut` variables of `order` against the rest.
class Partition {
public:
  Partition(VarOrder order, int cut);

  const VarOrder &order() const noexcept { return order_; }
  int cut() const noexcept { return cut_; }
  VarSet prefix() const noexcept;

private:
  VarOrder order_;
  int cut_;
};

/// Orders to try when probing order-invariance. All n! permutations when
/// `all` is set or n <= exhaustive_up_to, otherwise `trials` uniform samples
/// drawn from a generator seeded with `seed`.
struct OrderSampling {
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  int exhaustive_up_to = 5;
  bool all = false;
};

std::vector<VarOrder> candidate_orders(int n, const OrderSampling &sampling);

/// Restriction rho: pairs (variable, value).
using Restriction = std::vector<std::pair<int, bool>>;

/// f|_rho over the remaining variables, kept in increasing index order.
BoolFn restrict(const BoolFn &f, const Restriction &rho);
PartialBoolFn restrict(const PartialBoolFn &f, const Restriction &rho);

std::string to_hex(const BoolFn &f);
BoolFn bool_fn_from_hex(int n, std::string_view hex);

struct PartialHex {
  std::string mask;
  std::string values;
};
PartialHex to_hex(const PartialBoolFn &f);
PartialBoolFn partial_fn_from_hex(int n, std::string_view mask,
                                  std::string_view values);

} // namespace obddlab
