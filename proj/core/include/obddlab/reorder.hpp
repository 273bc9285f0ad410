/// @file  reorder.hpp
/// @brief Block-addressed input encodings and the transforms that lift a
///        function or a commutative program to them.
///
/// An encoded input has q blocks; block i is p = log2(q) address bits
/// y^i_1..y^i_p (most significant first) followed by one value bit z^i, so
/// n = q(p+1) and x_{(i-1)(p+1)+j} = y^i_j, x_{i(p+1)} = z^i.
///
/// Direct addressing: Adr(X,i) = bin(y^i) + 1.
/// Xor addressing:    Adr'(X,i) = Adr'(X,i-1) xor bin(y^i), Adr'(X,0) = 0,
///                    Adr(X,i) = Adr'(X,i) + 1.
///
/// An input is allowed when its q addresses are a permutation of 1..q; the
/// value bit of the block with address a then plays the role of variable
/// x_a of the original function.

#pragma once

#include <vector>

#include "obddlab/diagrams.hpp"
#include "obddlab/qobdd.hpp"

namespace obddlab {

enum class AddressMode { direct, prefix_xor };

const char *to_string(AddressMode mode) noexcept;
/// Accepts "direct" and "xor".
AddressMode parse_address_mode(const std::string &text);

class BlockLayout {
public:
  /// q must be a power of two, q >= 2.
  explicit BlockLayout(int q);

  int q() const noexcept { return q_; }
  int p() const noexcept { return p_; }
  int n() const noexcept { return q_ * (p_ + 1); }

  /// Variable index of y^block_j (block and j are 1-based).
  int address_var(int block, int j) const { return (block - 1) * (p_ + 1) + j; }
  /// Variable index of z^block.
  int value_var(int block) const { return block * (p_ + 1); }

private:
  int q_;
  int p_;
};

/// bin(y^block), 0-based, without any accumulation.
int address_field(const BlockLayout &layout, std::span<const std::uint8_t> x,
                  int block);

/// Adr(X, block) in 1..q.
int adr(const BlockLayout &layout, std::span<const std::uint8_t> x, int block,
        AddressMode mode);

/// Adr(X, 1..q) in block order.
std::vector<int> addresses(const BlockLayout &layout,
                           std::span<const std::uint8_t> x, AddressMode mode);

bool is_allowed(const BlockLayout &layout, std::span<const std::uint8_t> x,
                AddressMode mode);

/// Value bits of the blocks, routed to the variables their addresses name.
/// Only meaningful on allowed inputs.
Bits route_values(const BlockLayout &layout, std::span<const std::uint8_t> x,
                  AddressMode mode);

/// f' (direct) or f'' (xor) over layout.n() variables, defined exactly on
/// the allowed inputs.
PartialBoolFn reorder_function(const BoolFn &f, const BlockLayout &layout,
                               AddressMode mode);

struct LiftOptions {
  /// Reject programs that fail is_commutative. Programs over more than
  /// kMaxCommutativityVars variables cannot be checked; those need
  /// `assume_commutative`.
  bool assume_commutative = false;
  CommutativityOptions commutativity;
};

/// Lifts a commutative program over q variables to the encoded input.
/// Each transition level has q * D nodes, node (a, s) having id a * D + s,
/// where D is the level size of normalized(P). Address bits accumulate into
/// a; the value bit applies P's table for variable a + 1 to s. Direct mode
/// resets a to 0 after the value bit; xor mode carries it to the next
/// block and resets it only between layers. The final level is P's.
LeveledObdd reorder_obdd(const LeveledObdd &p, const BlockLayout &layout,
                         AddressMode mode, const LiftOptions &options = {});
Nobdd reorder_nobdd(const Nobdd &p, const BlockLayout &layout, AddressMode mode,
                    const LiftOptions &options = {});
Pobdd reorder_pobdd(const Pobdd &p, const BlockLayout &layout, AddressMode mode,
                    const LiftOptions &options = {});

/// Quantum lift for xor addressing. The result has dimension g * q with
/// basis state a * g + s; address bit j flips bit (p - j) of a, the value
/// bit applies diag(G_1, ..., G_q) where G_a is P's pair for variable a.
/// Single-layer programs only: the address register cannot be cleared
/// unitarily between layers.
QuantumProgram xor_reorder_qobdd(const QuantumProgram &p,
                                 const BlockLayout &layout,
                                 const OrderSampling &orders = {});

/// fp where defined, the program's output elsewhere. Probabilistic and
/// quantum outputs round at 1/2 with ties going to 0. Throws
/// ConsistencyError if the program disagrees with fp on a defined input.
BoolFn totalize(const PartialBoolFn &fp, const LeveledObdd &p);
BoolFn totalize(const PartialBoolFn &fp, const Nobdd &p);
BoolFn totalize(const PartialBoolFn &fp, const Pobdd &p);
BoolFn totalize(const PartialBoolFn &fp, const QuantumProgram &p);

/// Rounding used by totalize.
inline bool round_probability(double pr) noexcept { return pr > 0.5; }

} // namespace obddlab
