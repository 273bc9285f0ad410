/// @file  pointer_jumping.hpp
/// @brief Pointer jumping on V_A = {0..a-1}, V_B = {a..2a-1}, its Boolean
///        encodings PJ and RPJ, and the commutative 2k-layer OBDD for it.
///
/// Encoding: w = log2(a) bits per vertex; vertex v owns variables
/// v*w+1 .. (v+1)*w, f_A rows first, then f_B. A row stores the side-local
/// index of f(v), least significant bit first.

#pragma once

#include <span>
#include <vector>

#include "obddlab/diagrams.hpp"
#include "obddlab/reorder.hpp"

namespace obddlab {

struct PjInstance {
  int a = 2;
  std::vector<int> f_a; ///< f_a[v] in V_B for v in V_A
  std::vector<int> f_b; ///< f_b[v - a] in V_A for v in V_B
  int v0 = 0;
};

/// a must be a power of two >= 2; returns log2(a).
int pj_word_bits(int a);

void validate(const PjInstance &inst);

/// f^(k)(v0).
int pj_eval(const PjInstance &inst, int k);

Bits encode_pj(const PjInstance &inst);
PjInstance decode_pj(int a, std::span<const std::uint8_t> bits);

/// Parity of the binary label of f^(k)(0), over 2a*log2(a) encoding bits.
bool pj_bool_eval(int k, int a, std::span<const std::uint8_t> x);
BoolFn pj_bool(int k, int a);

class RpjLayout {
public:
  /// b = 2a*log2(a) must be a power of two (a in {2, 4, 16, ...}).
  explicit RpjLayout(int a);

  int a() const noexcept { return a_; }
  int w() const noexcept { return w_; }
  int b() const noexcept { return 2 * a_ * w_; }
  int n() const noexcept { return blocks().n(); }
  BlockLayout blocks() const { return BlockLayout(b()); }

private:
  int a_;
  int w_;
};

/// BV(X, v) = sum over blocks with v*w < Adr <= (v+1)*w of
/// 2^{Adr - v*w - 1} * Val, mod a; direct addressing. f_A(v) = BV + a,
/// f_B(v) = BV. Output: xor of Val over blocks whose address lies in the
/// range of r = f^(k)(0). Total on every input.
bool rpj_eval(int k, const RpjLayout &layout, std::span<const std::uint8_t> x);
BoolFn rpj(int k, const RpjLayout &layout);

/// What the final layer reports about the vertex r reached.
enum class PjReadout {
  vertex_parity, ///< parity of r's binary label (matches pj_bool)
  range_xor,     ///< xor of the encoding bits r owns (matches rpj after lifting)
};

/// Commutative 2k-OBDD over the PJ encoding, k >= 1. Nodes are pairs
/// (v, v') with id v*a + v'. Layers 1..k each run one pointer step: the
/// bits owned by v add their weights into v' mod a, and the junction after
/// the layer moves to (v' + a, 0) from V_A or (v', 0) from V_B. With
/// range_xor layer k+1 xors the bits owned by v into v'. Remaining layers
/// are identity. Width 2a*a.
LeveledObdd pj_2k_obdd(int k, int a, PjReadout readout = PjReadout::vertex_parity);

/// reorder_obdd(pj_2k_obdd(k, a, range_xor)) with direct addressing over
/// b blocks.
LeveledObdd rpj_2k_obdd(int k, const RpjLayout &layout);

} // namespace obddlab
