/// @file  zoo.hpp
/// @brief Explicit functions: EQ, REQ, MOD_p, WS, WS^b, MSW^b, REQ^b.
///
/// Each function has a pointwise evaluator (`*_eval`) and a truth-table
/// builder. Index conventions for the weighted-sum family: a selected
/// index of 0 or above n yields output 0.

#pragma once

#include <span>
#include <vector>

#include "obddlab/boolfn.hpp"
#include "obddlab/reorder.hpp"

namespace obddlab {

/// Smallest prime strictly greater than n.
int smallest_prime_above(int n);

/// 1 iff the two halves of x are equal. n even, n >= 2.
bool eq_eval(std::span<const std::uint8_t> x);
BoolFn eq(int n);

/// sum_{i <= q/2} 2^{Adr'(x,i)} z^i == sum_{i > q/2} 2^{Adr'(x,i)} z^i with
/// zero-based xor addresses Adr'.
bool req_eval(const BlockLayout &layout, std::span<const std::uint8_t> x);
BoolFn req(const BlockLayout &layout);

/// 1 iff the number of ones is divisible by p.
bool mod_p_eval(int p, std::span<const std::uint8_t> x);
BoolFn mod_p(int p, int n);

/// s_b(x) = (sum_{i=1}^{b} i * x_i) mod p(b).
int weighted_sum_index(std::span<const std::uint8_t> x, int b);

/// x_{s_n(x)}.
bool ws_eval(std::span<const std::uint8_t> x);
BoolFn ws(int n);

/// x_{s_b(x)}; requires 1 <= b <= n/3.
bool ws_b_eval(int b, std::span<const std::uint8_t> x);
BoolFn ws_b(int n, int b);

/// z = s_{b/2}(x_1..x_{b/2}), r = s_{b/2}(x_{b/2+1}..x_b), both with weights
/// 1..b/2 local to their slice. Output x_z xor x_{r+n/2} when z = r > 0,
/// otherwise 0. Requires b even, 2 <= b <= n/3, n even.
bool msw_b_eval(int b, std::span<const std::uint8_t> x);
BoolFn msw_b(int n, int b);

/// REQ over the first b bits; b must equal q(log2 q + 1) for a power of
/// two q >= 2, and b <= n.
bool req_b_eval(int b, std::span<const std::uint8_t> x);
BoolFn req_b(int n, int b);

/// Variables a padded function never reads (1-based, increasing).
std::vector<int> ws_b_padding(int n, int b);
std::vector<int> msw_b_padding(int n, int b);
std::vector<int> req_b_padding(int n, int b);

} // namespace obddlab
