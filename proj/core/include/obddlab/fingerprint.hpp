/// @file  fingerprint.hpp
/// @brief Fingerprinting QOBDDs for EQ and MOD_p, and the multiplier search
///        that parametrises them.
///
/// Both programs run t two-dimensional rotation machines side by side in a
/// uniform superposition (dimension 2t, basis 2j and 2j+1 for machine j)
/// and accept on the states 2j. Machine j rotates by k_j times a
/// per-variable base angle, so after the whole input the acceptance
/// probability is (1/t) sum_j cos^2(pi k_j delta / M) for an integer delta
/// that is 0 mod M exactly on the 1-inputs.

#pragma once

#include <cstdint>
#include <vector>

#include "obddlab/qobdd.hpp"

namespace obddlab {

/// EQ over q variables (q even). Bit i of the first half rotates machine j
/// by +pi k_j 2^{i-1} / 2^{q/2}; bit q/2+i rotates by the negative amount.
QuantumProgram fingerprint_eq_qobdd(int q, const std::vector<int> &multipliers);

/// MOD_p over n variables: every 1 rotates machine j by pi k_j / p.
QuantumProgram fingerprint_modp_qobdd(int p, int n,
                                      const std::vector<int> &multipliers);

/// max over delta in 1..M-1 of (1/t) sum_j cos^2(pi k_j delta / M): the
/// largest acceptance probability on a 0-input.
double multiplier_worst_error(int modulus, const std::vector<int> &multipliers);

struct SearchBudget {
  /// Exhaustive over nondecreasing tuples when there are at most this many,
  /// otherwise this many uniformly random tuples.
  std::uint64_t max_candidates = 2'000'000;
  std::uint64_t seed = 1;
};

struct MultiplierSearch {
  bool found = false;
  bool exhaustive = false;
  std::vector<int> multipliers; ///< best tuple seen, even when not found
  double worst_error = 1.0;
  std::uint64_t candidates_tried = 0;
};

/// First tuple in {1..M-1}^t (nondecreasing, lexicographic when exhaustive)
/// whose worst error is <= target.
MultiplierSearch search_good_multipliers(int modulus, int t, double target,
                                         const SearchBudget &budget = {});

} // namespace obddlab
