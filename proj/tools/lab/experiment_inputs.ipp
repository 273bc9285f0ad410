#pragma once

#include "obddlab/errors.hpp"

namespace obddlab::lab {

template <class Visit>
void for_each_input(int n, const Enumeration &e, const BlockLayout *layout,
                    AddressMode mode, Visit &&visit) {
  if (e.exhaustive) {
    if (n > kMaxExhaustiveVars)
      throw CapacityError("exhaustive enumeration over " + std::to_string(n) +
                          " variables exceeds the limit of " +
                          std::to_string(kMaxExhaustiveVars));
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << n); ++i) {
      const Bits x = bits_of(i, n);
      visit(std::span<const std::uint8_t>(x));
    }
    return;
  }
  if (!e.seed)
    throw ParameterError("sampled enumeration needs a seed");
  std::mt19937_64 rng(*e.seed);
  std::bernoulli_distribution coin(0.5);
  Bits x(static_cast<std::size_t>(n));
  for (std::size_t s = 0; s < e.samples; ++s) {
    if (layout) {
      x = random_allowed_input(*layout, mode, rng);
    } else {
      for (auto &bit : x)
        bit = coin(rng) ? 1 : 0;
    }
    visit(std::span<const std::uint8_t>(x));
  }
}

} // namespace obddlab::lab
