/// @file  bitvec.hpp
/// @brief Packed fixed-length bit vector

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace obddlab {

/// Fixed-length packed bit vector. Bit `i` lives in word `i / 64`, bit
/// `i % 64`; unused high bits of the last word are kept zero so that word
/// comparison and hashing are exact.
class BitVec {
public:
  BitVec() = default;
  explicit BitVec(std::size_t size, bool value = false);

  std::size_t size() const noexcept { return size_; }

  bool get(std::size_t i) const noexcept {
    return (words_[i >> 6] >> (i & 63)) & 1U;
  }
  void set(std::size_t i, bool value = true) noexcept {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (value)
      words_[i >> 6] |= mask;
    else
      words_[i >> 6] &= ~mask;
  }

  std::size_t count() const noexcept;
  bool none() const noexcept;
  bool all() const noexcept;

  BitVec &operator&=(const BitVec &other);
  BitVec &operator|=(const BitVec &other);
  BitVec &operator^=(const BitVec &other);
  BitVec operator~() const;

  /// True iff every set bit of `*this` is also set in `other`.
  bool is_subset_of(const BitVec &other) const;

  const std::vector<std::uint64_t> &words() const noexcept { return words_; }

  std::size_t hash() const noexcept;

  /// Hex text, most significant nibble first, where the first bit of the
  /// vector (index 0) is the most significant bit of the first digit.
  /// Trailing padding bits are zero.
  std::string to_hex() const;
  static BitVec from_hex(std::string_view hex, std::size_t size);

  friend bool operator==(const BitVec &, const BitVec &) = default;

private:
  void clear_tail() noexcept;

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

} // namespace obddlab

template <> struct std::hash<obddlab::BitVec> {
  std::size_t operator()(const obddlab::BitVec &v) const noexcept {
    return v.hash();
  }
};
