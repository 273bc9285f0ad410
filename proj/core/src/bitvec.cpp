#include "obddlab/bitvec.hpp"

#include <bit>
#include <stdexcept>

namespace obddlab {

namespace {

constexpr std::size_t word_count(std::size_t bits) { return (bits + 63) / 64; }

int hex_digit_value(char c) {
  if (c >= '0' && c <= '9')
    return c - '0';
  if (c >= 'a' && c <= 'f')
    return c - 'a' + 10;
  if (c >= 'A' && c <= 'F')
    return c - 'A' + 10;
  return -1;
}

} // namespace

BitVec::BitVec(std::size_t size, bool value)
    : size_(size), words_(word_count(size), value ? ~std::uint64_t{0} : 0) {
  clear_tail();
}

void BitVec::clear_tail() noexcept {
  if (const std::size_t tail = size_ & 63; tail != 0 && !words_.empty())
    words_.back() &= (std::uint64_t{1} << tail) - 1;
}

std::size_t BitVec::count() const noexcept {
  std::size_t total = 0;
  for (auto w : words_)
    total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

bool BitVec::none() const noexcept {
  for (auto w : words_)
    if (w != 0)
      return false;
  return true;
}

bool BitVec::all() const noexcept { return count() == size_; }

BitVec &BitVec::operator&=(const BitVec &other) {
  if (other.size_ != size_)
    throw std::invalid_argument("BitVec size mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i)
    words_[i] &= other.words_[i];
  return *this;
}

BitVec &BitVec::operator|=(const BitVec &other) {
  if (other.size_ != size_)
    throw std::invalid_argument("BitVec size mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i)
    words_[i] |= other.words_[i];
  return *this;
}

BitVec &BitVec::operator^=(const BitVec &other) {
  if (other.size_ != size_)
    throw std::invalid_argument("BitVec size mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i)
    words_[i] ^= other.words_[i];
  return *this;
}

BitVec BitVec::operator~() const {
  BitVec out = *this;
  for (auto &w : out.words_)
    w = ~w;
  out.clear_tail();
  return out;
}

bool BitVec::is_subset_of(const BitVec &other) const {
  if (other.size_ != size_)
    throw std::invalid_argument("BitVec size mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i)
    if ((words_[i] & ~other.words_[i]) != 0)
      return false;
  return true;
}

std::size_t BitVec::hash() const noexcept {
  // FNV-1a over the words, mixed with the length.
  std::uint64_t h = 0xcbf29ce484222325ULL ^ size_;
  for (auto w : words_) {
    h ^= w;
    h *= 0x100000001b3ULL;
    h ^= h >> 29;
  }
  return static_cast<std::size_t>(h);
}

std::string BitVec::to_hex() const {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve((size_ + 3) / 4);
  for (std::size_t base = 0; base < size_; base += 4) {
    int nibble = 0;
    for (std::size_t j = 0; j < 4; ++j) {
      nibble <<= 1;
      if (base + j < size_ && get(base + j))
        nibble |= 1;
    }
    out.push_back(digits[nibble]);
  }
  return out;
}

BitVec BitVec::from_hex(std::string_view hex, std::size_t size) {
  if (hex.size() != (size + 3) / 4)
    throw std::invalid_argument("hex string has " + std::to_string(hex.size()) +
                                " digits, expected " +
                                std::to_string((size + 3) / 4));
  BitVec out(size);
  for (std::size_t d = 0; d < hex.size(); ++d) {
    const int nibble = hex_digit_value(hex[d]);
    if (nibble < 0)
      throw std::invalid_argument("invalid hex digit '" + std::string(1, hex[d]) +
                                  "'");
    for (std::size_t j = 0; j < 4; ++j) {
      const bool bit = (nibble >> (3 - j)) & 1;
      const std::size_t pos = d * 4 + j;
      if (pos < size)
        out.set(pos, bit);
      else if (bit)
        throw std::invalid_argument("nonzero padding bit in hex string");
    }
  }
  return out;
}

} // namespace obddlab
