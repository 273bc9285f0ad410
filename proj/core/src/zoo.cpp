#include "obddlab/zoo.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "obddlab/errors.hpp"

namespace obddlab {

namespace {

bool is_prime(int m) {
  if (m < 2)
    return false;
  for (int d = 2; d * d <= m; ++d)
    if (m % d == 0)
      return false;
  return true;
}

void require_even_length(std::size_t n) {
  if (n < 2 || n % 2 != 0)
    throw ParameterError("EQ needs an even number of variables >= 2");
}

void check_padded(int n, int b, const char *name) {
  if (b < 1 || 3 * b > n)
    throw ParameterError(std::string(name) + " needs 1 <= b <= n/3, got n = " +
                         std::to_string(n) + ", b = " + std::to_string(b));
}

void check_msw(int n, int b) {
  check_padded(n, b, "MSW^b");
  if (b % 2 != 0 || n % 2 != 0)
    throw ParameterError("MSW^b needs even b and even n");
}

// q with q(log2 q + 1) == b, or 0.
int req_q_for_length(int b) {
  for (int q = 2; q * (std::countr_zero(static_cast<unsigned>(q)) + 1) <= b;
       q *= 2)
    if (q * (std::countr_zero(static_cast<unsigned>(q)) + 1) == b)
      return q;
  return 0;
}

bool selected_bit(std::span<const std::uint8_t> x, int index) {
  if (index < 1 || index > static_cast<int>(x.size()))
    return false;
  return x[static_cast<std::size_t>(index - 1)] != 0;
}

std::vector<int> complement(int n, const std::vector<bool> &read) {
  std::vector<int> out;
  for (int v = 1; v <= n; ++v)
    if (!read[v])
      out.push_back(v);
  return out;
}

} // namespace

int smallest_prime_above(int n) {
  int m = std::max(n + 1, 2);
  while (!is_prime(m))
    ++m;
  return m;
}

bool eq_eval(std::span<const std::uint8_t> x) {
  require_even_length(x.size());
  const std::size_t half = x.size() / 2;
  for (std::size_t i = 0; i < half; ++i)
    if ((x[i] != 0) != (x[half + i] != 0))
      return false;
  return true;
}

BoolFn eq(int n) {
  require_even_length(static_cast<std::size_t>(std::max(n, 0)));
  return BoolFn::from_bits(n, [](std::span<const std::uint8_t> x) {
    return eq_eval(x);
  });
}

bool req_eval(const BlockLayout &layout, std::span<const std::uint8_t> x) {
  if (x.size() != static_cast<std::size_t>(layout.n()))
    throw ShapeError("REQ input has the wrong length");
  // Adr' < q, so 2^{Adr'} fits comfortably for every desk-scale q.
  const std::vector<int> adrs = addresses(layout, x, AddressMode::prefix_xor);
  const int q = layout.q();
  std::uint64_t left = 0;
  std::uint64_t right = 0;
  for (int i = 1; i <= q; ++i) {
    if (!x[layout.value_var(i) - 1])
      continue;
    const std::uint64_t weight = std::uint64_t{1} << (adrs[i - 1] - 1);
    (i <= q / 2 ? left : right) += weight;
  }
  return left == right;
}

BoolFn req(const BlockLayout &layout) {
  return BoolFn::from_bits(layout.n(), [&](std::span<const std::uint8_t> x) {
    return req_eval(layout, x);
  });
}

bool mod_p_eval(int p, std::span<const std::uint8_t> x) {
  if (p < 2)
    throw ParameterError("MOD_p needs p >= 2");
  const auto ones = std::count_if(x.begin(), x.end(), [](auto b) { return b != 0; });
  return ones % p == 0;
}

BoolFn mod_p(int p, int n) {
  if (p < 2)
    throw ParameterError("MOD_p needs p >= 2");
  return BoolFn::from_bits(n, [p](std::span<const std::uint8_t> x) {
    return mod_p_eval(p, x);
  });
}

int weighted_sum_index(std::span<const std::uint8_t> x, int b) {
  if (b < 1 || b > static_cast<int>(x.size()))
    throw ParameterError("weighted sum over " + std::to_string(b) +
                         " bits of a " + std::to_string(x.size()) +
                         "-bit input");
  const int prime = smallest_prime_above(b);
  long long sum = 0;
  for (int i = 1; i <= b; ++i)
    if (x[static_cast<std::size_t>(i - 1)])
      sum += i;
  return static_cast<int>(sum % prime);
}

bool ws_eval(std::span<const std::uint8_t> x) {
  return selected_bit(x, weighted_sum_index(x, static_cast<int>(x.size())));
}

BoolFn ws(int n) {
  if (n < 1)
    throw ParameterError("WS needs n >= 1");
  return BoolFn::from_bits(n, [](std::span<const std::uint8_t> x) {
    return ws_eval(x);
  });
}

bool ws_b_eval(int b, std::span<const std::uint8_t> x) {
  check_padded(static_cast<int>(x.size()), b, "WS^b");
  return selected_bit(x, weighted_sum_index(x, b));
}

BoolFn ws_b(int n, int b) {
  check_padded(n, b, "WS^b");
  return BoolFn::from_bits(n, [b](std::span<const std::uint8_t> x) {
    return ws_b_eval(b, x);
  });
}

bool msw_b_eval(int b, std::span<const std::uint8_t> x) {
  const int n = static_cast<int>(x.size());
  check_msw(n, b);
  const int half = b / 2;
  const int z = weighted_sum_index(x.subspan(0, static_cast<std::size_t>(half)), half);
  const int r = weighted_sum_index(
      x.subspan(static_cast<std::size_t>(half), static_cast<std::size_t>(half)),
      half);
  if (z != r || z == 0)
    return false;
  return selected_bit(x, z) != selected_bit(x, r + n / 2);
}

BoolFn msw_b(int n, int b) {
  check_msw(n, b);
  return BoolFn::from_bits(n, [b](std::span<const std::uint8_t> x) {
    return msw_b_eval(b, x);
  });
}

bool req_b_eval(int b, std::span<const std::uint8_t> x) {
  const int q = req_q_for_length(b);
  if (q == 0 || b > static_cast<int>(x.size()))
    throw ParameterError("REQ^b needs b = q(log2 q + 1) for a power of two q, "
                         "and b <= n");
  return req_eval(BlockLayout(q), x.subspan(0, static_cast<std::size_t>(b)));
}

BoolFn req_b(int n, int b) {
  if (req_q_for_length(b) == 0 || b > n)
    throw ParameterError("REQ^b needs b = q(log2 q + 1) for a power of two q, "
                         "and b <= n");
  return BoolFn::from_bits(n, [b](std::span<const std::uint8_t> x) {
    return req_b_eval(b, x);
  });
}

std::vector<int> ws_b_padding(int n, int b) {
  check_padded(n, b, "WS^b");
  // s_b reads x_1..x_b and selects an index below p(b).
  const int last = std::min(n, std::max(b, smallest_prime_above(b) - 1));
  std::vector<bool> read(static_cast<std::size_t>(n) + 1, false);
  for (int v = 1; v <= last; ++v)
    read[v] = true;
  return complement(n, read);
}

std::vector<int> msw_b_padding(int n, int b) {
  check_msw(n, b);
  const int top = smallest_prime_above(b / 2) - 1;
  std::vector<bool> read(static_cast<std::size_t>(n) + 1, false);
  for (int v = 1; v <= std::min(n, std::max(b, top)); ++v)
    read[v] = true;
  for (int r = 1; r <= top && r + n / 2 <= n; ++r)
    read[r + n / 2] = true;
  return complement(n, read);
}

std::vector<int> req_b_padding(int n, int b) {
  if (req_q_for_length(b) == 0 || b > n)
    throw ParameterError("REQ^b needs b = q(log2 q + 1) for a power of two q, "
                         "and b <= n");
  std::vector<int> out(static_cast<std::size_t>(n - b));
  std::iota(out.begin(), out.end(), b + 1);
  return out;
}

} // namespace obddlab
