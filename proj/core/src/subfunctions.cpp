#include "obddlab/subfunctions.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>
#include <span>
#include <unordered_set>
#include <vector>

#include "obddlab/errors.hpp"

namespace obddlab {

namespace {

/// Restricted tables for every assignment to a prefix set, stored flat.
/// Each row occupies `stride` words: the value words, then (for partial
/// functions) the defined-mask words.
struct RowTable {
  std::size_t words_per_part = 0;
  std::size_t stride = 0;
  std::size_t rows = 0;
  std::vector<std::uint64_t> data;

  std::span<const std::uint64_t> row(std::size_t r) const {
    return {data.data() + r * stride, stride};
  }
  std::span<const std::uint64_t> values(std::size_t r) const {
    return {data.data() + r * stride, words_per_part};
  }
  std::span<const std::uint64_t> defined(std::size_t r) const {
    return {data.data() + r * stride + words_per_part, words_per_part};
  }
};

std::uint64_t index_mask(int n, VarSet vars) {
  std::uint64_t mask = 0;
  for (int v = 1; v <= n; ++v)
    if (vars & (VarSet{1} << (v - 1)))
      mask |= var_bit(n, v);
  return mask;
}

void check_prefix(int n, VarSet prefix) {
  if (n < 32 && (prefix >> n) != 0)
    throw ShapeError("prefix set names a variable beyond arity " +
                     std::to_string(n));
}

/// Enumerates the submasks of `mask` in increasing order; this is the
/// bit-deposit of 0, 1, 2, ... into the positions of `mask`.
template <class Fn> void for_each_submask(std::uint64_t mask, Fn &&fn) {
  std::uint64_t sub = 0;
  do {
    fn(sub);
    sub = (sub - mask) & mask;
  } while (sub != 0);
}

RowTable build_rows(int n, VarSet prefix, const BitVec &values,
                    const BitVec *defined) {
  const std::uint64_t full = (n == 64) ? ~0ULL : ((std::uint64_t{1} << n) - 1);
  const std::uint64_t a_mask = index_mask(n, prefix);
  const std::uint64_t b_mask = full & ~a_mask;
  const int prefix_size = std::popcount(a_mask);
  const std::size_t row_len = std::size_t{1} << (n - prefix_size);

  RowTable t;
  t.words_per_part = (row_len + 63) / 64;
  t.stride = t.words_per_part * (defined ? 2 : 1);
  t.rows = std::size_t{1} << prefix_size;
  t.data.assign(t.rows * t.stride, 0);

  std::size_t r = 0;
  for_each_submask(a_mask, [&](std::uint64_t a) {
    std::uint64_t *vrow = t.data.data() + r * t.stride;
    std::uint64_t *drow = vrow + t.words_per_part;
    std::size_t j = 0;
    for_each_submask(b_mask, [&](std::uint64_t b) {
      const std::uint64_t idx = a | b;
      const std::uint64_t bit = std::uint64_t{1} << (j & 63);
      if (values.get(idx))
        vrow[j >> 6] |= bit;
      if (defined && defined->get(idx))
        drow[j >> 6] |= bit;
      ++j;
    });
    ++r;
  });
  return t;
}

struct RowHash {
  const RowTable *table;
  std::size_t operator()(std::size_t r) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (auto w : table->row(r)) {
      h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

struct RowEqual {
  const RowTable *table;
  bool operator()(std::size_t a, std::size_t b) const noexcept {
    auto ra = table->row(a);
    auto rb = table->row(b);
    return std::equal(ra.begin(), ra.end(), rb.begin());
  }
};

/// Indices of pairwise different rows (full comparison on hash collision).
std::vector<std::size_t> distinct_rows(const RowTable &t) {
  std::unordered_set<std::size_t, RowHash, RowEqual> seen(
      t.rows, RowHash{&t}, RowEqual{&t});
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < t.rows; ++r)
    if (seen.insert(r).second)
      out.push_back(r);
  return out;
}

// ---------------------------------------------------------------------------
// Maximum clique on the conflict graph of partial rows.

class Bitset {
public:
  explicit Bitset(std::size_t n = 0) : words_((n + 63) / 64, 0) {}
  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) {
    words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
  }
  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
  bool any() const {
    return std::any_of(words_.begin(), words_.end(),
                       [](std::uint64_t w) { return w != 0; });
  }
  std::size_t first() const {
    for (std::size_t k = 0; k < words_.size(); ++k)
      if (words_[k] != 0)
        return k * 64 + static_cast<std::size_t>(std::countr_zero(words_[k]));
    return std::numeric_limits<std::size_t>::max();
  }
  Bitset &and_with(const Bitset &o) {
    for (std::size_t k = 0; k < words_.size(); ++k)
      words_[k] &= o.words_[k];
    return *this;
  }
  Bitset &and_not(const Bitset &o) {
    for (std::size_t k = 0; k < words_.size(); ++k)
      words_[k] &= ~o.words_[k];
    return *this;
  }

private:
  std::vector<std::uint64_t> words_;
};

/// Branch and bound with greedy colouring bounds.
class MaxClique {
public:
  explicit MaxClique(std::vector<Bitset> adjacency)
      : adj_(std::move(adjacency)) {}

  std::size_t solve() {
    const std::size_t n = adj_.size();
    if (n == 0)
      return 0;
    Bitset all(n);
    for (std::size_t v = 0; v < n; ++v)
      all.set(v);
    best_ = 1;
    expand(all, 0);
    return best_;
  }

private:
  void colour_sort(Bitset pool, std::vector<std::size_t> &order,
                   std::vector<std::size_t> &bound) const {
    std::size_t colour = 0;
    while (pool.any()) {
      ++colour;
      Bitset candidates = pool;
      while (candidates.any()) {
        const std::size_t v = candidates.first();
        candidates.reset(v);
        candidates.and_not(adj_[v]);
        pool.reset(v);
        order.push_back(v);
        bound.push_back(colour);
      }
    }
  }

  void expand(Bitset pool, std::size_t depth) {
    std::vector<std::size_t> order;
    std::vector<std::size_t> bound;
    colour_sort(pool, order, bound);
    for (std::size_t i = order.size(); i-- > 0;) {
      if (depth + bound[i] <= best_)
        return;
      const std::size_t v = order[i];
      Bitset next = pool;
      next.and_with(adj_[v]);
      if (next.any())
        expand(next, depth + 1);
      else
        best_ = std::max(best_, depth + 1);
      pool.reset(v);
    }
  }

  std::vector<Bitset> adj_;
  std::size_t best_ = 0;
};

bool conflict(const RowTable &t, std::size_t a, std::size_t b) {
  auto va = t.values(a), vb = t.values(b);
  auto da = t.defined(a), db = t.defined(b);
  for (std::size_t k = 0; k < t.words_per_part; ++k)
    if ((da[k] & db[k] & (va[k] ^ vb[k])) != 0)
      return true;
  return false;
}

/// Row `a` is dominated by `b` when b is defined wherever a is and agrees
/// there; any witness against `a` is then a witness against `b`.
bool dominated_by(const RowTable &t, std::size_t a, std::size_t b) {
  auto va = t.values(a), vb = t.values(b);
  auto da = t.defined(a), db = t.defined(b);
  for (std::size_t k = 0; k < t.words_per_part; ++k) {
    if ((da[k] & ~db[k]) != 0)
      return false;
    if ((da[k] & (va[k] ^ vb[k])) != 0)
      return false;
  }
  return true;
}

std::uint64_t count_pairwise_distinct(const RowTable &t) {
  const std::vector<std::size_t> rows = distinct_rows(t);
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < rows.size() && !dominated; ++j)
      if (i != j && dominated_by(t, rows[i], rows[j]))
        dominated = true;
    if (!dominated)
      keep.push_back(rows[i]);
  }
  if (keep.empty())
    return 1;
  std::vector<Bitset> adj(keep.size(), Bitset(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i)
    for (std::size_t j = i + 1; j < keep.size(); ++j)
      if (conflict(t, keep[i], keep[j])) {
        adj[i].set(j);
        adj[j].set(i);
      }
  return MaxClique(std::move(adj)).solve();
}

// ---------------------------------------------------------------------------

template <class Fn> MinWidth subset_dp(int n, Fn &&count) {
  if (n > kMaxMinWidthVars)
    throw CapacityError("exact minimum width is capped at " +
                        std::to_string(kMaxMinWidthVars) + " variables, got " +
                        std::to_string(n));
  MinWidth result;
  result.order = VarOrder::identity(n);
  if (n < 2)
    return result;

  const VarSet full = (VarSet{1} << n) - 1;
  const std::size_t states = std::size_t{1} << n;
  std::vector<std::uint64_t> best(states, std::numeric_limits<std::uint64_t>::max());
  std::vector<std::int8_t> last(states, -1);
  best[0] = 1;
  // Increasing integer order visits every subset after all of its subsets.
  for (VarSet s = 1; s <= full; ++s) {
    std::uint64_t via = std::numeric_limits<std::uint64_t>::max();
    for (int v = 0; v < n; ++v) {
      if (!(s & (VarSet{1} << v)))
        continue;
      const std::uint64_t prev = best[s & ~(VarSet{1} << v)];
      if (prev < via) {
        via = prev;
        last[s] = static_cast<std::int8_t>(v);
      }
    }
    best[s] = (s == full) ? via : std::max(via, count(s));
  }

  std::vector<int> perm(static_cast<std::size_t>(n));
  VarSet s = full;
  for (int pos = n; pos >= 1; --pos) {
    const int v = last[s];
    perm[pos - 1] = v + 1;
    s &= ~(VarSet{1} << v);
  }
  result.value = best[full];
  result.order = VarOrder(std::move(perm));
  return result;
}

template <class Fn> MinWidth enumerate_orders(int n, Fn &&n_pi_of) {
  if (n > kMaxEnumerationVars)
    throw CapacityError("order enumeration is capped at " +
                        std::to_string(kMaxEnumerationVars) +
                        " variables, got " + std::to_string(n));
  MinWidth result;
  result.value = std::numeric_limits<std::uint64_t>::max();
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 1);
  do {
    VarOrder order(perm);
    const std::uint64_t value = n_pi_of(order);
    if (value < result.value) {
      result.value = value;
      result.order = order;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return result;
}

} // namespace

std::uint64_t subfunction_count(const BoolFn &f, VarSet prefix) {
  check_prefix(f.arity(), prefix);
  const RowTable t = build_rows(f.arity(), prefix, f.table(), nullptr);
  return distinct_rows(t).size();
}

std::uint64_t subfunction_count(const PartialBoolFn &f, VarSet prefix) {
  check_prefix(f.arity(), prefix);
  const RowTable t =
      build_rows(f.arity(), prefix, f.values(), &f.defined());
  return count_pairwise_distinct(t);
}

std::uint64_t subfunction_count(const BoolFn &f, const Partition &theta) {
  if (theta.order().size() != f.arity())
    throw ShapeError("partition order length differs from function arity");
  return subfunction_count(f, theta.prefix());
}

std::uint64_t subfunction_count(const PartialBoolFn &f,
                                const Partition &theta) {
  if (theta.order().size() != f.arity())
    throw ShapeError("partition order length differs from function arity");
  return subfunction_count(f, theta.prefix());
}

namespace {

template <class F> std::uint64_t n_pi_impl(const F &f, const VarOrder &order) {
  if (order.size() != f.arity())
    throw ShapeError("order length differs from function arity");
  std::uint64_t best = 1;
  for (int cut = 1; cut < f.arity(); ++cut)
    best = std::max(best, subfunction_count(f, Partition(order, cut)));
  return best;
}

} // namespace

std::uint64_t n_pi(const BoolFn &f, const VarOrder &order) {
  return n_pi_impl(f, order);
}

std::uint64_t n_pi(const PartialBoolFn &f, const VarOrder &order) {
  return n_pi_impl(f, order);
}

MinWidth n_min(const BoolFn &f) {
  return subset_dp(f.arity(),
                   [&](VarSet s) { return subfunction_count(f, s); });
}

MinWidth n_min(const PartialBoolFn &f) {
  return subset_dp(f.arity(),
                   [&](VarSet s) { return subfunction_count(f, s); });
}

MinWidth n_min_enumerate(const BoolFn &f) {
  return enumerate_orders(f.arity(),
                          [&](const VarOrder &o) { return n_pi(f, o); });
}

MinWidth n_min_enumerate(const PartialBoolFn &f) {
  return enumerate_orders(f.arity(),
                          [&](const VarOrder &o) { return n_pi(f, o); });
}

} // namespace obddlab
