#include "obddlab/boolfn.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "obddlab/errors.hpp"

namespace obddlab {

std::uint64_t index_of(std::span<const std::uint8_t> x) {
  if (x.size() > 63)
    throw CapacityError("assignment longer than 63 bits has no table index");
  std::uint64_t index = 0;
  for (auto bit : x)
    index = (index << 1) | (bit ? 1U : 0U);
  return index;
}

Bits bits_of(std::uint64_t index, int n) {
  Bits x(static_cast<std::size_t>(n));
  for (int v = 1; v <= n; ++v)
    x[v - 1] = (index & var_bit(n, v)) ? 1 : 0;
  return x;
}

std::size_t BoolFn::checked_size(int n) {
  if (n < 0)
    throw ShapeError("negative arity");
  if (n > kMaxTableVars)
    throw CapacityError("truth tables are capped at " +
                        std::to_string(kMaxTableVars) + " variables, got " +
                        std::to_string(n));
  return std::size_t{1} << n;
}

BoolFn::BoolFn(int n, BitVec table) : n_(n), table_(std::move(table)) {
  if (table_.size() != checked_size(n))
    throw ShapeError("truth table length " + std::to_string(table_.size()) +
                     " does not match 2^" + std::to_string(n));
}

BoolFn BoolFn::constant(int n, bool value) {
  return BoolFn(n, BitVec(checked_size(n), value));
}

PartialBoolFn::PartialBoolFn(int n, BitVec defined, BitVec values)
    : n_(n), defined_(std::move(defined)), values_(std::move(values)) {
  const std::size_t expected = BoolFn::checked_size(n);
  if (defined_.size() != expected || values_.size() != expected)
    throw ShapeError("partial function vectors must both have length 2^" +
                     std::to_string(n));
  values_ &= defined_;
}

PartialBoolFn::PartialBoolFn(const BoolFn &total)
    : n_(total.arity()), defined_(total.domain_size(), true),
      values_(total.table()) {}

namespace {

void check_length(int n, std::span<const std::uint8_t> x) {
  if (x.size() != static_cast<std::size_t>(n))
    throw ShapeError("assignment has " + std::to_string(x.size()) +
                     " bits, function expects " + std::to_string(n));
}

} // namespace

bool evaluate(const BoolFn &f, std::span<const std::uint8_t> x) {
  check_length(f.arity(), x);
  return f.at(index_of(x));
}

std::optional<bool> evaluate(const PartialBoolFn &f,
                             std::span<const std::uint8_t> x) {
  check_length(f.arity(), x);
  return f.at(index_of(x));
}

VarOrder::VarOrder(std::vector<int> perm) : perm_(std::move(perm)) {
  const int n = static_cast<int>(perm_.size());
  inverse_.assign(perm_.size(), 0);
  for (int pos = 1; pos <= n; ++pos) {
    const int var = perm_[pos - 1];
    if (var < 1 || var > n)
      throw ShapeError("order entry " + std::to_string(var) +
                       " outside 1.." + std::to_string(n));
    if (inverse_[var - 1] != 0)
      throw ShapeError("order repeats variable " + std::to_string(var));
    inverse_[var - 1] = pos;
  }
}

VarOrder VarOrder::identity(int n) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 1);
  return VarOrder(std::move(perm));
}

std::string VarOrder::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < perm_.size(); ++i) {
    if (i != 0)
      out.push_back(',');
    out += std::to_string(perm_[i]);
  }
  return out;
}

VarOrder VarOrder::parse(const std::string &text) {
  std::vector<int> perm;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      perm.push_back(std::stoi(item, &used));
      if (used != item.size())
        throw ShapeError("bad order entry '" + item + "'");
    } catch (const std::logic_error &) {
      throw ShapeError("bad order entry '" + item + "'");
    }
  }
  return VarOrder(std::move(perm));
}

Partition::Partition(VarOrder order, int cut)
    : order_(std::move(order)), cut_(cut) {
  if (cut_ < 1 || cut_ > order_.size() - 1)
    throw ShapeError("cut " + std::to_string(cut_) + " outside 1.." +
                     std::to_string(order_.size() - 1));
}

VarSet Partition::prefix() const noexcept {
  VarSet set = 0;
  for (int pos = 1; pos <= cut_; ++pos)
    set |= VarSet{1} << (order_.at(pos) - 1);
  return set;
}

std::vector<VarOrder> candidate_orders(int n, const OrderSampling &sampling) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 1);
  std::vector<VarOrder> out;
  if (sampling.all || n <= sampling.exhaustive_up_to) {
    do {
      out.emplace_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
  }
  std::mt19937_64 rng(sampling.seed);
  out.reserve(sampling.trials);
  for (std::size_t t = 0; t < sampling.trials; ++t) {
    std::shuffle(perm.begin(), perm.end(), rng);
    out.emplace_back(perm);
  }
  return out;
}

namespace {

struct RestrictionPlan {
  std::uint64_t fixed_bits = 0; // index bits forced to 1
  std::vector<int> free_vars;   // remaining variables, increasing
};

RestrictionPlan plan_restriction(int n, const Restriction &rho) {
  std::vector<bool> assigned(static_cast<std::size_t>(n) + 1, false);
  RestrictionPlan plan;
  for (const auto &[var, value] : rho) {
    if (var < 1 || var > n)
      throw ShapeError("restriction names unknown variable " +
                       std::to_string(var));
    if (assigned[var])
      throw ShapeError("restriction assigns variable " + std::to_string(var) +
                       " twice");
    assigned[var] = true;
    if (value)
      plan.fixed_bits |= var_bit(n, var);
  }
  for (int v = 1; v <= n; ++v)
    if (!assigned[v])
      plan.free_vars.push_back(v);
  return plan;
}

std::uint64_t source_index(int n, const RestrictionPlan &plan,
                           std::uint64_t sub_index) {
  const int m = static_cast<int>(plan.free_vars.size());
  std::uint64_t index = plan.fixed_bits;
  for (int j = 1; j <= m; ++j)
    if (sub_index & var_bit(m, j))
      index |= var_bit(n, plan.free_vars[j - 1]);
  return index;
}

} // namespace

BoolFn restrict(const BoolFn &f, const Restriction &rho) {
  const int n = f.arity();
  const RestrictionPlan plan = plan_restriction(n, rho);
  const int m = static_cast<int>(plan.free_vars.size());
  return BoolFn::from_index(m, [&](std::uint64_t i) {
    return f.at(source_index(n, plan, i));
  });
}

PartialBoolFn restrict(const PartialBoolFn &f, const Restriction &rho) {
  const int n = f.arity();
  const RestrictionPlan plan = plan_restriction(n, rho);
  const int m = static_cast<int>(plan.free_vars.size());
  BitVec defined(BoolFn::checked_size(m));
  BitVec values(defined.size());
  for (std::uint64_t i = 0; i < defined.size(); ++i) {
    const std::uint64_t src = source_index(n, plan, i);
    defined.set(i, f.defined().get(src));
    values.set(i, f.values().get(src));
  }
  return PartialBoolFn(m, std::move(defined), std::move(values));
}

std::string to_hex(const BoolFn &f) { return f.table().to_hex(); }

BoolFn bool_fn_from_hex(int n, std::string_view hex) {
  try {
    return BoolFn(n, BitVec::from_hex(hex, BoolFn::checked_size(n)));
  } catch (const std::invalid_argument &e) {
    throw ShapeError(e.what());
  }
}

PartialHex to_hex(const PartialBoolFn &f) {
  return {f.defined().to_hex(), f.values().to_hex()};
}

PartialBoolFn partial_fn_from_hex(int n, std::string_view mask,
                                  std::string_view values) {
  try {
    const std::size_t size = BoolFn::checked_size(n);
    BitVec defined = BitVec::from_hex(mask, size);
    BitVec vals = BitVec::from_hex(values, size);
    if (!vals.is_subset_of(defined))
      throw ShapeError("partial function values set outside the defined mask");
    return PartialBoolFn(n, std::move(defined), std::move(vals));
  } catch (const ShapeError &) {
    throw;
  } catch (const std::invalid_argument &e) {
    throw ShapeError(e.what());
  }
}

} // namespace obddlab
