#include "obddlab/pointer_jumping.hpp"

#include <bit>

#include "obddlab/errors.hpp"

namespace obddlab {

int pj_word_bits(int a) {
  if (a < 2 || !std::has_single_bit(static_cast<unsigned>(a)))
    throw ParameterError("pointer jumping needs a power of two a >= 2, got " +
                         std::to_string(a));
  return std::countr_zero(static_cast<unsigned>(a));
}

void validate(const PjInstance &inst) {
  pj_word_bits(inst.a);
  const auto a = static_cast<std::size_t>(inst.a);
  if (inst.f_a.size() != a || inst.f_b.size() != a)
    throw ShapeError("f_A and f_B need one entry per vertex");
  for (int t : inst.f_a)
    if (t < inst.a || t >= 2 * inst.a)
      throw ShapeError("f_A must map into V_B");
  for (int t : inst.f_b)
    if (t < 0 || t >= inst.a)
      throw ShapeError("f_B must map into V_A");
  if (inst.v0 < 0 || inst.v0 >= inst.a)
    throw ShapeError("start vertex must lie in V_A");
}

int pj_eval(const PjInstance &inst, int k) {
  validate(inst);
  if (k < 0)
    throw ParameterError("iteration count must be >= 0");
  int v = inst.v0;
  for (int step = 0; step < k; ++step)
    v = v < inst.a ? inst.f_a[v] : inst.f_b[v - inst.a];
  return v;
}

Bits encode_pj(const PjInstance &inst) {
  validate(inst);
  const int w = pj_word_bits(inst.a);
  Bits bits(static_cast<std::size_t>(2 * inst.a * w), 0);
  for (int v = 0; v < 2 * inst.a; ++v) {
    const int local = v < inst.a ? inst.f_a[v] - inst.a : inst.f_b[v - inst.a];
    for (int t = 0; t < w; ++t)
      bits[static_cast<std::size_t>(v * w + t)] = (local >> t) & 1;
  }
  return bits;
}

PjInstance decode_pj(int a, std::span<const std::uint8_t> bits) {
  const int w = pj_word_bits(a);
  if (bits.size() != static_cast<std::size_t>(2 * a * w))
    throw ShapeError("PJ encoding for a = " + std::to_string(a) + " has " +
                     std::to_string(2 * a * w) + " bits");
  PjInstance inst;
  inst.a = a;
  for (int v = 0; v < 2 * a; ++v) {
    int local = 0;
    for (int t = 0; t < w; ++t)
      if (bits[static_cast<std::size_t>(v * w + t)])
        local |= 1 << t;
    if (v < a)
      inst.f_a.push_back(local + a);
    else
      inst.f_b.push_back(local);
  }
  return inst;
}

bool pj_bool_eval(int k, int a, std::span<const std::uint8_t> x) {
  return (std::popcount(static_cast<unsigned>(pj_eval(decode_pj(a, x), k))) & 1) != 0;
}

BoolFn pj_bool(int k, int a) {
  const int w = pj_word_bits(a);
  return BoolFn::from_bits(2 * a * w, [k, a](std::span<const std::uint8_t> x) {
    return pj_bool_eval(k, a, x);
  });
}

RpjLayout::RpjLayout(int a) : a_(a), w_(pj_word_bits(a)) {
  if (!std::has_single_bit(static_cast<unsigned>(b())))
    throw ParameterError("RPJ needs b = 2a*log2(a) to be a power of two; a = " +
                         std::to_string(a) + " gives b = " + std::to_string(b()));
}

bool rpj_eval(int k, const RpjLayout &layout, std::span<const std::uint8_t> x) {
  if (k < 0)
    throw ParameterError("iteration count must be >= 0");
  const BlockLayout blocks = layout.blocks();
  const std::vector<int> adrs = addresses(blocks, x, AddressMode::direct);
  const int a = layout.a();
  const int w = layout.w();
  auto owner = [w](int address) { return (address - 1) / w; };

  std::vector<int> bv(static_cast<std::size_t>(2 * a), 0);
  for (int i = 1; i <= blocks.q(); ++i) {
    if (!x[blocks.value_var(i) - 1])
      continue;
    const int v = owner(adrs[i - 1]);
    bv[v] = (bv[v] + (1 << (adrs[i - 1] - v * w - 1))) % a;
  }
  int r = 0;
  for (int step = 0; step < k; ++step)
    r = r < a ? bv[r] + a : bv[r];

  bool out = false;
  for (int i = 1; i <= blocks.q(); ++i)
    if (owner(adrs[i - 1]) == r && x[blocks.value_var(i) - 1])
      out = !out;
  return out;
}

BoolFn rpj(int k, const RpjLayout &layout) {
  return BoolFn::from_bits(layout.n(), [k, &layout](std::span<const std::uint8_t> x) {
    return rpj_eval(k, layout, x);
  });
}

LeveledObdd pj_2k_obdd(int k, int a, PjReadout readout) {
  if (k < 1)
    throw ParameterError("the 2k-OBDD needs k >= 1");
  const int w = pj_word_bits(a);
  const int n = 2 * a * w;
  const NodeId nodes = static_cast<NodeId>(2 * a * a);
  auto id = [a](int v, int vp) { return static_cast<NodeId>(v * a + vp); };

  LeveledObdd p;
  p.n = n;
  p.order = VarOrder::identity(n);
  p.layers = 2 * k;
  p.start = id(0, 0);

  for (int layer = 1; layer <= 2 * k; ++layer) {
    const bool step = layer <= k;
    const bool read_out = readout == PjReadout::range_xor && layer == k + 1;
    for (int j = 1; j <= n; ++j) {
      const int holder = (j - 1) / w;
      const int weight = 1 << (j - 1 - holder * w);
      Level<DetEdge> level;
      level.var = j;
      level.edges.resize(2 * static_cast<std::size_t>(nodes));
      for (int v = 0; v < 2 * a; ++v)
        for (int vp = 0; vp < a; ++vp) {
          const NodeId here = id(v, vp);
          level.edge(here, false) = here;
          level.edge(here, true) = here;
          if (v != holder)
            continue;
          if (step)
            level.edge(here, true) = id(v, (vp + weight) % a);
          else if (read_out)
            level.edge(here, true) = id(v, vp ^ 1);
        }
      p.levels.push_back(std::move(level));
    }
    if (layer < 2 * k) {
      std::vector<NodeId> junction;
      if (step) {
        junction.resize(nodes);
        for (int v = 0; v < 2 * a; ++v)
          for (int vp = 0; vp < a; ++vp)
            junction[id(v, vp)] = id(v < a ? vp + a : vp, 0);
      }
      p.junctions.push_back(std::move(junction));
    }
  }

  p.accept.resize(nodes);
  for (int v = 0; v < 2 * a; ++v)
    for (int vp = 0; vp < a; ++vp)
      p.accept[id(v, vp)] =
          readout == PjReadout::range_xor
              ? static_cast<std::uint8_t>(vp & 1)
              : static_cast<std::uint8_t>(std::popcount(static_cast<unsigned>(v)) & 1);
  validate(p);
  return p;
}

LeveledObdd rpj_2k_obdd(int k, const RpjLayout &layout) {
  const LeveledObdd source = pj_2k_obdd(k, layout.a(), PjReadout::range_xor);
  LiftOptions options;
  // Additive updates commute by construction; past the exhaustive-check
  // cap the check is skipped rather than sampled.
  options.assume_commutative = source.n > kMaxCommutativityVars;
  return reorder_obdd(source, layout.blocks(), AddressMode::direct, options);
}

} // namespace obddlab
