#include "obddlab/qobdd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "obddlab/errors.hpp"

namespace obddlab {

namespace {

double unitary_deviation(const Eigen::MatrixXcd &g) {
  const Eigen::MatrixXcd product = g.adjoint() * g;
  return (product - Eigen::MatrixXcd::Identity(g.rows(), g.cols()))
      .cwiseAbs()
      .maxCoeff();
}

double accepted_mass(const QuantumProgram &p, const Eigen::VectorXcd &v) {
  double total = 0.0;
  for (int i : p.accept)
    total += std::norm(v[i]);
  return std::clamp(total, 0.0, 1.0);
}

void check_input(const QuantumProgram &p, std::span<const std::uint8_t> x) {
  if (x.size() != static_cast<std::size_t>(p.n))
    throw ShapeError("assignment has " + std::to_string(x.size()) +
                     " bits, program expects " + std::to_string(p.n));
}

} // namespace

UnitarityReport check_unitary(const QuantumProgram &p) {
  UnitarityReport report;
  for (const auto &step : p.steps) {
    for (const auto *g : {&step.g0, &step.g1}) {
      if (g->rows() != g->cols() || g->rows() != p.dim) {
        report.max_deviation = std::numeric_limits<double>::infinity();
        continue;
      }
      report.max_deviation = std::max(report.max_deviation, unitary_deviation(*g));
    }
  }
  report.pass = report.max_deviation <= kUnitaryTolerance;
  return report;
}

void validate(const QuantumProgram &p) {
  if (p.dim < 1)
    throw StructuralError("quantum program needs dimension >= 1");
  if (p.dim > kMaxQuantumDim)
    throw CapacityError("dimension " + std::to_string(p.dim) +
                        " exceeds the cap of " + std::to_string(kMaxQuantumDim));
  if (p.n < 1 || p.order.size() != p.n)
    throw StructuralError("order length must equal n >= 1");
  if (p.layers < 1)
    throw StructuralError("quantum program needs at least one layer");
  if (p.steps.size() != static_cast<std::size_t>(p.n))
    throw StructuralError("expected " + std::to_string(p.n) +
                          " unitary pairs, found " +
                          std::to_string(p.steps.size()));
  if (p.initial.size() != p.dim)
    throw StructuralError("initial vector has the wrong dimension");
  if (std::abs(p.initial.norm() - 1.0) > kInitialNormTolerance)
    throw StructuralError("initial vector is not a unit vector");
  for (int i : p.accept)
    if (i < 0 || i >= p.dim)
      throw StructuralError("accepting state " + std::to_string(i + 1) +
                            " outside 1.." + std::to_string(p.dim));
  for (std::size_t i = 0; i < p.steps.size(); ++i)
    for (const auto *g : {&p.steps[i].g0, &p.steps[i].g1}) {
      if (g->rows() != p.dim || g->cols() != p.dim)
        throw StructuralError("step " + std::to_string(i + 1) +
                              " has a matrix of the wrong shape");
      const double dev = unitary_deviation(*g);
      if (dev > kUnitaryTolerance)
        throw StructuralError("step " + std::to_string(i + 1) +
                              " is not unitary (deviation " +
                              std::to_string(dev) + ")");
    }
}

Simulator::Simulator(const QuantumProgram &p) : p_(&p) { validate(p); }

Eigen::VectorXcd Simulator::final_state(std::span<const std::uint8_t> x) const {
  check_input(*p_, x);
  Eigen::VectorXcd v = p_->initial;
  Eigen::VectorXcd next(v.size());
  for (int layer = 0; layer < p_->layers; ++layer)
    for (int pos = 1; pos <= p_->n; ++pos) {
      const bool bit = x[p_->order.at(pos) - 1] != 0;
      next.noalias() = p_->steps[pos - 1].pick(bit) * v;
      v.swap(next);
    }
  return v;
}

double Simulator::accept_probability(std::span<const std::uint8_t> x) const {
  return accepted_mass(*p_, final_state(x));
}

double Simulator::max_norm_drift(std::span<const std::uint8_t> x) const {
  check_input(*p_, x);
  Eigen::VectorXcd v = p_->initial;
  Eigen::VectorXcd next(v.size());
  double drift = std::abs(v.norm() - 1.0);
  for (int layer = 0; layer < p_->layers; ++layer)
    for (int pos = 1; pos <= p_->n; ++pos) {
      const bool bit = x[p_->order.at(pos) - 1] != 0;
      next.noalias() = p_->steps[pos - 1].pick(bit) * v;
      v.swap(next);
      drift = std::max(drift, std::abs(v.norm() - 1.0));
    }
  return drift;
}

double accept_probability(const QuantumProgram &p,
                          std::span<const std::uint8_t> x) {
  return Simulator(p).accept_probability(x);
}

namespace {

// Single-layer programs share prefixes: walk the input tree in order
// position, one matrix-vector product per tree edge.
void walk(const QuantumProgram &p, int pos, std::uint64_t index,
          const Eigen::VectorXcd &v, std::vector<double> &out) {
  if (pos > p.n) {
    out[index] = accepted_mass(p, v);
    return;
  }
  const std::uint64_t bit = var_bit(p.n, p.order.at(pos));
  const auto &step = p.steps[pos - 1];
  walk(p, pos + 1, index, step.g0 * v, out);
  walk(p, pos + 1, index | bit, step.g1 * v, out);
}

} // namespace

std::vector<double> acceptance_table(const QuantumProgram &p) {
  validate(p);
  std::vector<double> out(BoolFn::checked_size(p.n));
  if (p.layers == 1) {
    walk(p, 1, 0, p.initial, out);
    return out;
  }
  const Simulator sim(p);
  for (std::uint64_t i = 0; i < out.size(); ++i)
    out[i] = sim.accept_probability(bits_of(i, p.n));
  return out;
}

namespace {

template <class Lookup>
BoundedErrorVerdict bounded_error(const QuantumProgram &p, int n,
                                  Lookup &&lookup, double eps,
                                  const InputSampling &sampling) {
  if (n != p.n)
    throw ShapeError("function arity differs from the program's n");
  const Simulator sim(p);
  BoundedErrorVerdict verdict;
  verdict.exhaustive = !sampling.force_sampled && n <= sampling.exhaustive_up_to;

  auto visit = [&](const Bits &x) {
    const std::optional<bool> want = lookup(x);
    if (!want)
      return;
    const double pr = sim.accept_probability(x);
    if (*want) {
      ++verdict.ones;
      if (!verdict.worst_one || pr < verdict.min_accept_on_ones) {
        verdict.min_accept_on_ones = pr;
        verdict.worst_one = x;
      }
    } else {
      ++verdict.zeros;
      if (!verdict.worst_zero || pr > verdict.max_accept_on_zeros) {
        verdict.max_accept_on_zeros = pr;
        verdict.worst_zero = x;
      }
    }
  };

  if (verdict.exhaustive) {
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t i = 0; i < total; ++i)
      visit(bits_of(i, n));
  } else {
    std::mt19937_64 rng(sampling.seed);
    Bits x(static_cast<std::size_t>(n));
    for (std::size_t s = 0; s < sampling.samples; ++s) {
      for (auto &b : x)
        b = static_cast<std::uint8_t>(rng() & 1U);
      visit(x);
    }
  }
  verdict.pass =
      verdict.min_accept_on_ones >= 0.5 + eps - kProbabilityTolerance &&
      verdict.max_accept_on_zeros <= 0.5 - eps + kProbabilityTolerance;
  return verdict;
}

} // namespace

BoundedErrorVerdict computes_with_bounded_error(const QuantumProgram &p,
                                                const BoolFn &f, double eps,
                                                const InputSampling &sampling) {
  return bounded_error(
      p, f.arity(),
      [&](const Bits &x) { return std::optional<bool>(evaluate(f, x)); }, eps,
      sampling);
}

BoundedErrorVerdict computes_with_bounded_error(const QuantumProgram &p,
                                                const PartialBoolFn &f,
                                                double eps,
                                                const InputSampling &sampling) {
  return bounded_error(
      p, f.arity(), [&](const Bits &x) { return evaluate(f, x); }, eps,
      sampling);
}

QuantumProgram reorder_quantum(const QuantumProgram &p,
                               const VarOrder &new_order) {
  if (new_order.size() != p.n)
    throw ShapeError("new order length differs from n");
  QuantumProgram out = p;
  out.order = new_order;
  for (int i = 1; i <= p.n; ++i)
    out.steps[i - 1] = p.pair_for_var(new_order.at(i));
  return out;
}

bool is_commutative_quantum(const QuantumProgram &p,
                            const OrderSampling &orders, double tolerance) {
  if (p.n > kMaxQuantumCommutativityVars)
    throw CapacityError("quantum commutativity is checked only up to " +
                        std::to_string(kMaxQuantumCommutativityVars) +
                        " variables");
  const std::vector<double> reference = acceptance_table(p);
  for (const VarOrder &order : candidate_orders(p.n, orders)) {
    const std::vector<double> moved = acceptance_table(reorder_quantum(p, order));
    for (std::size_t i = 0; i < reference.size(); ++i)
      if (std::abs(moved[i] - reference[i]) > tolerance)
        return false;
  }
  return true;
}

} // namespace obddlab
