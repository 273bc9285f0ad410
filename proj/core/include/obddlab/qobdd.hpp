/// @file  qobdd.hpp
/// @brief Dense state-vector simulation of quantum (k-)OBDDs.
///
/// A program holds one unitary pair (G0, G1) per position of its order.
/// Step i applies the pair of position i, selected by the bit of variable
/// order.at(i); a k-layer program runs the same n steps k times. A single
/// measurement at the end accepts with probability sum_{i in accept} |v_i|^2.

#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "obddlab/boolfn.hpp"

namespace obddlab {

using Complex = std::complex<double>;

inline constexpr double kUnitaryTolerance = 1e-9;
inline constexpr double kInitialNormTolerance = 1e-12;
inline constexpr double kProbabilityTolerance = 1e-9;
inline constexpr int kMaxQuantumDim = 4096;
inline constexpr int kMaxQuantumCommutativityVars = 10;

struct UnitaryPair {
  Eigen::MatrixXcd g0;
  Eigen::MatrixXcd g1;

  const Eigen::MatrixXcd &pick(bool bit) const { return bit ? g1 : g0; }
};

struct QuantumProgram {
  int n = 0;
  int dim = 0;
  VarOrder order;
  int layers = 1;
  Eigen::VectorXcd initial;
  /// steps[i] belongs to position i+1 of `order`.
  std::vector<UnitaryPair> steps;
  /// Accepting basis states, 0-based.
  std::vector<int> accept;

  /// The pair applied when variable `var` is read.
  const UnitaryPair &pair_for_var(int var) const {
    return steps[static_cast<std::size_t>(order.position_of(var) - 1)];
  }
};

struct UnitarityReport {
  double max_deviation = 0.0; ///< max over matrices of ||G^H G - I||_max
  bool pass = true;
};

UnitarityReport check_unitary(const QuantumProgram &p);

/// Throws StructuralError on shape problems, non-unitary steps or a
/// non-normalised initial vector; CapacityError above kMaxQuantumDim.
void validate(const QuantumProgram &p);

/// Validates once, then evaluates many inputs.
class Simulator {
public:
  explicit Simulator(const QuantumProgram &p);

  const QuantumProgram &program() const noexcept { return *p_; }

  Eigen::VectorXcd final_state(std::span<const std::uint8_t> x) const;
  double accept_probability(std::span<const std::uint8_t> x) const;
  /// Largest | ||state|| - 1 | seen after any step.
  double max_norm_drift(std::span<const std::uint8_t> x) const;

private:
  const QuantumProgram *p_;
};

double accept_probability(const QuantumProgram &p,
                          std::span<const std::uint8_t> x);

struct InputSampling {
  /// Exhaustive when n <= exhaustive_up_to and not forced otherwise.
  int exhaustive_up_to = 16;
  bool force_sampled = false;
  std::size_t samples = 10000;
  std::uint64_t seed = 1;
};

struct BoundedErrorVerdict {
  double min_accept_on_ones = 1.0;
  double max_accept_on_zeros = 0.0;
  std::uint64_t ones = 0;
  std::uint64_t zeros = 0;
  bool exhaustive = true;
  bool pass = false;
  std::optional<Bits> worst_one;
  std::optional<Bits> worst_zero;
};

/// Checks acceptance >= 1/2 + eps on 1-inputs and <= 1/2 - eps on 0-inputs,
/// within kProbabilityTolerance. Undefined inputs of a partial f are skipped.
BoundedErrorVerdict computes_with_bounded_error(const QuantumProgram &p,
                                                const BoolFn &f, double eps,
                                                const InputSampling &sampling = {});
BoundedErrorVerdict computes_with_bounded_error(const QuantumProgram &p,
                                                const PartialBoolFn &f,
                                                double eps,
                                                const InputSampling &sampling = {});

/// Step i of the result is the pair P applies to variable new_order.at(i).
QuantumProgram reorder_quantum(const QuantumProgram &p, const VarOrder &new_order);

/// Acceptance probabilities of every candidate reordering agree with P's on
/// all 2^n inputs within `tolerance`. n <= kMaxQuantumCommutativityVars.
bool is_commutative_quantum(const QuantumProgram &p,
                            const OrderSampling &orders = {},
                            double tolerance = kProbabilityTolerance);

/// Acceptance probability for every input, indexed like a truth table.
std::vector<double> acceptance_table(const QuantumProgram &p);

// JSON form: {"n","dim","layers","order":[..],"accept":[1-based..],
// "initial":[[re,im],..],"steps":[{"g0":[[[re,im],..],..],"g1":..},..]}
std::string to_json(const QuantumProgram &p);
QuantumProgram qobdd_from_json(const std::string &text);

} // namespace obddlab
