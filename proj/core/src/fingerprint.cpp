#include "obddlab/fingerprint.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "obddlab/errors.hpp"

namespace obddlab {

namespace {

// Exact targets such as 1/3 are hit only up to rounding.
constexpr double kSearchTolerance = 1e-12;

void check_multipliers(const std::vector<int> &multipliers) {
  if (multipliers.empty())
    throw ParameterError("fingerprinting needs at least one multiplier");
}

// One unitary pair per variable: identity on 0, per-machine rotations on 1.
QuantumProgram rotation_program(int n, const std::vector<int> &multipliers,
                                const std::vector<double> &base_angle) {
  const int t = static_cast<int>(multipliers.size());
  QuantumProgram p;
  p.n = n;
  p.dim = 2 * t;
  p.order = VarOrder::identity(n);
  p.initial = Eigen::VectorXcd::Zero(p.dim);
  for (int j = 0; j < t; ++j) {
    p.initial[2 * j] = 1.0 / std::sqrt(static_cast<double>(t));
    p.accept.push_back(2 * j);
  }
  const Eigen::MatrixXcd identity = Eigen::MatrixXcd::Identity(p.dim, p.dim);
  for (int v = 0; v < n; ++v) {
    Eigen::MatrixXcd g1 = Eigen::MatrixXcd::Zero(p.dim, p.dim);
    for (int j = 0; j < t; ++j) {
      const double theta = multipliers[j] * base_angle[v];
      const double c = std::cos(theta);
      const double s = std::sin(theta);
      g1(2 * j, 2 * j) = c;
      g1(2 * j, 2 * j + 1) = -s;
      g1(2 * j + 1, 2 * j) = s;
      g1(2 * j + 1, 2 * j + 1) = c;
    }
    p.steps.push_back({identity, std::move(g1)});
  }
  return p;
}

double error_for(int modulus, const std::vector<int> &ks, int delta) {
  double sum = 0.0;
  for (int k : ks) {
    const double c = std::cos(std::numbers::pi * k * delta / modulus);
    sum += c * c;
  }
  return sum / static_cast<double>(ks.size());
}

// C(m + t - 1, t) as a double; only compared against a budget.
double tuple_count(int m, int t) {
  double count = 1.0;
  for (int i = 1; i <= t; ++i)
    count = count * (m + i - 1) / i;
  return count;
}

} // namespace

QuantumProgram fingerprint_eq_qobdd(int q, const std::vector<int> &multipliers) {
  if (q < 2 || q % 2 != 0)
    throw ParameterError("the EQ fingerprint needs an even q >= 2");
  check_multipliers(multipliers);
  const int half = q / 2;
  const double modulus = std::ldexp(1.0, half);
  std::vector<double> base(static_cast<std::size_t>(q));
  for (int i = 1; i <= half; ++i) {
    const double angle = std::numbers::pi * std::ldexp(1.0, i - 1) / modulus;
    base[i - 1] = angle;
    base[half + i - 1] = -angle;
  }
  return rotation_program(q, multipliers, base);
}

QuantumProgram fingerprint_modp_qobdd(int p, int n,
                                      const std::vector<int> &multipliers) {
  if (p < 2)
    throw ParameterError("the MOD_p fingerprint needs p >= 2");
  if (n < 1)
    throw ParameterError("the MOD_p fingerprint needs n >= 1");
  check_multipliers(multipliers);
  return rotation_program(
      n, multipliers,
      std::vector<double>(static_cast<std::size_t>(n), std::numbers::pi / p));
}

double multiplier_worst_error(int modulus, const std::vector<int> &multipliers) {
  if (modulus < 2)
    throw ParameterError("modulus must be >= 2");
  check_multipliers(multipliers);
  double worst = 0.0;
  for (int delta = 1; delta < modulus; ++delta)
    worst = std::max(worst, error_for(modulus, multipliers, delta));
  return worst;
}

MultiplierSearch search_good_multipliers(int modulus, int t, double target,
                                         const SearchBudget &budget) {
  if (modulus < 2)
    throw ParameterError("modulus must be >= 2");
  if (t < 1)
    throw ParameterError("need at least one multiplier");
  MultiplierSearch result;
  auto consider = [&](const std::vector<int> &ks) {
    ++result.candidates_tried;
    const double worst = multiplier_worst_error(modulus, ks);
    if (result.multipliers.empty() || worst < result.worst_error) {
      result.worst_error = worst;
      result.multipliers = ks;
    }
    if (worst <= target + kSearchTolerance) {
      result.found = true;
      result.worst_error = worst;
      result.multipliers = ks;
    }
    return result.found;
  };

  const int m = modulus - 1;
  result.exhaustive =
      tuple_count(m, t) <= static_cast<double>(budget.max_candidates);
  if (result.exhaustive) {
    std::vector<int> ks(static_cast<std::size_t>(t), 1);
    while (true) {
      if (consider(ks))
        return result;
      int pos = t - 1;
      while (pos >= 0 && ks[pos] == m)
        --pos;
      if (pos < 0)
        break;
      ++ks[pos];
      std::fill(ks.begin() + pos + 1, ks.end(), ks[pos]);
    }
    return result;
  }

  std::mt19937_64 rng(budget.seed);
  std::uniform_int_distribution<int> pick(1, m);
  std::vector<int> ks(static_cast<std::size_t>(t));
  for (std::uint64_t i = 0; i < budget.max_candidates; ++i) {
    for (auto &k : ks)
      k = pick(rng);
    std::sort(ks.begin(), ks.end());
    if (consider(ks))
      return result;
  }
  return result;
}

} // namespace obddlab
