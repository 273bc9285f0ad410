#include <doctest.h>

#include <cmath>
#include <numbers>

#include "obddlab/errors.hpp"
#include "obddlab/fingerprint.hpp"
#include "obddlab/qobdd.hpp"
#include "obddlab/zoo.hpp"

using namespace obddlab;

namespace {

QuantumProgram identity_program(int n, int dim, std::vector<int> accept) {
  QuantumProgram p;
  p.n = n;
  p.dim = dim;
  p.order = VarOrder::identity(n);
  p.initial = Eigen::VectorXcd::Zero(dim);
  p.initial[0] = 1.0;
  p.accept = std::move(accept);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim, dim);
  p.steps.assign(static_cast<std::size_t>(n), {id, id});
  return p;
}

Eigen::MatrixXcd rotation(double theta) {
  Eigen::MatrixXcd r(2, 2);
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

// Hadamard for x1, a pi/4 rotation for x2.
QuantumProgram noncommutative() {
  QuantumProgram p = identity_program(2, 2, {0});
  const double h = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXcd had(2, 2);
  had << h, h, h, -h;
  p.steps[0].g1 = had;
  p.steps[1].g1 = rotation(std::numbers::pi / 4);
  return p;
}

} // namespace

TEST_CASE("accept_probability closed forms") {
  const QuantumProgram id = identity_program(3, 2, {0});
  for (std::uint64_t i = 0; i < 8; ++i)
    CHECK(accept_probability(id, bits_of(i, 3)) == doctest::Approx(1.0));

  // The MOD_2 machine: each 1 rotates by pi/2.
  QuantumProgram mod2 = identity_program(3, 2, {0});
  for (auto &s : mod2.steps)
    s.g1 = rotation(std::numbers::pi / 2);
  CHECK(accept_probability(mod2, Bits{1, 0, 0}) == doctest::Approx(0.0));
  CHECK(accept_probability(mod2, Bits{1, 1, 0}) == doctest::Approx(1.0));
  CHECK(accept_probability(mod2, Bits{0, 0, 0}) == doctest::Approx(1.0));

  const QuantumProgram all = identity_program(2, 3, {0, 1, 2});
  CHECK(accept_probability(all, Bits{1, 0}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(accept_probability(id, Bits{1}), ShapeError);
}

TEST_CASE("check_unitary") {
  const QuantumProgram id = identity_program(2, 2, {0});
  CHECK(check_unitary(id).max_deviation == 0.0);
  CHECK(check_unitary(id).pass);

  QuantumProgram rot = identity_program(2, 2, {0});
  rot.steps[0].g1 = rotation(0.3);
  rot.steps[1].g1 = rotation(-1.7);
  CHECK(check_unitary(rot).max_deviation <= 1e-12);

  QuantumProgram scaled = identity_program(1, 2, {0});
  scaled.steps[0].g1 = 1.1 * Eigen::MatrixXcd::Identity(2, 2);
  CHECK_FALSE(check_unitary(scaled).pass);
  CHECK_THROWS_AS(validate(scaled), StructuralError);
  CHECK_THROWS_AS(Simulator{scaled}, StructuralError);

  QuantumProgram unnormalised = identity_program(1, 2, {0});
  unnormalised.initial[1] = 1.0;
  CHECK_THROWS_AS(validate(unnormalised), StructuralError);
}

TEST_CASE("norm is conserved after every step") {
  const QuantumProgram p = fingerprint_eq_qobdd(4, {1, 1, 2});
  const Simulator sim(p);
  for (std::uint64_t i = 0; i < 16; ++i)
    CHECK(sim.max_norm_drift(bits_of(i, 4)) <= 1e-9);
}

TEST_CASE("computes_with_bounded_error") {
  const QuantumProgram all = identity_program(3, 2, {0, 1});
  CHECK(computes_with_bounded_error(all, BoolFn::constant(3, true), 0.5).pass);

  const std::vector<int> ks = {1, 1, 2};
  const double worst = multiplier_worst_error(4, ks);
  const QuantumProgram fp = fingerprint_eq_qobdd(4, ks);
  const BoundedErrorVerdict v = computes_with_bounded_error(fp, eq(4), 0.5 - worst);
  CHECK(v.pass);
  CHECK(v.exhaustive);
  CHECK(v.min_accept_on_ones == doctest::Approx(1.0));
  CHECK(v.ones + v.zeros == 16);
  CHECK_FALSE(computes_with_bounded_error(fp, ~eq(4), 0.5 - worst).pass);

  InputSampling sampled;
  sampled.force_sampled = true;
  sampled.samples = 50;
  const BoundedErrorVerdict s = computes_with_bounded_error(fp, eq(4), 0.5 - worst, sampled);
  CHECK_FALSE(s.exhaustive);
  CHECK(s.ones + s.zeros == 50);
}

TEST_CASE("reorder_quantum") {
  const QuantumProgram fp = fingerprint_eq_qobdd(4, {1, 1, 2});
  const QuantumProgram same = reorder_quantum(fp, fp.order);
  CHECK(same.order == fp.order);
  for (std::size_t i = 0; i < fp.steps.size(); ++i)
    CHECK(same.steps[i].g1.isApprox(fp.steps[i].g1));

  const VarOrder perm({3, 1, 4, 2});
  const QuantumProgram moved = reorder_quantum(fp, perm);
  const QuantumProgram back = reorder_quantum(moved, fp.order);
  for (std::size_t i = 0; i < fp.steps.size(); ++i)
    CHECK(back.steps[i].g1.isApprox(fp.steps[i].g1));
  for (std::uint64_t i = 0; i < 16; ++i)
    CHECK(accept_probability(moved, bits_of(i, 4)) ==
          doctest::Approx(accept_probability(fp, bits_of(i, 4))));

  const QuantumProgram nc = noncommutative();
  const QuantumProgram swapped = reorder_quantum(nc, VarOrder({2, 1}));
  double gap = 0.0;
  for (std::uint64_t i = 0; i < 4; ++i)
    gap = std::max(gap, std::abs(accept_probability(nc, bits_of(i, 2)) -
                                 accept_probability(swapped, bits_of(i, 2))));
  CHECK(gap > 0.1);
}

TEST_CASE("is_commutative_quantum") {
  CHECK(is_commutative_quantum(fingerprint_eq_qobdd(4, {1, 1, 2})));
  CHECK(is_commutative_quantum(fingerprint_modp_qobdd(3, 5, {1})));
  CHECK_FALSE(is_commutative_quantum(noncommutative()));
  CHECK_THROWS_AS(is_commutative_quantum(identity_program(kMaxQuantumCommutativityVars + 1, 2, {0})),
                  CapacityError);
}

TEST_CASE("acceptance_table matches per-input simulation") {
  const QuantumProgram fp = fingerprint_eq_qobdd(4, {1, 3});
  const std::vector<double> table = acceptance_table(fp);
  REQUIRE(table.size() == 16);
  for (std::uint64_t i = 0; i < 16; ++i)
    CHECK(table[i] == doctest::Approx(accept_probability(fp, bits_of(i, 4))));
}

TEST_CASE("JSON round trip") {
  QuantumProgram p = noncommutative();
  p.initial = Eigen::VectorXcd::Zero(2);
  p.initial[0] = std::complex<double>(0.6, 0.0);
  p.initial[1] = std::complex<double>(0.0, 0.8);
  const QuantumProgram back = qobdd_from_json(to_json(p));
  CHECK(back.n == p.n);
  CHECK(back.dim == p.dim);
  CHECK(back.accept == p.accept);
  CHECK(back.order == p.order);
  CHECK(back.initial.isApprox(p.initial));
  for (std::size_t i = 0; i < p.steps.size(); ++i) {
    CHECK(back.steps[i].g0.isApprox(p.steps[i].g0));
    CHECK(back.steps[i].g1.isApprox(p.steps[i].g1));
  }
  CHECK(to_json(p).find("\"accept\":[1]") != std::string::npos);
  CHECK_THROWS(qobdd_from_json("{\"dim\": 2}"));
}

TEST_CASE("dimension cap") {
  QuantumProgram big = identity_program(1, 2, {0});
  big.dim = kMaxQuantumDim + 1;
  CHECK_THROWS_AS(validate(big), CapacityError);
}
