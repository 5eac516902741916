#include "hfsim/ghz_mermin.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace hfsim;

namespace {
const double kRoot2Inv = 1.0 / std::sqrt(2.0);
using enum PauliAxis;
}  // namespace

TEST_CASE("ghz family states") {
  HybridState ghz1 = ghz_state({0, 0, 1});
  auto amps1 = decode_logical(ghz1);
  CHECK(std::abs(amps1[LogicalLabel{0, 0, 1}] - Complex(kRoot2Inv)) < 1e-15);
  CHECK(std::abs(amps1[LogicalLabel{1, 1, 0}] - Complex(kRoot2Inv)) < 1e-15);

  HybridState ghz2 = ghz_state({0, 1, 0});
  auto amps2 = decode_logical(ghz2);
  CHECK(std::abs(amps2[LogicalLabel{0, 1, 0}] - Complex(kRoot2Inv)) < 1e-15);
  CHECK(std::abs(amps2[LogicalLabel{1, 0, 1}] - Complex(kRoot2Inv)) < 1e-15);

  HybridState minus = ghz_state({1, 0, 0});
  auto amps3 = decode_logical(minus);
  CHECK(std::abs(amps3[LogicalLabel{0, 0, 0}] - Complex(kRoot2Inv)) < 1e-15);
  CHECK(std::abs(amps3[LogicalLabel{1, 1, 1}] - Complex(-kRoot2Inv)) < 1e-15);

  // all 8 labels: normalized, and ZZ parities follow the label bits
  for (int mu = 0; mu <= 1; ++mu)
    for (int lambda = 0; lambda <= 1; ++lambda)
      for (int omega = 0; omega <= 1; ++omega) {
        HybridState s = ghz_state({mu, lambda, omega});
        CHECK(s.squared_norm() == Catch::Approx(1.0));
        DensityMatrix rho = DensityMatrix::pure(s);
        Matrix zz12 = kron(kron(Matrix(pauli_matrix(Z)), Matrix(pauli_matrix(Z))),
                           Matrix(Matrix::Identity(2, 2)));
        Matrix zz13 = kron(kron(Matrix(pauli_matrix(Z)), Matrix(Matrix::Identity(2, 2))),
                           Matrix(pauli_matrix(Z)));
        double p12 = (rho.matrix() * zz12).trace().real();
        double p13 = (rho.matrix() * zz13).trace().real();
        CHECK(p12 == Catch::Approx(lambda ? -1.0 : 1.0));
        CHECK(p13 == Catch::Approx(omega ? -1.0 : 1.0));
      }
}

TEST_CASE("fredkin bench prepares GHZ states from control superpositions") {
  Bench bench = build_fredkin();

  HybridState out1 = prepare_ghz(bench, 0, 1);
  CHECK(equal_up_to_global_phase(out1, ghz_state({0, 0, 1}), 1e-10));

  HybridState out2 = prepare_ghz(bench, 1, 0);
  CHECK(equal_up_to_global_phase(out2, ghz_state({0, 1, 0}), 1e-10));

  // |00> is a SWAP fixed point: the output stays a product state
  HybridState out3 = prepare_ghz(bench, 0, 0);
  HybridState product = kRoot2Inv * encode_logical({0, 0, 0}, bench.ws) +
                        kRoot2Inv * encode_logical({1, 0, 0}, bench.ws);
  CHECK(equal_up_to_global_phase(out3, product, 1e-10));
}

TEST_CASE("correlation functions") {
  DensityMatrix ghz1 = DensityMatrix::pure(ghz_state({0, 0, 1}));
  CHECK(correlation(ghz1, {X, X, X}) == Catch::Approx(1.0));
  CHECK(correlation(ghz1, {Y, Y, X}) == Catch::Approx(-1.0));
  CHECK(correlation(ghz1, {X, Y, Y}) == Catch::Approx(1.0));
  CHECK(correlation(ghz1, {Y, X, Y}) == Catch::Approx(1.0));

  DensityMatrix mixed = DensityMatrix::maximally_mixed();
  CHECK(correlation(mixed, {X, X, X}) == Catch::Approx(0.0).margin(1e-12));
  CHECK(correlation(mixed, {Z, Z, Z}) == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("mermin value") {
  DensityMatrix ghz1 = DensityMatrix::pure(ghz_state({0, 0, 1}));
  MerminValue ideal = mermin_value(ghz1);
  CHECK(ideal.s_m == Catch::Approx(4.0).margin(1e-10));

  MerminValue mixed = mermin_value(DensityMatrix::maximally_mixed());
  CHECK(mixed.s_m == Catch::Approx(0.0).margin(1e-12));

  // global phase on the state leaves every expectation unchanged
  HybridState rotated = std::exp(Complex(0.0, 0.9)) * ghz_state({0, 0, 1});
  Vector8c v = logical_vector(rotated);
  MerminValue same = mermin_value(DensityMatrix(Matrix8c(v * v.adjoint())));
  CHECK(same.s_m == Catch::Approx(ideal.s_m).margin(1e-12));
}

TEST_CASE("depolarizing noise scales the mermin value linearly") {
  DensityMatrix ghz1 = DensityMatrix::pure(ghz_state({0, 0, 1}));
  for (double p : {0.0, 0.01, 0.0455, 0.1, 0.5, 1.0}) {
    DensityMatrix noisy = mix(ghz1, DensityMatrix::maximally_mixed(), p);
    CHECK(mermin_value(noisy).s_m == Catch::Approx(4.0 * (1.0 - p)).margin(1e-10));
  }
}
