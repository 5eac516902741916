#include "hfsim/elements.hpp"

#include "hfsim/rng.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace hfsim;

namespace {
constexpr double kPi = std::numbers::pi;
const double kRoot2Inv = 1.0 / std::sqrt(2.0);
const Complex kI(0.0, 1.0);

Complex coeff(const HybridState& s, Pol p, int ell) { return s.amplitude(p, ell); }
}  // namespace

TEST_CASE("half-wave plate matrix") {
  Workspace ws;
  // theta = 0: H -> H, V -> -V
  HybridState h = hwp_operator(0.0, ws).apply(HybridState::basis(ws, Pol::H, 0));
  HybridState v = hwp_operator(0.0, ws).apply(HybridState::basis(ws, Pol::V, 0));
  CHECK(std::abs(coeff(h, Pol::H, 0) - Complex(1.0)) < 1e-15);
  CHECK(std::abs(coeff(v, Pol::V, 0) - Complex(-1.0)) < 1e-15);

  // theta = pi/4 exchanges H and V
  HybridState hv = hwp_operator(kPi / 4, ws).apply(HybridState::basis(ws, Pol::H, 1));
  CHECK(std::abs(coeff(hv, Pol::V, 1) - Complex(1.0)) < 1e-12);
  CHECK(std::abs(coeff(hv, Pol::H, 1)) < 1e-12);

  // theta = pi/8: H -> (H+V)/sqrt(2)
  HybridState diag = hwp_operator(kPi / 8, ws).apply(HybridState::basis(ws, Pol::H, 0));
  CHECK(std::abs(coeff(diag, Pol::H, 0) - Complex(kRoot2Inv)) < 1e-12);
  CHECK(std::abs(coeff(diag, Pol::V, 0) - Complex(kRoot2Inv)) < 1e-12);
}

TEST_CASE("quarter-wave plate matrix") {
  Workspace ws;
  // theta = 0: diag(1, i)
  HybridState v = qwp_operator(0.0, ws).apply(HybridState::basis(ws, Pol::V, 0));
  CHECK(std::abs(coeff(v, Pol::V, 0) - kI) < 1e-15);

  // four quarter-wave passes = identity up to global phase
  Matrix2c j = qwp_jones(0.0);
  Matrix2c four = j * j * j * j;
  CHECK(std::abs(four(0, 0) - four(1, 1)) < 1e-15);
  CHECK(std::abs(four(0, 1)) < 1e-15);
  CHECK(std::abs(std::abs(four(0, 0)) - 1.0) < 1e-15);

  // theta = pi/4 turns H into the circular state (|H> + i|V>)/sqrt(2)
  HybridState circ = qwp_operator(kPi / 4, ws).apply(HybridState::basis(ws, Pol::H, 0));
  HybridState expect(ws);
  expect.set_amplitude(Pol::H, 0, kRoot2Inv);
  expect.set_amplitude(Pol::V, 0, kI * kRoot2Inv);
  CHECK(equal_up_to_global_phase(circ, expect, 1e-12));
}

TEST_CASE("dove prism transform") {
  Workspace ws;
  // ell = 0 gets the bare i for any angle
  HybridState zero =
      dove_operator(0.321, DoveDirection::forward, ws).apply(HybridState::basis(ws, Pol::H, 0));
  CHECK(std::abs(coeff(zero, Pol::H, 0) - kI) < 1e-15);

  // forward, alpha = pi/4, ell = +1:  i e^{i pi/2} |-1> = -|-1>
  HybridState fwd = dove_operator(kPi / 4, DoveDirection::forward, ws)
                        .apply(HybridState::basis(ws, Pol::H, +1));
  CHECK(std::abs(coeff(fwd, Pol::H, -1) - Complex(-1.0)) < 1e-12);

  // backward picks up the opposite phase: +|-1>
  HybridState bwd = dove_operator(kPi / 4, DoveDirection::backward, ws)
                        .apply(HybridState::basis(ws, Pol::H, +1));
  CHECK(std::abs(coeff(bwd, Pol::H, -1) - Complex(1.0)) < 1e-12);
}

TEST_CASE("dove forward then backward returns -e^{i4 l a} per mode") {
  Workspace ws;
  for (double alpha : {0.1, kPi / 4, 1.1}) {
    ModeOperator round = dove_operator(alpha, DoveDirection::backward, ws) *
                         dove_operator(alpha, DoveDirection::forward, ws);
    for (int ell = -3; ell <= 3; ++ell) {
      HybridState out = round.apply(HybridState::basis(ws, Pol::V, ell));
      Complex expect = -std::exp(Complex(0.0, 4.0 * ell * alpha));
      CHECK(std::abs(coeff(out, Pol::V, ell) - expect) < 1e-12);
    }
  }
}

TEST_CASE("spiral phase plate shifts and guards the workspace bound") {
  Workspace ws;
  ModeOperator down2 = spp_operator(-2, ws);
  HybridState a = down2.apply(HybridState::basis(ws, Pol::H, 0));
  CHECK(std::abs(coeff(a, Pol::H, -2) - Complex(1.0)) < 1e-15);
  HybridState b = down2.apply(HybridState::basis(ws, Pol::H, +2));
  CHECK(std::abs(coeff(b, Pol::H, 0) - Complex(1.0)) < 1e-15);

  HybridState c = spp_operator(+1, ws).apply(HybridState::basis(ws, Pol::V, -1));
  CHECK(std::abs(coeff(c, Pol::V, 0) - Complex(1.0)) < 1e-15);

  CHECK_THROWS_AS(down2.apply(HybridState::basis(ws, Pol::H, -2)), WorkspaceOverflow);
}

TEST_CASE("spp inverse law on safe support") {
  Workspace ws;
  ModeOperator round = spp_operator(-2, ws) * spp_operator(+2, ws);
  for (int ell = -3; ell <= 1; ++ell) {  // +2 shift stays inside for ell <= 1
    HybridState out = round.apply(HybridState::basis(ws, Pol::H, ell));
    CHECK(std::abs(coeff(out, Pol::H, ell) - Complex(1.0)) < 1e-15);
  }
  CHECK_THROWS_AS(round.apply(HybridState::basis(ws, Pol::H, +2)), WorkspaceOverflow);
}

TEST_CASE("mirror flips ell with unit phase") {
  Workspace ws;
  HybridState a = mirror_operator(ws).apply(HybridState::basis(ws, Pol::H, -2));
  CHECK(std::abs(coeff(a, Pol::H, +2) - Complex(1.0)) < 1e-15);
  HybridState b = mirror_operator(ws).apply(HybridState::basis(ws, Pol::V, 0));
  CHECK(std::abs(coeff(b, Pol::V, 0) - Complex(1.0)) < 1e-15);

  ModeOperator twice = mirror_operator(ws) * mirror_operator(ws);
  CHECK((twice.matrix() - Matrix::Identity(ws.dim(), ws.dim())).cwiseAbs().maxCoeff() <
        1e-15);
}

TEST_CASE("parity sorter routes by |ell| parity and recombines losslessly") {
  Workspace ws;
  ParitySplit even = parity_sorter(HybridState::basis(ws, Pol::H, 0));
  CHECK(even.even.squared_norm() == Catch::Approx(1.0));
  CHECK(even.odd.squared_norm() == Catch::Approx(0.0));

  ParitySplit odd = parity_sorter(HybridState::basis(ws, Pol::H, +1));
  CHECK(odd.odd.squared_norm() == Catch::Approx(1.0));

  HybridState mixed = kRoot2Inv * HybridState::basis(ws, Pol::H, 0) +
                      kRoot2Inv * HybridState::basis(ws, Pol::H, 1);
  ParitySplit split = parity_sorter(mixed);
  CHECK(split.even.squared_norm() == Catch::Approx(0.5));
  CHECK(split.odd.squared_norm() == Catch::Approx(0.5));

  // lossless recombination restores the input exactly
  HybridState random(ws);
  std::mt19937_64 eng(7);
  Vector v(ws.dim());
  for (int i = 0; i < ws.dim(); ++i)
    v[i] = Complex(uniform01(eng) - 0.5, uniform01(eng) - 0.5);
  HybridState arbitrary(ws, v);
  ParitySplit parts = parity_sorter(arbitrary);
  HybridState back = parts.even + parts.odd;
  CHECK((back.amplitudes() - arbitrary.amplitudes()).norm() < 1e-15);
}

TEST_CASE("pbs routes polarization") {
  Workspace ws;
  PbsSplit h = pbs_route(HybridState::basis(ws, Pol::H, 0));
  CHECK(h.upper.squared_norm() == Catch::Approx(1.0));
  CHECK(h.lower.squared_norm() == Catch::Approx(0.0));

  PbsSplit v = pbs_route(HybridState::basis(ws, Pol::V, 0));
  CHECK(v.lower.squared_norm() == Catch::Approx(1.0));

  HybridState plus = kRoot2Inv * HybridState::basis(ws, Pol::H, 0) +
                     kRoot2Inv * HybridState::basis(ws, Pol::V, 0);
  PbsSplit split = pbs_route(plus);
  CHECK(split.upper.squared_norm() == Catch::Approx(0.5));
  CHECK(split.lower.squared_norm() == Catch::Approx(0.5));
}

TEST_CASE("every element operator is unitary on its domain") {
  Workspace ws;
  for (double theta : {0.0, kPi / 8, kPi / 4, 3 * kPi / 8, kPi / 2, 1.0}) {
    CHECK(hwp_operator(theta, ws).is_unitary(1e-10));
    CHECK(qwp_operator(theta, ws).is_unitary(1e-10));
  }
  for (double alpha : {0.0, kPi / 4, 2.0}) {
    CHECK(dove_operator(alpha, DoveDirection::forward, ws).is_unitary(1e-10));
    CHECK(dove_operator(alpha, DoveDirection::backward, ws).is_unitary(1e-10));
  }
  for (int q : {-2, -1, 1, 2}) CHECK(spp_operator(q, ws).is_unitary(1e-10));
  CHECK(mirror_operator(ws).is_unitary(1e-10));
  CHECK(phase_shift_operator(0.7, ws).is_unitary(1e-10));
}
