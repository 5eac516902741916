// GHZ state family |psi_{mu lambda omega}> = sum_j (-1)^{mu j}
// |j, j xor lambda, j xor omega> / sqrt(2), gate-based preparation, Pauli
// correlation functions, and the Mermin inequality
// S_M = |<XXX> + <XYY> + <YXY> - <YYX>|  (classical bound 2, quantum max 4).

#pragma once

#include "hfsim/bench.hpp"
#include "hfsim/hilbert.hpp"
#include "hfsim/measurement.hpp"

#include <array>
#include <cmath>

namespace hfsim {

struct GhzLabel {
  int mu = 0;
  int lambda = 0;
  int omega = 0;
};

inline HybridState ghz_state(const GhzLabel& label, Workspace ws = Workspace()) {
  const double r = 1.0 / std::sqrt(2.0);
  HybridState s(ws);
  for (int j = 0; j <= 1; ++j) {
    LogicalLabel term{j, j ^ label.lambda, j ^ label.omega};
    double sign = (label.mu && j) ? -1.0 : 1.0;
    s.set_amplitude(logical_pol(term.control), logical_ell(term.target2, term.target3),
                    sign * r);
  }
  return s;
}

// Runs the bench on (|0> + |1>)/sqrt(2) (x) |t2 t3>.  With a controlled-SWAP
// bench, target 01 yields GHZ_1 and target 10 yields GHZ_2.
inline HybridState prepare_ghz(const Bench& bench, int target2, int target3) {
  const double r = 1.0 / std::sqrt(2.0);
  HybridState in = r * encode_logical({0, target2, target3}, bench.ws) +
                   r * encode_logical({1, target2, target3}, bench.ws);
  return circuit_operator(bench).op.apply(in);
}

// tr(rho sigma_a (x) sigma_b (x) sigma_c)
inline double correlation(const DensityMatrix& rho, const AxisTriple& axes) {
  Matrix obs = kron(kron(Matrix(pauli_matrix(axes[0])), Matrix(pauli_matrix(axes[1]))),
                    Matrix(pauli_matrix(axes[2])));
  return (rho.matrix() * obs).trace().real();
}

struct MerminValue {
  double s_m = 0.0;
  double xxx = 0.0;
  double xyy = 0.0;
  double yxy = 0.0;
  double yyx = 0.0;
};

inline MerminValue mermin_value(const DensityMatrix& rho) {
  using enum PauliAxis;
  MerminValue v;
  v.xxx = correlation(rho, {X, X, X});
  v.xyy = correlation(rho, {X, Y, Y});
  v.yxy = correlation(rho, {Y, X, Y});
  v.yyx = correlation(rho, {Y, Y, X});
  v.s_m = std::abs(v.xxx + v.xyy + v.yxy - v.yyx);
  return v;
}

}  // namespace hfsim
