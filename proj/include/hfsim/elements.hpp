// Mode-space operators for the bench elements: wave plates (Jones matrices on
// polarization), Dove prism and spiral phase plate (OAM transforms), mirrors,
// phase shifters, and the two routers (PBS, parity sorter).
//
// Conventions, fixed once and checked by the test suite:
//   HWP(theta)  = [[cos 2t, sin 2t], [sin 2t, -cos 2t]]      in (H,V) order
//   QWP(theta)  = R(-t) diag(1, i) R(t),  R(t) = [[c,-s],[s,c]]
//   Dove(a,fwd) : |l> -> i e^{+2 i l a} |-l>     (backward: opposite phase)
//   SPP(q)      : |l> -> |l+q>
//   Mirror      : |l> -> |-l>, unit phase
// Routers are ideal: amplitude and phase preserved, recombination adjoint.

#pragma once

#include "hfsim/hilbert.hpp"

#include <cmath>
#include <variant>

namespace hfsim {

enum class DoveDirection { forward, backward };
enum class PbsPort { upper, lower };     // upper carries H, lower carries V
enum class ParityPort { even, odd };

// ---------------------------------------------------------------------------
// Element descriptions (bench vocabulary)

struct Hwp { double theta = 0.0; };
struct Qwp { double theta = 0.0; };
struct DovePrism {
  double alpha = 0.0;
  DoveDirection direction = DoveDirection::forward;
};
struct Spp { int charge = 0; };
struct Mirror {};
struct PhaseShift { double delta = 0.0; };

using Element = std::variant<Hwp, Qwp, DovePrism, Spp, Mirror, PhaseShift>;

// ---------------------------------------------------------------------------
// Jones-matrix helpers

inline Matrix2c rotation2(double theta) {
  Matrix2c r;
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

inline Matrix2c hwp_jones(double theta) {
  Matrix2c j;
  j << std::cos(2 * theta), std::sin(2 * theta), std::sin(2 * theta), -std::cos(2 * theta);
  return j;
}

inline Matrix2c qwp_jones(double theta) {
  Matrix2c j0;
  j0 << 1.0, 0.0, 0.0, Complex(0.0, 1.0);
  return rotation2(-theta) * j0 * rotation2(theta);
}

// pol-only operator: Jones matrix on the polarization factor, identity on OAM
inline ModeOperator polarization_operator(const Matrix2c& jones, Workspace ws) {
  int n = ws.oam_count();
  Matrix m = Matrix::Zero(ws.dim(), ws.dim());
  m.block(0, 0, n, n) = jones(0, 0) * Matrix::Identity(n, n);
  m.block(0, n, n, n) = jones(0, 1) * Matrix::Identity(n, n);
  m.block(n, 0, n, n) = jones(1, 0) * Matrix::Identity(n, n);
  m.block(n, n, n, n) = jones(1, 1) * Matrix::Identity(n, n);
  return ModeOperator(std::move(m), Subspace::workspace, ws);
}

// ---------------------------------------------------------------------------
// Element operators

inline ModeOperator hwp_operator(double theta, Workspace ws = Workspace()) {
  return polarization_operator(hwp_jones(theta), ws);
}

inline ModeOperator qwp_operator(double theta, Workspace ws = Workspace()) {
  return polarization_operator(qwp_jones(theta), ws);
}

// |l> -> i exp(+-2 i l alpha) |-l>, identity on polarization.
inline ModeOperator dove_operator(double alpha, DoveDirection dir,
                                  Workspace ws = Workspace()) {
  Matrix m = Matrix::Zero(ws.dim(), ws.dim());
  double sign = dir == DoveDirection::forward ? 1.0 : -1.0;
  for (Pol p : {Pol::H, Pol::V}) {
    for (int ell = -ws.half_width(); ell <= ws.half_width(); ++ell) {
      Complex phase = Complex(0.0, 1.0) * std::exp(Complex(0.0, sign * 2.0 * ell * alpha));
      m(ws.index(p, -ell), ws.index(p, ell)) = phase;
    }
  }
  return ModeOperator(std::move(m), Subspace::workspace, ws);
}

// |l> -> |l+q>.  Columns whose shifted mode leaves the workspace are masked
// out of the operator domain; applying to a state populating them raises
// WorkspaceOverflow.
inline ModeOperator spp_operator(int charge, Workspace ws = Workspace()) {
  Matrix m = Matrix::Zero(ws.dim(), ws.dim());
  std::vector<bool> domain(static_cast<std::size_t>(ws.dim()), true);
  for (Pol p : {Pol::H, Pol::V}) {
    for (int ell = -ws.half_width(); ell <= ws.half_width(); ++ell) {
      if (ws.contains(ell + charge)) {
        m(ws.index(p, ell + charge), ws.index(p, ell)) = 1.0;
      } else {
        domain[static_cast<std::size_t>(ws.index(p, ell))] = false;
      }
    }
  }
  return ModeOperator(std::move(m), Subspace::workspace, ws, std::move(domain));
}

// |l> -> |-l>, unit phase.  Polarization effects of physical mirrors are
// absorbed into the explicit wave plates.
inline ModeOperator mirror_operator(Workspace ws = Workspace()) {
  Matrix m = Matrix::Zero(ws.dim(), ws.dim());
  for (Pol p : {Pol::H, Pol::V})
    for (int ell = -ws.half_width(); ell <= ws.half_width(); ++ell)
      m(ws.index(p, -ell), ws.index(p, ell)) = 1.0;
  return ModeOperator(std::move(m), Subspace::workspace, ws);
}

inline ModeOperator phase_shift_operator(double delta, Workspace ws = Workspace()) {
  return ModeOperator(Matrix(std::exp(Complex(0.0, delta)) *
                             Matrix::Identity(ws.dim(), ws.dim())),
                      Subspace::workspace, ws);
}

inline ModeOperator element_operator(const Element& e, Workspace ws) {
  return std::visit(
      [&](const auto& el) -> ModeOperator {
        using T = std::decay_t<decltype(el)>;
        if constexpr (std::is_same_v<T, Hwp>) return hwp_operator(el.theta, ws);
        else if constexpr (std::is_same_v<T, Qwp>) return qwp_operator(el.theta, ws);
        else if constexpr (std::is_same_v<T, DovePrism>)
          return dove_operator(el.alpha, el.direction, ws);
        else if constexpr (std::is_same_v<T, Spp>) return spp_operator(el.charge, ws);
        else if constexpr (std::is_same_v<T, Mirror>) return mirror_operator(ws);
        else return phase_shift_operator(el.delta, ws);
      },
      e);
}

// ---------------------------------------------------------------------------
// Routers (ideal: amplitude and phase preserved; recombination = adjoint sum)

// Diagonal 0/1 projector onto one PBS port.
inline ModeOperator pbs_projector(PbsPort port, Workspace ws = Workspace()) {
  Pol keep = port == PbsPort::upper ? Pol::H : Pol::V;
  Matrix m = Matrix::Zero(ws.dim(), ws.dim());
  for (int ell = -ws.half_width(); ell <= ws.half_width(); ++ell)
    m(ws.index(keep, ell), ws.index(keep, ell)) = 1.0;
  return ModeOperator(std::move(m), Subspace::workspace, ws);
}

// Diagonal 0/1 projector onto one parity port.
inline ModeOperator parity_projector(ParityPort port, Workspace ws = Workspace()) {
  int want = port == ParityPort::even ? 0 : 1;
  Matrix m = Matrix::Zero(ws.dim(), ws.dim());
  for (Pol p : {Pol::H, Pol::V})
    for (int ell = -ws.half_width(); ell <= ws.half_width(); ++ell)
      if ((std::abs(ell) % 2) == want) m(ws.index(p, ell), ws.index(p, ell)) = 1.0;
  return ModeOperator(std::move(m), Subspace::workspace, ws);
}

struct PbsSplit {
  HybridState upper;  // H component
  HybridState lower;  // V component
};

inline PbsSplit pbs_route(const HybridState& s) {
  const Workspace& ws = s.workspace();
  return {pbs_projector(PbsPort::upper, ws).apply(s),
          pbs_projector(PbsPort::lower, ws).apply(s)};
}

struct ParitySplit {
  HybridState even;
  HybridState odd;
};

inline ParitySplit parity_sorter(const HybridState& s) {
  const Workspace& ws = s.workspace();
  return {parity_projector(ParityPort::even, ws).apply(s),
          parity_projector(ParityPort::odd, ws).apply(s)};
}

}  // namespace hfsim
