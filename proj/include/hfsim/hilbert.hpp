// Hybrid polarization/OAM Hilbert space: basis encodings, states, mode
// operators, logical density matrices and the ideal controlled-SWAP target.
//
// The single-photon register is H_2 (polarization) ⊗ H_{2L+1} (OAM labels
// -L..+L).  Three logical qubits live inside it: the control qubit on
// polarization (V -> |0>, H -> |1>) and two target qubits on the four OAM
// modes  |ell=-1> -> |00>, |ell=-2> -> |01>, |ell=0> -> |10>, |ell=+1> -> |11>.
//
// Basis ordering (version "hfsim-basis-v1"): polarization-major with H block
// first, then V; inside a block ell runs ascending from -L to +L.  Fixed so
// serialized matrices are bit-comparable across runs.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace hfsim {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using Matrix2c = Eigen::Matrix2cd;
using Matrix8c = Eigen::Matrix<Complex, 8, 8>;
using Vector8c = Eigen::Matrix<Complex, 8, 1>;

inline constexpr const char* kBasisVersion = "hfsim-basis-v1";

// ---------------------------------------------------------------------------
// Errors

struct LeakageError : std::runtime_error {
  double leaked_weight;
  explicit LeakageError(double w)
      : std::runtime_error("amplitude outside the logical subspace: weight " +
                           std::to_string(w)),
        leaked_weight(w) {}
};

struct WorkspaceOverflow : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CompositionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmptyTableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidStateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Basis bookkeeping

enum class Pol : int { H = 0, V = 1 };

// OAM workspace of half-width L (modes -L..+L).  The circuit internally
// visits ell = +-2 and SPP shifts can push further out, so the default L = 3
// leaves one guard mode on each side; operations error on overflow instead of
// truncating.
class Workspace {
 public:
  explicit Workspace(int half_width = 3) : half_width_(half_width) {
    if (half_width < 2)
      throw std::invalid_argument("workspace half-width must be >= 2");
  }

  int half_width() const { return half_width_; }
  int oam_count() const { return 2 * half_width_ + 1; }
  int dim() const { return 2 * oam_count(); }
  bool contains(int ell) const { return ell >= -half_width_ && ell <= half_width_; }

  int index(Pol p, int ell) const {
    if (!contains(ell)) throw WorkspaceOverflow("ell out of workspace: " + std::to_string(ell));
    return static_cast<int>(p) * oam_count() + (ell + half_width_);
  }
  Pol pol_of(int index) const { return index < oam_count() ? Pol::H : Pol::V; }
  int ell_of(int index) const { return index % oam_count() - half_width_; }

  friend bool operator==(const Workspace& a, const Workspace& b) {
    return a.half_width_ == b.half_width_;
  }

 private:
  int half_width_;
};

// ---------------------------------------------------------------------------
// Logical labels

// Three-bit computational label |control, target2, target3>.
struct LogicalLabel {
  int control = 0;
  int target2 = 0;
  int target3 = 0;

  int index() const { return control * 4 + target2 * 2 + target3; }
  static LogicalLabel from_index(int k) {
    if (k < 0 || k > 7) throw std::invalid_argument("logical index out of range");
    return {(k >> 2) & 1, (k >> 1) & 1, k & 1};
  }
  std::string ket() const {
    return "|" + std::to_string(control) + std::to_string(target2) +
           std::to_string(target3) + ">";
  }
  friend bool operator==(const LogicalLabel& a, const LogicalLabel& b) {
    return a.index() == b.index();
  }
  friend bool operator<(const LogicalLabel& a, const LogicalLabel& b) {
    return a.index() < b.index();
  }
};

// Target-bit pair <-> OAM mode bijection.
inline int logical_ell(int t2, int t3) {
  static constexpr int table[4] = {-1, -2, 0, +1};  // 00,01,10,11
  return table[(t2 << 1) | t3];
}

inline std::pair<int, int> target_bits_of_ell(int ell) {
  switch (ell) {
    case -1: return {0, 0};
    case -2: return {0, 1};
    case 0: return {1, 0};
    case +1: return {1, 1};
    default:
      throw std::invalid_argument("ell " + std::to_string(ell) + " is not a logical mode");
  }
}

inline bool is_logical_ell(int ell) { return ell == -2 || ell == -1 || ell == 0 || ell == 1; }

inline Pol logical_pol(int control) { return control ? Pol::H : Pol::V; }
inline int control_bit_of(Pol p) { return p == Pol::H ? 1 : 0; }

// ---------------------------------------------------------------------------
// Hybrid state

class HybridState {
 public:
  explicit HybridState(Workspace ws) : ws_(ws), amp_(Vector::Zero(ws.dim())) {}
  HybridState(Workspace ws, Vector amplitudes) : ws_(ws), amp_(std::move(amplitudes)) {
    if (amp_.size() != ws_.dim())
      throw std::invalid_argument("amplitude vector size does not match workspace");
  }

  static HybridState basis(Workspace ws, Pol p, int ell) {
    HybridState s(ws);
    s.amp_[ws.index(p, ell)] = 1.0;
    return s;
  }

  const Workspace& workspace() const { return ws_; }
  const Vector& amplitudes() const { return amp_; }
  Complex amplitude(Pol p, int ell) const { return amp_[ws_.index(p, ell)]; }
  void set_amplitude(Pol p, int ell, Complex a) { amp_[ws_.index(p, ell)] = a; }

  double squared_norm() const { return amp_.squaredNorm(); }
  HybridState normalized() const {
    double n = amp_.norm();
    if (n == 0.0) throw InvalidStateError("cannot normalize the zero state");
    return HybridState(ws_, amp_ / n);
  }

  Complex inner(const HybridState& other) const {
    require_same_workspace(other);
    return amp_.dot(other.amp_);  // Eigen dot conjugates the left factor
  }

  // Weight on modes outside the logical subspace.
  double leakage_weight() const {
    double w = 0.0;
    for (int i = 0; i < amp_.size(); ++i) {
      if (!is_logical_ell(ws_.ell_of(i))) w += std::norm(amp_[i]);
    }
    return w;
  }

  HybridState operator+(const HybridState& other) const {
    require_same_workspace(other);
    return HybridState(ws_, amp_ + other.amp_);
  }
  HybridState operator-(const HybridState& other) const {
    require_same_workspace(other);
    return HybridState(ws_, amp_ - other.amp_);
  }
  friend HybridState operator*(Complex c, const HybridState& s) {
    return HybridState(s.ws_, c * s.amp_);
  }

 private:
  void require_same_workspace(const HybridState& other) const {
    if (!(ws_ == other.ws_)) throw std::invalid_argument("workspace mismatch");
  }

  Workspace ws_;
  Vector amp_;
};

// |a . b| = 1 up to tolerance, for unit vectors.
inline bool equal_up_to_global_phase(const HybridState& a, const HybridState& b,
                                     double tol = 1e-10) {
  return std::abs(std::abs(a.inner(b)) - 1.0) < tol;
}

// ---------------------------------------------------------------------------
// Encode / decode

inline HybridState encode_logical(const LogicalLabel& label, Workspace ws = Workspace()) {
  return HybridState::basis(ws, logical_pol(label.control),
                            logical_ell(label.target2, label.target3));
}

// Amplitude map over the 8 logical labels.  Throws LeakageError when the
// state has weight > tol outside the logical modes.
inline std::map<LogicalLabel, Complex> decode_logical(const HybridState& state,
                                                      double tol = 1e-9) {
  double leaked = state.leakage_weight();
  if (leaked > tol) throw LeakageError(leaked);
  std::map<LogicalLabel, Complex> out;
  for (int k = 0; k < 8; ++k) {
    LogicalLabel label = LogicalLabel::from_index(k);
    Complex a = state.amplitude(logical_pol(label.control),
                                logical_ell(label.target2, label.target3));
    if (a != Complex(0.0)) out[label] = a;
  }
  return out;
}

// 8-component logical amplitude vector in |000>..|111> order.
inline Vector8c logical_vector(const HybridState& state, double tol = 1e-9) {
  double leaked = state.leakage_weight();
  if (leaked > tol) throw LeakageError(leaked);
  Vector8c v;
  for (int k = 0; k < 8; ++k) {
    LogicalLabel label = LogicalLabel::from_index(k);
    v[k] = state.amplitude(logical_pol(label.control),
                           logical_ell(label.target2, label.target3));
  }
  return v;
}

// Embeds an 8-component logical amplitude vector into the workspace.
inline HybridState from_logical_vector(const Vector8c& v, Workspace ws = Workspace()) {
  HybridState s(ws);
  for (int k = 0; k < 8; ++k) {
    LogicalLabel label = LogicalLabel::from_index(k);
    s.set_amplitude(logical_pol(label.control), logical_ell(label.target2, label.target3),
                    v[k]);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Mode operators

enum class Subspace { workspace, logical };

// Complex matrix on the hybrid workspace or on the 8-dim logical space.  A
// workspace operator may have a restricted input domain (SPP columns that
// would shift a mode past +-L are masked out); applying it to a state with
// weight on a masked column raises WorkspaceOverflow.
class ModeOperator {
 public:
  ModeOperator(Matrix m, Subspace space, Workspace ws)
      : m_(std::move(m)), space_(space), ws_(ws),
        domain_(static_cast<std::size_t>(m_.cols()), true) {
    check_shape();
  }
  ModeOperator(Matrix m, Subspace space, Workspace ws, std::vector<bool> domain)
      : m_(std::move(m)), space_(space), ws_(ws), domain_(std::move(domain)) {
    check_shape();
    if (domain_.size() != static_cast<std::size_t>(m_.cols()))
      throw std::invalid_argument("domain mask size mismatch");
  }

  static ModeOperator identity(Workspace ws) {
    return ModeOperator(Matrix::Identity(ws.dim(), ws.dim()), Subspace::workspace, ws);
  }

  const Matrix& matrix() const { return m_; }
  Subspace subspace() const { return space_; }
  const Workspace& workspace() const { return ws_; }
  const std::vector<bool>& domain() const { return domain_; }
  int dim() const { return static_cast<int>(m_.rows()); }
  bool full_domain() const {
    for (bool b : domain_) if (!b) return false;
    return true;
  }

  // U^dag U = I on the valid domain columns.
  bool is_unitary(double tol = 1e-10) const {
    Matrix g = m_.adjoint() * m_;
    for (int i = 0; i < g.rows(); ++i) {
      if (!domain_[i]) continue;
      for (int j = 0; j < g.cols(); ++j) {
        if (!domain_[j]) continue;
        double expect = (i == j) ? 1.0 : 0.0;
        if (std::abs(g(i, j) - expect) > tol) return false;
      }
    }
    return true;
  }

  ModeOperator adjoint() const { return ModeOperator(m_.adjoint(), space_, ws_); }

  HybridState apply(const HybridState& s) const {
    if (space_ != Subspace::workspace)
      throw std::invalid_argument("logical operator cannot act on a workspace state");
    if (!(ws_ == s.workspace())) throw std::invalid_argument("workspace mismatch");
    check_domain(s.amplitudes());
    return HybridState(ws_, m_ * s.amplitudes());
  }

  // this ∘ first  (matrix product, with domain tracking through composition).
  ModeOperator compose_after(const ModeOperator& first) const {
    if (space_ != first.space_ || !(ws_ == first.ws_))
      throw std::invalid_argument("operator subspace mismatch");
    std::vector<bool> dom(first.domain_);
    for (int j = 0; j < m_.cols(); ++j) {
      if (!dom[j]) continue;
      // column j survives iff the intermediate image stays inside our domain
      for (int i = 0; i < m_.rows(); ++i) {
        if (!domain_[i] && std::abs(first.m_(i, j)) > 1e-14) {
          dom[j] = false;
          break;
        }
      }
    }
    return ModeOperator(m_ * first.m_, space_, ws_, std::move(dom));
  }

 private:
  void check_shape() const {
    if (m_.rows() != m_.cols()) throw std::invalid_argument("operator must be square");
    int expect = space_ == Subspace::logical ? 8 : ws_.dim();
    if (m_.rows() != expect)
      throw std::invalid_argument("operator dimension does not match its subspace");
  }
  void check_domain(const Vector& amp) const {
    for (int i = 0; i < amp.size(); ++i) {
      if (!domain_[i] && std::abs(amp[i]) > 1e-14)
        throw WorkspaceOverflow("state populates a mode the operator cannot carry");
    }
  }

  Matrix m_;
  Subspace space_;
  Workspace ws_;
  std::vector<bool> domain_;
};

inline ModeOperator operator*(const ModeOperator& second, const ModeOperator& first) {
  return second.compose_after(first);
}

// Optimal-phase alignment: max elementwise |phi*A - B| with phi from tr(A^dag B).
inline double max_deviation_up_to_phase(const Matrix& a, const Matrix& b) {
  Complex t = (a.adjoint() * b).trace();
  Complex phi = std::abs(t) > 0 ? t / std::abs(t) : Complex(1.0);
  return ((phi * a) - b).cwiseAbs().maxCoeff();
}

// |tr(A^dag B)| / dim = 1 within tol  (the operator global-phase criterion).
inline bool equal_up_to_global_phase(const Matrix& a, const Matrix& b, double tol = 1e-10) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return std::abs(std::abs((a.adjoint() * b).trace()) / static_cast<double>(a.rows()) - 1.0) <
         tol;
}

// Small dense Kronecker product.
inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// ---------------------------------------------------------------------------
// Density matrices (logical 8x8)

class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix8c m) : m_(std::move(m)) { validate(); }

  static DensityMatrix maximally_mixed() {
    return DensityMatrix(Matrix8c(Matrix8c::Identity() / 8.0));
  }
  static DensityMatrix pure(const Vector8c& amplitudes) {
    Vector8c v = amplitudes.normalized();
    return DensityMatrix(Matrix8c(v * v.adjoint()));
  }
  static DensityMatrix pure(const HybridState& state) {
    return pure(logical_vector(state));
  }

  const Matrix8c& matrix() const { return m_; }

  Eigen::Matrix<double, 8, 1> eigenvalues() const {
    return Eigen::SelfAdjointEigenSolver<Matrix8c>(m_).eigenvalues();
  }

  friend DensityMatrix mix(const DensityMatrix& a, const DensityMatrix& b, double wb) {
    return DensityMatrix(Matrix8c((1.0 - wb) * a.m_ + wb * b.m_));
  }

 private:
  void validate() {
    if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
      throw InvalidStateError("density matrix is not Hermitian");
    m_ = 0.5 * (m_ + m_.adjoint().eval());  // scrub rounding asymmetry
    if (std::abs(m_.trace().real() - 1.0) > 1e-10 || std::abs(m_.trace().imag()) > 1e-10)
      throw InvalidStateError("density matrix trace is not 1");
    if (eigenvalues().minCoeff() < -1e-9)
      throw InvalidStateError("density matrix has a negative eigenvalue");
  }

  Matrix8c m_;
};

// ---------------------------------------------------------------------------
// Ideal gate

// Controlled-SWAP on the logical basis: identity on the control-0 block,
// target-bit exchange on the control-1 block.  A permutation matrix whose
// only off-diagonal action is |101> <-> |110>.
inline ModeOperator ideal_fredkin() {
  Matrix m = Matrix::Zero(8, 8);
  for (int k = 0; k < 8; ++k) {
    LogicalLabel in = LogicalLabel::from_index(k);
    LogicalLabel out = in.control ? LogicalLabel{in.control, in.target3, in.target2} : in;
    m(out.index(), k) = 1.0;
  }
  return ModeOperator(std::move(m), Subspace::logical, Workspace());
}

}  // namespace hfsim
