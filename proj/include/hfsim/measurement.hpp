// Projective measurement settings on the three logical qubits, Born-rule
// probabilities, multinomial shot sampling, truth tables, the conversion-rate
// figure of merit, and the bench-imperfection noise model.

#pragma once

#include "hfsim/bench.hpp"
#include "hfsim/hilbert.hpp"
#include "hfsim/rng.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

namespace hfsim {

enum class PauliAxis : int { X = 0, Y = 1, Z = 2 };

using AxisTriple = std::array<PauliAxis, 3>;

inline char axis_char(PauliAxis a) {
  switch (a) {
    case PauliAxis::X: return 'X';
    case PauliAxis::Y: return 'Y';
    default: return 'Z';
  }
}

inline std::string axes_string(const AxisTriple& axes) {
  return {axis_char(axes[0]), axis_char(axes[1]), axis_char(axes[2])};
}

inline Matrix2c pauli_matrix(PauliAxis a) {
  Matrix2c m;
  const Complex i(0.0, 1.0);
  switch (a) {
    case PauliAxis::X: m << 0, 1, 1, 0; break;
    case PauliAxis::Y: m << 0, -i, i, 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

// Eigenvector of the axis with eigenvalue (-1)^bit, in the logical qubit basis.
inline Eigen::Vector2cd pauli_eigenvector(PauliAxis a, int bit) {
  const double r = 1.0 / std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  Eigen::Vector2cd v;
  switch (a) {
    case PauliAxis::X: v << r, (bit ? -r : r); break;
    case PauliAxis::Y: v << r, (bit ? -i * r : i * r); break;
    default: v = bit ? Eigen::Vector2cd(0, 1) : Eigen::Vector2cd(1, 0); break;
  }
  return v;
}

// ---------------------------------------------------------------------------
// Measurement settings

// One Pauli axis per logical qubit and the 8 rank-1 projectors of the joint
// eigenbasis.  Outcome index k = b1 b2 b3 (qubit 1 most significant); bit 0
// marks the +1 eigenstate.  The target-qubit eigenstates land on OAM
// superpositions through the logical encoding.
class MeasurementSetting {
 public:
  static MeasurementSetting from_axes(const AxisTriple& axes) {
    MeasurementSetting s;
    s.axes_ = axes;
    for (int k = 0; k < 8; ++k) {
      Eigen::Vector2cd v1 = pauli_eigenvector(axes[0], (k >> 2) & 1);
      Eigen::Vector2cd v2 = pauli_eigenvector(axes[1], (k >> 1) & 1);
      Eigen::Vector2cd v3 = pauli_eigenvector(axes[2], k & 1);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          for (int c = 0; c < 2; ++c)
            s.vectors_[k][a * 4 + b * 2 + c] = v1[a] * v2[b] * v3[c];
    }
    return s;
  }

  const AxisTriple& axes() const { return axes_; }
  std::string name() const { return axes_string(axes_); }
  const Vector8c& projector_vector(int outcome) const { return vectors_[outcome]; }
  Matrix8c projector(int outcome) const {
    return vectors_[outcome] * vectors_[outcome].adjoint();
  }
  Matrix8c projector_sum() const {
    Matrix8c sum = Matrix8c::Zero();
    for (int k = 0; k < 8; ++k) sum += projector(k);
    return sum;
  }

 private:
  AxisTriple axes_{};
  std::array<Vector8c, 8> vectors_{};
};

inline MeasurementSetting setting_projectors(const AxisTriple& axes) {
  return MeasurementSetting::from_axes(axes);
}

// The 27 Pauli triples in lexicographic X < Y < Z order (XXX, XXY, ..., ZZZ).
inline const std::vector<AxisTriple>& all_pauli_triples() {
  static const std::vector<AxisTriple> triples = [] {
    std::vector<AxisTriple> out;
    const PauliAxis axes[3] = {PauliAxis::X, PauliAxis::Y, PauliAxis::Z};
    for (PauliAxis a : axes)
      for (PauliAxis b : axes)
        for (PauliAxis c : axes) out.push_back({a, b, c});
    return out;
  }();
  return triples;
}

inline const std::vector<MeasurementSetting>& all_settings() {
  static const std::vector<MeasurementSetting> settings = [] {
    std::vector<MeasurementSetting> out;
    for (const AxisTriple& t : all_pauli_triples())
      out.push_back(MeasurementSetting::from_axes(t));
    return out;
  }();
  return settings;
}

// ---------------------------------------------------------------------------
// Born rule and shot sampling

using Probabilities = std::array<double, 8>;
using CountsRow = std::array<std::uint64_t, 8>;

inline Probabilities outcome_probabilities(const DensityMatrix& rho,
                                           const MeasurementSetting& setting) {
  Probabilities p{};
  for (int k = 0; k < 8; ++k) {
    const Vector8c& v = setting.projector_vector(k);
    double value = (v.adjoint() * rho.matrix() * v)(0, 0).real();
    if (value < -1e-12)
      throw InvalidStateError("negative outcome probability: " + std::to_string(value));
    p[k] = std::clamp(value, 0.0, 1.0);
  }
  return p;
}

// Multinomial draw; one engine word per shot keeps the draw reproducible.
inline CountsRow sample_counts(const Probabilities& probs, std::uint64_t shots,
                               std::mt19937_64& eng) {
  std::array<double, 8> cdf{};
  std::partial_sum(probs.begin(), probs.end(), cdf.begin());
  CountsRow counts{};
  for (std::uint64_t s = 0; s < shots; ++s) {
    double u = uniform01(eng) * cdf[7];
    int k = static_cast<int>(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    counts[std::min(k, 7)]++;
  }
  return counts;
}

inline CountsRow sample_counts(const Probabilities& probs, std::uint64_t shots,
                               std::uint64_t seed) {
  std::mt19937_64 eng = derive_stream(seed, 0);
  return sample_counts(probs, shots, eng);
}

// Event counts per (input or setting) row by outcome.
struct CountsTable {
  std::vector<std::string> row_labels;
  std::vector<CountsRow> rows;

  std::uint64_t row_total(std::size_t i) const {
    return std::accumulate(rows[i].begin(), rows[i].end(), std::uint64_t{0});
  }
  std::uint64_t total() const {
    std::uint64_t t = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) t += row_total(i);
    return t;
  }
};

// ---------------------------------------------------------------------------
// Noise model

// Bench imperfection knobs: a per-shot random relative phase between the two
// PBS arms (std dev sigma, averaged analytically into the density matrix) and
// a depolarizing admixture rho -> (1-p) rho + p I/8.
struct NoiseModel {
  double arm_dephasing_sigma = 0.0;
  double depolarizing_p = 0.0;
  std::uint64_t rng_seed = 0;

  void validate() const {
    if (arm_dephasing_sigma < 0.0)
      throw std::invalid_argument("arm_dephasing_sigma must be >= 0");
    if (depolarizing_p < 0.0 || depolarizing_p > 1.0)
      throw std::invalid_argument("depolarizing_p must lie in [0,1]");
  }
};

// E[e^{i delta}] over delta ~ N(0, sigma^2) damps every control-qubit
// coherence by exp(-sigma^2/2); sampled counts stay multinomial because the
// average is folded into rho up front.
inline DensityMatrix apply_noise(const HybridState& state, const NoiseModel& noise) {
  noise.validate();
  Vector8c v = logical_vector(state);
  if (std::abs(v.squaredNorm() - 1.0) > 1e-9)
    throw InvalidStateError("noise model expects a normalized logical state");
  Matrix8c rho = v * v.adjoint();
  double damp = std::exp(-0.5 * noise.arm_dephasing_sigma * noise.arm_dephasing_sigma);
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c)
      if ((r >> 2) != (c >> 2)) rho(r, c) *= damp;  // H-block vs V-block coherence
  rho = (1.0 - noise.depolarizing_p) * rho +
        noise.depolarizing_p / 8.0 * Matrix8c::Identity();
  return DensityMatrix(std::move(rho));
}

// ---------------------------------------------------------------------------
// Truth tables

// Correct output index per computational input under the ideal gate:
// identity everywhere except |101> <-> |110>.
inline std::array<int, 8> fredkin_permutation() {
  return {0, 1, 2, 3, 4, 6, 5, 7};
}

using ProbabilityTable = std::array<Probabilities, 8>;

inline DensityMatrix gate_output_density(const ModeOperator& bench_op,
                                         const HybridState& input,
                                         const NoiseModel& noise) {
  return apply_noise(bench_op.apply(input), noise);
}

// Exact Z,Z,Z outcome probabilities for each computational input.
inline ProbabilityTable truth_table_analytic(const Bench& bench, const NoiseModel& noise) {
  ModeOperator op = circuit_operator(bench).op;
  MeasurementSetting zzz = setting_projectors({PauliAxis::Z, PauliAxis::Z, PauliAxis::Z});
  ProbabilityTable table{};
  for (int k = 0; k < 8; ++k) {
    HybridState in = encode_logical(LogicalLabel::from_index(k), bench.ws);
    table[k] = outcome_probabilities(gate_output_density(op, in, noise), zzz);
  }
  return table;
}

struct TruthTableResult {
  ProbabilityTable probabilities{};  // row-normalized
  CountsTable counts;
};

// Finite-count emulation: one derived RNG stream per input row.
inline TruthTableResult truth_table(const Bench& bench, const NoiseModel& noise,
                                    std::uint64_t shots, std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("shots must be >= 1");
  ModeOperator op = circuit_operator(bench).op;
  MeasurementSetting zzz = setting_projectors({PauliAxis::Z, PauliAxis::Z, PauliAxis::Z});
  TruthTableResult result;
  for (int k = 0; k < 8; ++k) {
    LogicalLabel label = LogicalLabel::from_index(k);
    HybridState in = encode_logical(label, bench.ws);
    Probabilities p = outcome_probabilities(gate_output_density(op, in, noise), zzz);
    std::mt19937_64 eng = derive_stream(seed, static_cast<std::uint64_t>(k));
    CountsRow row = sample_counts(p, shots, eng);
    result.counts.row_labels.push_back(label.ket());
    result.counts.rows.push_back(row);
    for (int j = 0; j < 8; ++j)
      result.probabilities[k][j] = static_cast<double>(row[j]) / static_cast<double>(shots);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Conversion rate

enum class ConversionNorm {
  row_mean,      // mean over inputs of each row's correct-outcome probability
  global_total,  // sum of correct counts over the grand total
};

struct ConversionRate {
  double value = 0.0;
  double std_dev = 0.0;
};

inline double conversion_rate_point(const std::vector<CountsRow>& rows,
                                    const std::vector<int>& correct,
                                    ConversionNorm norm) {
  double acc = 0.0;
  std::uint64_t grand = 0, good = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::uint64_t total = std::accumulate(rows[i].begin(), rows[i].end(), std::uint64_t{0});
    if (total == 0) throw EmptyTableError("counts row " + std::to_string(i) + " is empty");
    acc += static_cast<double>(rows[i][correct[i]]) / static_cast<double>(total);
    grand += total;
    good += rows[i][correct[i]];
  }
  if (norm == ConversionNorm::row_mean) return acc / static_cast<double>(rows.size());
  return static_cast<double>(good) / static_cast<double>(grand);
}

// Monte-Carlo uncertainty: Poisson-resample every count, recompute the rate.
inline ConversionRate conversion_rate(const CountsTable& table,
                                      const std::vector<int>& correct_outcome,
                                      ConversionNorm norm = ConversionNorm::row_mean,
                                      int n_resamples = 100, std::uint64_t seed = 1) {
  if (table.rows.empty()) throw EmptyTableError("counts table is empty");
  if (correct_outcome.size() != table.rows.size())
    throw std::invalid_argument("one correct outcome per row required");
  ConversionRate out;
  out.value = conversion_rate_point(table.rows, correct_outcome, norm);
  if (n_resamples < 2) return out;
  double sum = 0.0, sumsq = 0.0;
  for (int r = 0; r < n_resamples; ++r) {
    std::mt19937_64 eng = derive_stream(seed, static_cast<std::uint64_t>(r));
    std::vector<CountsRow> resampled(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i)
      for (int j = 0; j < 8; ++j)
        resampled[i][j] = poisson(static_cast<double>(table.rows[i][j]), eng);
    double v = conversion_rate_point(resampled, correct_outcome, norm);
    sum += v;
    sumsq += v * v;
  }
  double mean = sum / n_resamples;
  double var = (sumsq - n_resamples * mean * mean) / (n_resamples - 1);
  out.std_dev = std::sqrt(std::max(var, 0.0));
  return out;
}

// Correct column = the ideal gate permutation (truth-table convention).
inline ConversionRate conversion_rate(const CountsTable& table,
                                      ConversionNorm norm = ConversionNorm::row_mean,
                                      int n_resamples = 100, std::uint64_t seed = 1) {
  std::array<int, 8> perm = fredkin_permutation();
  std::vector<int> correct(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) correct[i] = perm[i % 8];
  return conversion_rate(table, correct, norm, n_resamples, seed);
}

// Analytic conversion rate of a probability table (no sampling, no error bar).
inline double conversion_rate_analytic(const ProbabilityTable& table,
                                       ConversionNorm norm = ConversionNorm::row_mean) {
  std::array<int, 8> perm = fredkin_permutation();
  double acc = 0.0;
  for (int i = 0; i < 8; ++i) {
    double total = std::accumulate(table[i].begin(), table[i].end(), 0.0);
    if (total <= 0.0) throw EmptyTableError("probability row sums to zero");
    acc += norm == ConversionNorm::row_mean ? table[i][perm[i]] / total : table[i][perm[i]];
  }
  if (norm == ConversionNorm::row_mean) return acc / 8.0;
  double grand = 0.0;
  for (int i = 0; i < 8; ++i)
    grand += std::accumulate(table[i].begin(), table[i].end(), 0.0);
  return acc / grand;
}

}  // namespace hfsim
