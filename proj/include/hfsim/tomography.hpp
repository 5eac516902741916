// Maximum-likelihood state reconstruction from the overcomplete 27-setting /
// 216-projector Pauli dataset, Uhlmann fidelity, and Monte-Carlo error bars.
//
// Reconstruction is the R rho R fixed point: R = sum_j (f_j / p_j) Pi_j over
// all projectors, rho <- normalize(R rho R) starting from I/8, stopping when
// the trace-distance step drops below 1e-10 or after 1e4 iterations.  A step
// that would lower the log-likelihood is replaced by a diluted one
// (R -> (I + a R)/(1 + a)), which keeps the likelihood monotone.

#pragma once

#include "hfsim/hilbert.hpp"
#include "hfsim/measurement.hpp"
#include "hfsim/rng.hpp"

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace hfsim {

// 27 settings x 8 outcomes of Pauli-triple counts.
struct TomographyDataset {
  std::vector<CountsRow> counts;  // indexed like all_pauli_triples()

  TomographyDataset() : counts(27, CountsRow{}) {}

  std::uint64_t setting_total(std::size_t s) const {
    std::uint64_t t = 0;
    for (std::uint64_t c : counts[s]) t += c;
    return t;
  }
};

inline TomographyDataset generate_dataset(const DensityMatrix& rho, std::uint64_t shots,
                                          std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("shots must be >= 1");
  TomographyDataset data;
  const auto& settings = all_settings();
  for (std::size_t s = 0; s < settings.size(); ++s) {
    Probabilities p = outcome_probabilities(rho, settings[s]);
    std::mt19937_64 eng = derive_stream(seed, s);
    data.counts[s] = sample_counts(p, shots, eng);
  }
  return data;
}

// Per-setting outcome frequencies; rows sum to 1.
using FrequencyTable = std::vector<Probabilities>;

inline FrequencyTable frequencies_of(const TomographyDataset& data) {
  FrequencyTable f(27);
  for (std::size_t s = 0; s < 27; ++s) {
    std::uint64_t total = data.setting_total(s);
    if (total == 0)
      throw EmptyTableError("tomography setting " + all_settings()[s].name() +
                            " has no counts");
    for (int k = 0; k < 8; ++k)
      f[s][k] = static_cast<double>(data.counts[s][k]) / static_cast<double>(total);
  }
  return f;
}

// Exact Born-rule frequencies (the sampling-free reconstruction input).
inline FrequencyTable exact_frequencies(const DensityMatrix& rho) {
  FrequencyTable f(27);
  const auto& settings = all_settings();
  for (std::size_t s = 0; s < settings.size(); ++s)
    f[s] = outcome_probabilities(rho, settings[s]);
  return f;
}

struct MleResult {
  DensityMatrix rho = DensityMatrix::maximally_mixed();
  bool converged = false;
  int iterations = 0;
  double final_step = 0.0;
  std::vector<double> log_likelihood;  // one entry per accepted iterate
};

namespace detail {

inline double trace_distance(const Matrix8c& a, const Matrix8c& b) {
  Eigen::SelfAdjointEigenSolver<Matrix8c> es(a - b);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

// All 216 projector vectors as columns, in setting-major order.
inline const Matrix& projector_columns() {
  static const Matrix v = [] {
    Matrix m(8, 216);
    const auto& settings = all_settings();
    for (int s = 0; s < 27; ++s)
      for (int k = 0; k < 8; ++k) m.col(s * 8 + k) = settings[s].projector_vector(k);
    return m;
  }();
  return v;
}

}  // namespace detail

inline MleResult mle_reconstruct_from_frequencies(const FrequencyTable& freq,
                                                  int max_iterations = 10000,
                                                  double step_tolerance = 1e-10) {
  if (freq.size() != 27) throw std::invalid_argument("27 setting rows required");
  const Matrix& v = detail::projector_columns();

  Eigen::VectorXd f(216);
  for (int s = 0; s < 27; ++s)
    for (int k = 0; k < 8; ++k) f[s * 8 + k] = freq[s][k];

  Matrix work(8, 216);
  auto born = [&](const Matrix8c& state, Eigen::VectorXd& p) {
    work.noalias() = state * v;
    for (int j = 0; j < 216; ++j) p[j] = std::max(v.col(j).dot(work.col(j)).real(), 0.0);
  };
  auto loglik = [&](const Eigen::VectorXd& p) {
    double ll = 0.0;
    for (int j = 0; j < 216; ++j)
      if (f[j] > 0.0) ll += f[j] * std::log(std::max(p[j], 1e-300));
    return ll;
  };

  Matrix8c rho = Matrix8c::Identity() / 8.0;
  Matrix8c previous = rho;
  Eigen::VectorXd p(216), cand_p(216);
  born(rho, p);
  MleResult result;
  result.log_likelihood.push_back(loglik(p));

  Eigen::VectorXd weights(216);
  Matrix scaled(8, 216);
  for (int it = 1; it <= max_iterations; ++it) {
    // R = sum_j (f_j / p_j) Pi_j, with p floored at 1e-12
    for (int j = 0; j < 216; ++j)
      weights[j] = f[j] > 0.0 ? f[j] / std::max(p[j], 1e-12) : 0.0;
    for (int j = 0; j < 216; ++j) scaled.col(j) = weights[j] * v.col(j);
    Matrix8c r;
    r.noalias() = scaled * v.adjoint();

    auto stepped = [&](double alpha) {
      Matrix8c rd =
          alpha >= 1.0 ? r : Matrix8c((1.0 - alpha) * Matrix8c::Identity() + alpha * r);
      Matrix8c cand = rd * rho * rd;
      cand /= cand.trace().real();
      return cand;
    };

    Matrix8c candidate = stepped(1.0);
    born(candidate, cand_p);
    double cand_ll = loglik(cand_p);

    // dilute until the likelihood stops decreasing
    double alpha = 1.0;
    while (cand_ll < result.log_likelihood.back() - 1e-12 && alpha > 1e-6) {
      alpha *= 0.5;
      candidate = stepped(alpha);
      born(candidate, cand_p);
      cand_ll = loglik(cand_p);
    }

    // cheap lower bound first: trace norm >= Frobenius norm, so the exact
    // eigen-decomposition only runs when the step might cross the tolerance
    double step_lower = 0.5 * (candidate - rho).norm();
    bool below = false;
    double step = step_lower;
    if (step_lower < step_tolerance) {
      step = detail::trace_distance(candidate, rho);
      below = step < step_tolerance;
    }

    previous = rho;
    rho = candidate;
    p.swap(cand_p);
    result.log_likelihood.push_back(cand_ll);
    result.iterations = it;
    result.final_step = step;
    if (below) {
      result.converged = true;
      break;
    }
  }

  if (!result.converged && result.iterations > 0)
    result.final_step = detail::trace_distance(rho, previous);
  result.rho = DensityMatrix(rho);
  return result;
}

inline MleResult mle_reconstruct(const TomographyDataset& data, int max_iterations = 10000,
                                 double step_tolerance = 1e-10) {
  return mle_reconstruct_from_frequencies(frequencies_of(data), max_iterations,
                                          step_tolerance);
}

// ---------------------------------------------------------------------------
// Fidelity

namespace detail {

// PSD square root; eigenvalues in [-1e-9, 0) are clipped to zero and the
// matrix renormalized to unit trace, anything lower is rejected.
inline Matrix8c psd_sqrt_clipped(const Matrix8c& m) {
  Eigen::SelfAdjointEigenSolver<Matrix8c> es(m);
  Eigen::Matrix<double, 8, 1> ev = es.eigenvalues();
  if (ev.minCoeff() < -1e-9)
    throw InvalidStateError("matrix eigenvalue below -1e-9 in fidelity");
  Eigen::Matrix<double, 8, 1> clipped = ev.cwiseMax(0.0);
  double trace = clipped.sum();
  if (trace <= 0.0) throw InvalidStateError("zero-trace matrix in fidelity");
  clipped /= trace;
  Eigen::Matrix<double, 8, 1> roots = clipped.cwiseSqrt();
  return es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace detail

// Uhlmann fidelity F = (tr sqrt(sqrt(rho_o) rho_e sqrt(rho_o)))^2, evaluated
// as the squared nuclear norm of sqrt(rho_e) sqrt(rho_o): the same quantity,
// but the singular values are the square roots directly, so nothing tiny gets
// a sqrt applied to it and the result is symmetric to machine precision.
inline double fidelity(const DensityMatrix& rho_o, const DensityMatrix& rho_e) {
  Matrix8c product =
      detail::psd_sqrt_clipped(rho_e.matrix()) * detail::psd_sqrt_clipped(rho_o.matrix());
  Eigen::JacobiSVD<Matrix8c> svd(product);
  double sum = svd.singularValues().sum();
  return std::clamp(sum * sum, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Monte-Carlo error bars

struct MonteCarloResult {
  double mean = 0.0;
  double std_dev = 0.0;
};

// Poisson-resamples every count and recomputes the statistic per resample.
// Resamples are independent: each draws from its own derived stream and lands
// in its own slot, so the result is the same whatever the thread count.
inline MonteCarloResult monte_carlo_errors(
    const TomographyDataset& data,
    const std::function<double(const TomographyDataset&)>& statistic, int n_resamples,
    std::uint64_t seed) {
  if (n_resamples < 2) throw std::invalid_argument("n_resamples must be >= 2");
  std::vector<double> values(static_cast<std::size_t>(n_resamples));

  auto worker = [&](int first, int stride) {
    for (int r = first; r < n_resamples; r += stride) {
      std::mt19937_64 eng = derive_stream(seed, static_cast<std::uint64_t>(r));
      TomographyDataset resampled;
      for (std::size_t s = 0; s < 27; ++s)
        for (int k = 0; k < 8; ++k)
          resampled.counts[s][k] = poisson(static_cast<double>(data.counts[s][k]), eng);
      values[static_cast<std::size_t>(r)] = statistic(resampled);
    }
  };

  unsigned n_threads =
      std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()),
                         static_cast<unsigned>(n_resamples));
  if (n_threads <= 1) {
    worker(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_threads; ++t)
      pool.emplace_back(worker, static_cast<int>(t), static_cast<int>(n_threads));
    for (std::thread& t : pool) t.join();
  }

  double sum = 0.0, sumsq = 0.0;
  for (double v : values) {
    sum += v;
    sumsq += v * v;
  }
  double mean = sum / n_resamples;
  double var = (sumsq - n_resamples * mean * mean) / (n_resamples - 1);
  return {mean, std::sqrt(std::max(var, 0.0))};
}

}  // namespace hfsim
