#include "hfsim/measurement.hpp"

#include "hfsim/ghz_mermin.hpp"
#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace hfsim;

namespace {
DensityMatrix ghz1_density() { return DensityMatrix::pure(ghz_state({0, 0, 1})); }
}  // namespace

TEST_CASE("setting projectors: eigenbases and completeness") {
  MeasurementSetting zzz = setting_projectors({PauliAxis::Z, PauliAxis::Z, PauliAxis::Z});
  for (int k = 0; k < 8; ++k) {
    Matrix8c p = zzz.projector(k);
    for (int r = 0; r < 8; ++r)
      CHECK(std::abs(p(r, r).real() - (r == k ? 1.0 : 0.0)) < 1e-15);
  }

  MeasurementSetting xxx = setting_projectors({PauliAxis::X, PauliAxis::X, PauliAxis::X});
  const Vector8c& v0 = xxx.projector_vector(0);
  for (int i = 0; i < 8; ++i)
    CHECK(std::abs(v0[i] - Complex(1.0 / std::sqrt(8.0))) < 1e-14);

  for (const MeasurementSetting& s : all_settings()) {
    CHECK((s.projector_sum() - Matrix8c::Identity()).cwiseAbs().maxCoeff() < 1e-10);
    for (int k = 0; k < 8; ++k)
      CHECK(std::abs(s.projector_vector(k).norm() - 1.0) < 1e-12);
  }
  CHECK(all_settings().size() == 27);
}

TEST_CASE("born-rule probabilities") {
  MeasurementSetting zzz = setting_projectors({PauliAxis::Z, PauliAxis::Z, PauliAxis::Z});
  Probabilities p = outcome_probabilities(ghz1_density(), zzz);
  CHECK(p[1] == Catch::Approx(0.5));  // |001>
  CHECK(p[6] == Catch::Approx(0.5));  // |110>
  CHECK(p[0] + p[2] + p[3] + p[4] + p[5] + p[7] < 1e-12);

  Probabilities mixed = outcome_probabilities(DensityMatrix::maximally_mixed(), zzz);
  for (double v : mixed) CHECK(v == Catch::Approx(0.125));

  // GHZ1 in the XXX basis concentrates on the four even-parity outcomes
  MeasurementSetting xxx = setting_projectors({PauliAxis::X, PauliAxis::X, PauliAxis::X});
  Probabilities px = outcome_probabilities(ghz1_density(), xxx);
  for (int k = 0; k < 8; ++k) {
    int parity = ((k >> 2) ^ (k >> 1) ^ k) & 1;
    CHECK(px[k] == Catch::Approx(parity == 0 ? 0.25 : 0.0).margin(1e-12));
  }

  double sum = 0.0;
  for (double v : px) sum += v;
  CHECK(sum == Catch::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("multinomial sampling") {
  Probabilities sure{1, 0, 0, 0, 0, 0, 0, 0};
  CountsRow counts = sample_counts(sure, 1000, std::uint64_t{5});
  CHECK(counts[0] == 1000);

  // law of large numbers at 1e6 shots: each frequency within 3 sigma of 1/8
  Probabilities uniform;
  uniform.fill(0.125);
  CountsRow big = sample_counts(uniform, 1000000, std::uint64_t{42});
  double sigma = std::sqrt(0.125 * 0.875 / 1e6);
  for (int k = 0; k < 8; ++k) {
    double freq = static_cast<double>(big[k]) / 1e6;
    CHECK(std::abs(freq - 0.125) < 3 * sigma);
  }

  CHECK(sample_counts(uniform, 5000, std::uint64_t{9}) ==
        sample_counts(uniform, 5000, std::uint64_t{9}));
}

TEST_CASE("noise model") {
  HybridState ghz = ghz_state({0, 0, 1});

  DensityMatrix clean = apply_noise(ghz, NoiseModel{0.0, 0.0});
  CHECK((clean.matrix() - ghz1_density().matrix()).cwiseAbs().maxCoeff() < 1e-12);

  DensityMatrix fully = apply_noise(ghz, NoiseModel{0.0, 1.0});
  CHECK((fully.matrix() - Matrix8c(Matrix8c::Identity() / 8.0)).cwiseAbs().maxCoeff() <
        1e-12);

  // depolarizing p = 0.05 leaves diagonal Z probability 0.95 + 0.05/8
  DensityMatrix noisy = apply_noise(encode_logical({1, 0, 1}), NoiseModel{0.0, 0.05});
  CHECK(noisy.matrix()(5, 5).real() == Catch::Approx(0.95625).epsilon(1e-12));

  // arm dephasing damps only the control-coherence block
  double sigma = 0.8;
  DensityMatrix dephased = apply_noise(ghz, NoiseModel{sigma, 0.0});
  double damp = std::exp(-0.5 * sigma * sigma);
  CHECK(dephased.matrix()(1, 6).real() == Catch::Approx(0.5 * damp));
  CHECK(dephased.matrix()(1, 1).real() == Catch::Approx(0.5));

  CHECK_THROWS_AS(apply_noise(ghz, NoiseModel{0.0, 1.5}), std::invalid_argument);
}

TEST_CASE("analytic truth table is the exact gate permutation") {
  Bench bench = build_fredkin();
  ProbabilityTable table = truth_table_analytic(bench, NoiseModel{});
  std::array<int, 8> perm = fredkin_permutation();
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      CHECK(std::abs(table[i][j] - (j == perm[i] ? 1.0 : 0.0)) < 1e-12);
}

TEST_CASE("sampled truth table converges to the analytic one") {
  Bench bench = build_fredkin();
  NoiseModel noise{0.0, 0.05};
  std::uint64_t shots = 100000;
  TruthTableResult result = truth_table(bench, noise, shots, 77);
  ProbabilityTable analytic = truth_table_analytic(bench, noise);
  for (int i = 0; i < 8; ++i) {
    CHECK(result.counts.row_total(i) == shots);
    for (int j = 0; j < 8; ++j) {
      double se = std::sqrt(std::max(analytic[i][j] * (1 - analytic[i][j]), 1e-12) /
                            static_cast<double>(shots));
      CHECK(std::abs(result.probabilities[i][j] - analytic[i][j]) < 5 * se + 1e-9);
    }
  }
}

TEST_CASE("conversion rate") {
  // perfect diagonal table
  CountsTable diag;
  for (int i = 0; i < 8; ++i) {
    diag.row_labels.push_back(LogicalLabel::from_index(i).ket());
    CountsRow row{};
    row[i] = 1000;
    diag.rows.push_back(row);
  }
  std::vector<int> identity_map{0, 1, 2, 3, 4, 5, 6, 7};
  CHECK(conversion_rate(diag, identity_map, ConversionNorm::row_mean, 0).value ==
        Catch::Approx(1.0));

  // uniform table
  CountsTable uniform;
  for (int i = 0; i < 8; ++i) {
    uniform.row_labels.push_back(LogicalLabel::from_index(i).ket());
    CountsRow row;
    row.fill(125);
    uniform.rows.push_back(row);
  }
  CHECK(conversion_rate(uniform, ConversionNorm::row_mean, 0).value ==
        Catch::Approx(0.125));

  // invariant under uniform count scaling
  CountsTable scaled = uniform;
  for (auto& row : scaled.rows)
    for (auto& c : row) c *= 17;
  CHECK(conversion_rate(scaled, ConversionNorm::row_mean, 0).value ==
        conversion_rate(uniform, ConversionNorm::row_mean, 0).value);
  CHECK(conversion_rate(scaled, ConversionNorm::global_total, 0).value ==
        conversion_rate(uniform, ConversionNorm::global_total, 0).value);

  CHECK_THROWS_AS(conversion_rate(CountsTable{}), EmptyTableError);

  // analytic depolarized table: P = 1 - 7p/8
  ProbabilityTable table = truth_table_analytic(build_fredkin(), NoiseModel{0.0, 0.05});
  CHECK(conversion_rate_analytic(table) == Catch::Approx(0.95625).epsilon(1e-12));
  CHECK(conversion_rate_analytic(table, ConversionNorm::global_total) ==
        Catch::Approx(0.95625).epsilon(1e-12));
}

TEST_CASE("conversion rate uncertainty shrinks with statistics") {
  Bench bench = build_fredkin();
  TruthTableResult big = truth_table(bench, NoiseModel{0.0, 0.05}, 100000, 3);
  ConversionRate rate = conversion_rate(big.counts, ConversionNorm::row_mean, 64, 11);
  CHECK(rate.std_dev < 0.002);
  CHECK(rate.std_dev > 0.0);
  CHECK(std::abs(rate.value - 0.95625) < 0.005);
}
