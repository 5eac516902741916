// JSON and CSV serialization.  States and operators emit arrays of [re, im]
// pairs with a header recording L and the basis-ordering version; benches
// load/save as nested element/router node lists; counts tables key rows by
// setting string.  CSV output uses a header row and 6 significant digits.

#pragma once

#include "hfsim/bench.hpp"
#include "hfsim/elements.hpp"
#include "hfsim/hilbert.hpp"
#include "hfsim/measurement.hpp"
#include "hfsim/tomography.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

namespace hfsim {

using Json = nlohmann::ordered_json;

inline constexpr const char* kStateFormat = "hfsim-state-v1";
inline constexpr const char* kOperatorFormat = "hfsim-operator-v1";
inline constexpr const char* kBenchFormat = "hfsim-bench-v1";

// ---------------------------------------------------------------------------
// Complex helpers

inline Json complex_to_json(const Complex& c) { return Json::array({c.real(), c.imag()}); }

inline Complex complex_from_json(const Json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

inline Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix matrix_from_json(const Json& j) {
  auto rows = static_cast<int>(j.size());
  auto cols = rows > 0 ? static_cast<int>(j.at(0).size()) : 0;
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = complex_from_json(j.at(r).at(c));
  return m;
}

// ---------------------------------------------------------------------------
// States and operators

inline Json to_json(const HybridState& s) {
  Json j;
  j["format"] = kStateFormat;
  j["L"] = s.workspace().half_width();
  j["basis"] = kBasisVersion;
  Json amps = Json::array();
  for (int i = 0; i < s.amplitudes().size(); ++i)
    amps.push_back(complex_to_json(s.amplitudes()[i]));
  j["amplitudes"] = std::move(amps);
  return j;
}

inline HybridState state_from_json(const Json& j) {
  if (j.at("format") != kStateFormat) throw std::invalid_argument("not a state document");
  if (j.at("basis") != kBasisVersion)
    throw std::invalid_argument("unsupported basis ordering version");
  Workspace ws(j.at("L").get<int>());
  Vector amps(ws.dim());
  const Json& arr = j.at("amplitudes");
  if (static_cast<int>(arr.size()) != ws.dim())
    throw std::invalid_argument("amplitude count does not match L");
  for (int i = 0; i < ws.dim(); ++i) amps[i] = complex_from_json(arr.at(i));
  return HybridState(ws, std::move(amps));
}

inline Json to_json(const ModeOperator& op) {
  Json j;
  j["format"] = kOperatorFormat;
  j["L"] = op.workspace().half_width();
  j["basis"] = kBasisVersion;
  j["subspace"] = op.subspace() == Subspace::logical ? "logical" : "workspace";
  j["matrix"] = matrix_to_json(op.matrix());
  return j;
}

inline ModeOperator operator_from_json(const Json& j) {
  if (j.at("format") != kOperatorFormat)
    throw std::invalid_argument("not an operator document");
  if (j.at("basis") != kBasisVersion)
    throw std::invalid_argument("unsupported basis ordering version");
  Subspace space =
      j.at("subspace") == "logical" ? Subspace::logical : Subspace::workspace;
  return ModeOperator(matrix_from_json(j.at("matrix")), space,
                      Workspace(j.at("L").get<int>()));
}

inline Json density_to_json(const DensityMatrix& rho, bool imaginary_part) {
  Json rows = Json::array();
  for (int r = 0; r < 8; ++r) {
    Json row = Json::array();
    for (int c = 0; c < 8; ++c)
      row.push_back(imaginary_part ? rho.matrix()(r, c).imag() : rho.matrix()(r, c).real());
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Elements and benches

inline Json to_json(const Element& e) {
  return std::visit(
      [](const auto& el) -> Json {
        using T = std::decay_t<decltype(el)>;
        Json j;
        if constexpr (std::is_same_v<T, Hwp>) {
          j["kind"] = "hwp";
          j["params"] = {{"theta", el.theta}};
        } else if constexpr (std::is_same_v<T, Qwp>) {
          j["kind"] = "qwp";
          j["params"] = {{"theta", el.theta}};
        } else if constexpr (std::is_same_v<T, DovePrism>) {
          j["kind"] = "dove";
          j["params"] = {{"alpha", el.alpha},
                         {"direction", el.direction == DoveDirection::forward
                                           ? "forward"
                                           : "backward"}};
        } else if constexpr (std::is_same_v<T, Spp>) {
          j["kind"] = "spp";
          j["params"] = {{"charge", el.charge}};
        } else if constexpr (std::is_same_v<T, Mirror>) {
          j["kind"] = "mirror";
          j["params"] = Json::object();
        } else {
          j["kind"] = "phase_shift";
          j["params"] = {{"delta", el.delta}};
        }
        return j;
      },
      e);
}

inline Element element_from_json(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const Json params = j.value("params", Json::object());
  if (kind == "hwp") return Hwp{params.at("theta").get<double>()};
  if (kind == "qwp") return Qwp{params.at("theta").get<double>()};
  if (kind == "dove") {
    DoveDirection dir = params.at("direction") == "backward" ? DoveDirection::backward
                                                             : DoveDirection::forward;
    return DovePrism{params.at("alpha").get<double>(), dir};
  }
  if (kind == "spp") return Spp{params.at("charge").get<int>()};
  if (kind == "mirror") return Mirror{};
  if (kind == "phase_shift") return PhaseShift{params.at("delta").get<double>()};
  throw CompositionError("unknown element kind: " + kind);
}

inline Json nodes_to_json(const std::vector<BenchNode>& nodes);

inline Json to_json(const BenchNode& node) {
  return std::visit(
      [](const auto& n) -> Json {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Element>) {
          return to_json(n);
        } else if constexpr (std::is_same_v<T, PbsNode>) {
          Json j;
          j["kind"] = "pbs";
          j["upper"] = nodes_to_json(n.upper);
          j["lower"] = nodes_to_json(n.lower);
          return j;
        } else {
          Json j;
          j["kind"] = "parity_sorter";
          j["even"] = nodes_to_json(n.even);
          j["odd"] = nodes_to_json(n.odd);
          return j;
        }
      },
      node);
}

inline Json nodes_to_json(const std::vector<BenchNode>& nodes) {
  Json arr = Json::array();
  for (const BenchNode& n : nodes) arr.push_back(to_json(n));
  return arr;
}

inline std::vector<BenchNode> nodes_from_json(const Json& arr);

inline BenchNode node_from_json(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "pbs") {
    if (!j.contains("upper") || !j.contains("lower"))
      throw CompositionError("pbs node leaves a port dangling");
    PbsNode n;
    n.upper = nodes_from_json(j.at("upper"));
    n.lower = nodes_from_json(j.at("lower"));
    return n;
  }
  if (kind == "parity_sorter") {
    if (!j.contains("even") || !j.contains("odd"))
      throw CompositionError("parity_sorter node leaves a port dangling");
    ParityNode n;
    n.even = nodes_from_json(j.at("even"));
    n.odd = nodes_from_json(j.at("odd"));
    return n;
  }
  return element_from_json(j);
}

inline std::vector<BenchNode> nodes_from_json(const Json& arr) {
  std::vector<BenchNode> out;
  for (const Json& j : arr) out.push_back(node_from_json(j));
  return out;
}

inline Json to_json(const Bench& bench) {
  Json j;
  j["format"] = kBenchFormat;
  j["L"] = bench.ws.half_width();
  j["nodes"] = nodes_to_json(bench.nodes);
  return j;
}

inline Bench bench_from_json(const Json& j) {
  if (j.at("format") != kBenchFormat) throw std::invalid_argument("not a bench document");
  Bench bench{Workspace(j.at("L").get<int>()), nodes_from_json(j.at("nodes"))};
  return bench;
}

// ---------------------------------------------------------------------------
// Counts

inline Json to_json(const CountsTable& table) {
  Json counts = Json::object();
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    Json row = Json::array();
    for (std::uint64_t c : table.rows[i]) row.push_back(c);
    counts[table.row_labels[i]] = std::move(row);
  }
  return counts;
}

inline Json to_json(const TomographyDataset& data) {
  Json counts = Json::object();
  const auto& triples = all_pauli_triples();
  for (std::size_t s = 0; s < 27; ++s) {
    Json row = Json::array();
    for (std::uint64_t c : data.counts[s]) row.push_back(c);
    counts[axes_string(triples[s])] = std::move(row);
  }
  return counts;
}

inline TomographyDataset dataset_from_json(const Json& j) {
  TomographyDataset data;
  const auto& triples = all_pauli_triples();
  for (std::size_t s = 0; s < 27; ++s) {
    const Json& row = j.at(axes_string(triples[s]));
    for (int k = 0; k < 8; ++k) data.counts[s][k] = row.at(k).get<std::uint64_t>();
  }
  return data;
}

// ---------------------------------------------------------------------------
// Files and CSV

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
}

inline void write_json_file(const std::string& path, const Json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return Json::parse(in);
}

// 6 significant digits, locale-independent.
inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// Rectangular CSV with a header row.
inline std::string csv_table(const std::string& corner,
                             const std::vector<std::string>& column_labels,
                             const std::vector<std::string>& row_labels,
                             const std::vector<std::vector<double>>& values) {
  std::string out = corner;
  for (const std::string& c : column_labels) out += "," + c;
  out += "\n";
  for (std::size_t r = 0; r < values.size(); ++r) {
    out += row_labels[r];
    for (double v : values[r]) out += "," + format_number(v);
    out += "\n";
  }
  return out;
}

inline std::vector<std::string> logical_ket_labels() {
  std::vector<std::string> labels;
  for (int k = 0; k < 8; ++k) labels.push_back(LogicalLabel::from_index(k).ket());
  return labels;
}

}  // namespace hfsim
