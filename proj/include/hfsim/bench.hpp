// Bench composition: wires elements and router nodes into a multi-path
// interferometer and folds the whole thing into one workspace operator.
//
// A bench is an ordered node list.  Router nodes (PBS, parity sorter) carry
// their two arms inline; recombination is implicit and complete, so the node
// operator is  U = inject_a . arm_a . project_a + inject_b . arm_b . project_b.
// The reference build realizes the controlled-SWAP: an initial OAM flip, a
// polarization split, an even/odd-sorted upper arm whose even branch runs the
// charge -2 spiral plate, and a mirror-only lower arm.

#pragma once

#include "hfsim/elements.hpp"
#include "hfsim/hilbert.hpp"

#include <variant>
#include <vector>

namespace hfsim {

struct PbsNode;
struct ParityNode;

using BenchNode = std::variant<Element, PbsNode, ParityNode>;

struct PbsNode {
  std::vector<BenchNode> upper;  // H arm
  std::vector<BenchNode> lower;  // V arm
};

struct ParityNode {
  std::vector<BenchNode> even;
  std::vector<BenchNode> odd;
};

struct Bench {
  Workspace ws = Workspace();
  std::vector<BenchNode> nodes;
};

// ---------------------------------------------------------------------------
// Composition

namespace detail {

inline ModeOperator compose_nodes(const std::vector<BenchNode>& nodes, Workspace ws);

inline ModeOperator node_operator(const BenchNode& node, Workspace ws) {
  return std::visit(
      [&](const auto& n) -> ModeOperator {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Element>) {
          return element_operator(n, ws);
        } else if constexpr (std::is_same_v<T, PbsNode>) {
          ModeOperator upper =
              compose_nodes(n.upper, ws).compose_after(pbs_projector(PbsPort::upper, ws));
          ModeOperator lower =
              compose_nodes(n.lower, ws).compose_after(pbs_projector(PbsPort::lower, ws));
          std::vector<bool> dom(static_cast<std::size_t>(ws.dim()));
          for (int i = 0; i < ws.dim(); ++i)
            dom[i] = upper.domain()[i] && lower.domain()[i];
          return ModeOperator(upper.matrix() + lower.matrix(), Subspace::workspace, ws,
                              std::move(dom));
        } else {
          ModeOperator even =
              compose_nodes(n.even, ws).compose_after(parity_projector(ParityPort::even, ws));
          ModeOperator odd =
              compose_nodes(n.odd, ws).compose_after(parity_projector(ParityPort::odd, ws));
          std::vector<bool> dom(static_cast<std::size_t>(ws.dim()));
          for (int i = 0; i < ws.dim(); ++i)
            dom[i] = even.domain()[i] && odd.domain()[i];
          return ModeOperator(even.matrix() + odd.matrix(), Subspace::workspace, ws,
                              std::move(dom));
        }
      },
      node);
}

inline ModeOperator compose_nodes(const std::vector<BenchNode>& nodes, Workspace ws) {
  ModeOperator acc = ModeOperator::identity(ws);
  for (const BenchNode& node : nodes) acc = node_operator(node, ws).compose_after(acc);
  return acc;
}

}  // namespace detail

struct CircuitOperator {
  ModeOperator op;
  // Max over the 8 logical basis inputs of output weight outside the logical
  // OAM modes.  Zero for any bench that implements a logical gate.
  double logical_leakage = 0.0;
};

// Exact composed operator of the whole bench.  Throws WorkspaceOverflow when
// a logical basis input would be pushed past the workspace bound anywhere
// along its path.
inline CircuitOperator circuit_operator(const Bench& bench) {
  ModeOperator op = detail::compose_nodes(bench.nodes, bench.ws);
  double leak = 0.0;
  for (int k = 0; k < 8; ++k) {
    HybridState in = encode_logical(LogicalLabel::from_index(k), bench.ws);
    HybridState out = op.apply(in);  // raises WorkspaceOverflow on masked columns
    leak = std::max(leak, out.leakage_weight());
  }
  return {std::move(op), leak};
}

// 8x8 restriction of a workspace operator to the logical basis.
inline ModeOperator logical_block(const ModeOperator& op) {
  if (op.subspace() != Subspace::workspace)
    throw std::invalid_argument("operator is already logical");
  const Workspace& ws = op.workspace();
  Matrix m(8, 8);
  for (int col = 0; col < 8; ++col) {
    LogicalLabel in = LogicalLabel::from_index(col);
    int ci = ws.index(logical_pol(in.control), logical_ell(in.target2, in.target3));
    for (int row = 0; row < 8; ++row) {
      LogicalLabel out = LogicalLabel::from_index(row);
      int ri = ws.index(logical_pol(out.control), logical_ell(out.target2, out.target3));
      m(row, col) = op.matrix()(ri, ci);
    }
  }
  return ModeOperator(std::move(m), Subspace::logical, ws);
}

// ---------------------------------------------------------------------------
// Arm maps of the reference build

// Lower (V) arm between the splitters: mirrors only, one net OAM flip, no
// phase.  Relative to the pre-flip input labels the V block is the identity.
inline ModeOperator lower_arm_map(Workspace ws = Workspace()) {
  return mirror_operator(ws);
}

// Upper (H) arm between the splitters: parity-sorted, odd modes reflected
// once, even modes pushed through the charge -2 spiral plate, so that
// +2 -> 0, +1 -> -1, 0 -> -2, -1 -> +1.
inline ModeOperator upper_arm_map(Workspace ws = Workspace()) {
  ParityNode node;
  node.even = {Element(Mirror{}), Element(Mirror{}), Element(Spp{-2})};
  node.odd = {Element(Mirror{})};
  return detail::node_operator(BenchNode(std::move(node)), ws);
}

// Reference controlled-SWAP bench.
inline Bench build_fredkin(Workspace ws = Workspace()) {
  Bench bench{ws, {}};
  bench.nodes.emplace_back(Element(Mirror{}));  // input reflector: |l> -> |-l>
  PbsNode mz;
  ParityNode sorter;
  sorter.even = {Element(Mirror{}), Element(Mirror{}), Element(Spp{-2})};
  sorter.odd = {Element(Mirror{})};
  mz.upper = {BenchNode(std::move(sorter))};
  mz.lower = {BenchNode(Element(Mirror{}))};
  bench.nodes.emplace_back(std::move(mz));
  return bench;
}

}  // namespace hfsim
