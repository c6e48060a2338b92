#pragma once

#include "slicetool/adg.hpp"
#include "slicetool/labeler.hpp"

#include <chrono>
#include <cstddef>
#include <optional>
#include <vector>

namespace slicetool {

struct SliceOptions {
  bool include_control = true;
  std::optional<std::size_t> max_nodes;
  std::optional<std::chrono::nanoseconds> time_budget;
  std::optional<std::vector<int>> risk_filter; // sorted, unique

  // Throws std::invalid_argument when max_nodes is 0 or the budget is negative.
  void validate() const;

  bool traverses(EdgeKind k) const { return k != EdgeKind::Control || include_control; }
};

struct Slice {
  int id = 0;
  SourceLabel source;
  std::vector<int> node_ids; // breadth-first discovery order
  std::vector<int> edge_ids; // traversed-kind Adg edges inside the slice, ascending
  bool truncated = false;
  bool timed_out = false;
};

// Breadth-first closure from the source node over Data, Call, ParamIn and
// ParamOut edges, plus Control edges when enabled. Neighbors are visited in
// ascending node id. Throws UnknownSource when the node is not in the graph.
Slice forward_slice(const Adg &adg, const SourceLabel &source, const SliceOptions &opts);

// One slice per label whose risk passes the filter, ordered by (risk,
// source signature, node id). Slice ids follow that order. The time
// budget is split equally across sources.
std::vector<Slice> slice_all(const Adg &adg, const std::vector<SourceLabel> &labels, const SliceOptions &opts);

} // namespace slicetool
