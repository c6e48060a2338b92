#pragma once

// Deterministic text and JSON artifacts for analyses and slice graphs.

#include "slicetool/java_view.hpp"
#include "slicetool/risk.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace slicetool {

struct ReportOptions {
  bool include_control = true;
  std::optional<std::size_t> max_nodes;
  std::optional<double> timeout_secs;
  std::optional<std::vector<int>> risk_filter;

  bool operator==(const ReportOptions &) const = default;
};

struct ReportSlice {
  int id = 0;
  std::string source_sig;
  std::string data_category;
  int risk = 0;
  WarningLevel warning_level = WarningLevel::A;
  std::size_t node_count_jimple = 0;
  std::size_t node_count_java = 0;
  bool truncated = false;
  bool timed_out = false;
  OpCounts op_counts;
  PseudoSummary pseudo_summary;

  bool operator==(const ReportSlice &) const = default;
};

struct AnalysisReport {
  std::string program_name;
  ReportOptions options;
  std::vector<ReportSlice> slices; // level F..A, risk, source_sig, id
  std::map<int, int> count_by_risk;
  std::map<WarningLevel, int> count_by_level; // all six levels present

  bool operator==(const AnalysisReport &) const = default;
};

// Orders the slices and folds the totals.
AnalysisReport build_report(std::string program_name, ReportOptions options, std::vector<ReportSlice> slices);

nlohmann::json report_to_json(const AnalysisReport &report);
AnalysisReport report_from_json(const nlohmann::json &j);

// Pretty-printed JSON with a trailing newline; the byte format of every artifact.
std::string dump_json(const nlohmann::json &j);

nlohmann::json export_slice_json(const ViewGraph &g);
// Inverse of export_slice_json for nodes, labels and edges. Node method
// signatures are not part of the wire format and come back empty.
ViewGraph parse_slice_json(const nlohmann::json &j);

// Header line, then `N` and `E` lines in the graph dump format.
std::string export_slice_text(const ViewGraph &g, int slice_id, const MethodSig &source_sig, int risk,
                              WarningLevel level);

nlohmann::json warning_scale_json();

} // namespace slicetool
