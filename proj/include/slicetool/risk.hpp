#pragma once

// Six-tier warning scale for slices, graded from the processing
// operations reachable from the source.

#include "slicetool/labeler.hpp"
#include "slicetool/slicer.hpp"

#include <map>
#include <optional>
#include <string_view>
#include <vector>

namespace slicetool {

enum class WarningLevel { A, B, C, D, E, F };

inline constexpr WarningLevel kAllLevels[] = {WarningLevel::A, WarningLevel::B, WarningLevel::C,
                                              WarningLevel::D, WarningLevel::E, WarningLevel::F};

struct LevelInfo {
  char letter;
  std::string_view color;    // green, yellow, red
  std::string_view hex;      // badge color
  std::string_view risk;     // e.g. "Very low privacy risk"
  std::string_view property; // slice property the level stands for
  std::string_view legal_note;
};

const LevelInfo &level_info(WarningLevel level);
std::string_view legal_note(WarningLevel level);
char to_char(WarningLevel level);
std::optional<WarningLevel> level_from_char(char c);

// Per-slice counts of classified nodes, source node excluded.
struct OpCounts {
  int string_manipulation = 0;
  int processing_storage = 0;
  int third_party_sharing = 0;
  int pseudonymization = 0;

  void add(OperationClass c);
  bool operator==(const OpCounts &) const = default;
};

// Node id -> method label, for classification lookups.
using MethodLabelIndex = std::map<int, const MethodLabel *>;
MethodLabelIndex index_method_labels(const std::vector<MethodLabel> &labels);

std::optional<OperationClass> classify_node(const AdgNode &node, const MethodLabelIndex &labels,
                                            const CategoryMap &category_map);

// Ladder: sharing >= 2 -> F, sharing 1 -> E, processing >= 2 -> D,
// processing 1 -> C, any string manipulation -> B, otherwise A.
WarningLevel assess(const OpCounts &counts);

struct SliceAssessment {
  int slice_id = 0;
  int risk = 0;
  WarningLevel level = WarningLevel::A;
  OpCounts op_counts;
  PseudoSummary pseudo_summary;
};

SliceAssessment assess_slice(const Slice &slice, const Adg &adg, const MethodLabelIndex &labels,
                             const CategoryMap &category_map);

} // namespace slicetool
