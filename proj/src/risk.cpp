#include "slicetool/risk.hpp"

namespace slicetool {

namespace {

constexpr std::string_view kMinimization = "Possibility of data minimization (GDPR Article §4).";
constexpr std::string_view kUsage =
    "Ensure data protection according to GDPR Article §25. Document data usage for transparency.";
constexpr std::string_view kSharing =
    "Ensure data protection according to GDPR Article §25. Document data sharing for transparency.";

constexpr LevelInfo kLevels[] = {
    {'A', "green", "#4CAF50", "Very low privacy risk", "Data collection, but no processing operations.",
     kMinimization},
    {'B', "green", "#4CAF50", "Low privacy risk",
     "Data collection and string manipulations, but no other processing operations.", kMinimization},
    {'C', "yellow", "#FFD700", "Moderate privacy risk", "At least one data storage or processing operation.",
     kUsage},
    {'D', "yellow", "#FFD700", "Significant privacy risk", "Multiple data storage or processing operations.",
     kUsage},
    {'E', "red", "#FF6347", "High privacy risk", "Data shared with third-party APIs at least once.", kSharing},
    {'F', "red", "#FF6347", "Very high privacy risk", "Data shared with third-party APIs multiple times.",
     kSharing},
};

} // namespace

const LevelInfo &level_info(WarningLevel level) { return kLevels[static_cast<int>(level)]; }

std::string_view legal_note(WarningLevel level) { return level_info(level).legal_note; }

char to_char(WarningLevel level) { return level_info(level).letter; }

std::optional<WarningLevel> level_from_char(char c) {
  if (c < 'A' || c > 'F')
    return std::nullopt;
  return static_cast<WarningLevel>(c - 'A');
}

void OpCounts::add(OperationClass c) {
  switch (c) {
  case OperationClass::StringManipulation:
    ++string_manipulation;
    break;
  case OperationClass::ProcessingStorage:
    ++processing_storage;
    break;
  case OperationClass::ThirdPartySharing:
    ++third_party_sharing;
    break;
  case OperationClass::Pseudonymization:
    ++pseudonymization;
    break;
  case OperationClass::Collection:
    break;
  }
}

MethodLabelIndex index_method_labels(const std::vector<MethodLabel> &labels) {
  MethodLabelIndex idx;
  for (const auto &l : labels)
    idx.emplace(l.node, &l);
  return idx;
}

std::optional<OperationClass> classify_node(const AdgNode &node, const MethodLabelIndex &labels,
                                            const CategoryMap &category_map) {
  if (node.kind != NodeKind::Stmt || !node.is_external_invoke())
    return std::nullopt;
  auto it = labels.find(node.id);
  if (it == labels.end())
    return std::nullopt;
  auto cat = category_map.find(it->second->entry.category);
  if (cat == category_map.end())
    return std::nullopt;
  return cat->second;
}

WarningLevel assess(const OpCounts &c) {
  if (c.third_party_sharing >= 2)
    return WarningLevel::F;
  if (c.third_party_sharing == 1)
    return WarningLevel::E;
  if (c.processing_storage >= 2)
    return WarningLevel::D;
  if (c.processing_storage == 1)
    return WarningLevel::C;
  if (c.string_manipulation >= 1)
    return WarningLevel::B;
  return WarningLevel::A;
}

SliceAssessment assess_slice(const Slice &slice, const Adg &adg, const MethodLabelIndex &labels,
                             const CategoryMap &category_map) {
  SliceAssessment a;
  a.slice_id = slice.id;
  a.risk = slice.source.entry.risk;
  std::vector<MethodLabel> in_slice;
  for (int id : slice.node_ids) {
    if (auto it = labels.find(id); it != labels.end())
      in_slice.push_back(*it->second);
    if (id == slice.source.node)
      continue;
    if (auto c = classify_node(adg.nodes[static_cast<std::size_t>(id)], labels, category_map))
      a.op_counts.add(*c);
  }
  a.level = assess(a.op_counts);
  a.pseudo_summary = grade_pseudonymization(in_slice);
  return a;
}

} // namespace slicetool
