#pragma once

// Privacy labels: identifier-dataset sources and privacy-library methods.

#include "slicetool/adg.hpp"
#include "slicetool/errors.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace slicetool {

// Identifier dataset line: `<sig> | data category | risk`. The declaring
// class of the signature may end in `*` to match any class with that prefix.
struct IdentifierEntry {
  MethodSig signature;
  bool wildcard = false;
  std::string class_prefix; // wildcard entries: the text before `*`
  std::string data_category;
  int risk = 1;

  std::string pattern() const;
  bool operator==(const IdentifierEntry &) const = default;
};

struct IdentifierDataset {
  std::vector<IdentifierEntry> entries;

  // Copy restricted to the given risk tiers.
  IdentifierDataset filtered(const std::vector<int> &risks) const;
};

IdentifierDataset load_identifier_dataset(std::string_view text);

enum class PseudoStrength { Weak, Strong };
std::string_view to_string(PseudoStrength s);

enum class OperationClass { Collection, StringManipulation, ProcessingStorage, ThirdPartySharing, Pseudonymization };
std::string_view to_string(OperationClass c);
std::optional<OperationClass> operation_class_from_string(std::string_view s);

// Library dataset line: `package.prefix | category [| weak|strong]`.
struct LibraryEntry {
  std::string package_prefix;
  std::string category;
  std::optional<PseudoStrength> pseudo_strength;

  bool operator==(const LibraryEntry &) const = default;
};

using CategoryMap = std::map<std::string, OperationClass, std::less<>>;

// Library category -> operation class used by the default libraries file.
const CategoryMap &default_category_map();

// `@category <name> = <OperationClass>` header lines extend or override
// the default category map.
struct LibraryDataset {
  std::vector<LibraryEntry> entries;
  CategoryMap category_map = default_category_map();
};

LibraryDataset load_library_dataset(std::string_view text);

struct SourceLabel {
  int node = 0;
  IdentifierEntry entry;
  MethodSig call_site_sig;

  bool operator==(const SourceLabel &) const = default;
};

struct MethodLabel {
  int node = 0;
  LibraryEntry entry;

  bool operator==(const MethodLabel &) const = default;
};

// Best dataset entry for a callee: exact signature first, then the
// wildcard with the longest class prefix.
const IdentifierEntry *match_identifier(const IdentifierDataset &dataset, const MethodSig &callee);

// True when `cls` lies inside the package or class named by `prefix`.
bool class_has_prefix(std::string_view cls, std::string_view prefix);

std::vector<SourceLabel> label_sources(const Adg &adg, const IdentifierDataset &dataset);
std::vector<MethodLabel> label_privacy_methods(const Adg &adg, const LibraryDataset &libs);

struct PseudoSummary {
  bool present = false;
  std::optional<PseudoStrength> weakest_strength;

  bool operator==(const PseudoSummary &) const = default;
};

PseudoSummary grade_pseudonymization(const std::vector<MethodLabel> &labels);

} // namespace slicetool
