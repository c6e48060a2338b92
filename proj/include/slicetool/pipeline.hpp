#pragma once

// End-to-end analysis of one program and the on-disk artifact layout.

#include "slicetool/report.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace slicetool {

struct Datasets {
  IdentifierDataset identifiers;
  LibraryDataset libraries;
  std::string identifiers_text;
  std::string libraries_text;

  // The datasets compiled into the binary.
  static const Datasets &bundled();
  static Datasets from_text(std::string identifiers, std::string libraries);
  // Missing paths fall back to the bundled file.
  static Datasets load(const std::optional<std::filesystem::path> &identifiers,
                       const std::optional<std::filesystem::path> &libraries);
};

struct SliceResult {
  Slice slice;
  SliceAssessment assessment;
  ViewGraph jimple;
  ViewGraph java;
};

struct Analysis {
  Program program;
  Adg adg;
  std::vector<SourceLabel> sources;
  std::vector<MethodLabel> methods;
  std::vector<SliceResult> slices; // by slice id
  AnalysisReport report;

  const SliceResult *find_slice(int id) const;
};

ReportOptions echo_options(const SliceOptions &opts);

// Parses, builds the graph, labels, slices, grades and renders both views.
Analysis analyze(std::string program_name, std::string_view text, const Datasets &datasets,
                 const SliceOptions &opts);

enum class ViewSelection { Jimple, Java, Both };
enum class FormatSelection { Json, Text, Both };

std::string read_file(const std::filesystem::path &p);

// Writes report.json and slices/<id>.<view>.{json,txt} under `out`.
void write_artifacts(const Analysis &a, const std::filesystem::path &out, ViewSelection views,
                     FormatSelection formats);

} // namespace slicetool
