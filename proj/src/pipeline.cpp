#include "slicetool/pipeline.hpp"

#include "slicetool/parser.hpp"

#include <fstream>
#include <sstream>

namespace slicetool {

// Generated at build time from data/*.psv.
extern const char *const kBundledIdentifiers;
extern const char *const kBundledLibraries;

const Datasets &Datasets::bundled() {
  static const Datasets d = from_text(kBundledIdentifiers, kBundledLibraries);
  return d;
}

Datasets Datasets::from_text(std::string identifiers, std::string libraries) {
  Datasets d;
  d.identifiers = load_identifier_dataset(identifiers);
  d.libraries = load_library_dataset(libraries);
  d.identifiers_text = std::move(identifiers);
  d.libraries_text = std::move(libraries);
  return d;
}

Datasets Datasets::load(const std::optional<std::filesystem::path> &identifiers,
                        const std::optional<std::filesystem::path> &libraries) {
  return from_text(identifiers ? read_file(*identifiers) : std::string(kBundledIdentifiers),
                   libraries ? read_file(*libraries) : std::string(kBundledLibraries));
}

const SliceResult *Analysis::find_slice(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= slices.size())
    return nullptr;
  return &slices[static_cast<std::size_t>(id)];
}

ReportOptions echo_options(const SliceOptions &opts) {
  ReportOptions r;
  r.include_control = opts.include_control;
  r.max_nodes = opts.max_nodes;
  if (opts.time_budget)
    r.timeout_secs = std::chrono::duration<double>(*opts.time_budget).count();
  r.risk_filter = opts.risk_filter;
  return r;
}

Analysis analyze(std::string program_name, std::string_view text, const Datasets &datasets,
                 const SliceOptions &opts) {
  opts.validate();
  Analysis a;
  a.program = parse_program(text);
  a.adg = build_adg(a.program, opts.include_control);
  a.sources = label_sources(a.adg, datasets.identifiers);
  a.methods = label_privacy_methods(a.adg, datasets.libraries);
  MethodLabelIndex index = index_method_labels(a.methods);
  LabelSet labels{a.sources, a.methods};

  std::vector<ReportSlice> rows;
  for (Slice &s : slice_all(a.adg, a.sources, opts)) {
    SliceResult r;
    r.assessment = assess_slice(s, a.adg, index, datasets.libraries.category_map);
    r.jimple = to_jimple_view(s, a.adg, labels);
    r.java = to_java_view(s, a.adg, a.program, labels);
    r.slice = std::move(s);

    ReportSlice row;
    row.id = r.slice.id;
    row.source_sig = render_sig(r.slice.source.call_site_sig);
    row.data_category = r.slice.source.entry.data_category;
    row.risk = r.assessment.risk;
    row.warning_level = r.assessment.level;
    row.node_count_jimple = r.jimple.nodes.size();
    row.node_count_java = r.java.nodes.size();
    row.truncated = r.slice.truncated;
    row.timed_out = r.slice.timed_out;
    row.op_counts = r.assessment.op_counts;
    row.pseudo_summary = r.assessment.pseudo_summary;
    rows.push_back(std::move(row));
    a.slices.push_back(std::move(r));
  }
  a.report = build_report(std::move(program_name), echo_options(opts), std::move(rows));
  return a;
}

std::string read_file(const std::filesystem::path &p) {
  std::ifstream in(p, std::ios::binary);
  if (!in)
    throw std::runtime_error("file not found: " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

void write_file(const std::filesystem::path &p, const std::string &content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out)
    throw std::runtime_error("cannot write " + p.string());
  out << content;
}

} // namespace

void write_artifacts(const Analysis &a, const std::filesystem::path &out, ViewSelection views,
                     FormatSelection formats) {
  std::filesystem::create_directories(out / "slices");
  write_file(out / "report.json", dump_json(report_to_json(a.report)));
  bool json = formats != FormatSelection::Text;
  bool text = formats != FormatSelection::Json;
  for (const auto &r : a.slices) {
    for (const ViewGraph *g : {&r.jimple, &r.java}) {
      if ((g->view == ViewKind::Jimple && views == ViewSelection::Java) ||
          (g->view == ViewKind::Java && views == ViewSelection::Jimple))
        continue;
      std::string stem = std::to_string(r.slice.id) + "." + std::string(to_string(g->view));
      if (json)
        write_file(out / "slices" / (stem + ".json"), dump_json(export_slice_json(*g)));
      if (text)
        write_file(out / "slices" / (stem + ".txt"),
                   export_slice_text(*g, r.slice.id, r.slice.source.call_site_sig, r.assessment.risk,
                                     r.assessment.level));
    }
  }
}

} // namespace slicetool
