#include "slicetool/cli.hpp"

#include "slicetool/pipeline.hpp"
#include "slicetool/server.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <csignal>
#include <filesystem>
#include <iomanip>
#include <ostream>

namespace slicetool {

namespace {

void print_summary(const AnalysisReport &r, std::ostream &out) {
  out << "program " << r.program_name << ": " << r.slices.size() << " slice(s)\n";
  if (r.slices.empty()) {
    out << "no privacy-relevant sources detected\n";
    return;
  }
  out << std::left << std::setw(4) << "id" << std::setw(7) << "level" << std::setw(6) << "risk" << std::setw(8)
      << "jimple" << std::setw(6) << "java" << std::setw(28) << "category"
      << "source\n";
  for (const auto &s : r.slices) {
    std::string flags;
    if (s.truncated)
      flags += " [truncated]";
    if (s.timed_out)
      flags += " [timed out]";
    out << std::left << std::setw(4) << s.id << std::setw(7) << to_char(s.warning_level) << std::setw(6) << s.risk
        << std::setw(8) << s.node_count_jimple << std::setw(6) << s.node_count_java << std::setw(28)
        << s.data_category << s.source_sig << flags << "\n";
  }
  out << "levels:";
  for (const auto &[l, n] : r.count_by_level)
    out << " " << to_char(l) << "=" << n;
  out << "\nrisks:";
  for (const auto &[k, n] : r.count_by_risk)
    out << " " << k << "=" << n;
  out << "\n";
}

Server *g_server = nullptr;

void on_signal(int) {
  if (g_server)
    g_server->stop();
}

} // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Privacy-oriented forward slicing over SLIR programs", "slicetool"};
  app.require_subcommand(1);

  std::string input;
  std::optional<std::string> sources_path, libs_path;
  std::vector<int> risks;
  bool no_control = false;
  std::optional<double> timeout_secs;
  std::optional<std::size_t> max_nodes;
  std::string view = "both", format = "json", out_dir = "out";

  auto *analyze_cmd = app.add_subcommand("analyze", "Analyze one SLIR file");
  analyze_cmd->add_option("file", input, "SLIR program")->required();
  analyze_cmd->add_option("--sources-dataset", sources_path, "identifier dataset (.psv)");
  analyze_cmd->add_option("--libs-dataset", libs_path, "privacy library dataset (.psv)");
  analyze_cmd->add_option("--risk", risks, "risk tiers to slice, e.g. 1,2")->delimiter(',');
  analyze_cmd->add_flag("--no-control-deps", no_control, "omit control dependencies (thin slices)");
  analyze_cmd->add_option("--timeout-secs", timeout_secs, "total slicing time budget")->check(CLI::NonNegativeNumber);
  analyze_cmd->add_option("--max-nodes", max_nodes, "node cap per slice")->check(CLI::PositiveNumber);
  analyze_cmd->add_option("--view", view, "jimple|java|both")->check(CLI::IsMember({"jimple", "java", "both"}));
  analyze_cmd->add_option("--format", format, "json|text|both")->check(CLI::IsMember({"json", "text", "both"}));
  analyze_cmd->add_option("--out", out_dir, "output directory");

  int port = 8080;
  std::string corpus = "corpus";
  auto *serve_cmd = app.add_subcommand("serve", "Run the HTTP API");
  serve_cmd->add_option("--port", port, "listen port")->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--corpus", corpus, "directory of .slir programs");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp &e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError &e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return 2;
  }

  if (*serve_cmd) {
    try {
      Server server(ServerConfig{corpus});
      server.bind("0.0.0.0", port);
      err << "serving on port " << port << ", corpus " << corpus << "\n";
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      server.listen();
      g_server = nullptr;
      return 0;
    } catch (const std::exception &e) {
      err << "error: " << e.what() << "\n";
      return 1;
    }
  }

  std::filesystem::path path(input);
  if (!std::filesystem::is_regular_file(path)) {
    err << "error: file not found: " << input << "\n";
    return 2;
  }
  for (const auto *p : {&sources_path, &libs_path})
    if (*p && !std::filesystem::is_regular_file(**p)) {
      err << "error: file not found: " << **p << "\n";
      return 2;
    }

  SliceOptions opts;
  opts.include_control = !no_control;
  opts.max_nodes = max_nodes;
  if (timeout_secs)
    opts.time_budget =
        std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::duration<double>(*timeout_secs));
  if (!risks.empty()) {
    std::sort(risks.begin(), risks.end());
    risks.erase(std::unique(risks.begin(), risks.end()), risks.end());
    opts.risk_filter = risks;
  }

  try {
    Datasets datasets = Datasets::load(sources_path ? std::optional<std::filesystem::path>(*sources_path) : std::nullopt,
                                       libs_path ? std::optional<std::filesystem::path>(*libs_path) : std::nullopt);
    Analysis a = analyze(path.stem().string(), read_file(path), datasets, opts);
    for (const auto &d : a.adg.diagnostics)
      err << "warning: " << d << "\n";
    ViewSelection vs = view == "jimple" ? ViewSelection::Jimple : view == "java" ? ViewSelection::Java
                                                                                  : ViewSelection::Both;
    FormatSelection fs = format == "json" ? FormatSelection::Json : format == "text" ? FormatSelection::Text
                                                                                      : FormatSelection::Both;
    write_artifacts(a, out_dir, vs, fs);
    print_summary(a.report, out);
    return 0;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

} // namespace slicetool
