// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include "oracles.hpp"

#include "slicetool/cfg.hpp"
#include "slicetool/parser.hpp"
#include "slicetool/server.hpp"

#include <httplib.h>

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

using namespace slicetool;
using nlohmann::json;

namespace {

// Collects mismatch descriptions; a criterion passes when none were recorded.
struct Check {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string &what) {
    if (!ok)
      failures.push_back(what);
  }
};

std::string fname(const std::filesystem::path &p) { return p.filename().string(); }

Analysis run(const std::filesystem::path &f, const SliceOptions &o = {}) {
  return analyze(f.stem().string(), oracle::slurp(f), Datasets::bundled(), o);
}

std::set<int> as_set(const std::vector<int> &v) { return {v.begin(), v.end()}; }

std::filesystem::path scratch(const std::string &name) {
  auto p = std::filesystem::temp_directory_path() / ("slicetool-acceptance-" + name);
  std::filesystem::remove_all(p);
  return p;
}

void source_detection(Check &c) {
  auto gt = oracle::ground_truth();
  auto t0 = std::chrono::steady_clock::now();
  std::size_t tp = 0, fp = 0, fn = 0;
  for (const auto &f : oracle::corpus_files()) {
    Analysis a = run(f);
    std::set<std::tuple<std::string, int, std::string, int>> got, want;
    for (const auto &l : a.sources) {
      const AdgNode &n = a.adg.nodes[static_cast<std::size_t>(l.node)];
      got.insert({render_sig(n.method_sig), *n.stmt_ordinal, render_sig(l.call_site_sig), l.entry.risk});
    }
    for (const auto &s : gt["programs"][fname(f)]["sources"])
      want.insert({s["method"].get<std::string>(), s["ordinal"].get<int>(), s["sig"].get<std::string>(),
                   s["risk"].get<int>()});
    for (const auto &g : got)
      want.count(g) ? ++tp : ++fp;
    for (const auto &w : want)
      fn += !got.count(w);
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.expect(fp == 0 && fn == 0, "tp=" + std::to_string(tp) + " fp=" + std::to_string(fp) + " fn=" + std::to_string(fn));
  c.expect(tp == gt["total_sources"].get<std::size_t>(), "total sources " + std::to_string(tp));
  c.expect(secs < 5.0, "corpus took " + std::to_string(secs) + " s");
}

void slice_oracle(Check &c) {
  for (const auto &f : oracle::corpus_files())
    for (bool ctl : {true, false}) {
      SliceOptions o;
      o.include_control = ctl;
      Analysis a = run(f, o);
      for (const auto &r : a.slices)
        c.expect(as_set(r.slice.node_ids) == oracle::reachable(a.adg, r.slice.source.node, ctl),
                 fname(f) + " slice " + std::to_string(r.slice.id) + " control=" + std::to_string(ctl));
    }
}

void thin_reduction(Check &c) {
  for (const auto &f : oracle::corpus_files()) {
    Program p = parse_program(oracle::slurp(f));
    Adg adg = build_adg(p, true);
    for (const auto &src : label_sources(adg, Datasets::bundled().identifiers)) {
      auto full = as_set(forward_slice(adg, src, {true}).node_ids);
      auto thin = as_set(forward_slice(adg, src, {false}).node_ids);
      c.expect(std::includes(full.begin(), full.end(), thin.begin(), thin.end()), fname(f) + " thin not a subset");
    }
  }
  Analysis full = run(oracle::corpus_dir() / "branchy.slir");
  SliceOptions thin_opts;
  thin_opts.include_control = false;
  Analysis thin = run(oracle::corpus_dir() / "branchy.slir", thin_opts);
  c.expect(full.slices.size() == 1 && thin.slices.size() == 1, "branchy slice count");
  if (full.slices.size() == 1 && thin.slices.size() == 1) {
    auto nf = full.slices[0].slice.node_ids.size(), nt = thin.slices[0].slice.node_ids.size();
    c.expect(2 * nt <= nf, "branchy thin " + std::to_string(nt) + " vs full " + std::to_string(nf));
  }
}

void warning_ladder(Check &c) {
  auto level = [](int s, int p, int t) {
    OpCounts o;
    o.string_manipulation = s;
    o.processing_storage = p;
    o.third_party_sharing = t;
    return to_char(assess(o));
  };
  for (int s = 0; s <= 3; ++s)
    for (int p = 0; p <= 3; ++p)
      for (int t = 0; t <= 3; ++t)
        c.expect(level(s, p, t) == oracle::ladder(s, p, t),
                 "counts " + std::to_string(s) + std::to_string(p) + std::to_string(t));
  c.expect(level(0, 0, 0) == 'A', "all-zero row");
  c.expect(level(0, 1, 0) == 'C', "one processing row");
  c.expect(level(0, 0, 1) == 'E', "one sharing row");
  c.expect(level(0, 0, 2) == 'F', "two sharing row");
}

void dependence_oracles(Check &c) {
  for (const auto &f : oracle::corpus_files()) {
    Program p = parse_program(oracle::slurp(f));
    for (int i = 0; i < static_cast<int>(p.method_count()); ++i) {
      const MethodDef &m = p.method(i);
      std::string where = fname(f) + " " + render_sig(m.sig);
      c.expect(m.body.size() + 1 <= 12, where + " CFG too large");
      Cfg cfg = build_cfg(m);
      std::set<std::pair<int, int>> cd;
      for (const auto &e : control_deps(cfg).edges)
        cd.insert({e.branch, e.dependent});
      std::set<std::tuple<int, int, std::string>> dd;
      for (const auto &e : data_deps(m, cfg))
        dd.insert({e.def, e.use, e.var});
      c.expect(cd == oracle::control_deps(m), where + " control deps");
      c.expect(dd == oracle::data_deps(m), where + " data deps");
    }
  }
}

void java_view(Check &c) {
  for (const auto &f : oracle::corpus_files()) {
    for (bool ctl : {true, false}) {
      SliceOptions o;
      o.include_control = ctl;
      Analysis a = run(f, o);
      for (const auto &r : a.slices) {
        std::string where = fname(f) + " slice " + std::to_string(r.slice.id) + " control=" + std::to_string(ctl);
        c.expect(r.java.nodes.size() <= r.jimple.nodes.size(), where + " grew");
        for (const auto &n : r.java.nodes)
          c.expect(!is_helper(n.kind), where + " helper node " + std::to_string(n.id));
        std::multiset<ViewLabel> lj, lv;
        for (const auto &n : r.jimple.nodes)
          lj.insert(n.labels.begin(), n.labels.end());
        for (const auto &n : r.java.nodes)
          lv.insert(n.labels.begin(), n.labels.end());
        c.expect(lj == lv, where + " labels");
        for (const auto &na : r.jimple.nodes) {
          int ia = oracle::java_image(r.java, r.jimple, na.id);
          if (ia < 0)
            continue;
          auto reach = oracle::view_reach(r.java, ia);
          for (int b : oracle::view_reach(r.jimple, na.id)) {
            int ib = oracle::java_image(r.java, r.jimple, b);
            c.expect(ib < 0 || reach.count(ib), where + " lost " + std::to_string(na.id) + "->" + std::to_string(b));
          }
        }
      }
    }
    auto golden = oracle::source_dir() / "tests" / "golden" / f.stem().string();
    auto out = scratch("golden-" + f.stem().string());
    write_artifacts(run(f), out, ViewSelection::Both, FormatSelection::Both);
    c.expect(oracle::read_tree(out) == oracle::read_tree(golden), fname(f) + " differs from golden");
    std::filesystem::remove_all(out);
  }
}

void budgets(Check &c) {
  SliceOptions capped;
  capped.max_nodes = 5;
  SliceOptions zero;
  zero.time_budget = std::chrono::nanoseconds(0);
  for (const auto &f : oracle::corpus_files()) {
    Analysis unbounded = run(f);
    Analysis a = run(f, capped);
    Analysis z = run(f, zero);
    for (std::size_t i = 0; i < a.slices.size(); ++i) {
      std::string where = fname(f) + " slice " + std::to_string(i);
      const Slice &s = a.slices[i].slice;
      c.expect(s.node_ids.size() <= 5, where + " exceeds 5 nodes");
      c.expect(s.truncated == (unbounded.slices[i].slice.node_ids.size() > 5), where + " truncated flag");
      const Slice &t = z.slices[i].slice;
      c.expect(t.timed_out, where + " not timed out");
      c.expect(t.node_ids == std::vector<int>{t.source.node}, where + " lost the source");
    }
  }
}

std::map<std::string, std::string> cli_run(const std::filesystem::path &program, const std::string &tag) {
  auto out = scratch(tag);
  std::string cmd = std::string(SLICETOOL_CLI) + " analyze " + program.string() +
                    " --view both --format both --out " + out.string() + " > /dev/null";
  if (std::system(cmd.c_str()) != 0)
    return {};
  auto tree = oracle::read_tree(out);
  std::filesystem::remove_all(out);
  return tree;
}

void determinism(Check &c) {
  std::map<std::string, std::map<std::string, std::string>> first;
  for (const auto &f : oracle::corpus_files()) {
    auto a = cli_run(f, "det-a");
    auto b = cli_run(f, "det-b");
    c.expect(!a.empty(), fname(f) + " CLI failed");
    c.expect(a == b, fname(f) + " CLI runs differ");
    first[f.stem().string()] = std::move(a);
  }

  Server server(ServerConfig{oracle::corpus_dir()});
  int port = server.start("127.0.0.1", 0);
  httplib::Client client("127.0.0.1", port);
  for (const auto &f : oracle::corpus_files()) {
    auto post = client.Post("/api/analyses", json{{"corpus", fname(f)}}.dump(), "application/json");
    if (!post || post->status != 202) {
      c.expect(false, fname(f) + " submission failed");
      continue;
    }
    std::string id = json::parse(post->body)["id"];
    std::string status;
    for (int i = 0; i < 2000 && status != "done" && status != "error"; ++i) {
      auto r = client.Get("/api/analyses/" + id);
      status = r ? json::parse(r->body)["status"].get<std::string>() : "error";
      if (status != "done" && status != "error")
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    auto report = client.Get("/api/analyses/" + id + "/report");
    c.expect(status == "done" && report && report->status == 200, fname(f) + " API analysis failed");
    if (report)
      c.expect(report->body == first[f.stem().string()]["report.json"], fname(f) + " API report differs from CLI");
  }
  server.stop();
}

} // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Check &)>>> criteria = {
      {"source detection", source_detection}, {"slice-oracle equivalence", slice_oracle},
      {"thin-slice reduction", thin_reduction}, {"warning ladder", warning_ladder},
      {"dependence oracles", dependence_oracles}, {"java view", java_view},
      {"budgets", budgets},                       {"determinism", determinism}};
  int failed = 0;
  for (const auto &[name, fn] : criteria) {
    Check c;
    try {
      fn(c);
    } catch (const std::exception &e) {
      c.failures.push_back(std::string("exception: ") + e.what());
    }
    std::cout << (c.failures.empty() ? "PASS " : "FAIL ") << name;
    if (!c.failures.empty()) {
      std::cout << " (" << c.failures.size() << " mismatch(es); first: " << c.failures.front() << ")";
      ++failed;
    }
    std::cout << "\n";
  }
  return failed ? 1 : 0;
}
