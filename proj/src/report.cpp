#include "slicetool/report.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

namespace slicetool {

using nlohmann::json;

AnalysisReport build_report(std::string program_name, ReportOptions options, std::vector<ReportSlice> slices) {
  AnalysisReport r;
  r.program_name = std::move(program_name);
  r.options = std::move(options);
  std::sort(slices.begin(), slices.end(), [](const ReportSlice &a, const ReportSlice &b) {
    auto key = [](const ReportSlice &s) {
      return std::make_tuple(-static_cast<int>(s.warning_level), s.risk, std::cref(s.source_sig), s.id);
    };
    return key(a) < key(b);
  });
  r.slices = std::move(slices);
  for (WarningLevel l : kAllLevels)
    r.count_by_level[l] = 0;
  for (const auto &s : r.slices) {
    ++r.count_by_risk[s.risk];
    ++r.count_by_level[s.warning_level];
  }
  return r;
}

namespace {

template <class T> json opt(const std::optional<T> &v) { return v ? json(*v) : json(nullptr); }

json op_counts_json(const OpCounts &c) {
  return {{std::string(to_string(OperationClass::StringManipulation)), c.string_manipulation},
          {std::string(to_string(OperationClass::ProcessingStorage)), c.processing_storage},
          {std::string(to_string(OperationClass::ThirdPartySharing)), c.third_party_sharing},
          {std::string(to_string(OperationClass::Pseudonymization)), c.pseudonymization}};
}

WarningLevel level_from_json(const json &j) {
  auto s = j.get<std::string>();
  auto l = s.size() == 1 ? level_from_char(s[0]) : std::nullopt;
  if (!l)
    throw ValidationError("bad warning level '" + s + "'");
  return *l;
}

PseudoStrength strength_from_string(const std::string &s) {
  if (s == "weak")
    return PseudoStrength::Weak;
  if (s == "strong")
    return PseudoStrength::Strong;
  throw ValidationError("bad pseudonymization strength '" + s + "'");
}

NodeKind node_kind_from_string(const std::string &s) {
  for (NodeKind k : {NodeKind::Entry, NodeKind::Stmt, NodeKind::ActualIn, NodeKind::ActualOut, NodeKind::FormalIn,
                     NodeKind::FormalOut})
    if (to_string(k) == s)
      return k;
  throw ValidationError("bad node kind '" + s + "'");
}

} // namespace

json report_to_json(const AnalysisReport &r) {
  json slices = json::array();
  for (const auto &s : r.slices) {
    json pseudo = {{"present", s.pseudo_summary.present}, {"weakest_strength", nullptr}};
    if (s.pseudo_summary.weakest_strength)
      pseudo["weakest_strength"] = std::string(to_string(*s.pseudo_summary.weakest_strength));
    slices.push_back({{"id", s.id},
                      {"source_sig", s.source_sig},
                      {"data_category", s.data_category},
                      {"risk", s.risk},
                      {"warning_level", std::string(1, to_char(s.warning_level))},
                      {"node_count_jimple", s.node_count_jimple},
                      {"node_count_java", s.node_count_java},
                      {"truncated", s.truncated},
                      {"timed_out", s.timed_out},
                      {"op_counts", op_counts_json(s.op_counts)},
                      {"pseudo_summary", pseudo}});
  }
  json by_risk = json::object();
  for (const auto &[risk, n] : r.count_by_risk)
    by_risk[std::to_string(risk)] = n;
  json by_level = json::object();
  for (const auto &[level, n] : r.count_by_level)
    by_level[std::string(1, to_char(level))] = n;

  return {{"program_name", r.program_name},
          {"options",
           {{"include_control", r.options.include_control},
            {"max_nodes", opt(r.options.max_nodes)},
            {"timeout_secs", opt(r.options.timeout_secs)},
            {"risk_filter", opt(r.options.risk_filter)}}},
          {"slices", slices},
          {"totals", {{"count_by_risk", by_risk}, {"count_by_level", by_level}}}};
}

AnalysisReport report_from_json(const json &j) {
  AnalysisReport r;
  r.program_name = j.at("program_name").get<std::string>();
  const json &o = j.at("options");
  r.options.include_control = o.at("include_control").get<bool>();
  if (!o.at("max_nodes").is_null())
    r.options.max_nodes = o.at("max_nodes").get<std::size_t>();
  if (!o.at("timeout_secs").is_null())
    r.options.timeout_secs = o.at("timeout_secs").get<double>();
  if (!o.at("risk_filter").is_null())
    r.options.risk_filter = o.at("risk_filter").get<std::vector<int>>();
  for (const json &s : j.at("slices")) {
    ReportSlice rs;
    rs.id = s.at("id").get<int>();
    rs.source_sig = s.at("source_sig").get<std::string>();
    rs.data_category = s.at("data_category").get<std::string>();
    rs.risk = s.at("risk").get<int>();
    rs.warning_level = level_from_json(s.at("warning_level"));
    rs.node_count_jimple = s.at("node_count_jimple").get<std::size_t>();
    rs.node_count_java = s.at("node_count_java").get<std::size_t>();
    rs.truncated = s.at("truncated").get<bool>();
    rs.timed_out = s.at("timed_out").get<bool>();
    const json &c = s.at("op_counts");
    rs.op_counts.string_manipulation = c.at("string_manipulation").get<int>();
    rs.op_counts.processing_storage = c.at("processing_storage").get<int>();
    rs.op_counts.third_party_sharing = c.at("third_party_sharing").get<int>();
    rs.op_counts.pseudonymization = c.at("pseudonymization").get<int>();
    const json &p = s.at("pseudo_summary");
    rs.pseudo_summary.present = p.at("present").get<bool>();
    if (!p.at("weakest_strength").is_null())
      rs.pseudo_summary.weakest_strength = strength_from_string(p.at("weakest_strength").get<std::string>());
    r.slices.push_back(std::move(rs));
  }
  const json &t = j.at("totals");
  for (const auto &[k, v] : t.at("count_by_risk").items())
    r.count_by_risk[std::stoi(k)] = v.get<int>();
  for (const auto &[k, v] : t.at("count_by_level").items())
    r.count_by_level[level_from_json(json(k))] = v.get<int>();
  return r;
}

std::string dump_json(const json &j) { return j.dump(2) + "\n"; }

json export_slice_json(const ViewGraph &g) {
  json nodes = json::array();
  for (const auto &n : g.nodes) {
    json labels = json::array();
    for (const auto &l : n.labels) {
      json lj = {{"type", l.type}, {"category", l.category}};
      if (l.risk)
        lj["risk"] = *l.risk;
      if (l.strength)
        lj["strength"] = *l.strength;
      labels.push_back(std::move(lj));
    }
    nodes.push_back(
        {{"id", n.id}, {"text", n.text}, {"kind", std::string(to_string(n.kind))}, {"labels", std::move(labels)}});
  }
  json edges = json::array();
  for (const auto &e : g.edges)
    edges.push_back({{"src", e.src}, {"dst", e.dst}, {"kind", std::string(to_string(e.kind))}});
  return {{"view", std::string(to_string(g.view))}, {"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

ViewGraph parse_slice_json(const json &j) {
  ViewGraph g;
  auto view = j.at("view").get<std::string>();
  if (view != "jimple" && view != "java")
    throw ValidationError("bad view '" + view + "'");
  g.view = view == "java" ? ViewKind::Java : ViewKind::Jimple;
  for (const json &n : j.at("nodes")) {
    ViewNode vn;
    vn.id = n.at("id").get<int>();
    vn.text = n.at("text").get<std::string>();
    vn.kind = node_kind_from_string(n.at("kind").get<std::string>());
    for (const json &l : n.at("labels")) {
      ViewLabel vl;
      vl.type = l.at("type").get<std::string>();
      vl.category = l.at("category").get<std::string>();
      if (l.contains("risk"))
        vl.risk = l.at("risk").get<int>();
      if (l.contains("strength"))
        vl.strength = l.at("strength").get<std::string>();
      vn.labels.push_back(std::move(vl));
    }
    g.nodes.push_back(std::move(vn));
  }
  for (const json &e : j.at("edges")) {
    auto kind = e.at("kind").get<std::string>();
    if (kind != "data" && kind != "control+data")
      throw ValidationError("bad edge kind '" + kind + "'");
    g.edges.push_back({e.at("src").get<int>(), e.at("dst").get<int>(),
                       kind == "data" ? ViewEdgeKind::Data : ViewEdgeKind::ControlData});
  }
  return g;
}

std::string export_slice_text(const ViewGraph &g, int slice_id, const MethodSig &source_sig, int risk,
                              WarningLevel level) {
  std::ostringstream os;
  os << "slice " << slice_id << " source=" << render_sig(source_sig) << " risk=" << risk
     << " level=" << to_char(level) << "\n";
  for (const auto &n : g.nodes)
    os << "N" << n.id << " [" << to_string(n.kind) << "] " << render_sig(n.method) << " " << n.text << "\n";
  for (const auto &e : g.edges)
    os << "E " << e.src << " -> " << e.dst << " [" << to_string(e.kind) << "]\n";
  return os.str();
}

json warning_scale_json() {
  json out = json::array();
  for (WarningLevel l : kAllLevels) {
    const LevelInfo &i = level_info(l);
    out.push_back({{"level", std::string(1, i.letter)},
                   {"color", std::string(i.color)},
                   {"hex", std::string(i.hex)},
                   {"risk", std::string(i.risk)},
                   {"property", std::string(i.property)},
                   {"legal_note", std::string(i.legal_note)}});
  }
  return out;
}

} // namespace slicetool
