#include "slicetool/adg.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <tuple>

namespace slicetool {

std::string_view to_string(NodeKind k) {
  switch (k) {
  case NodeKind::Entry:
    return "entry";
  case NodeKind::Stmt:
    return "stmt";
  case NodeKind::ActualIn:
    return "actual-in";
  case NodeKind::ActualOut:
    return "actual-out";
  case NodeKind::FormalIn:
    return "formal-in";
  case NodeKind::FormalOut:
    return "formal-out";
  }
  return "?";
}

std::string_view to_string(EdgeKind k) {
  switch (k) {
  case EdgeKind::Data:
    return "data";
  case EdgeKind::Control:
    return "control";
  case EdgeKind::Call:
    return "call";
  case EdgeKind::ParamIn:
    return "param-in";
  case EdgeKind::ParamOut:
    return "param-out";
  }
  return "?";
}

bool is_helper(NodeKind k) {
  return k == NodeKind::ActualIn || k == NodeKind::ActualOut || k == NodeKind::FormalIn ||
         k == NodeKind::FormalOut;
}

int Adg::stmt_node(int method, int ordinal) const {
  if (method < 0 || static_cast<std::size_t>(method) >= stmt_nodes_.size())
    return -1;
  const auto &v = stmt_nodes_[static_cast<std::size_t>(method)];
  if (ordinal < 0 || static_cast<std::size_t>(ordinal) >= v.size())
    return -1;
  return v[static_cast<std::size_t>(ordinal)];
}

void Adg::finalize() {
  auto key = [](const AdgEdge &e) { return std::tie(e.src, e.dst, e.kind); };
  std::sort(edges.begin(), edges.end(), [&](const AdgEdge &a, const AdgEdge &b) {
    return std::tie(a.src, a.dst, a.kind, a.var) < std::tie(b.src, b.dst, b.kind, b.var);
  });
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [&](const AdgEdge &a, const AdgEdge &b) { return key(a) == key(b); }),
              edges.end());
  out_.assign(nodes.size(), {});
  for (std::size_t i = 0; i < edges.size(); ++i)
    out_[static_cast<std::size_t>(edges[i].src)].push_back(static_cast<int>(i));
}

std::size_t Adg::count_edges(EdgeKind k) const {
  return static_cast<std::size_t>(
      std::count_if(edges.begin(), edges.end(), [k](const AdgEdge &e) { return e.kind == k; }));
}

std::map<StmtRef, CallResolution> build_call_graph(const Program &program) {
  std::map<StmtRef, CallResolution> out;
  for (std::size_t mi = 0; mi < program.method_count(); ++mi) {
    const MethodDef &m = program.method(static_cast<int>(mi));
    for (const auto &s : m.body) {
      const InvokeExpr *inv = invoke_of(s);
      if (!inv)
        continue;
      CallResolution r;
      r.callee = inv->callee;
      // Exact signature match for both invoke kinds; there is no class
      // hierarchy to walk for virtual calls.
      r.callee_method = program.find(inv->callee);
      r.internal = r.callee_method >= 0;
      out.emplace(StmtRef{static_cast<int>(mi), s.ordinal}, std::move(r));
    }
  }
  return out;
}

namespace {

std::optional<std::string> qualify(const MethodDef &m, const LValue &lv) {
  if (lv.kind == LValueKind::StaticField)
    return lv.base + "." + lv.field;
  if (lv.kind == LValueKind::InstanceField) {
    const LocalDecl *d = m.find_local(lv.base);
    return (d ? d->type : lv.base) + "." + lv.field;
  }
  return std::nullopt;
}

} // namespace

std::optional<std::string> field_written(const MethodDef &m, const Stmt &s) {
  if (s.kind != StmtKind::Assign || !s.lhs)
    return std::nullopt;
  return qualify(m, *s.lhs);
}

std::optional<std::string> field_read(const MethodDef &m, const Stmt &s) {
  if (s.kind != StmtKind::Assign || !s.rhs)
    return std::nullopt;
  if (const auto *lv = std::get_if<LValue>(&*s.rhs))
    return qualify(m, *lv);
  return std::nullopt;
}

std::vector<FieldDep> field_deps(const Program &program) {
  std::map<std::string, std::vector<StmtRef>> writes, reads;
  for (std::size_t mi = 0; mi < program.method_count(); ++mi) {
    const MethodDef &m = program.method(static_cast<int>(mi));
    for (const auto &s : m.body) {
      StmtRef ref{static_cast<int>(mi), s.ordinal};
      if (auto f = field_written(m, s))
        writes[*f].push_back(ref);
      if (auto f = field_read(m, s))
        reads[*f].push_back(ref);
    }
  }
  std::vector<FieldDep> out;
  for (const auto &[field, ws] : writes) {
    auto it = reads.find(field);
    if (it == reads.end())
      continue;
    for (const auto &w : ws)
      for (const auto &r : it->second)
        if (w != r)
          out.push_back({w, r, field});
  }
  std::sort(out.begin(), out.end());
  return out;
}

Adg build_adg(const Program &program, bool include_control) {
  Adg adg;
  const int nm = static_cast<int>(program.method_count());
  std::vector<Cfg> cfgs;
  std::vector<ControlDeps> cdeps;
  std::vector<std::vector<DataDep>> ddeps;
  cfgs.reserve(static_cast<std::size_t>(nm));
  for (int mi = 0; mi < nm; ++mi) {
    const MethodDef &m = program.method(mi);
    Cfg cfg = build_cfg(m);
    ControlDeps cd;
    try {
      cd = control_deps(cfg);
    } catch (const AnalysisError &e) {
      throw AnalysisError(render_sig(m.sig) + ": " + e.what());
    }
    for (int u : cd.unreachable)
      adg.diagnostics.push_back("unreachable statement " + std::to_string(u) + " in " + render_sig(m.sig) +
                                ": " + render_stmt(m.body[static_cast<std::size_t>(u)]));
    ddeps.push_back(data_deps(m, cfg));
    cdeps.push_back(std::move(cd));
    cfgs.push_back(std::move(cfg));
  }

  auto add_node = [&](NodeKind kind, int mi, std::string text) -> AdgNode & {
    AdgNode n;
    n.id = static_cast<int>(adg.nodes.size());
    n.kind = kind;
    n.method = mi;
    n.method_sig = program.method(mi).sig;
    n.display_text = std::move(text);
    adg.nodes.push_back(std::move(n));
    return adg.nodes.back();
  };

  const auto calls = build_call_graph(program);

  adg.entry_.assign(static_cast<std::size_t>(nm), -1);
  adg.stmt_nodes_.assign(static_cast<std::size_t>(nm), {});
  for (int mi = 0; mi < nm; ++mi) {
    const MethodDef &m = program.method(mi);
    adg.entry_[static_cast<std::size_t>(mi)] = add_node(NodeKind::Entry, mi, "entry").id;
    auto &ids = adg.stmt_nodes_[static_cast<std::size_t>(mi)];
    ids.assign(m.body.size(), -1);
    for (const auto &s : m.body) {
      if (!cfgs[static_cast<std::size_t>(mi)].reachable[static_cast<std::size_t>(s.ordinal)])
        continue;
      AdgNode &n = add_node(NodeKind::Stmt, mi, render_stmt(s));
      n.stmt_ordinal = s.ordinal;
      if (auto it = calls.find({mi, s.ordinal}); it != calls.end())
        n.call = it->second;
      ids[static_cast<std::size_t>(s.ordinal)] = n.id;
    }
  }

  // Reaching definitions of each local read at a statement.
  auto reaching = [&](int mi, int ordinal, const std::string &var) {
    std::vector<int> out;
    for (const auto &d : ddeps[static_cast<std::size_t>(mi)])
      if (d.use == ordinal && d.var == var)
        out.push_back(d.def);
    return out;
  };

  struct SitePlan {
    StmtRef site;
    int callee;
    std::vector<int> args; // argument indices that get an ActualIn
    bool returns = false;
  };
  std::vector<SitePlan> plans;
  std::vector<std::set<int>> formal_in(static_cast<std::size_t>(nm));
  std::vector<bool> formal_out(static_cast<std::size_t>(nm), false);
  for (const auto &[site, res] : calls) {
    if (!res.internal || adg.stmt_node(site.method, site.ordinal) < 0)
      continue;
    const Stmt &s = program.method(site.method).body[static_cast<std::size_t>(site.ordinal)];
    const InvokeExpr &inv = *invoke_of(s);
    SitePlan plan{site, res.callee_method, {}, false};
    for (std::size_t j = 0; j < inv.args.size(); ++j) {
      const Imm &a = inv.args[j];
      // Constants and never-defined locals carry no caller value to bridge.
      if (a.is_local() && !reaching(site.method, site.ordinal, a.text).empty()) {
        plan.args.push_back(static_cast<int>(j));
        formal_in[static_cast<std::size_t>(res.callee_method)].insert(static_cast<int>(j));
      }
    }
    if (s.kind == StmtKind::Assign && res.callee.return_type != "void") {
      plan.returns = true;
      formal_out[static_cast<std::size_t>(res.callee_method)] = true;
    }
    plans.push_back(std::move(plan));
  }

  std::map<std::pair<int, int>, int> formal_in_node;
  std::vector<int> formal_out_node(static_cast<std::size_t>(nm), -1);
  for (int mi = 0; mi < nm; ++mi) {
    const MethodDef &m = program.method(mi);
    for (int j : formal_in[static_cast<std::size_t>(mi)]) {
      std::string text = "formal-in " + std::to_string(j);
      for (const auto &s : m.body)
        if (s.kind == StmtKind::Identity && s.param_index == j)
          text += " " + s.lhs->base;
      formal_in_node[{mi, j}] = add_node(NodeKind::FormalIn, mi, text).id;
      adg.nodes.back().index = j;
    }
    if (formal_out[static_cast<std::size_t>(mi)])
      formal_out_node[static_cast<std::size_t>(mi)] = add_node(NodeKind::FormalOut, mi, "formal-out").id;
  }

  auto edge = [&](int src, int dst, EdgeKind kind, std::string var) {
    if (src < 0 || dst < 0)
      return;
    if (src == dst && kind == EdgeKind::Data)
      return;
    adg.edges.push_back({src, dst, kind, std::move(var)});
  };

  for (const auto &plan : plans) {
    const MethodDef &caller = program.method(plan.site.method);
    const MethodDef &callee = program.method(plan.callee);
    const Stmt &s = caller.body[static_cast<std::size_t>(plan.site.ordinal)];
    const InvokeExpr &inv = *invoke_of(s);
    const int site_node = adg.stmt_node(plan.site.method, plan.site.ordinal);

    edge(site_node, adg.entry_node(plan.callee), EdgeKind::Call, "");

    for (int j : plan.args) {
      const std::string &arg = inv.args[static_cast<std::size_t>(j)].text;
      AdgNode &ain = add_node(NodeKind::ActualIn, plan.site.method, "actual-in " + std::to_string(j) + " " + arg);
      ain.index = j;
      ain.call_site = site_node;
      const int ain_id = ain.id;
      for (int d : reaching(plan.site.method, plan.site.ordinal, arg))
        edge(adg.stmt_node(plan.site.method, d), ain_id, EdgeKind::Data, arg);
      const int fin = formal_in_node.at({plan.callee, j});
      edge(ain_id, fin, EdgeKind::ParamIn, arg);
      for (const auto &cs : callee.body)
        if (cs.kind == StmtKind::Identity && cs.param_index == j)
          edge(fin, adg.stmt_node(plan.callee, cs.ordinal), EdgeKind::Data, cs.lhs->base);
    }

    if (plan.returns) {
      const std::string lhs = render_lvalue(*s.lhs);
      AdgNode &aout = add_node(NodeKind::ActualOut, plan.site.method, "actual-out " + lhs);
      aout.call_site = site_node;
      const int aout_id = aout.id;
      const int fout = formal_out_node[static_cast<std::size_t>(plan.callee)];
      edge(fout, aout_id, EdgeKind::ParamOut, "");
      edge(aout_id, site_node, EdgeKind::Data, lhs);
    }
  }

  for (int mi = 0; mi < nm; ++mi) {
    const MethodDef &m = program.method(mi);
    if (formal_out_node[static_cast<std::size_t>(mi)] >= 0) {
      for (const auto &s : m.body)
        if (s.kind == StmtKind::Return && s.ret)
          edge(adg.stmt_node(mi, s.ordinal), formal_out_node[static_cast<std::size_t>(mi)], EdgeKind::Data,
               render_imm(*s.ret));
    }
    for (const auto &d : ddeps[static_cast<std::size_t>(mi)])
      edge(adg.stmt_node(mi, d.def), adg.stmt_node(mi, d.use), EdgeKind::Data, d.var);
    if (include_control) {
      for (const auto &c : cdeps[static_cast<std::size_t>(mi)].edges) {
        int src = c.branch == kEntry ? adg.entry_node(mi) : adg.stmt_node(mi, c.branch);
        edge(src, adg.stmt_node(mi, c.dependent), EdgeKind::Control, "");
      }
    }
  }

  for (const auto &f : field_deps(program))
    edge(adg.stmt_node(f.write.method, f.write.ordinal), adg.stmt_node(f.read.method, f.read.ordinal),
         EdgeKind::Data, f.field);

  adg.finalize();
  return adg;
}

std::string dump_adg(const Adg &adg) {
  std::ostringstream os;
  for (const auto &n : adg.nodes)
    os << "N" << n.id << " [" << to_string(n.kind) << "] " << render_sig(n.method_sig) << " " << n.display_text
       << "\n";
  for (const auto &e : adg.edges)
    os << "E " << e.src << " -> " << e.dst << " [" << to_string(e.kind) << "]\n";
  return os.str();
}

} // namespace slicetool
