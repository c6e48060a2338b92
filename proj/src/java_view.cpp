#include "slicetool/java_view.hpp"

#include <algorithm>
#include <set>

namespace slicetool {

std::string_view to_string(ViewKind v) { return v == ViewKind::Jimple ? "jimple" : "java"; }

std::string_view to_string(ViewEdgeKind k) { return k == ViewEdgeKind::Data ? "data" : "control+data"; }

const ViewNode *ViewGraph::find(int id) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), id, [](const ViewNode &n, int v) { return n.id < v; });
  return it != nodes.end() && it->id == id ? &*it : nullptr;
}

namespace {

// Mutable graph used while transforming views.
struct WorkGraph {
  ViewKind view = ViewKind::Jimple;
  std::map<int, ViewNode> nodes;
  std::map<std::pair<int, int>, ViewEdgeKind> edges;
  std::map<int, std::map<std::string, int>> inlined;

  static WorkGraph from(const ViewGraph &g) {
    WorkGraph w;
    w.view = g.view;
    for (const auto &n : g.nodes)
      w.nodes.emplace(n.id, n);
    for (const auto &e : g.edges)
      w.edges[{e.src, e.dst}] = e.kind;
    w.inlined = g.inlined;
    return w;
  }

  ViewGraph to_view() const {
    ViewGraph g;
    g.view = view;
    for (const auto &[id, n] : nodes)
      g.nodes.push_back(n);
    for (const auto &[k, kind] : edges)
      g.edges.push_back({k.first, k.second, kind});
    g.inlined = inlined;
    return g;
  }

  void add_edge(int src, int dst, ViewEdgeKind kind) {
    if (src == dst)
      return;
    auto [it, inserted] = edges.emplace(std::make_pair(src, dst), kind);
    if (!inserted && kind == ViewEdgeKind::ControlData)
      it->second = kind;
  }

  std::vector<std::pair<int, ViewEdgeKind>> preds(int v) const {
    std::vector<std::pair<int, ViewEdgeKind>> out;
    for (const auto &[k, kind] : edges)
      if (k.second == v)
        out.push_back({k.first, kind});
    return out;
  }

  std::vector<std::pair<int, ViewEdgeKind>> succs(int v) const {
    std::vector<std::pair<int, ViewEdgeKind>> out;
    for (auto it = edges.lower_bound({v, std::numeric_limits<int>::min()}); it != edges.end() && it->first.first == v;
         ++it)
      out.push_back({it->first.second, it->second});
    return out;
  }

  void remove_node(int v) {
    nodes.erase(v);
    std::erase_if(edges, [v](const auto &e) { return e.first.first == v || e.first.second == v; });
  }
};

ViewLabel source_view_label(const SourceLabel &l) {
  return {"source", l.entry.data_category, l.entry.risk, std::nullopt};
}

ViewLabel method_view_label(const MethodLabel &l) {
  std::optional<std::string> strength;
  if (l.entry.pseudo_strength)
    strength = std::string(to_string(*l.entry.pseudo_strength));
  return {"method", l.entry.category, std::nullopt, strength};
}

} // namespace

ViewGraph to_jimple_view(const Slice &slice, const Adg &adg, const LabelSet &labels) {
  std::set<int> ids(slice.node_ids.begin(), slice.node_ids.end());
  WorkGraph w;
  w.view = ViewKind::Jimple;
  for (int id : ids) {
    const AdgNode &n = adg.nodes[static_cast<std::size_t>(id)];
    ViewNode vn;
    vn.id = id;
    vn.kind = n.kind;
    vn.method = n.method_sig;
    vn.text = n.display_text;
    w.nodes.emplace(id, std::move(vn));
  }
  for (const auto &l : labels.sources)
    if (auto it = w.nodes.find(l.node); it != w.nodes.end())
      it->second.labels.push_back(source_view_label(l));
  for (const auto &l : labels.methods)
    if (auto it = w.nodes.find(l.node); it != w.nodes.end())
      it->second.labels.push_back(method_view_label(l));
  for (auto &[id, n] : w.nodes)
    std::sort(n.labels.begin(), n.labels.end());

  for (int ei : slice.edge_ids) {
    const AdgEdge &e = adg.edges[static_cast<std::size_t>(ei)];
    w.add_edge(e.src, e.dst, e.kind == EdgeKind::Control ? ViewEdgeKind::ControlData : ViewEdgeKind::Data);
  }
  return w.to_view();
}

ViewGraph strip_param_nodes(const ViewGraph &g) {
  WorkGraph w = WorkGraph::from(g);
  std::vector<int> helpers;
  for (const auto &[id, n] : w.nodes)
    if (is_helper(n.kind))
      helpers.push_back(id);
  for (int h : helpers) {
    auto ps = w.preds(h);
    auto ss = w.succs(h);
    w.remove_node(h);
    for (const auto &p : ps)
      for (const auto &s : ss)
        if (p.first != h && s.first != h)
          w.add_edge(p.first, s.first, ViewEdgeKind::Data);
  }
  return w.to_view();
}

ViewGraph inline_temporaries(const ViewGraph &g, const Adg &adg, const Program &program) {
  WorkGraph w = WorkGraph::from(g);
  w.view = ViewKind::Java;

  struct TempUse {
    int defs = 0;
    int uses = 0;
    int use_ordinal = -1;
  };
  std::map<int, std::map<std::string, TempUse>> per_method;
  auto temps_of = [&](int mi) -> const std::map<std::string, TempUse> & {
    auto it = per_method.find(mi);
    if (it != per_method.end())
      return it->second;
    std::map<std::string, TempUse> t;
    for (const auto &s : program.method(mi).body) {
      if (auto d = defined_local(s); d && d->starts_with("$"))
        ++t[*d].defs;
      for (const auto &u : used_locals(s)) {
        if (!u.starts_with("$"))
          continue;
        auto &tu = t[u];
        ++tu.uses;
        tu.use_ordinal = s.ordinal;
      }
    }
    return per_method.emplace(mi, std::move(t)).first->second;
  };

  std::map<int, int> parent;
  auto rep = [&](int v) {
    while (parent.count(v) && parent[v] != v)
      v = parent[v];
    return v;
  };

  const std::size_t bound = w.nodes.size() + 1;
  for (std::size_t pass = 0; pass < bound; ++pass) {
    bool changed = false;
    std::vector<int> ids;
    for (const auto &[id, n] : w.nodes)
      ids.push_back(id);
    for (int d : ids) {
      auto dn = w.nodes.find(d);
      if (dn == w.nodes.end() || dn->second.kind != NodeKind::Stmt)
        continue;
      const AdgNode &an = adg.nodes[static_cast<std::size_t>(d)];
      const Stmt &s = program.method(an.method).body[static_cast<std::size_t>(*an.stmt_ordinal)];
      if (s.kind != StmtKind::Assign || s.lhs->kind != LValueKind::Local || !s.lhs->base.starts_with("$"))
        continue;
      const std::string &tmp = s.lhs->base;
      const auto &temps = temps_of(an.method);
      auto tu = temps.find(tmp);
      if (tu == temps.end() || tu->second.defs != 1 || tu->second.uses != 1)
        continue;
      int u = adg.stmt_node(an.method, tu->second.use_ordinal);
      if (u < 0)
        continue;
      int target = rep(u);
      if (target == d || !w.nodes.count(target) || !w.edges.count({d, target}))
        continue;

      w.inlined[u][tmp] = d;
      ViewNode &tn = w.nodes.at(target);
      for (auto &l : dn->second.labels)
        tn.labels.push_back(l);
      std::sort(tn.labels.begin(), tn.labels.end());
      auto ps = w.preds(d);
      auto ss = w.succs(d);
      w.remove_node(d);
      for (const auto &[p, kind] : ps)
        w.add_edge(p, target, kind);
      for (const auto &[q, kind] : ss)
        w.add_edge(target, q, kind);
      parent[d] = target;
      changed = true;
    }
    if (!changed)
      break;
  }
  return w.to_view();
}

namespace {

std::string java_imm(const Imm &imm, const LocalLookup &lookup, bool operand) {
  if (imm.is_local() && lookup) {
    if (auto e = lookup(imm.text))
      return operand && e->compound ? "(" + e->text + ")" : e->text;
  }
  return imm.text;
}

std::string java_local(const std::string &name, const LocalLookup &lookup, bool operand) {
  return java_imm(Imm{ImmKind::Local, name}, lookup, operand);
}

std::string java_lvalue(const LValue &lv, const LocalLookup &lookup) {
  switch (lv.kind) {
  case LValueKind::Local:
    return lv.base;
  case LValueKind::ArrayElem:
    return java_local(lv.base, lookup, true) + "[" + java_imm(*lv.index, lookup, false) + "]";
  case LValueKind::InstanceField:
    return java_local(lv.base, lookup, true) + "." + lv.field;
  case LValueKind::StaticField:
    return lv.base + "." + lv.field;
  }
  return {};
}

std::string java_invoke(const InvokeExpr &inv, const LocalLookup &lookup) {
  std::string out = inv.kind == InvokeKind::Virtual ? java_local(inv.receiver, lookup, true)
                                                     : inv.callee.declaring_class;
  out += "." + inv.callee.name + "(";
  for (std::size_t i = 0; i < inv.args.size(); ++i) {
    if (i)
      out += ", ";
    out += java_imm(inv.args[i], lookup, false);
  }
  return out + ")";
}

} // namespace

std::string render_java_expr(const RValue &rv, const LocalLookup &lookup) {
  return std::visit(
      [&](const auto &v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Imm>)
          return java_imm(v, lookup, false);
        else if constexpr (std::is_same_v<T, BinExpr>)
          return java_imm(v.lhs, lookup, true) + " " + v.op + " " + java_imm(v.rhs, lookup, true);
        else if constexpr (std::is_same_v<T, InvokeExpr>)
          return java_invoke(v, lookup);
        else if constexpr (std::is_same_v<T, LValue>)
          return java_lvalue(v, lookup);
        else
          return "new " + v.class_name + "()";
      },
      rv);
}

std::string render_java(const Stmt &s, const MethodDef &method, const LocalLookup &lookup) {
  switch (s.kind) {
  case StmtKind::Identity: {
    std::string type = s.param_index ? method.sig.param_types.at(static_cast<std::size_t>(*s.param_index))
                                     : method.sig.declaring_class;
    return type + " " + s.lhs->base;
  }
  case StmtKind::Assign:
    return java_lvalue(*s.lhs, lookup) + " = " + render_java_expr(*s.rhs, lookup) + ";";
  case StmtKind::Invoke:
    return render_java_expr(*s.rhs, lookup) + ";";
  case StmtKind::If:
    return "if (" + java_imm(s.cond->lhs, lookup, false) + " " + s.cond->op + " " +
           java_imm(s.cond->rhs, lookup, false) + ")";
  case StmtKind::Goto:
    return "goto L" + std::to_string(*s.target) + ";";
  case StmtKind::Return:
    return s.ret ? "return " + java_imm(*s.ret, lookup, false) + ";" : std::string("return;");
  }
  throw UnsupportedStatement("unsupported statement kind");
}

std::string render_java_entry(const MethodSig &sig) {
  std::string out = sig.return_type + " " + sig.declaring_class + "." + sig.name + "(";
  for (std::size_t i = 0; i < sig.param_types.size(); ++i) {
    if (i)
      out += ", ";
    out += sig.param_types[i];
  }
  return out + ")";
}

ViewGraph render_java_view(const ViewGraph &g, const Adg &adg, const Program &program) {
  ViewGraph out = g;
  out.view = ViewKind::Java;

  std::function<LocalLookup(int)> lookup_for = [&](int node) -> LocalLookup {
    return [&, node](const std::string &local) -> std::optional<InlineExpr> {
      auto it = g.inlined.find(node);
      if (it == g.inlined.end())
        return std::nullopt;
      auto jt = it->second.find(local);
      if (jt == it->second.end())
        return std::nullopt;
      const AdgNode &dn = adg.nodes[static_cast<std::size_t>(jt->second)];
      const Stmt &ds = program.method(dn.method).body[static_cast<std::size_t>(*dn.stmt_ordinal)];
      return InlineExpr{render_java_expr(*ds.rhs, lookup_for(jt->second)),
                        std::holds_alternative<BinExpr>(*ds.rhs)};
    };
  };

  for (auto &n : out.nodes) {
    const AdgNode &an = adg.nodes[static_cast<std::size_t>(n.id)];
    switch (n.kind) {
    case NodeKind::Entry:
      n.text = render_java_entry(an.method_sig);
      break;
    case NodeKind::Stmt: {
      const MethodDef &m = program.method(an.method);
      n.text = render_java(m.body[static_cast<std::size_t>(*an.stmt_ordinal)], m, lookup_for(n.id));
      break;
    }
    default:
      throw UnsupportedStatement("parameter helper node " + std::to_string(n.id) + " has no Java form");
    }
  }
  return out;
}

ViewGraph to_java_view(const Slice &slice, const Adg &adg, const Program &program, const LabelSet &labels) {
  ViewGraph g = to_jimple_view(slice, adg, labels);
  g = strip_param_nodes(g);
  g = inline_temporaries(g, adg, program);
  return render_java_view(g, adg, program);
}

} // namespace slicetool
