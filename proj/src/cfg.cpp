#include "slicetool/cfg.hpp"

#include <algorithm>
#include <functional>

namespace slicetool {

Cfg build_cfg(const MethodDef &method) {
  Cfg cfg;
  const int n = static_cast<int>(method.body.size());
  cfg.stmt_count = n;
  cfg.succ.assign(static_cast<std::size_t>(n) + 1, {});
  auto next_of = [n](int i) { return i + 1 < n ? i + 1 : n; };
  auto label_target = [&](const Stmt &s) { return method.labels.at(*s.target); };

  for (int i = 0; i < n; ++i) {
    const Stmt &s = method.body[static_cast<std::size_t>(i)];
    auto &out = cfg.succ[static_cast<std::size_t>(i)];
    switch (s.kind) {
    case StmtKind::Goto:
      out = {label_target(s)};
      break;
    case StmtKind::If:
      out = {next_of(i), label_target(s)};
      break;
    case StmtKind::Return:
      out = {n};
      break;
    default:
      out = {next_of(i)};
      break;
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }

  cfg.reachable.assign(static_cast<std::size_t>(n), false);
  if (n > 0) {
    std::vector<int> stack = {0};
    cfg.reachable[0] = true;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : cfg.succ[static_cast<std::size_t>(v)]) {
        if (w < n && !cfg.reachable[static_cast<std::size_t>(w)]) {
          cfg.reachable[static_cast<std::size_t>(w)] = true;
          stack.push_back(w);
        }
      }
    }
  }
  return cfg;
}

namespace {

// Successors in the augmented graph: Entry (n + 1) flows to the first
// statement and directly to Exit.
std::vector<std::vector<int>> augmented_succ(const Cfg &cfg) {
  const int n = cfg.stmt_count;
  std::vector<std::vector<int>> succ(static_cast<std::size_t>(n) + 2);
  for (int i = 0; i < n; ++i)
    if (cfg.reachable[static_cast<std::size_t>(i)])
      succ[static_cast<std::size_t>(i)] = cfg.succ[static_cast<std::size_t>(i)];
  if (n > 0)
    succ[static_cast<std::size_t>(n) + 1] = {0, n};
  else
    succ[static_cast<std::size_t>(n) + 1] = {n};
  return succ;
}

} // namespace

std::vector<int> immediate_postdominators(const Cfg &cfg) {
  const int n = cfg.stmt_count;
  const int exit = n;
  const int total = n + 2;
  auto succ = augmented_succ(cfg);

  std::vector<std::vector<int>> pred(static_cast<std::size_t>(total));
  for (int v = 0; v < total; ++v)
    for (int w : succ[static_cast<std::size_t>(v)])
      pred[static_cast<std::size_t>(w)].push_back(v);

  // Postorder of the reverse graph rooted at Exit.
  std::vector<int> po_num(static_cast<std::size_t>(total), -1);
  std::vector<int> order;
  std::vector<bool> seen(static_cast<std::size_t>(total), false);
  std::vector<std::pair<int, std::size_t>> stack = {{exit, 0}};
  seen[static_cast<std::size_t>(exit)] = true;
  while (!stack.empty()) {
    auto &[v, k] = stack.back();
    const auto &ps = pred[static_cast<std::size_t>(v)];
    if (k < ps.size()) {
      int w = ps[k++];
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = true;
        stack.push_back({w, 0});
      }
    } else {
      po_num[static_cast<std::size_t>(v)] = static_cast<int>(order.size());
      order.push_back(v);
      stack.pop_back();
    }
  }

  for (int i = 0; i < n; ++i) {
    if (cfg.reachable[static_cast<std::size_t>(i)] && !seen[static_cast<std::size_t>(i)])
      throw AnalysisError("statement " + std::to_string(i) + " has no path to the method exit");
  }

  std::vector<int> ipdom(static_cast<std::size_t>(total), -1);
  ipdom[static_cast<std::size_t>(exit)] = exit;
  auto intersect = [&](int a, int b) {
    while (a != b) {
      while (po_num[static_cast<std::size_t>(a)] < po_num[static_cast<std::size_t>(b)])
        a = ipdom[static_cast<std::size_t>(a)];
      while (po_num[static_cast<std::size_t>(b)] < po_num[static_cast<std::size_t>(a)])
        b = ipdom[static_cast<std::size_t>(b)];
    }
    return a;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      int v = *it;
      if (v == exit)
        continue;
      int cand = -1;
      for (int w : succ[static_cast<std::size_t>(v)]) {
        if (ipdom[static_cast<std::size_t>(w)] == -1)
          continue;
        cand = cand == -1 ? w : intersect(cand, w);
      }
      if (cand != ipdom[static_cast<std::size_t>(v)]) {
        ipdom[static_cast<std::size_t>(v)] = cand;
        changed = true;
      }
    }
  }
  return ipdom;
}

ControlDeps control_deps(const Cfg &cfg) {
  const int n = cfg.stmt_count;
  ControlDeps out;
  for (int i = 0; i < n; ++i)
    if (!cfg.reachable[static_cast<std::size_t>(i)])
      out.unreachable.push_back(i);

  auto ipdom = immediate_postdominators(cfg);
  auto succ = augmented_succ(cfg);
  for (int a = 0; a < n + 2; ++a) {
    if (a == n)
      continue;
    int stop = ipdom[static_cast<std::size_t>(a)];
    if (stop == -1)
      continue;
    for (int b : succ[static_cast<std::size_t>(a)]) {
      for (int r = b; r != stop && r != n; r = ipdom[static_cast<std::size_t>(r)])
        out.edges.push_back({a == n + 1 ? kEntry : a, r});
    }
  }
  std::sort(out.edges.begin(), out.edges.end());
  out.edges.erase(std::unique(out.edges.begin(), out.edges.end()), out.edges.end());
  return out;
}

std::vector<DataDep> data_deps(const MethodDef &method, const Cfg &cfg) {
  const int n = cfg.stmt_count;
  struct Def {
    int stmt;
    std::string var;
    bool strong;
  };
  std::vector<Def> defs;
  std::vector<int> def_of(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    if (!cfg.reachable[static_cast<std::size_t>(i)])
      continue;
    const Stmt &s = method.body[static_cast<std::size_t>(i)];
    if (auto v = defined_local(s)) {
      def_of[static_cast<std::size_t>(i)] = static_cast<int>(defs.size());
      defs.push_back({i, *v, is_strong_def(s)});
    }
  }
  const std::size_t nd = defs.size();

  std::vector<std::vector<int>> pred(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    if (!cfg.reachable[static_cast<std::size_t>(i)])
      continue;
    for (int w : cfg.succ[static_cast<std::size_t>(i)])
      if (w < n)
        pred[static_cast<std::size_t>(w)].push_back(i);
  }

  using Bits = std::vector<bool>;
  std::vector<Bits> in(static_cast<std::size_t>(n), Bits(nd, false));
  std::vector<Bits> out(static_cast<std::size_t>(n), Bits(nd, false));

  auto transfer = [&](int i, const Bits &inb) {
    Bits res = inb;
    int d = def_of[static_cast<std::size_t>(i)];
    if (d >= 0) {
      const Def &def = defs[static_cast<std::size_t>(d)];
      if (def.strong)
        for (std::size_t k = 0; k < nd; ++k)
          if (defs[k].var == def.var)
            res[k] = false;
      res[static_cast<std::size_t>(d)] = true;
    }
    return res;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < n; ++i) {
      if (!cfg.reachable[static_cast<std::size_t>(i)])
        continue;
      Bits inb(nd, false);
      for (int p : pred[static_cast<std::size_t>(i)])
        for (std::size_t k = 0; k < nd; ++k)
          if (out[static_cast<std::size_t>(p)][k])
            inb[k] = true;
      Bits ob = transfer(i, inb);
      if (ob != out[static_cast<std::size_t>(i)] || inb != in[static_cast<std::size_t>(i)]) {
        in[static_cast<std::size_t>(i)] = std::move(inb);
        out[static_cast<std::size_t>(i)] = std::move(ob);
        changed = true;
      }
    }
  }

  std::vector<DataDep> result;
  for (int u = 0; u < n; ++u) {
    if (!cfg.reachable[static_cast<std::size_t>(u)])
      continue;
    for (const auto &var : used_locals(method.body[static_cast<std::size_t>(u)])) {
      for (std::size_t k = 0; k < nd; ++k) {
        if (in[static_cast<std::size_t>(u)][k] && defs[k].var == var && defs[k].stmt != u)
          result.push_back({defs[k].stmt, u, var});
      }
    }
  }
  std::sort(result.begin(), result.end());
  result.erase(std::unique(result.begin(), result.end()), result.end());
  return result;
}

} // namespace slicetool
