#pragma once

#include "slicetool/errors.hpp"
#include "slicetool/ir.hpp"

#include <string>
#include <vector>

namespace slicetool {

// Statement-level control-flow graph. Nodes 0..n-1 are the statements of
// the method in body order; node n is the synthetic Exit.
struct Cfg {
  int stmt_count = 0;
  std::vector<std::vector<int>> succ; // n + 1 entries, sorted, unique
  std::vector<bool> reachable;        // per statement, from statement 0

  int exit() const { return stmt_count; }
  bool is_branch(int n) const { return succ[static_cast<std::size_t>(n)].size() > 1; }
};

Cfg build_cfg(const MethodDef &method);

// Index used for the method Entry in control dependence results.
inline constexpr int kEntry = -1;

struct ControlDep {
  int branch = kEntry; // statement index of the If, or kEntry
  int dependent = 0;

  auto operator<=>(const ControlDep &) const = default;
};

struct ControlDeps {
  std::vector<ControlDep> edges; // sorted
  std::vector<int> unreachable;  // statements excluded from the analysis
};

// Postdominator-based control dependence on the Exit-augmented CFG (Entry
// branches to the first statement and to Exit). Throws AnalysisError when
// a reachable statement has no path to Exit.
ControlDeps control_deps(const Cfg &cfg);

// Immediate postdominator of every node of the augmented graph. Index n
// is Exit and n + 1 is Entry; unreachable statements map to -1.
std::vector<int> immediate_postdominators(const Cfg &cfg);

struct DataDep {
  int def = 0;
  int use = 0;
  std::string var;

  auto operator<=>(const DataDep &) const = default;
};

// Reaching-definition def-use edges over locals. Only reachable statements
// participate; self edges are dropped.
std::vector<DataDep> data_deps(const MethodDef &method, const Cfg &cfg);

} // namespace slicetool
