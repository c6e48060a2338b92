#pragma once

// Application dependence graph: per-method statement nodes with control
// and data dependencies, joined by call and parameter-passing structure.

#include "slicetool/cfg.hpp"
#include "slicetool/ir.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace slicetool {

enum class NodeKind { Entry, Stmt, ActualIn, ActualOut, FormalIn, FormalOut };
enum class EdgeKind { Data, Control, Call, ParamIn, ParamOut };

std::string_view to_string(NodeKind k);
std::string_view to_string(EdgeKind k);

bool is_helper(NodeKind k);

struct CallResolution {
  bool internal = false;
  MethodSig callee;
  int callee_method = -1; // flattened method index when internal
};

struct AdgNode {
  int id = 0;
  NodeKind kind = NodeKind::Stmt;
  int method = 0; // flattened method index
  MethodSig method_sig;
  std::optional<int> stmt_ordinal; // Stmt nodes
  std::optional<int> index;        // ActualIn arg index, FormalIn param index
  int call_site = -1;              // ActualIn/ActualOut: node id of the call statement
  std::optional<CallResolution> call; // Stmt nodes that invoke something
  std::string display_text;

  bool is_external_invoke() const { return call && !call->internal; }
};

struct AdgEdge {
  int src = 0;
  int dst = 0;
  EdgeKind kind = EdgeKind::Data;
  std::string var; // storage location carried by Data edges
};

class Adg {
public:
  std::vector<AdgNode> nodes;
  std::vector<AdgEdge> edges; // sorted by (src, dst, kind)
  std::vector<std::string> diagnostics;

  // Edge indices leaving `node`, ordered by (dst, kind).
  const std::vector<int> &out_edges(int node) const { return out_[static_cast<std::size_t>(node)]; }

  // Node id of a statement, or -1 when the statement was excluded.
  int stmt_node(int method, int ordinal) const;
  int entry_node(int method) const { return entry_[static_cast<std::size_t>(method)]; }

  // Sorts and deduplicates edges, then rebuilds the forward index.
  void finalize();

  std::size_t count_edges(EdgeKind k) const;

private:
  friend Adg build_adg(const Program &program, bool include_control);
  std::vector<std::vector<int>> out_;
  std::vector<int> entry_;
  std::vector<std::vector<int>> stmt_nodes_;
};

// Call site -> resolution, for every invoke in the program.
std::map<StmtRef, CallResolution> build_call_graph(const Program &program);

struct FieldDep {
  StmtRef write;
  StmtRef read;
  std::string field;

  auto operator<=>(const FieldDep &) const = default;
};

// Qualified field written or read by a statement (`Class.name`). Instance
// fields are qualified by the declared type of their base local.
std::optional<std::string> field_written(const MethodDef &m, const Stmt &s);
std::optional<std::string> field_read(const MethodDef &m, const Stmt &s);

// Flow-insensitive field-based edges: every write of F to every read of F.
std::vector<FieldDep> field_deps(const Program &program);

Adg build_adg(const Program &program, bool include_control);

// One `N<id> [kind] <sig> <text>` line per node, then one
// `E <src> -> <dst> [kind]` line per edge.
std::string dump_adg(const Adg &adg);

} // namespace slicetool
