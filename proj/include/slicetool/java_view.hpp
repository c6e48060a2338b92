#pragma once

// Slice graphs in two views: the raw IR ("jimple") view and a reduced
// Java-like view without parameter-passing helpers or single-use stack
// temporaries.

#include "slicetool/adg.hpp"
#include "slicetool/errors.hpp"
#include "slicetool/labeler.hpp"
#include "slicetool/slicer.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace slicetool {

enum class ViewKind { Jimple, Java };
enum class ViewEdgeKind { Data, ControlData };

std::string_view to_string(ViewKind v);
std::string_view to_string(ViewEdgeKind k);

struct ViewLabel {
  std::string type; // "source" or "method"
  std::string category;
  std::optional<int> risk;
  std::optional<std::string> strength;

  auto operator<=>(const ViewLabel &) const = default;
};

struct ViewNode {
  int id = 0;
  NodeKind kind = NodeKind::Stmt;
  MethodSig method;
  std::string text;
  std::vector<ViewLabel> labels; // sorted

  bool operator==(const ViewNode &) const = default;
};

struct ViewEdge {
  int src = 0;
  int dst = 0;
  ViewEdgeKind kind = ViewEdgeKind::Data;

  auto operator<=>(const ViewEdge &) const = default;
};

struct ViewGraph {
  ViewKind view = ViewKind::Jimple;
  std::vector<ViewNode> nodes; // ascending id
  std::vector<ViewEdge> edges; // ascending (src, dst), one per pair
  // Java view bookkeeping: node id -> (temporary -> id of its inlined definition).
  std::map<int, std::map<std::string, int>> inlined;

  const ViewNode *find(int id) const;
};

// Labels attached to slice nodes.
struct LabelSet {
  std::vector<SourceLabel> sources;
  std::vector<MethodLabel> methods;
};

ViewGraph to_jimple_view(const Slice &slice, const Adg &adg, const LabelSet &labels);

// Removes ActualIn/ActualOut/FormalIn/FormalOut nodes, bridging each
// predecessor to each successor with a data edge.
ViewGraph strip_param_nodes(const ViewGraph &g);

// Folds `$` temporaries with one definition and one use (method-wide)
// into their use. Records substitutions in `inlined`; text is unchanged.
ViewGraph inline_temporaries(const ViewGraph &g, const Adg &adg, const Program &program);

// Replacement expression for a local, or nullopt to print it as is.
// The flag asks for parentheses when used as an operand or receiver.
struct InlineExpr {
  std::string text;
  bool compound = false;
};
using LocalLookup = std::function<std::optional<InlineExpr>(const std::string &local)>;

std::string render_java_expr(const RValue &rv, const LocalLookup &lookup = {});
std::string render_java(const Stmt &stmt, const MethodDef &method, const LocalLookup &lookup = {});
std::string render_java_entry(const MethodSig &sig);

// Sets Java-like text on every node, applying recorded substitutions.
ViewGraph render_java_view(const ViewGraph &g, const Adg &adg, const Program &program);

// strip_param_nodes, inline_temporaries, then render_java_view.
ViewGraph to_java_view(const Slice &slice, const Adg &adg, const Program &program, const LabelSet &labels);

} // namespace slicetool
