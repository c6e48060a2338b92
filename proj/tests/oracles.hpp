#pragma once

// Brute-force reference implementations used to check the analyses. They
// share only the IR model with the code under test.

#include "slicetool/adg.hpp"
#include "slicetool/pipeline.hpp"

#include <json.hpp>

#include <filesystem>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace oracle {

using namespace slicetool;

std::filesystem::path source_dir();
std::filesystem::path corpus_dir();
std::vector<std::filesystem::path> corpus_files();
nlohmann::json ground_truth();
std::string slurp(const std::filesystem::path &p);

// Successor lists with Exit = body size, computed straight from the statements.
std::vector<std::vector<int>> successors(const MethodDef &m);
std::vector<bool> reachable_from_start(const std::vector<std::vector<int>> &succ);

// (branch, dependent) pairs, branch -1 for Entry. A node n depends on branch
// b when some successor s of b has every simple path s->Exit passing n while
// some simple path b->Exit avoids n (or n == b).
std::set<std::pair<int, int>> control_deps(const MethodDef &m);

// (def, use, var) triples: a path def->use exists on which no intermediate
// node overwrites var completely. Self pairs are not reported.
std::set<std::tuple<int, int, std::string>> data_deps(const MethodDef &m);

// Nodes reachable from `source` over the edge list, restricted to the kinds
// a slice with the given control setting follows.
std::set<int> reachable(const Adg &adg, int source, bool include_control);

// Warning letter for (string, processing, sharing) counts, each clamped to 3.
char ladder(int string_ops, int processing, int sharing);

// Nodes reachable from `from` in a view graph (all edges).
std::set<int> view_reach(const ViewGraph &g, int from);

// The java-view node that a jimple-view node ended up in, or -1 for helpers.
int java_image(const ViewGraph &java, const ViewGraph &jimple, int node);

// Files under a directory, relative path -> bytes.
std::map<std::string, std::string> read_tree(const std::filesystem::path &dir);

} // namespace oracle
