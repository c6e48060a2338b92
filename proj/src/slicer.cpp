#include "slicetool/slicer.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <tuple>

namespace slicetool {

void SliceOptions::validate() const {
  if (max_nodes && *max_nodes == 0)
    throw std::invalid_argument("max_nodes must be at least 1");
  if (time_budget && time_budget->count() < 0)
    throw std::invalid_argument("time budget must not be negative");
}

Slice forward_slice(const Adg &adg, const SourceLabel &source, const SliceOptions &opts) {
  if (source.node < 0 || static_cast<std::size_t>(source.node) >= adg.nodes.size())
    throw UnknownSource("no node " + std::to_string(source.node) + " in the dependence graph");

  using Clock = std::chrono::steady_clock;
  std::optional<Clock::time_point> deadline;
  if (opts.time_budget)
    deadline = Clock::now() + *opts.time_budget;

  Slice slice;
  slice.source = source;
  std::vector<bool> in_slice(adg.nodes.size(), false);
  std::deque<int> queue;
  in_slice[static_cast<std::size_t>(source.node)] = true;
  slice.node_ids.push_back(source.node);
  queue.push_back(source.node);

  std::vector<int> next;
  while (!queue.empty() && !slice.truncated) {
    if (deadline && Clock::now() >= *deadline) {
      slice.timed_out = true;
      break;
    }
    int v = queue.front();
    queue.pop_front();
    next.clear();
    for (int ei : adg.out_edges(v)) {
      const AdgEdge &e = adg.edges[static_cast<std::size_t>(ei)];
      if (opts.traverses(e.kind) && !in_slice[static_cast<std::size_t>(e.dst)])
        next.push_back(e.dst);
    }
    // out_edges is already ordered by destination; dedupe parallel edges.
    next.erase(std::unique(next.begin(), next.end()), next.end());
    for (int w : next) {
      if (opts.max_nodes && slice.node_ids.size() >= *opts.max_nodes) {
        slice.truncated = true;
        break;
      }
      in_slice[static_cast<std::size_t>(w)] = true;
      slice.node_ids.push_back(w);
      queue.push_back(w);
    }
  }

  for (std::size_t i = 0; i < adg.edges.size(); ++i) {
    const AdgEdge &e = adg.edges[i];
    if (opts.traverses(e.kind) && in_slice[static_cast<std::size_t>(e.src)] && in_slice[static_cast<std::size_t>(e.dst)])
      slice.edge_ids.push_back(static_cast<int>(i));
  }
  return slice;
}

std::vector<Slice> slice_all(const Adg &adg, const std::vector<SourceLabel> &labels, const SliceOptions &opts) {
  std::vector<const SourceLabel *> chosen;
  for (const auto &l : labels) {
    if (opts.risk_filter &&
        std::find(opts.risk_filter->begin(), opts.risk_filter->end(), l.entry.risk) == opts.risk_filter->end())
      continue;
    chosen.push_back(&l);
  }
  std::sort(chosen.begin(), chosen.end(), [](const SourceLabel *a, const SourceLabel *b) {
    auto ka = std::make_tuple(a->entry.risk, render_sig(a->call_site_sig), a->node);
    auto kb = std::make_tuple(b->entry.risk, render_sig(b->call_site_sig), b->node);
    return ka < kb;
  });

  SliceOptions per_source = opts;
  if (opts.time_budget && !chosen.empty())
    per_source.time_budget = *opts.time_budget / static_cast<long long>(chosen.size());

  std::vector<Slice> out;
  out.reserve(chosen.size());
  for (const auto *l : chosen) {
    Slice s = forward_slice(adg, *l, per_source);
    s.id = static_cast<int>(out.size());
    out.push_back(std::move(s));
  }
  return out;
}

} // namespace slicetool
