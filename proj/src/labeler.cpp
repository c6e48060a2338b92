#include "slicetool/labeler.hpp"

#include "slicetool/parser.hpp"

#include <algorithm>
#include <charconv>
#include <set>

namespace slicetool {

namespace {

std::string_view trim(std::string_view s) {
  const char *ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos)
    return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    auto bar = line.find('|', start);
    out.emplace_back(trim(line.substr(start, bar == std::string_view::npos ? std::string_view::npos : bar - start)));
    if (bar == std::string_view::npos)
      break;
    start = bar + 1;
  }
  return out;
}

// Calls `fn(line_no, content)` for each non-blank, non-comment line.
template <typename Fn> void for_each_line(std::string_view text, Fn fn) {
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++line_no;
    std::string_view t = trim(line);
    if (!t.empty() && t[0] != '#')
      fn(line_no, t);
    if (nl == std::string_view::npos)
      break;
    pos = nl + 1;
  }
}

IdentifierEntry parse_identifier_pattern(const std::string &text, int line_no) {
  IdentifierEntry e;
  auto colon = text.find(':');
  if (text.empty() || text.front() != '<' || colon == std::string::npos)
    throw DatasetFormatError("malformed signature '" + text + "'", line_no);
  std::string cls(trim(std::string_view(text).substr(1, colon - 1)));
  std::string canonical = text;
  if (!cls.empty() && cls.back() == '*') {
    e.wildcard = true;
    e.class_prefix = cls.substr(0, cls.size() - 1);
    canonical = "<wildcard" + text.substr(colon);
  }
  try {
    e.signature = parse_sig(canonical);
  } catch (const SyntaxError &err) {
    throw DatasetFormatError("malformed signature '" + text + "': " + err.what(), line_no);
  }
  if (e.wildcard)
    e.signature.declaring_class = cls;
  return e;
}

} // namespace

std::string IdentifierEntry::pattern() const { return render_sig(signature); }

IdentifierDataset IdentifierDataset::filtered(const std::vector<int> &risks) const {
  IdentifierDataset out;
  for (const auto &e : entries)
    if (std::find(risks.begin(), risks.end(), e.risk) != risks.end())
      out.entries.push_back(e);
  return out;
}

IdentifierDataset load_identifier_dataset(std::string_view text) {
  IdentifierDataset ds;
  std::set<std::string> seen;
  for_each_line(text, [&](int line_no, std::string_view line) {
    auto f = split_fields(line);
    if (f.size() != 3)
      throw DatasetFormatError("expected 3 '|'-separated fields, found " + std::to_string(f.size()), line_no);
    IdentifierEntry e = parse_identifier_pattern(f[0], line_no);
    if (f[1].empty())
      throw DatasetFormatError("empty data category", line_no);
    e.data_category = f[1];
    int risk = 0;
    auto [p, ec] = std::from_chars(f[2].data(), f[2].data() + f[2].size(), risk);
    if (ec != std::errc() || p != f[2].data() + f[2].size() || risk < 1)
      throw DatasetFormatError("risk must be a positive integer, got '" + f[2] + "'", line_no);
    e.risk = risk;
    if (!seen.insert(e.pattern()).second)
      throw DatasetFormatError("duplicate signature " + e.pattern(), line_no);
    ds.entries.push_back(std::move(e));
  });
  return ds;
}

std::string_view to_string(PseudoStrength s) { return s == PseudoStrength::Weak ? "weak" : "strong"; }

std::string_view to_string(OperationClass c) {
  switch (c) {
  case OperationClass::Collection:
    return "collection";
  case OperationClass::StringManipulation:
    return "string_manipulation";
  case OperationClass::ProcessingStorage:
    return "processing_storage";
  case OperationClass::ThirdPartySharing:
    return "third_party_sharing";
  case OperationClass::Pseudonymization:
    return "pseudonymization";
  }
  return "?";
}

std::optional<OperationClass> operation_class_from_string(std::string_view s) {
  static const std::map<std::string_view, OperationClass> names = {
      {"Collection", OperationClass::Collection},
      {"StringManipulation", OperationClass::StringManipulation},
      {"ProcessingStorage", OperationClass::ProcessingStorage},
      {"ThirdPartySharing", OperationClass::ThirdPartySharing},
      {"Pseudonymization", OperationClass::Pseudonymization},
  };
  for (const auto &[name, c] : names)
    if (s == name || s == to_string(c))
      return c;
  return std::nullopt;
}

const CategoryMap &default_category_map() {
  static const CategoryMap m = {
      {"string", OperationClass::StringManipulation},
      {"io", OperationClass::ProcessingStorage},
      {"serialization", OperationClass::ProcessingStorage},
      {"logging", OperationClass::ProcessingStorage},
      {"image", OperationClass::ProcessingStorage},
      {"authentication", OperationClass::ProcessingStorage},
      {"location", OperationClass::ProcessingStorage},
      {"analytics", OperationClass::ThirdPartySharing},
      {"advertisements", OperationClass::ThirdPartySharing},
      {"network", OperationClass::ThirdPartySharing},
      {"email", OperationClass::ThirdPartySharing},
      {"pseudonymization", OperationClass::Pseudonymization},
  };
  return m;
}

LibraryDataset load_library_dataset(std::string_view text) {
  LibraryDataset ds;
  // Header lines first so entries may precede the mapping they rely on.
  for_each_line(text, [&](int line_no, std::string_view line) {
    if (!line.starts_with("@"))
      return;
    if (!line.starts_with("@category "))
      throw DatasetFormatError("unknown directive '" + std::string(line) + "'", line_no);
    auto body = trim(line.substr(10));
    auto eq = body.find('=');
    if (eq == std::string_view::npos)
      throw DatasetFormatError("expected '@category <name> = <OperationClass>'", line_no);
    auto name = trim(body.substr(0, eq));
    auto cls = operation_class_from_string(trim(body.substr(eq + 1)));
    if (name.empty() || !cls || *cls == OperationClass::Collection)
      throw DatasetFormatError("invalid category mapping '" + std::string(body) + "'", line_no);
    ds.category_map[std::string(name)] = *cls;
  });

  std::set<std::string> seen;
  for_each_line(text, [&](int line_no, std::string_view line) {
    if (line.starts_with("@"))
      return;
    auto f = split_fields(line);
    if (f.size() < 2 || f.size() > 3)
      throw DatasetFormatError("expected 2 or 3 '|'-separated fields", line_no);
    LibraryEntry e;
    e.package_prefix = f[0];
    e.category = f[1];
    if (e.package_prefix.empty())
      throw DatasetFormatError("empty package prefix", line_no);
    auto cat = ds.category_map.find(e.category);
    if (cat == ds.category_map.end())
      throw DatasetFormatError("unknown category '" + e.category + "'", line_no);
    const bool pseudo = cat->second == OperationClass::Pseudonymization;
    if (f.size() == 3 && !f[2].empty()) {
      if (f[2] == "weak")
        e.pseudo_strength = PseudoStrength::Weak;
      else if (f[2] == "strong")
        e.pseudo_strength = PseudoStrength::Strong;
      else
        throw DatasetFormatError("strength must be weak or strong, got '" + f[2] + "'", line_no);
    }
    if (pseudo != e.pseudo_strength.has_value())
      throw DatasetFormatError(pseudo ? "pseudonymization entry needs a strength"
                                      : "strength is only allowed on pseudonymization entries",
                               line_no);
    if (!seen.insert(e.package_prefix).second)
      throw DatasetFormatError("duplicate prefix " + e.package_prefix, line_no);
    ds.entries.push_back(std::move(e));
  });
  return ds;
}

const IdentifierEntry *match_identifier(const IdentifierDataset &dataset, const MethodSig &callee) {
  for (const auto &e : dataset.entries)
    if (!e.wildcard && e.signature == callee)
      return &e;
  const IdentifierEntry *best = nullptr;
  for (const auto &e : dataset.entries) {
    if (!e.wildcard || !callee.declaring_class.starts_with(e.class_prefix))
      continue;
    if (e.signature.return_type != callee.return_type || e.signature.name != callee.name ||
        e.signature.param_types != callee.param_types)
      continue;
    if (!best || e.class_prefix.size() > best->class_prefix.size())
      best = &e;
  }
  return best;
}

bool class_has_prefix(std::string_view cls, std::string_view prefix) {
  if (!cls.starts_with(prefix))
    return false;
  if (cls.size() == prefix.size())
    return true;
  char c = cls[prefix.size()];
  return c == '.' || c == '$' || prefix.ends_with('.');
}

std::vector<SourceLabel> label_sources(const Adg &adg, const IdentifierDataset &dataset) {
  std::vector<SourceLabel> out;
  for (const auto &n : adg.nodes) {
    if (n.kind != NodeKind::Stmt || !n.is_external_invoke())
      continue;
    if (const IdentifierEntry *e = match_identifier(dataset, n.call->callee))
      out.push_back({n.id, *e, n.call->callee});
  }
  return out;
}

std::vector<MethodLabel> label_privacy_methods(const Adg &adg, const LibraryDataset &libs) {
  std::vector<MethodLabel> out;
  for (const auto &n : adg.nodes) {
    if (n.kind != NodeKind::Stmt || !n.is_external_invoke())
      continue;
    const LibraryEntry *best = nullptr;
    for (const auto &e : libs.entries)
      if (class_has_prefix(n.call->callee.declaring_class, e.package_prefix) &&
          (!best || e.package_prefix.size() > best->package_prefix.size()))
        best = &e;
    if (best)
      out.push_back({n.id, *best});
  }
  return out;
}

PseudoSummary grade_pseudonymization(const std::vector<MethodLabel> &labels) {
  PseudoSummary s;
  for (const auto &l : labels) {
    if (!l.entry.pseudo_strength)
      continue;
    s.present = true;
    if (!s.weakest_strength || *l.entry.pseudo_strength == PseudoStrength::Weak)
      s.weakest_strength = *l.entry.pseudo_strength;
  }
  return s;
}

} // namespace slicetool
