#include "helpers.hpp"

using namespace slicetool;

namespace {

Adg adg_of(const char *src) { return build_adg(parse_program(src), true); }

const char *kCalls = R"(
class app.Main {
  method <app.Main: void run(android.telephony.TelephonyManager)> {
    android.telephony.TelephonyManager tm;
    java.lang.String id;
    tm := @parameter0;
    id = virtualinvoke tm.<android.telephony.TelephonyManager: java.lang.String getDeviceId()>();
    staticinvoke <com.google.firebase.analytics.FirebaseAnalytics: void log(java.lang.String)>(id);
    staticinvoke <java.security.MessageDigest: void touch(java.lang.String)>(id);
    staticinvoke <com.google.firebase.analyticsx.Other: void log(java.lang.String)>(id);
    return;
  }
})";

} // namespace

TEST_SUITE("labeler") {

TEST_CASE("identifier dataset line") {
  auto ds = load_identifier_dataset(
      "<android.telephony.TelephonyManager: java.lang.String getDeviceId()> | device or other IDs | 1\n");
  REQUIRE(ds.entries.size() == 1);
  CHECK(ds.entries[0].risk == 1);
  CHECK(ds.entries[0].data_category == "device or other IDs");
  CHECK(ds.entries[0].signature.name == "getDeviceId");
}

TEST_CASE("identifier dataset errors carry line numbers") {
  const char *dup = "# c\n<a.B: int f()> | x | 1\n<a.B: int f()> | x | 2\n";
  try {
    load_identifier_dataset(dup);
    FAIL("expected DatasetFormatError");
  } catch (const DatasetFormatError &e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(load_identifier_dataset("<a.B: int f()> | x\n"), DatasetFormatError);
  CHECK_THROWS_AS(load_identifier_dataset("<a.B: int f()> | x | 0\n"), DatasetFormatError);
  CHECK_THROWS_AS(load_identifier_dataset("<a.B: int f()> |  | 1\n"), DatasetFormatError);
  CHECK_THROWS_AS(load_identifier_dataset("a.B f | x | 1\n"), DatasetFormatError);
}

TEST_CASE("bundled identifier dataset") {
  const auto &ds = Datasets::bundled().identifiers;
  CHECK(ds.entries.size() == 25);
  std::set<int> risks;
  for (const auto &e : ds.entries)
    risks.insert(e.risk);
  CHECK(risks == std::set<int>{1, 2});
}

TEST_CASE("library dataset") {
  auto libs = load_library_dataset("java.security.MessageDigest | pseudonymization | weak\nokhttp3 | network\n");
  REQUIRE(libs.entries.size() == 2);
  CHECK(libs.entries[0].pseudo_strength == PseudoStrength::Weak);
  CHECK_FALSE(libs.entries[1].pseudo_strength);
  CHECK_THROWS_AS(load_library_dataset("javax.crypto | pseudonymization\n"), DatasetFormatError);
  CHECK_THROWS_AS(load_library_dataset("okhttp3 | network | strong\n"), DatasetFormatError);
  CHECK_THROWS_AS(load_library_dataset("okhttp3 | teleport\n"), DatasetFormatError);

  auto remapped = load_library_dataset("@category network = ProcessingStorage\n@category vault = Pseudonymization\n"
                                       "okhttp3 | network\ncom.v | vault | strong\n");
  CHECK(remapped.category_map.at("network") == OperationClass::ProcessingStorage);
  CHECK(remapped.category_map.at("vault") == OperationClass::Pseudonymization);
}

TEST_CASE("default category map") {
  const auto &m = default_category_map();
  CHECK(m.at("string") == OperationClass::StringManipulation);
  for (const char *c : {"io", "serialization", "logging", "image", "authentication", "location"})
    CHECK(m.at(c) == OperationClass::ProcessingStorage);
  for (const char *c : {"analytics", "advertisements", "network", "email"})
    CHECK(m.at(c) == OperationClass::ThirdPartySharing);
  CHECK(m.at("pseudonymization") == OperationClass::Pseudonymization);
  CHECK(Datasets::bundled().libraries.category_map == m);
}

TEST_CASE("source labels") {
  Adg adg = adg_of(kCalls);
  auto labels = label_sources(adg, Datasets::bundled().identifiers);
  REQUIRE(labels.size() == 1);
  CHECK(labels[0].entry.data_category == "device or other IDs");
  CHECK(labels[0].entry.risk == 1);
  CHECK(adg.nodes[static_cast<std::size_t>(labels[0].node)].is_external_invoke());

  Adg none = adg_of("class A { method <A: void m()> { return; } }");
  CHECK(label_sources(none, Datasets::bundled().identifiers).empty());
}

TEST_CASE("exact match beats wildcards, longest wildcard wins") {
  auto ds = load_identifier_dataset("<a.*: int f()> | short | 2\n"
                                    "<a.b.*: int f()> | long | 2\n"
                                    "<a.b.C: int f()> | exact | 1\n");
  MethodSig exact{"a.b.C", "int", "f", {}};
  MethodSig other{"a.b.D", "int", "f", {}};
  MethodSig far{"a.x.D", "int", "f", {}};
  MethodSig miss{"z.D", "int", "f", {}};
  CHECK(match_identifier(ds, exact)->data_category == "exact");
  CHECK(match_identifier(ds, other)->data_category == "long");
  CHECK(match_identifier(ds, far)->data_category == "short");
  CHECK(match_identifier(ds, miss) == nullptr);
}

TEST_CASE("privacy method labels") {
  Adg adg = adg_of(kCalls);
  auto labels = label_privacy_methods(adg, Datasets::bundled().libraries);
  std::map<std::string, std::string> by_class;
  for (const auto &l : labels)
    by_class[adg.nodes[static_cast<std::size_t>(l.node)].call->callee.declaring_class] = l.entry.category;
  CHECK(by_class.at("com.google.firebase.analytics.FirebaseAnalytics") == "analytics");
  CHECK(by_class.at("java.security.MessageDigest") == "pseudonymization");
  // Prefixes respect package boundaries.
  CHECK_FALSE(by_class.count("com.google.firebase.analyticsx.Other"));

  auto two = load_library_dataset("com.google | analytics\ncom.google.firebase.analytics | io\n");
  auto l2 = label_privacy_methods(adg, two);
  for (const auto &l : l2)
    if (adg.nodes[static_cast<std::size_t>(l.node)].call->callee.declaring_class ==
        "com.google.firebase.analytics.FirebaseAnalytics")
      CHECK(l.entry.category == "io");
}

TEST_CASE("class prefix boundaries") {
  CHECK(class_has_prefix("java.lang.String", "java.lang.String"));
  CHECK(class_has_prefix("java.lang.StringBuilder", "java.lang.StringBuilder"));
  CHECK_FALSE(class_has_prefix("java.lang.StringBuilder", "java.lang.String"));
  CHECK(class_has_prefix("android.provider.Settings$Secure", "android.provider.Settings"));
  CHECK(class_has_prefix("okhttp3.OkHttpClient", "okhttp3"));
}

TEST_CASE("pseudonymization grading") {
  CHECK(grade_pseudonymization({}) == PseudoSummary{false, std::nullopt});
  MethodLabel weak{1, {"java.security.MessageDigest", "pseudonymization", PseudoStrength::Weak}};
  MethodLabel strong{2, {"javax.crypto", "pseudonymization", PseudoStrength::Strong}};
  MethodLabel other{3, {"okhttp3", "network", std::nullopt}};
  CHECK(grade_pseudonymization({strong, weak}) == PseudoSummary{true, PseudoStrength::Weak});
  CHECK(grade_pseudonymization({strong, other}) == PseudoSummary{true, PseudoStrength::Strong});
}

TEST_CASE("risk filtering of the dataset") {
  Program p = testutil::corpus_program("roidsec_like.slir");
  Adg adg = build_adg(p, true);
  const auto &ds = Datasets::bundled().identifiers;
  auto all = label_sources(adg, ds);
  for (std::vector<int> r : {std::vector<int>{1}, std::vector<int>{2}, std::vector<int>{1, 2}}) {
    auto some = label_sources(adg, ds.filtered(r));
    std::vector<SourceLabel> expect;
    for (const auto &l : all)
      if (std::find(r.begin(), r.end(), l.entry.risk) != r.end())
        expect.push_back(l);
    CHECK(some == expect);
  }
  CHECK(label_sources(adg, ds) == all);
}

TEST_CASE("corpus sources match ground truth") {
  auto gt = oracle::ground_truth();
  std::size_t total = 0;
  for (const auto &f : oracle::corpus_files()) {
    INFO(f.filename().string());
    Program p = parse_program(oracle::slurp(f));
    Adg adg = build_adg(p, true);
    auto labels = label_sources(adg, Datasets::bundled().identifiers);
    std::set<std::tuple<std::string, int, std::string, int>> got, want;
    for (const auto &l : labels) {
      const AdgNode &n = adg.nodes[static_cast<std::size_t>(l.node)];
      got.insert({render_sig(n.method_sig), *n.stmt_ordinal, render_sig(l.call_site_sig), l.entry.risk});
    }
    for (const auto &s : gt["programs"][f.filename().string()]["sources"])
      want.insert({s["method"].get<std::string>(), s["ordinal"].get<int>(), s["sig"].get<std::string>(),
                   s["risk"].get<int>()});
    CHECK(got == want);
    total += labels.size();
  }
  CHECK(total == gt["total_sources"].get<std::size_t>());
}

}
