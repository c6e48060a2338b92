#include "helpers.hpp"

#include <regex>

using namespace slicetool;

namespace {

std::multiset<ViewLabel> label_multiset(const ViewGraph &g) {
  std::multiset<ViewLabel> out;
  for (const auto &n : g.nodes)
    out.insert(n.labels.begin(), n.labels.end());
  return out;
}

ViewNode vnode(int id, NodeKind k) {
  ViewNode n;
  n.id = id;
  n.kind = k;
  n.text = "n" + std::to_string(id);
  return n;
}

const char *kTempProgram = R"(
class app.T {
  method <app.T: void run(android.telephony.TelephonyManager)> {
    android.telephony.TelephonyManager tm;
    java.lang.String $r1;
    java.lang.String $r2;
    java.lang.String named;
    tm := @parameter0;
    $r1 = virtualinvoke tm.<android.telephony.TelephonyManager: java.lang.String getDeviceId()>();
    staticinvoke <android.util.Log: int d(java.lang.String)>($r1);
    $r2 = virtualinvoke tm.<android.telephony.TelephonyManager: java.lang.String getImei()>();
    staticinvoke <android.util.Log: int d(java.lang.String)>($r2);
    staticinvoke <android.util.Log: int e(java.lang.String)>($r2);
    named = virtualinvoke tm.<android.telephony.TelephonyManager: java.lang.String getSubscriberId()>();
    staticinvoke <android.util.Log: int d(java.lang.String)>(named);
    return;
  }
})";

} // namespace

TEST_SUITE("java_view") {

TEST_CASE("render statements") {
  InvokeExpr inv{InvokeKind::Static, "", {"a.B", "void", "f", {"int"}}, {{ImmKind::Int, "3"}}};
  CHECK(render_java_expr(RValue{inv}) == "a.B.f(3)");

  Program p = parse_program(R"(class a.B { method <a.B: int g(int,int[])> {
    int x; int[] arr; int y; a.B o;
    x := @parameter0;
    arr := @parameter1;
  L2:
    if x >= 0 goto L2;
    y = arr[x];
    y = x + y;
    o = new a.B;
    y = virtualinvoke o.<a.B: int h(int)>(y);
    goto L2;
  } })");
  const MethodDef &m = p.method(0);
  CHECK(render_java(m.body[0], m) == "int x");
  CHECK(render_java(m.body[1], m) == "int[] arr");
  CHECK(render_java(m.body[2], m) == "if (x >= 0)");
  CHECK(render_java(m.body[3], m) == "y = arr[x];");
  CHECK(render_java(m.body[4], m) == "y = x + y;");
  CHECK(render_java(m.body[5], m) == "o = new a.B();");
  CHECK(render_java(m.body[6], m) == "y = o.h(y);");
  CHECK(render_java(m.body[7], m) == "goto L2;");
  CHECK(render_java_entry(m.sig) == "int a.B.g(int, int[])");

  Program q = parse_program("class A { method <A: int f(int)> { A this; int v; this := @this; v := @parameter0; return v; } }");
  CHECK(render_java(q.method(0).body[0], q.method(0)) == "A this");
  CHECK(render_java(q.method(0).body[2], q.method(0)) == "return v;");
}

TEST_CASE("compound substitutions are parenthesized as operands") {
  BinExpr b{"*", {ImmKind::Local, "$t"}, {ImmKind::Int, "2"}};
  LocalLookup lookup = [](const std::string &l) -> std::optional<InlineExpr> {
    if (l == "$t")
      return InlineExpr{"a + b", true};
    return std::nullopt;
  };
  CHECK(render_java_expr(RValue{b}, lookup) == "(a + b) * 2");
  CHECK(render_java_expr(RValue{Imm{ImmKind::Local, "$t"}}, lookup) == "a + b");
}

TEST_CASE("strip helper nodes") {
  ViewGraph g;
  g.nodes = {vnode(0, NodeKind::Stmt), vnode(1, NodeKind::ActualIn), vnode(2, NodeKind::FormalIn),
             vnode(3, NodeKind::Stmt)};
  g.edges = {{0, 1, ViewEdgeKind::Data}, {1, 2, ViewEdgeKind::Data}, {2, 3, ViewEdgeKind::Data}};
  ViewGraph s = strip_param_nodes(g);
  REQUIRE(s.nodes.size() == 2);
  CHECK(s.edges == std::vector<ViewEdge>{{0, 3, ViewEdgeKind::Data}});

  ViewGraph plain;
  plain.nodes = {vnode(0, NodeKind::Entry), vnode(1, NodeKind::Stmt)};
  plain.edges = {{0, 1, ViewEdgeKind::ControlData}};
  ViewGraph same = strip_param_nodes(plain);
  CHECK(same.nodes == plain.nodes);
  CHECK(same.edges == plain.edges);
}

TEST_CASE("temporary inlining rules") {
  Program p = parse_program(kTempProgram);
  Adg adg = build_adg(p, true);
  auto sources = label_sources(adg, Datasets::bundled().identifiers);
  auto methods = label_privacy_methods(adg, Datasets::bundled().libraries);
  REQUIRE(sources.size() == 3);
  LabelSet labels{sources, methods};
  std::map<std::string, ViewGraph> by_name;
  for (const auto &s : sources) {
    Slice sl = forward_slice(adg, s, {false});
    by_name[s.call_site_sig.name] = to_java_view(sl, adg, p, labels);
  }
  // Single-use temporary folds into its use and carries the source label.
  const ViewGraph &dev = by_name.at("getDeviceId");
  REQUIRE(dev.nodes.size() == 1);
  CHECK(dev.nodes[0].text == "android.util.Log.d(tm.getDeviceId());");
  bool has_source = false;
  for (const auto &l : dev.nodes[0].labels)
    has_source |= l.type == "source";
  CHECK(has_source);
  // Used twice: kept.
  CHECK(by_name.at("getImei").nodes.size() == 3);
  // Named local: kept.
  CHECK(by_name.at("getSubscriberId").nodes.size() == 2);
}

TEST_CASE("one node slice") {
  Program p = parse_program(R"(class A { method <A: void m(android.telephony.TelephonyManager)> {
    android.telephony.TelephonyManager tm;
    tm := @parameter0;
    virtualinvoke tm.<android.telephony.TelephonyManager: java.lang.String getDeviceId()>();
    return;
  } })");
  Adg adg = build_adg(p, false);
  auto sources = label_sources(adg, Datasets::bundled().identifiers);
  LabelSet labels{sources, {}};
  Slice s = forward_slice(adg, sources.at(0), {false});
  ViewGraph j = to_jimple_view(s, adg, labels);
  ViewGraph v = to_java_view(s, adg, p, labels);
  REQUIRE(v.nodes.size() == 1);
  CHECK(v.nodes[0].labels == j.nodes[0].labels);
  CHECK(v.nodes[0].text == "tm.getDeviceId();");
}

TEST_CASE("interproc reduction counts") {
  auto gt = oracle::ground_truth()["programs"]["interproc.slir"]["sources"][0];
  Analysis a = testutil::corpus_analysis("interproc.slir");
  REQUIRE(a.slices.size() == 1);
  const auto &r = a.slices[0];
  CHECK(r.jimple.nodes.size() == gt["full"].get<std::size_t>());
  CHECK(strip_param_nodes(r.jimple).nodes.size() == gt["stripped"].get<std::size_t>());
  CHECK(r.java.nodes.size() == gt["java"].get<std::size_t>());
}

TEST_CASE("append chains") {
  Analysis st = testutil::corpus_analysis("stellarium_like.slir");
  REQUIRE(st.slices.size() == 1);
  std::vector<std::string> texts;
  for (const auto &n : st.slices[0].java.nodes)
    texts.push_back(n.text);
  CHECK(std::find(texts.begin(), texts.end(),
                  "return new java.lang.StringBuilder().append(java.util.UUID.randomUUID()).toString();") !=
        texts.end());
  CHECK(st.slices[0].java.nodes.size() == 4);

  Analysis ro = testutil::corpus_analysis("roidsec_like.slir");
  const auto &dev = ro.slices.at(0);
  CHECK(dev.slice.source.call_site_sig.name == "getDeviceId");
  CHECK(dev.java.nodes.size() < dev.jimple.nodes.size());
  bool found = false;
  for (const auto &n : dev.java.nodes)
    found |= n.text == "body = sb.append(key).append(value).toString();";
  CHECK(found);

  Analysis lat = testutil::corpus_analysis("latlike.slir");
  REQUIRE(lat.slices.at(0).java.nodes.size() == 2);
  CHECK(lat.slices[0].java.nodes[1].text == "return sb.append(lat);");
}

TEST_CASE("java view properties on every corpus slice") {
  const std::regex temp(R"(\$[a-z][A-Za-z0-9_]*)");
  for (const auto &f : oracle::corpus_files()) {
    for (bool ctl : {true, false}) {
      SliceOptions o;
      o.include_control = ctl;
      Analysis a = testutil::corpus_analysis(f.filename().string(), o);
      for (const auto &r : a.slices) {
        INFO(f.filename().string() << " slice " << r.slice.id << " control=" << ctl);
        CHECK(r.java.nodes.size() <= r.jimple.nodes.size());
        for (const auto &n : r.java.nodes)
          CHECK_FALSE(is_helper(n.kind));
        CHECK(label_multiset(r.java) == label_multiset(r.jimple));

        // Data reachability survives the transformation.
        for (const auto &na : r.jimple.nodes) {
          int ia = oracle::java_image(r.java, r.jimple, na.id);
          if (ia < 0)
            continue;
          auto java_reach = oracle::view_reach(r.java, ia);
          for (int b : oracle::view_reach(r.jimple, na.id)) {
            int ib = oracle::java_image(r.java, r.jimple, b);
            if (ib >= 0)
              CHECK(java_reach.count(ib));
          }
        }

        // No single-def, single-use temporary with its def->use edge in the
        // slice survives in the rendered text.
        for (const auto &n : r.java.nodes) {
          const AdgNode &an = a.adg.nodes[static_cast<std::size_t>(n.id)];
          const MethodDef &m = a.program.method(an.method);
          for (std::sregex_iterator it(n.text.begin(), n.text.end(), temp), end; it != end; ++it) {
            std::string t = it->str();
            int defs = 0, uses = 0, def_ord = -1, use_ord = -1;
            for (const auto &s : m.body) {
              if (defined_local(s) == t) {
                ++defs;
                def_ord = s.ordinal;
              }
              for (const auto &u : used_locals(s))
                if (u == t) {
                  ++uses;
                  use_ord = s.ordinal;
                }
            }
            if (defs != 1 || uses != 1)
              continue;
            int d = a.adg.stmt_node(an.method, def_ord), u = a.adg.stmt_node(an.method, use_ord);
            bool edge = false;
            for (const auto &e : r.jimple.edges)
              edge |= e.src == d && e.dst == u;
            CHECK_MESSAGE(!edge, "residual temporary " << t << " in: " << n.text);
          }
        }
      }
    }
  }
}

TEST_CASE("helper nodes have no java form") {
  Analysis a = testutil::corpus_analysis("interproc.slir");
  CHECK_THROWS_AS(render_java_view(a.slices[0].jimple, a.adg, a.program), UnsupportedStatement);
}

}
