#include <catch_amalgamated.hpp>
#include <fstream>

#include "checks.hpp"

using namespace tkm;
using nlohmann::json;

namespace {

json load(const std::string& name) {
  std::ifstream in(std::string(TKM_DATA_DIR) + "/" + name);
  return json::parse(in);
}

json z2_sl2(long c) {
  json j;
  j["algebra"] = {{"series", "A"}, {"rank", 1}};
  j["level"] = c;
  j["group"] = {{"order", 2}};
  j["phi"] = {{{"power", 1}, {"tau", "id"}, {"h", {1}}, {"m", 2}}};
  return j;
}

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const CurveError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("elliptic double cover with four branch orbits") {
  auto raw = parse_curve(load("elliptic_z2.json"));
  auto g = build_simple_algebra('A', 1);
  GroupAction<Q> G(g, raw.N, raw.phi);
  auto C = validate_curve(raw, G);
  CHECK(C.cover_genus == 1);
  raw.declared_cover_genus = 2;
  CHECK_THAT(error_of([&] { validate_curve(raw, G); }), Catch::Matchers::ContainsSubstring("riemann_hurwitz"));
}

TEST_CASE("violations are reported by name") {
  auto g = build_simple_algebra('A', 1);
  GroupAction<Q> G1(g, 1, {});
  json j = load("two_components_sl2_c2.json");
  j["components"][1]["markings"] = json::array();
  CHECK_THAT(error_of([&] { validate_curve(parse_curve(j), G1); }), Catch::Matchers::ContainsSubstring("condition_star"));

  json k = load("two_components_sl2_c2.json");
  k["components"][0]["markings"][0]["weight"] = {3};
  CHECK_THAT(error_of([&] { validate_curve(parse_curve(k), G1); }), Catch::Matchers::ContainsSubstring("weight_in_Dc"));

  json d = load("two_components_sl2_c2.json");
  d["nodes"] = json::array();
  CHECK_THAT(error_of([&] { validate_curve(parse_curve(d), G1); }), Catch::Matchers::ContainsSubstring("connected"));

  auto z = z2_sl2(2);
  z["components"] = {{{"genus", 0}, {"markings", {{{"stab_order", 2}, {"weight", {0}}}, {{"weight", {0}}}}}}};
  CHECK_THAT(error_of([&] { validate_curve(parse_curve(z), GroupAction<Q>(g, 2, parse_curve(z).phi)); }),
             Catch::Matchers::ContainsSubstring("monodromy"));
}

TEST_CASE("node characters must be mutually inverse") {
  auto g = build_simple_algebra('A', 1);
  json j;
  j["algebra"] = {{"series", "A"}, {"rank", 1}};
  j["level"] = 3;
  j["group"] = {{"order", 3}};
  j["phi"] = {{{"power", 1}, {"tau", "id"}, {"h", {1}}, {"m", 3}}};
  json mk = {{"stab_order", 3}, {"char_exponent", 1}, {"weight", {0}}};
  j["components"] = {{{"genus", 0}, {"markings", {mk, mk}}}, {{"genus", 0}, {"markings", {mk, mk}}}};
  j["nodes"] = {{{"endpoints", {0, 1}}, {"stab_order", 3}, {"char_exponent", 1}, {"char_exponent_other", 1}}};
  auto raw = parse_curve(j);
  GroupAction<QOmega> G(g, 3, raw.phi);
  CHECK_THAT(error_of([&] { validate_curve(raw, G); }), Catch::Matchers::ContainsSubstring("stable_action"));
  j["nodes"][0]["exchanges_branches"] = true;
  CHECK_THAT(error_of([&] { validate_curve(parse_curve(j), G); }), Catch::Matchers::ContainsSubstring("branch_exchange"));
}

TEST_CASE("normalization preserves stabilizers and cuts the graph") {
  auto g = build_simple_algebra('A', 1);
  GroupAction<Q> G(g, 1, {});
  auto sep = validate_curve(parse_curve(load("two_components_sl2_c2.json")), G);
  CHECK_FALSE(is_nonseparating(sep, 0));
  auto n = normalize_at_node(sep, 0);
  CHECK(n.curve.nodes.empty());
  CHECK(n.curve.comps[0].marks.size() == 3);
  CHECK(n.curve.comps[1].marks.size() == 3);

  auto ell = validate_curve(parse_curve(load("genus1_sl2_c1.json")), G);
  CHECK(quotient_genus(ell) == 1);
  CHECK(is_nonseparating(ell, 0));
  auto m = normalize_at_node(ell, 0);
  CHECK(quotient_genus(m.curve) == 0);

  auto zr = z2_sl2(2);
  // one branch marking per side, so each component has two branch points
  zr["components"] = {{{"genus", 0}, {"markings", {{{"stab_order", 2}, {"weight", {0}}}, {{"weight", {0}}}}}},
                      {{"genus", 0}, {"markings", {{{"stab_order", 2}, {"weight", {0}}}, {{"weight", {0}}}}}}};
  zr["nodes"] = {{{"endpoints", {0, 1}}, {"stab_order", 2}, {"char_exponent", 1}}};
  auto raw = parse_curve(zr);
  GroupAction<Q> G2(g, 2, raw.phi);
  auto C2 = validate_curve(raw, G2);
  auto n2 = normalize_at_node(C2, 0);
  auto& q1 = n2.curve.comps[n2.q1.first].marks[n2.q1.second];
  auto& q2 = n2.curve.comps[n2.q2.first].marks[n2.q2.second];
  CHECK(q1.stab == 2);
  CHECK(q2.stab == 2);
  CHECK((q1.chi + q2.chi) % 2 == 0);
}

TEST_CASE("factorize enumerates D_c at q''") {
  auto g = build_simple_algebra('A', 1);
  GroupAction<Q> G(g, 1, {});
  auto C = validate_curve(parse_curve(load("genus1_sl2_c1.json")), G);
  auto kids = factorize(C, G, 0);
  REQUIRE(kids.size() == 2);
  CHECK(kids[0].first == WeightQ{Q(0)});
  CHECK(kids[1].first == WeightQ{Q(1)});
  for (auto& [mu, child] : kids) {
    auto& marks = child.comps[0].marks;
    REQUIRE(marks.size() == 3);
    CHECK(marks[1].weight == dual_weight(G.aut(0), mu));
    CHECK(marks[2].weight == mu);
  }
}

TEST_CASE("a singleton D_c gives a single child") {
  auto g = build_simple_algebra('D', 4);
  json j;
  j["algebra"] = {{"series", "D"}, {"rank", 4}};
  j["level"] = 1;
  j["group"] = {{"order", 3}};
  j["phi"] = {{{"power", 1}, {"tau", "triality"}, {"h", {0, 0}}, {"m", 3}}};
  json a = {{"stab_order", 3}, {"char_exponent", 1}, {"weight", {0, 0}}};
  json b = {{"stab_order", 3}, {"char_exponent", 2}, {"weight", {0, 0}}};
  j["components"] = {{{"genus", 0}, {"markings", {a, a}}}, {{"genus", 0}, {"markings", {b, b}}}};
  j["nodes"] = {{{"endpoints", {0, 1}}, {"stab_order", 3}, {"char_exponent", 1}}};
  auto raw = parse_curve(j);
  GroupAction<QOmega> G(g, 3, raw.phi);
  CHECK(G.Dc(1, 1).size() == 1);
  auto C = validate_curve(raw, G);
  auto kids = factorize(C, G, 0);
  REQUIRE(kids.size() == 1);
  CHECK(kids[0].first == WeightQ{Q(0), Q(0)});
}

TEST_CASE("propagation is gated on zero in D_c") {
  auto g = build_simple_algebra('A', 1);
  GroupAction<Q> G(g, 1, {});
  auto C = validate_curve(parse_curve(load("p1_3pt_sl2_c1.json")), G);
  auto P = propagate(C, G, 0);
  CHECK(P.comps[0].marks.size() == 4);

  auto a2 = build_simple_algebra('A', 2);
  json j;
  j["algebra"] = {{"series", "A"}, {"rank", 2}};
  j["level"] = 1;
  j["group"] = {{"order", 2}};
  j["phi"] = {{{"power", 1}, {"tau", "flip"}, {"h", {0}}, {"m", 2}}};
  j["components"] = {{{"genus", 0}, {"markings", {{{"stab_order", 2}, {"weight", {1}}}, {{"stab_order", 2}, {"weight", {1}}}}}}};
  auto raw = parse_curve(j);
  GroupAction<Q> GA(a2, 2, raw.phi);
  auto CA = validate_curve(raw, GA);
  CHECK_THAT(error_of([&] { propagate(CA, GA, 0, 2, 1); }), Catch::Matchers::ContainsSubstring("m = 2 does not divide sbar*c = 1"));
  CHECK_NOTHROW(propagate(CA, GA, 0));
}

TEST_CASE("reduction trees and dimensions") {
  auto g = build_simple_algebra('A', 1);
  GroupAction<Q> G(g, 1, {});
  FusionTable F = FusionTable::from_json(load("fusion_sl2_c1.json"));

  auto tri = validate_curve(parse_curve(load("p1_3pt_sl2_c1.json")), G);
  auto t = reduce_to_trinions(tri, G);
  CHECK(t.nodes.size() == 1);
  CHECK(dimension(t, F) == 1);

  auto C = tri;
  C.comps[0].marks[2].weight = {Q(1)};
  CHECK(dimension(C, G, F) == 0);

  auto ell = validate_curve(parse_curve(load("genus1_sl2_c1.json")), G);
  auto te = reduce_to_trinions(ell, G);
  CHECK(te.leaves().size() == 2);
  CHECK(dimension(te, F) == 2);

  auto four = validate_curve(parse_curve(load("p1_4pt_sl2_c1.json")), G);
  CHECK(dimension(four, G, F) == 1);

  FusionTable empty;
  try {
    dimension(te, empty);
    FAIL("expected MissingFusion");
  } catch (const MissingFusion& e) {
    CHECK(e.missing.size() == 2);
  }
}

TEST_CASE("separating node: two leaves summed over D_c") {
  auto g = build_simple_algebra('A', 1);
  GroupAction<Q> G(g, 1, {});
  auto C = validate_curve(parse_curve(load("two_components_sl2_c2.json")), G);
  FusionTable F;
  fill_untwisted(F, UntwistedFusion(g, 2), 2);
  auto T = reduce_to_trinions(C, G);
  CHECK(T.nodes[T.root].kind == TreeNode::sum);
  CHECK(T.nodes[T.root].kids.size() == 3);
  CHECK(dimension(T, F) == verlinde_untwisted(g, 2, 0, {{Q(1)}, {Q(1)}, {Q(2)}, {Q(2)}}));
}

TEST_CASE("order and propagation invariance on random untwisted curves") {
  std::mt19937 rng(7);
  for (int rank : {1, 2})
    for (long c = 1; c <= 2; ++c) {
      auto g = build_simple_algebra('A', rank);
      UntwistedFusion U(g, c);
      FusionTable F;
      fill_untwisted(F, U, c);
      GroupAction<Q> G(g, 1, {});
      for (int it = 0; it < 4; ++it) {
        auto r = check::random_untwisted(rng, U, rank, c);
        auto C = validate_curve(parse_curve(r.curve), G);
        auto base = dimension(C, G, F);
        CHECK(base == verlinde_untwisted(g, c, r.genus, r.weights));
        for (int rot = 0; rot < 3; ++rot)
          for (bool sf : {false, true}) CHECK(dimension(C, G, F, MoveOrder{sf, rot, rot == 1}) == base);
        auto P = propagate(C, G, 0);
        CHECK(dimension(P, G, F) == base);
        P.comps[0].marks.pop_back();
        CHECK(dimension(P, G, F) == base);
      }
    }
}

TEST_CASE("fusion tables") {
  FusionTable F;
  auto t = Trinion::make(1, {Leg{0, {Q(1)}}, Leg{0, {Q(0)}}, Leg{0, {Q(1)}}});
  auto u = Trinion::make(1, {Leg{0, {Q(1)}}, Leg{0, {Q(1)}}, Leg{0, {Q(0)}}});
  CHECK(t.key() == u.key());
  F.add(t, 1, "user");
  CHECK(F.find(u) == 1);
  CHECK_THROWS_AS(F.add(u, 2, "user"), CurveError);
  CHECK_THROWS_AS(F.add(Trinion::make(2, t.legs), -1, "user"), CurveError);
  auto G = FusionTable::from_json(F.to_json());
  CHECK(G.find(t) == 1);
  CHECK(G.entries.begin()->second.provenance == "user");
}

TEST_CASE("residues of <dX, Y> sum to zero") {
  using namespace check;
  std::mt19937 rng(11);
  auto g = build_simple_algebra('A', 2);
  auto rq = [&](int lo, int hi) {
    Q x(lo + long(rng() % (hi - lo + 1)), 1 + long(rng() % 3));
    x.canonicalize();
    return x;
  };
  for (int it = 0; it < 20; ++it) {
    std::vector<Q> pts;
    while (pts.size() < 3) {
      Q p = rq(-4, 4);
      if (std::find(pts.begin(), pts.end(), p) == pts.end()) pts.push_back(p);
    }
    // X, Y: g-valued, each coordinate a random function with poles at the points and at infinity
    auto rand_fn = [&] {
      Rat f{{rq(-3, 3), rq(-3, 3)}, {Q(1)}};
      for (auto& p : pts) {
        int k = static_cast<int>(rng() % 3);
        Poly den{Q(1)};
        for (int i = 0; i < k; ++i) den = p_mul(den, {-p, Q(1)});
        f = r_add(f, Rat{{rq(-2, 2)}, den});
      }
      return f;
    };
    std::vector<Rat> X, Y;
    for (int a = 0; a < g.dim(); ++a) X.push_back(rand_fn()), Y.push_back(rand_fn());
    Rat w{{}, {Q(1)}};
    for (int a = 0; a < g.dim(); ++a)
      for (int b = 0; b < g.dim(); ++b) {
        Q k = g.form_basis(a, b);
        if (k == 0) continue;
        w = r_add(w, r_mul(Rat{{k}, {Q(1)}}, r_mul(r_deriv(X[a]), Y[b])));
      }
    Q total = residue_at_infinity(w);
    for (auto& p : pts) total += residue_at(w, p);
    CHECK(total == 0);
  }
  // sanity of the residue helpers: dz/z
  Rat inv{{Q(1)}, {Q(0), Q(1)}};
  CHECK(residue_at(inv, 0) == 1);
  CHECK(residue_at_infinity(inv) == -1);
}
