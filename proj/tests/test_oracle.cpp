#include <catch_amalgamated.hpp>

#include "checks.hpp"

using namespace tkm;

namespace {

OraclePoint at(const WeightQ& w, Q pos, int power = 0) { return {power, w, pos, false}; }
OraclePoint inf(const WeightQ& w, int power = 0) { return {power, w, Q(0), true}; }

}  // namespace

TEST_CASE("Verlinde: fixed examples") {
  auto a1 = build_simple_algebra('A', 1);
  auto a2 = build_simple_algebra('A', 2);
  CHECK(verlinde_untwisted(a1, 1, 0, {{Q(1)}, {Q(1)}, {Q(0)}}) == 1);
  CHECK(verlinde_untwisted(a1, 1, 0, {{Q(1)}, {Q(1)}, {Q(1)}}) == 0);
  for (long c = 1; c <= 4; ++c) CHECK(verlinde_untwisted(a1, c, 0, {{Q(0)}, {Q(0)}, {Q(0)}}) == 1);
  CHECK(verlinde_untwisted(a1, 1, 1, {{Q(0)}}) == 2);
  // sl3 level 1: the three weights form Z/3, so genus g gives 3^g
  CHECK(verlinde_untwisted(a2, 1, 1, {}) == 3);
  CHECK(verlinde_untwisted(a2, 1, 2, {}) == 9);
  CHECK(verlinde_untwisted(a2, 1, 0, {{Q(1), Q(0)}, {Q(1), Q(0)}, {Q(1), Q(0)}}) == 1);
  CHECK_THROWS(verlinde_untwisted(a1, 1, 0, {{Q(2)}}));
}

TEST_CASE("Verlinde agrees with the sl2 S-matrix formula") {
  auto g = build_simple_algebra('A', 1);
  std::mt19937 rng(3);
  for (int it = 0; it < 60; ++it) {
    long c = 1 + rng() % 5;
    int genus = static_cast<int>(rng() % 3);
    int s = static_cast<int>(rng() % 5);
    std::vector<long> w;
    std::vector<WeightQ> wq;
    for (int i = 0; i < s; ++i) {
      w.push_back(static_cast<long>(rng() % (c + 1)));
      wq.push_back({Q(w.back())});
    }
    INFO("c=" << c << " genus=" << genus);
    CHECK(verlinde_untwisted(g, c, genus, wq) == check::verlinde_sl2_float(c, genus, w));
  }
}

TEST_CASE("untwisted coinvariants match Verlinde") {
  auto g = build_simple_algebra('A', 1);
  GroupAction<Q> G(g, 1, {});
  struct Case {
    long c;
    std::vector<long> w;
  };
  for (auto cs : {Case{1, {1, 1, 0}}, Case{1, {1, 1, 1}}, Case{1, {0}}, Case{2, {1, 1, 2}}, Case{2, {2, 2, 2}}, Case{2, {1, 1}}}) {
    std::vector<OraclePoint> pts;
    std::vector<WeightQ> ws;
    for (size_t i = 0; i < cs.w.size(); ++i) {
      pts.push_back(at({Q(cs.w[i])}, Q(long(i))));
      ws.push_back({Q(cs.w[i])});
    }
    auto r = coinvariants_bruteforce(G, cs.c, pts, static_cast<int>(cs.c) + 3);
    REQUIRE(r.stabilized);
    CHECK(r.value == verlinde_untwisted(g, cs.c, 0, ws).get_si());
    for (size_t d = 1; d < r.dims.size(); ++d) CHECK(r.dims[d] <= r.dims[d - 1]);
  }
}

TEST_CASE("Mobius repositioning does not change the value") {
  auto g = build_simple_algebra('A', 1);
  GroupAction<Q> G(g, 1, {});
  WeightQ w1{Q(1)}, w2{Q(2)};
  std::vector<std::vector<OraclePoint>> configs = {
      {at(w1, 0), at(w1, 1), at(w2, 2)},
      {at(w1, -3), at(w1, qfrac(1, 2)), at(w2, 5)},
      {at(w1, 0), at(w1, 1), inf(w2)},
      {inf(w1), at(w1, qfrac(-2, 3)), at(w2, 4)},
  };
  std::vector<long> vals;
  for (auto& p : configs) {
    auto r = coinvariants_bruteforce(G, 2, p, 5);
    REQUIRE(r.stabilized);
    vals.push_back(r.value);
  }
  for (auto v : vals) CHECK(v == vals[0]);
  auto r = coinvariants_bruteforce(G, 2, configs[0], 5, Q(-7));
  CHECK(r.value == vals[0]);
  CHECK(vals[0] == 1);
}

TEST_CASE("Z/2 on P^1, weights (0,0) at the fixed points, level 2: frozen value") {
  auto g = build_simple_algebra('A', 1);
  AutDescriptor d;
  d.power = 1;
  d.tau = "id";
  d.h = {Q(1)};
  d.m = 2;
  GroupAction<Q> G(g, 2, {d});
  auto r = coinvariants_bruteforce(G, 2, {at({Q(0)}, 0, 1), inf({Q(0)}, 1)}, 6);
  REQUIRE(r.stabilized);
  CHECK(r.value == 1);
}

TEST_CASE("non-stabilized runs carry the flag") {
  auto g = build_simple_algebra('A', 1);
  GroupAction<Q> G(g, 1, {});
  auto r = coinvariants_bruteforce(G, 3, {at({Q(1)}, 0), at({Q(1)}, 1), at({Q(0)}, 2)}, 1);
  if (!r.stabilized) {
    CHECK(r.value == -1);
    CHECK_FALSE(r.note.empty());
  }
}

TEST_CASE("placement on P^1") {
  auto pts = place_on_p1(2, {Leg{1, {Q(0)}}, Leg{1, {Q(0)}}, Leg{0, {Q(1)}}});
  CHECK(pts[0].position == 0);
  CHECK(pts[1].infinity);
  CHECK(pts[2].position == 1);
  CHECK_THROWS_AS(place_on_p1(2, {Leg{1, {Q(0)}}, Leg{0, {Q(0)}}, Leg{0, {Q(1)}}}), std::invalid_argument);
  CHECK_THROWS_AS(place_on_p1(2, {Leg{0, {Q(0)}}, Leg{0, {Q(0)}}, Leg{0, {Q(1)}}}), std::invalid_argument);
}

TEST_CASE("oracle-filled factorization on a Z/2 four-orbit curve") {
  auto g = build_simple_algebra('A', 1);
  AutDescriptor d;
  d.power = 1;
  d.tau = "id";
  d.h = {Q(1)};
  d.m = 2;
  GroupAction<Q> G(g, 2, {d});
  nlohmann::json j;
  j["algebra"] = {{"series", "A"}, {"rank", 1}};
  j["level"] = 2;
  j["group"] = {{"order", 2}};
  j["phi"] = {{{"power", 1}, {"tau", "id"}, {"h", {1}}, {"m", 2}}};
  j["components"] = {{{"genus", 0},
                      {"markings",
                       {{{"stab_order", 2}, {"weight", {0}}},
                        {{"stab_order", 2}, {"weight", {0}}},
                        {{"weight", {1}}},
                        {{"weight", {1}}}}}}};
  auto C = validate_curve(parse_curve(j), G);
  auto direct = coinvariants_bruteforce(G, 2, {at({Q(0)}, 0, 1), inf({Q(0)}, 1), at({Q(1)}, 1), at({Q(1)}, 2)}, 5);
  REQUIRE(direct.stabilized);
  FusionTable F;
  for (int rot = 0; rot < 3; ++rot) {
    auto T = reduce_to_trinions(C, G, MoveOrder{false, rot, false});
    fill_from_oracle(F, G, T.leaves(), 5);
    CHECK(dimension(T, F) == direct.value);
  }
}

TEST_CASE("unramified trinions: fusion rules agree with brute force") {
  auto g = build_simple_algebra('A', 1);
  GroupAction<Q> G(g, 1, {});
  for (long c : {1, 2}) {
    UntwistedFusion U(g, c);
    std::vector<Trinion> leaves;
    for (int a = 0; a < U.size(); ++a)
      for (int b = a; b < U.size(); ++b)
        for (int d = b; d < U.size(); ++d)
          leaves.push_back(Trinion::make(c, {Leg{0, U.weights()[a]}, Leg{0, U.weights()[b]}, Leg{0, U.weights()[d]}}));
    FusionTable A, B;
    fill_from_oracle(A, G, leaves, static_cast<int>(c) + 3, true);
    fill_from_oracle(B, G, leaves, static_cast<int>(c) + 3, false);
    for (auto& t : leaves) {
      INFO(t.key());
      REQUIRE(B.find(t));
      CHECK(A.find(t) == B.find(t));
    }
  }
}
