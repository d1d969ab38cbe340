#include <catch_amalgamated.hpp>

#include "checks.hpp"

using namespace tkm;

TEST_CASE("sl2 level 1: central term") {
  auto g = build_simple_algebra('A', 1);
  auto S = check::make_aut<Q>(g, "id", {Q(0)}, 1);
  auto L = build_loop_algebra(S);
  auto T = build_integrable_truncation(L, {Q(0)}, 1, 5);
  Sugawara<Q> Sg(T);
  auto r = virasoro_defect(Sg, 2, -2);
  CHECK(r.ok);
  CHECK(r.expected == "1/2");
  REQUIRE_FALSE(r.layers.empty());
  for (auto& l : r.layers) {
    CHECK(l.scalar);
    CHECK(l.value == "1/2");
  }
  auto r1 = virasoro_defect(Sg, 1, -1);
  CHECK(r1.ok);
  CHECK(r1.expected == "0");
  CHECK(virasoro_defect(Sg, 3, -3).expected == "2");
  auto T2 = build_integrable_truncation(L, {Q(0)}, 1, 2);
  Sugawara<Q> Sg2(T2);
  CHECK_THROWS_AS(virasoro_defect(Sg2, 3, -3), WindowError);
  try {
    virasoro_defect(Sg2, 3, -3);
  } catch (const WindowError& e) {
    CHECK(e.required == 3);
  }
}

TEST_CASE("L_0 on the highest weight vector") {
  // (lambda, lambda + 2 rho) / 2(c + h) with lambda = omega, c = 1: (3/2) / 6
  auto g = build_simple_algebra('A', 1);
  auto S = check::make_aut<Q>(g, "id", {Q(0)}, 1);
  auto L = build_loop_algebra(S);
  auto T = build_integrable_truncation(L, {Q(1)}, 1, 2);
  Sugawara<Q> Sg(T);
  auto L0 = build_L0(Sg);
  CHECK(L0.at(0)(0, 0) == qfrac(1, 4));
}

TEST_CASE("mode commutator on a twisted module") {
  auto g = build_simple_algebra('A', 2);
  auto S = check::make_aut<Q>(g, "flip", {Q(0)}, 2);
  auto L = build_loop_algebra(S);
  auto T = build_integrable_truncation(L, {Q(0)}, 2, 4);
  Sugawara<Q> Sg(T);
  for (long n = -2; n <= 2; ++n)
    for (long k = -1; k <= 1; ++k)
      for (int a = 0; a < L.n(L.cls(n)); ++a)
        for (int d = 0; d <= 4; ++d) {
          long top = std::max({long(d), d - 2 * k, d - n, d - n - 2 * k});
          if (top > 4) continue;
          CHECK(check_mode_commutator(Sg, n, a, k, d));
        }
}

TEST_CASE("defect is scalar with the predicted value on A2 flip") {
  auto g = build_simple_algebra('A', 2);
  auto S = check::make_aut<Q>(g, "flip", {Q(0)}, 2);
  auto L = build_loop_algebra(S);
  auto T = build_integrable_truncation(L, {Q(0)}, 2, 4);
  Sugawara<Q> Sg(T);
  auto r = virasoro_defect(Sg, 1, -1);
  CHECK(r.ok);
  auto r2 = virasoro_defect(Sg, 1, 0);
  CHECK(r2.ok);
}

TEST_CASE("parameter change: holomorphic fields give scalar 0") {
  auto g = build_simple_algebra('A', 1);
  auto S = check::make_aut<Q>(g, "id", {Q(0)}, 1);
  auto L = build_loop_algebra(S);
  auto T = build_integrable_truncation(L, {Q(0)}, 1, 5);
  Sugawara<Q> Sg(T);
  Reparam P;
  P.m = 1;
  P.order = 8;
  P.u = {Q(2)};
  CHECK(parameter_change_scalar(Sg, P, {{0, Q(1)}}) == 0);
  P.u = {Q(1), Q(1)};
  CHECK(parameter_change_scalar(Sg, P, {{0, Q(1)}, {1, Q(3)}}) == 0);
}

TEST_CASE("Virasoro cocycle of the vector fields") {
  for (int m : {1, 2, 3})
    for (long n = -3; n <= 3; ++n)
      for (long k = -3; k <= 3; ++k) CHECK(virasoro_cocycle_check(n, k, m));
}
