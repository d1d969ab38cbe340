#include <catch_amalgamated.hpp>

#include "checks.hpp"

using namespace tkm;

namespace {

template <class K>
void full_check(const FiniteOrderAutomorphism<K>& S, const WeightQ& mu, long c, int dmax) {
  auto L1 = build_loop_algebra(S, false), L2 = build_loop_algebra(S, true);
  auto G = build_gluing_tensor(L1, L2, mu, c, dmax);
  // Delta_0 is I_mu read through the degree-0 pairing
  CHECK(G.delta(0) * transpose(G.B.at(0)) == Mat<K>::identity(G.H1.dim(0)));
  if (G.H1.dim(0) == 1) CHECK(G.delta(0) == Mat<K>::identity(1));
  for (int d = 0; d <= dmax; ++d) CHECK(delta_is_canonical(G, d));
  for (long n = -3; n <= 3; ++n)
    for (int a = 0; a < L1.n(L1.cls(n)); ++a)
      for (int d = 0; d <= dmax; ++d) {
        if (d + n > dmax) continue;
        CHECK(check_annihilation(G, a, n, d));
      }
}

}  // namespace

TEST_CASE("gluing tensor, untwisted sl2") {
  auto g = build_simple_algebra('A', 1);
  auto S = check::make_aut<Q>(g, "id", {Q(0)}, 1);
  full_check(S, {Q(0)}, 1, 3);
  full_check(S, {Q(1)}, 1, 3);
  full_check(S, {Q(2)}, 2, 2);
}

TEST_CASE("gluing tensor, A2 flip and inner sl2") {
  auto a2 = build_simple_algebra('A', 2);
  full_check(check::make_aut<Q>(a2, "flip", {Q(0)}, 2), {Q(0)}, 2, 3);
  auto a1 = build_simple_algebra('A', 1);
  full_check(check::make_aut<Q>(a1, "id", {Q(1)}, 2), {Q(1)}, 2, 3);
}

TEST_CASE("mu* is the dual weight") {
  auto g = build_simple_algebra('A', 2);
  auto S = check::make_aut<Q>(g, "id", {Q(0), Q(0)}, 1);
  auto L1 = build_loop_algebra(S, false), L2 = build_loop_algebra(S, true);
  auto G = build_gluing_tensor(L1, L2, {Q(1), Q(0)}, 1, 1);
  CHECK(G.mu_star == WeightQ{Q(0), Q(1)});
  CHECK_THROWS_AS(build_gluing_tensor(L2, L1, {Q(1), Q(0)}, 1, 1), std::invalid_argument);
}
