#include <catch_amalgamated.hpp>

#include "checks.hpp"

using namespace tkm;

TEST_CASE("Verma layers follow the PBW formula") {
  auto a1 = build_simple_algebra('A', 1);
  auto a2 = build_simple_algebra('A', 2);
  auto S1 = check::make_aut<Q>(a1, "id", {Q(0)}, 1);
  auto S2 = check::make_aut<Q>(a1, "id", {Q(1)}, 2);
  auto S3 = check::make_aut<Q>(a2, "flip", {Q(0)}, 2);
  auto L1 = build_loop_algebra(S1), L2 = build_loop_algebra(S2), L3 = build_loop_algebra(S3);
  CHECK(check::pbw_matches(L1, {Q(0)}, 1, 6));
  CHECK(check::pbw_matches(L1, {Q(1)}, 2, 5));
  CHECK(check::pbw_matches(L2, {Q(0)}, 2, 5));
  CHECK(check::pbw_matches(L3, {Q(1)}, 1, 5));
}

TEST_CASE("sl2 level 1 vacuum: partition-type graded dimensions") {
  // theta(q) / prod (1 - q^n): theta = 1 + 2q + 2q^4 + ..., times partition numbers
  auto g = build_simple_algebra('A', 1);
  auto S = check::make_aut<Q>(g, "id", {Q(0)}, 1);
  auto L = build_loop_algebra(S);
  auto T = build_integrable_truncation(L, {Q(0)}, 1, 6);
  CHECK(T.graded_dims() == std::vector<int>{1, 3, 4, 7, 13, 19, 29});
}

TEST_CASE("radical of the form is the kernel submodule") {
  auto a1 = build_simple_algebra('A', 1);
  auto a2 = build_simple_algebra('A', 2);
  auto d4 = build_simple_algebra('D', 4);
  auto run = [](const auto& S, WeightQ lam, long c, int dmax) {
    for (bool inv : {false, true}) {
      auto L = build_loop_algebra(S, inv);
      auto T = build_integrable_truncation(L, lam, c, dmax);
      CHECK(radical_equals_kernel(T));
    }
  };
  run(check::make_aut<Q>(a1, "id", {Q(0)}, 1), {Q(0)}, 1, 5);
  run(check::make_aut<Q>(a1, "id", {Q(0)}, 1), {Q(1)}, 2, 4);
  run(check::make_aut<Q>(a2, "flip", {Q(0)}, 2), {Q(0)}, 2, 4);
  run(check::make_aut<Q>(a1, "id", {Q(1)}, 2), {Q(0)}, 2, 4);
  run(check::make_aut<QOmega>(d4, "triality", {Q(0), Q(0)}, 3), {Q(0), Q(0)}, 1, 2);
}

TEST_CASE("Kac identity holds with nonzero alpha") {
  auto a1 = build_simple_algebra('A', 1);
  auto a2 = build_simple_algebra('A', 2);
  auto S1 = check::make_aut<Q>(a1, "id", {Q(0)}, 1);
  auto S2 = check::make_aut<Q>(a2, "flip", {Q(0)}, 2);
  auto S3 = check::make_aut<Q>(a1, "id", {Q(1)}, 2);
  CHECK(check::kac_identities(build_loop_algebra(S1), {Q(0)}, 1, 5) >= 1);
  CHECK(check::kac_identities(build_loop_algebra(S2), {Q(1)}, 1, 5) >= 1);
  CHECK(check::kac_identities(build_loop_algebra(S3), {Q(0)}, 2, 5) >= 1);
}

TEST_CASE("the window is enforced") {
  auto g = build_simple_algebra('A', 1);
  auto S = check::make_aut<Q>(g, "id", {Q(0)}, 1);
  auto L = build_loop_algebra(S);
  auto T = build_integrable_truncation(L, {Q(0)}, 1, 2);
  auto v = T.basis_vector(2, 0);
  CHECK_THROWS_AS(T.act(-1, 0, 2, v), TruncationError);
  CHECK_NOTHROW(T.act(1, 0, 2, v));
  CHECK_THROWS_AS(build_integrable_truncation(L, {Q(2)}, 1, 2), std::invalid_argument);
}
