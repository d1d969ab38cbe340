#include <catch_amalgamated.hpp>

#include "checks.hpp"

using namespace tkm;

namespace {

template <class K>
void dc_against_scan(const FiniteOrderAutomorphism<K>& S, long cmax) {
  for (long c = 1; c <= cmax; ++c) {
    INFO("c = " << c);
    auto D = enumerate_Dc(S, c);
    CHECK(D == check::scan_Dc(S, c));
    bool zero = std::binary_search(D.begin(), D.end(), WeightQ(S.l, Q(0)));
    CHECK(zero_in_Dc(S, c) == zero);
  }
}

}  // namespace

TEST_CASE("D_c equals the brute-force scan") {
  auto a1 = build_simple_algebra('A', 1);
  auto a2 = build_simple_algebra('A', 2);
  auto a3 = build_simple_algebra('A', 3);
  auto d4 = build_simple_algebra('D', 4);
  dc_against_scan(check::make_aut<Q>(a1, "id", {Q(0)}, 1), 4);
  dc_against_scan(check::make_aut<Q>(a1, "id", {Q(1)}, 2), 4);
  dc_against_scan(check::make_aut<QOmega>(a1, "id", {Q(1)}, 3), 4);
  dc_against_scan(check::make_aut<Q>(a2, "flip", {Q(0)}, 2), 4);
  dc_against_scan(check::make_aut<Q>(a3, "flip", {Q(0), Q(0)}, 2), 3);
  dc_against_scan(check::make_aut<QOmega>(d4, "triality", {Q(0), Q(0)}, 3), 3);
}

TEST_CASE("untwisted sl2 has c+1 weights") {
  auto g = build_simple_algebra('A', 1);
  auto S = check::make_aut<Q>(g, "id", {Q(0)}, 1);
  for (long c = 1; c <= 6; ++c) CHECK(enumerate_Dc(S, c).size() == size_t(c + 1));
}

TEST_CASE("A2 flip at odd level: omega_n in D_c, 0 not") {
  auto g = build_simple_algebra('A', 2);
  auto S = check::make_aut<Q>(g, "flip", {Q(0)}, 2);
  for (long c : {1, 3}) {
    auto D = enumerate_Dc(S, c);
    CHECK(std::binary_search(D.begin(), D.end(), WeightQ{Q(1)}));
    CHECK_FALSE(std::binary_search(D.begin(), D.end(), WeightQ{Q(0)}));
    CHECK_FALSE(zero_in_Dc(S, c));
  }
  CHECK(zero_in_Dc(S, 2));
}

TEST_CASE("sigma acts by eps^j on class j") {
  auto a1 = build_simple_algebra('A', 1);
  auto a2 = build_simple_algebra('A', 2);
  auto d4 = build_simple_algebra('D', 4);
  CHECK(check::sigma_eigenvalues(check::make_aut<Q>(a1, "id", {Q(1)}, 2)));
  CHECK(check::sigma_eigenvalues(check::make_aut<QOmega>(a1, "id", {Q(1)}, 3)));
  CHECK(check::sigma_eigenvalues(check::make_aut<Q>(a2, "flip", {Q(0)}, 2)));
  CHECK(check::sigma_eigenvalues(check::make_aut<QOmega>(a2, "flip", {Q(1)}, 6)));
  CHECK(check::sigma_eigenvalues(check::make_aut<QOmega>(d4, "triality", {Q(0), Q(0)}, 3)));
  auto S = check::make_aut<QOmega>(d4, "triality", {Q(0), Q(0)}, 3);
  CHECK(S.dims() == std::vector<int>{14, 7, 7});
}

TEST_CASE("dual weight is an involution on D_c") {
  auto a2 = build_simple_algebra('A', 2);
  auto S = check::make_aut<Q>(a2, "id", {Q(0), Q(0)}, 1);
  for (auto& w : enumerate_Dc(S, 2)) {
    auto d = dual_weight(S, w);
    CHECK(dual_weight(S, d) == w);
    CHECK(d == WeightQ{w[1], w[0]});
  }
}

TEST_CASE("invalid automorphism data") {
  auto a1 = build_simple_algebra('A', 1);
  auto a2 = build_simple_algebra('A', 2);
  CHECK_THROWS_AS(check::make_aut<Q>(a1, "id", {Q(-1)}, 2), std::invalid_argument);
  CHECK_THROWS_AS(check::make_aut<Q>(a1, "id", {Q(3)}, 2), std::invalid_argument);
  CHECK_THROWS_AS(check::make_aut<Q>(a1, "id", {qfrac(1, 2)}, 2), std::invalid_argument);
  CHECK_THROWS_AS(check::make_aut<Q>(a2, "flip", {Q(0)}, 3), std::invalid_argument);
  CHECK_THROWS_AS(check::make_aut<Q>(a1, "flip", {Q(0)}, 2), std::invalid_argument);
  auto S = check::make_aut<Q>(a1, "id", {Q(0)}, 1);
  CHECK_THROWS_AS(enumerate_Dc(S, 0), std::invalid_argument);
}
