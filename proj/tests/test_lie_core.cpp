#include <catch_amalgamated.hpp>

#include "checks.hpp"

using namespace tkm;

TEST_CASE("dimensions and dual Coxeter numbers") {
  struct Row {
    char s;
    int n, dim, hv;
  };
  for (auto r : {Row{'A', 1, 3, 2}, Row{'A', 2, 8, 3}, Row{'B', 2, 10, 3}, Row{'G', 2, 14, 4}, Row{'C', 3, 21, 4},
                 Row{'D', 4, 28, 6}, Row{'F', 4, 52, 9}, Row{'E', 6, 78, 12}, Row{'E', 8, 248, 30}}) {
    auto g = build_simple_algebra(r.s, r.n);
    CHECK(g.dim() == r.dim);
    CHECK(g.dual_coxeter == r.hv);
  }
}

TEST_CASE("Jacobi identity and invariant form") {
  for (auto [s, n] : std::vector<std::pair<char, int>>{{'A', 1}, {'A', 2}, {'A', 3}, {'B', 2}, {'G', 2}, {'C', 3}, {'D', 4}}) {
    INFO(s << n);
    auto g = build_simple_algebra(s, n);
    CHECK(check::jacobi(g));
    CHECK(check::invariance(g));
  }
}

TEST_CASE("normalized form gives long roots length 2") {
  for (auto [s, n] : std::vector<std::pair<char, int>>{{'B', 3}, {'C', 3}, {'G', 2}, {'F', 4}}) {
    auto g = build_simple_algebra(s, n);
    CHECK(g.root_len2[g.highest] == 2);
    auto e = basis_element(g, g.e(g.highest)), f = basis_element(g, g.f(g.highest));
    CHECK(normalized_form(e, f) == 1);
  }
}

TEST_CASE("sl2 brackets") {
  auto g = build_simple_algebra('A', 1);
  auto e = basis_element(g, g.e(0)), f = basis_element(g, g.f(0)), h = basis_element(g, g.h(0));
  CHECK(bracket(e, f).c == SVec<Q>{{g.h(0), Q(1)}});
  CHECK(bracket(h, e).c == SVec<Q>{{g.e(0), Q(2)}});
  CHECK(bracket(h, f).c == SVec<Q>{{g.f(0), Q(-2)}});
}

TEST_CASE("bad types are rejected") {
  CHECK_THROWS_AS(build_simple_algebra('A', 0), std::invalid_argument);
  CHECK_THROWS_AS(build_simple_algebra('E', 5), std::invalid_argument);
  CHECK_THROWS_AS(build_simple_algebra('X', 2), std::invalid_argument);
  auto g1 = build_simple_algebra('A', 1), g2 = build_simple_algebra('A', 1);
  CHECK_THROWS_AS(bracket(basis_element(g1, 0), basis_element(g2, 1)), std::invalid_argument);
}
