#pragma once
// Simple Lie algebras over Q: Cartan data (Bourbaki numbering), roots,
// Chevalley basis with integer structure constants, normalized invariant form.
//
// Sign convention. Positive roots are generated by height; for a non-simple
// positive root g the extraspecial pair is (a_i, g - a_i) with i the smallest
// index such that g - a_i is a root, and
//   e_g      =  [e_{a_i}, e_{g-a_i}] / (p+1),
//   e_{-g}   = -[e_{-a_i}, e_{-(g-a_i)}] / (p+1),
// where p is the largest integer with g - a_i - p a_i a root. So N_{a_i, g-a_i} = p+1 > 0
// and the Chevalley involution maps e_a to -e_{-a}. The root vectors are realized
// as matrices on the adjoint module, which is built from the Cartan matrix alone.

#include "irrep.hpp"

#include <map>
#include <memory>
#include <stdexcept>
#include <string>

namespace tkm {

class SimpleLieAlgebra;

/// Sparse element of g in the Chevalley basis.
struct LieElement {
  const SimpleLieAlgebra* parent = nullptr;
  SVec<Q> c;
};

class SimpleLieAlgebra {
 public:
  char series = 'A';
  int rank = 0;
  std::vector<std::vector<int>> cartan;          // cartan[i][j] = a_i(h_j)
  std::vector<std::vector<int>> positive_roots;  // simple-root coordinates
  std::vector<Q> root_len2;                      // (a,a) for each positive root
  std::vector<std::vector<Q>> simple_ip;         // (a_i, a_j), normalized
  int dual_coxeter = 0;
  int highest = -1;                              // index of highest root
  std::map<std::vector<int>, int> root_index;    // signed roots -> basis index

  int npos() const { return static_cast<int>(positive_roots.size()); }
  int dim() const { return rank + 2 * npos(); }
  // basis: [0,P) e_a, [P,2P) e_{-a} (= f_a), [2P, 2P+rank) h_i
  int e(int a) const { return a; }
  int f(int a) const { return npos() + a; }
  int h(int i) const { return 2 * npos() + i; }
  bool is_cartan(int b) const { return b >= 2 * npos(); }

  /// Root of a basis vector in simple-root coordinates (zero for Cartan).
  std::vector<int> root_of(int b) const {
    if (is_cartan(b)) return std::vector<int>(rank, 0);
    if (b < npos()) return positive_roots[b];
    auto r = positive_roots[b - npos()];
    for (auto& x : r) x = -x;
    return r;
  }
  int basis_of_root(const std::vector<int>& r) const {
    auto it = root_index.find(r);
    return it == root_index.end() ? -1 : it->second;
  }

  /// Integer bracket of basis vectors.
  const std::vector<std::pair<int, long>>& bracket_basis(int a, int b) const { return table_[size_t(a) * dim() + b]; }
  /// Normalized form on basis vectors.
  Q form_basis(int a, int b) const {
    if (is_cartan(a) && is_cartan(b)) return hform_[a - 2 * npos()][b - 2 * npos()];
    if (is_cartan(a) || is_cartan(b)) return Q(0);
    int P = npos();
    if (a < P && b == a + P) return Q(2) / root_len2[a];
    if (b < P && a == b + P) return Q(2) / root_len2[b];
    return Q(0);
  }
  /// Structure constant N_{a,b} for signed roots (0 if a+b is not a root).
  long N(const std::vector<int>& a, const std::vector<int>& b) const {
    std::vector<int> s(rank);
    for (int i = 0; i < rank; ++i) s[i] = a[i] + b[i];
    int ia = basis_of_root(a), ib = basis_of_root(b), is = basis_of_root(s);
    if (ia < 0 || ib < 0 || is < 0) return 0;
    for (auto& [k, x] : bracket_basis(ia, ib))
      if (k == is) return x;
    return 0;
  }

  /// Inner product of roots given in simple-root coordinates.
  Q ip(const std::vector<Q>& a, const std::vector<Q>& b) const {
    Q s(0);
    for (int i = 0; i < rank; ++i)
      for (int j = 0; j < rank; ++j)
        if (sgn(a[i]) && sgn(b[j])) s += a[i] * b[j] * simple_ip[i][j];
    return s;
  }
  /// a(h_i) for a root in simple-root coordinates.
  long root_on_coroot(const std::vector<int>& a, int i) const {
    long s = 0;
    for (int j = 0; j < rank; ++j) s += long(a[j]) * cartan[j][i];
    return s;
  }
  /// Coroot h_a = sum_i coef_i h_i of a root.
  std::vector<Q> coroot_coeffs(const std::vector<int>& a) const {
    std::vector<Q> ca(rank);
    for (int i = 0; i < rank; ++i) ca[i] = a[i];
    Q len = ip(ca, ca);
    std::vector<Q> out(rank);
    for (int i = 0; i < rank; ++i) out[i] = Q(a[i]) * simple_ip[i][i] / len;
    return out;
  }

  std::string name() const { return std::string(1, series) + std::to_string(rank); }

  // Dense K-valued elements.
  template <class K>
  std::vector<K> bracket(const std::vector<K>& x, const std::vector<K>& y) const {
    std::vector<K> z(dim(), K(0));
    for (int a = 0; a < dim(); ++a) {
      if (is_zero(x[a])) continue;
      for (int b = 0; b < dim(); ++b) {
        if (is_zero(y[b])) continue;
        K xy = x[a] * y[b];
        for (auto& [k, n] : bracket_basis(a, b)) z[k] += xy * K(Q(n));
      }
    }
    return z;
  }
  template <class K>
  K form(const std::vector<K>& x, const std::vector<K>& y) const {
    K s(0);
    int P = npos();
    for (int a = 0; a < dim(); ++a) {
      if (is_zero(x[a])) continue;
      if (a < 2 * P) {
        int b = a < P ? a + P : a - P;
        if (!is_zero(y[b])) s += x[a] * y[b] * K(form_basis(a, b));
      } else {
        for (int b = 2 * P; b < dim(); ++b)
          if (!is_zero(y[b])) s += x[a] * y[b] * K(form_basis(a, b));
      }
    }
    return s;
  }

  friend SimpleLieAlgebra build_simple_algebra(char, int);

  std::vector<std::vector<Q>> hform_;
  std::vector<std::vector<std::pair<int, long>>> table_;
};

inline void check_type(char s, int n) {
  auto bad = [&](const std::string& why) {
    throw std::invalid_argument(std::string("invalid simple type ") + s + std::to_string(n) + ": " + why);
  };
  switch (s) {
    case 'A': if (n < 1) bad("A_n needs n >= 1"); break;
    case 'B': if (n < 2) bad("B_n needs n >= 2"); break;
    case 'C': if (n < 3) bad("C_n needs n >= 3"); break;
    case 'D': if (n < 4) bad("D_n needs n >= 4"); break;
    case 'E': if (n < 6 || n > 8) bad("E_n needs 6 <= n <= 8"); break;
    case 'F': if (n != 4) bad("F_n needs n = 4"); break;
    case 'G': if (n != 2) bad("G_n needs n = 2"); break;
    default: bad("series must be one of A-G");
  }
}

/// Simple roots in an orthonormal epsilon basis, Bourbaki Planches.
inline std::vector<std::vector<Q>> bourbaki_simple_roots(char s, int n) {
  std::vector<std::vector<Q>> r;
  auto eps = [](int dim, std::initializer_list<std::pair<int, Q>> t) {
    std::vector<Q> v(dim, Q(0));
    for (auto& [i, x] : t) v[i] += x;
    return v;
  };
  Q h = qfrac(1, 2);
  switch (s) {
    case 'A':
      for (int i = 0; i < n; ++i) r.push_back(eps(n + 1, {{i, 1}, {i + 1, -1}}));
      break;
    case 'B':
      for (int i = 0; i < n - 1; ++i) r.push_back(eps(n, {{i, 1}, {i + 1, -1}}));
      r.push_back(eps(n, {{n - 1, 1}}));
      break;
    case 'C':
      for (int i = 0; i < n - 1; ++i) r.push_back(eps(n, {{i, 1}, {i + 1, -1}}));
      r.push_back(eps(n, {{n - 1, 2}}));
      break;
    case 'D':
      for (int i = 0; i < n - 1; ++i) r.push_back(eps(n, {{i, 1}, {i + 1, -1}}));
      r.push_back(eps(n, {{n - 2, 1}, {n - 1, 1}}));
      break;
    case 'E': {
      std::vector<std::vector<Q>> e8;
      e8.push_back(eps(8, {{0, h}, {7, h}, {1, -h}, {2, -h}, {3, -h}, {4, -h}, {5, -h}, {6, -h}}));
      e8.push_back(eps(8, {{0, 1}, {1, 1}}));
      e8.push_back(eps(8, {{1, 1}, {0, -1}}));
      for (int k = 2; k <= 6; ++k) e8.push_back(eps(8, {{k, 1}, {k - 1, -1}}));
      r.assign(e8.begin(), e8.begin() + n);
      break;
    }
    case 'F':
      r.push_back(eps(4, {{1, 1}, {2, -1}}));
      r.push_back(eps(4, {{2, 1}, {3, -1}}));
      r.push_back(eps(4, {{3, 1}}));
      r.push_back(eps(4, {{0, h}, {1, -h}, {2, -h}, {3, -h}}));
      break;
    case 'G':
      r.push_back(eps(3, {{0, 1}, {1, -1}}));
      r.push_back(eps(3, {{0, -2}, {1, 1}, {2, 1}}));
      break;
  }
  return r;
}

/// Positive roots in simple-root coordinates, by height then lexicographically.
inline std::vector<std::vector<int>> positive_roots_from_cartan(const std::vector<std::vector<int>>& A) {
  int n = static_cast<int>(A.size());
  std::vector<std::vector<int>> roots;
  std::map<std::vector<int>, int> known;
  std::vector<std::vector<int>> layer;
  for (int i = 0; i < n; ++i) {
    std::vector<int> r(n, 0);
    r[i] = 1;
    layer.push_back(r);
  }
  while (!layer.empty()) {
    std::sort(layer.begin(), layer.end());
    for (auto& r : layer) {
      known[r] = static_cast<int>(roots.size());
      roots.push_back(r);
    }
    std::vector<std::vector<int>> next;
    for (auto& r : layer)
      for (int i = 0; i < n; ++i) {
        int p = 0;
        std::vector<int> d = r;
        while (true) {
          d[i] -= 1;
          if (!known.count(d)) break;
          ++p;
        }
        long pair = 0;  // <r, a_i^vee>
        for (int j = 0; j < n; ++j) pair += long(r[j]) * A[j][i];
        long q = p - pair;
        if (q > 0) {
          auto u = r;
          u[i] += 1;
          if (std::find(next.begin(), next.end(), u) == next.end()) next.push_back(u);
        }
      }
    layer = std::move(next);
  }
  return roots;
}

inline SimpleLieAlgebra build_simple_algebra(char series, int n) {
  check_type(series, n);
  SimpleLieAlgebra g;
  g.series = series;
  g.rank = n;
  auto sr = bourbaki_simple_roots(series, n);
  std::vector<std::vector<Q>> ip(n, std::vector<Q>(n));
  Q maxlen(0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Q s(0);
      for (size_t k = 0; k < sr[i].size(); ++k) s += sr[i][k] * sr[j][k];
      ip[i][j] = s;
    }
  for (int i = 0; i < n; ++i) maxlen = std::max(maxlen, ip[i][i]);
  Q sc = Q(2) / maxlen;
  for (auto& row : ip)
    for (auto& x : row) x *= sc;
  g.simple_ip = ip;
  g.cartan.assign(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g.cartan[i][j] = static_cast<int>(to_long(Q(2) * ip[i][j] / ip[j][j]));
  g.positive_roots = positive_roots_from_cartan(g.cartan);
  const int P = g.npos();
  for (int a = 0; a < P; ++a) {
    std::vector<Q> ca(g.positive_roots[a].begin(), g.positive_roots[a].end());
    g.root_len2.push_back(g.ip(ca, ca));
    g.root_index[g.positive_roots[a]] = a;
    auto neg = g.positive_roots[a];
    for (auto& x : neg) x = -x;
    g.root_index[neg] = P + a;
  }
  g.highest = P - 1;
  // dual Coxeter number 1 + sum of comarks
  {
    Q s(1);
    for (int i = 0; i < n; ++i) s += Q(g.positive_roots[g.highest][i]) * ip[i][i] / 2;
    g.dual_coxeter = static_cast<int>(to_long(s));
  }
  g.hform_.assign(n, std::vector<Q>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g.hform_[i][j] = Q(4) * ip[i][j] / (ip[i][i] * ip[j][j]);

  // Adjoint module V(theta) in fundamental-weight coordinates.
  CartanDatum cd;
  cd.w = n;
  for (int i = 0; i < n; ++i) {
    WeightQ a(n), hc(n, Q(0));
    for (int k = 0; k < n; ++k) a[k] = g.cartan[i][k];
    hc[i] = 1;
    cd.alpha.push_back(a);
    cd.coroot.push_back(hc);
  }
  WeightQ theta(n);
  for (int k = 0; k < n; ++k) theta[k] = g.root_on_coroot(g.positive_roots[g.highest], k);
  Irrep ad = build_irrep(cd, theta);
  if (ad.dim() != g.dim()) throw std::logic_error("adjoint module has wrong dimension");
  using Op = std::vector<SVec<Q>>;
  auto comm = [&](const Op& x, const Op& y) {
    Op z(ad.dim());
    for (int b = 0; b < ad.dim(); ++b) {
      SVec<Q> u = apply_op(x, y[b]), v = apply_op(y, x[b]);
      z[b] = axpy(u, Q(-1), v);
    }
    return z;
  };
  auto scal = [](Op x, const Q& s) {
    for (auto& col : x) scale(col, s);
    return x;
  };
  std::vector<Op> X(2 * P);
  for (int a = 0; a < P; ++a) {
    const auto& r = g.positive_roots[a];
    int ht = 0, simple = -1;
    for (int i = 0; i < n; ++i) {
      ht += r[i];
      if (r[i] == 1) simple = i;
    }
    if (ht == 1) {
      X[a] = ad.E[simple];
      X[P + a] = ad.F[simple];
      continue;
    }
    for (int i = 0; i < n; ++i) {
      auto b = r;
      b[i] -= 1;
      int ib = g.basis_of_root(b);
      if (ib < 0 || ib >= P) continue;
      int p = 0;
      auto d = b;
      while (true) {
        d[i] -= 1;
        int id = g.basis_of_root(d);
        if (id < 0 || id >= P) break;
        ++p;
      }
      int isim = g.basis_of_root([&] { std::vector<int> s(n, 0); s[i] = 1; return s; }());
      Q inv = Q(1) / Q(p + 1);
      X[a] = scal(comm(X[isim], X[ib]), inv);
      X[P + a] = scal(comm(X[P + isim], X[P + ib]), -inv);
      break;
    }
  }
  // Cartan elements act diagonally through weights.
  std::vector<Op> H(n, Op(ad.dim()));
  for (int i = 0; i < n; ++i)
    for (int b = 0; b < ad.dim(); ++b)
      if (sgn(ad.weight[b][i])) H[i][b] = {{b, ad.weight[b][i]}};
  auto pick = [&](const Op& x) -> std::pair<int, int> {
    for (int b = 0; b < ad.dim(); ++b)
      if (!x[b].empty()) return {b, x[b].front().first};
    throw std::logic_error("zero root vector");
  };
  std::vector<std::pair<int, int>> probe(2 * P);
  for (int a = 0; a < 2 * P; ++a) probe[a] = pick(X[a]);

  const int D = g.dim();
  const bool verify = D <= 100;
  g.table_.assign(size_t(D) * D, {});
  auto entry = [&](const Op& x, std::pair<int, int> pr) { return coeff(x[pr.first], pr.second); };
  for (int a = 0; a < 2 * P; ++a)
    for (int b = 0; b < 2 * P; ++b) {
      auto ra = g.root_of(a), rb = g.root_of(b), s = ra;
      for (int i = 0; i < n; ++i) s[i] += rb[i];
      bool zero = std::all_of(s.begin(), s.end(), [](int x) { return x == 0; });
      auto& out = g.table_[size_t(a) * D + b];
      if (zero) {
        auto co = g.coroot_coeffs(ra);
        for (int i = 0; i < n; ++i)
          if (sgn(co[i])) out.emplace_back(g.h(i), to_long(co[i]));
        continue;
      }
      int is = g.basis_of_root(s);
      if (is < 0) continue;
      Op z = comm(X[a], X[b]);
      Q num = entry(z, probe[is]) / entry(X[is], probe[is]);
      out.emplace_back(is, to_long(num));
      if (verify && scal(X[is], num) != z) throw std::logic_error("root vector commutator not proportional");
    }
  if (verify) {
    // [e_a, e_-a] = h_a and [e_a, e_b] = 0 when a+b is not a root or zero
    for (int a = 0; a < 2 * P; ++a)
      for (int b = 0; b < 2 * P; ++b) {
        auto& out = g.table_[size_t(a) * D + b];
        if (!out.empty() && !g.is_cartan(out.front().first)) continue;
        Op z = comm(X[a], X[b]);
        Op w(ad.dim());
        for (auto& [k, x] : out)
          for (int c = 0; c < ad.dim(); ++c) w[c] = axpy(w[c], Q(x), H[k - 2 * P][c]);
        if (w != z) throw std::logic_error("Cartan part of root vector commutator inconsistent");
      }
  }
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < 2 * P; ++a) {
      long v = g.root_on_coroot(g.root_of(a), i);
      if (v) {
        g.table_[size_t(g.h(i)) * D + a].emplace_back(a, v);
        g.table_[size_t(a) * D + g.h(i)].emplace_back(a, -v);
      }
    }
  return g;
}

inline void check_same_parent(const LieElement& x, const LieElement& y) {
  if (x.parent == nullptr || x.parent != y.parent) throw std::invalid_argument("elements of different Lie algebras");
}

inline LieElement basis_element(const SimpleLieAlgebra& g, int b) { return {&g, {{b, Q(1)}}}; }

inline LieElement bracket(const LieElement& x, const LieElement& y) {
  check_same_parent(x, y);
  const auto& g = *x.parent;
  Accum<Q> acc;
  for (auto& [a, xa] : x.c)
    for (auto& [b, yb] : y.c)
      for (auto& [k, n] : g.bracket_basis(a, b)) acc.add(k, xa * yb * Q(n));
  return {x.parent, acc.get()};
}

inline Q normalized_form(const LieElement& x, const LieElement& y) {
  check_same_parent(x, y);
  Q s(0);
  for (auto& [a, xa] : x.c)
    for (auto& [b, yb] : y.c) s += xa * yb * x.parent->form_basis(a, b);
  return s;
}

}  // namespace tkm
