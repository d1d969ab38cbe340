#pragma once
// Finite-order automorphisms sigma = tau * eps^{ad h} of a simple Lie algebra,
// their eigenspace decomposition, affine labels, level-c weight sets and the
// realization map from the tau-twisted to the sigma-twisted loop algebra.
//
// Coordinates. h^tau* is coordinatized by "folded" simple-root coordinates:
// a root b = sum c_j a_j of g restricts to sum_i (sum_{j in O_i} c_j) a_i,
// O_i the i-th tau-orbit of nodes in the Bourbaki order of g^tau. Weights are
// recorded in fundamental coordinates of g^tau, i.e. by their values on the
// coroots [x_i, y_i], i in I(g^tau).

#include "lie_core.hpp"

#include <functional>
#include <numeric>
#include <set>

namespace tkm {

struct DiagramAutomorphism {
  std::vector<int> perm;                 // node permutation
  int r = 1;                             // order
  std::vector<std::vector<int>> orbits;  // ordered as the simple roots of g^tau
  char folded_series = 'A';
  int folded_rank = 0;
  std::string kind = "id";
};

/// kind is "id", "flip" (order 2 on A_n n>=2, D_n, E_6) or "triality" (D_4).
inline DiagramAutomorphism make_diagram_automorphism(const SimpleLieAlgebra& g, const std::string& kind) {
  const int n = g.rank;
  DiagramAutomorphism t;
  t.kind = kind;
  t.perm.resize(n);
  std::iota(t.perm.begin(), t.perm.end(), 0);
  auto fail = [&](const std::string& why) {
    throw std::invalid_argument("diagram automorphism '" + kind + "' on " + g.name() + ": " + why);
  };
  if (kind == "id") {
    for (int i = 0; i < n; ++i) t.orbits.push_back({i});
    t.folded_series = g.series;
    t.folded_rank = n;
  } else if (kind == "flip") {
    t.r = 2;
    if (g.series == 'A') {
      if (n < 2) fail("A_1 has no nontrivial diagram automorphism");
      for (int i = 0; i < n; ++i) t.perm[i] = n - 1 - i;
      int k = (n + 1) / 2;
      for (int i = 0; i < n / 2; ++i) t.orbits.push_back({i, n - 1 - i});
      if (n % 2) t.orbits.push_back({n / 2});
      t.folded_series = n % 2 ? 'C' : 'B';
      t.folded_rank = k;
    } else if (g.series == 'D') {
      std::swap(t.perm[n - 2], t.perm[n - 1]);
      for (int i = 0; i < n - 2; ++i) t.orbits.push_back({i});
      t.orbits.push_back({n - 2, n - 1});
      t.folded_series = 'B';
      t.folded_rank = n - 1;
    } else if (g.series == 'E' && n == 6) {
      t.perm = {5, 1, 4, 3, 2, 0};
      t.orbits = {{1}, {3}, {2, 4}, {0, 5}};
      t.folded_series = 'F';
      t.folded_rank = 4;
    } else {
      fail("no order-2 diagram automorphism");
    }
  } else if (kind == "triality") {
    if (g.series != 'D' || n != 4) fail("triality exists only on D_4");
    t.r = 3;
    t.perm = {2, 1, 3, 0};
    t.orbits = {{0, 2, 3}, {1}};
    t.folded_series = 'G';
    t.folded_rank = 2;
  } else {
    fail("unknown kind (expected id, flip, triality)");
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (g.cartan[t.perm[i]][t.perm[j]] != g.cartan[i][j]) fail("does not preserve the Cartan matrix");
  return t;
}

template <class K>
using Vec = std::vector<K>;

template <class K>
Vec<K> to_k(const SVec<Q>& v, int dim) {
  Vec<K> out(dim, K(0));
  for (auto& [i, x] : v) out[i] = K(x);
  return out;
}
template <class K>
SVec<K> sparse(const Vec<K>& v) {
  SVec<K> s;
  for (int i = 0; i < static_cast<int>(v.size()); ++i)
    if (!is_zero(v[i])) s.emplace_back(i, v[i]);
  return s;
}
template <class K>
Vec<K> lin(const Vec<K>& a, const K& s, const Vec<K>& b) {
  Vec<K> out = a;
  for (size_t i = 0; i < a.size(); ++i)
    if (!is_zero(b[i])) out[i] += s * b[i];
  return out;
}
template <class K>
Vec<K> mul(const Mat<K>& M, const Vec<K>& v) {
  Vec<K> out(M.r, K(0));
  for (int j = 0; j < M.c; ++j) {
    if (is_zero(v[j])) continue;
    for (int i = 0; i < M.r; ++i)
      if (!is_zero(M(i, j))) out[i] += M(i, j) * v[j];
  }
  return out;
}
template <class K>
bool is_zero_vec(const Vec<K>& v) {
  for (auto& x : v)
    if (!is_zero(x)) return false;
  return true;
}

/// The unique Lie algebra endomorphism of g sending gens[k] to imgs[k]; the
/// generators must generate g. The result is verified on all basis pairs.
template <class K>
Mat<K> extend_homomorphism(const SimpleLieAlgebra& g, const std::vector<Vec<K>>& gens,
                           const std::vector<Vec<K>>& imgs) {
  const int D = g.dim();
  Echelon<K> ech;
  std::vector<Vec<K>> src, img;
  auto push = [&](const Vec<K>& s, const Vec<K>& t) {
    if (ech.add(sparse(s))) {
      src.push_back(s);
      img.push_back(t);
    }
  };
  for (size_t k = 0; k < gens.size(); ++k) push(gens[k], imgs[k]);
  for (size_t t = 0; t < src.size() && static_cast<int>(src.size()) < D; ++t)
    for (size_t k = 0; k < gens.size(); ++k) push(g.bracket(gens[k], src[t]), g.bracket(imgs[k], img[t]));
  if (static_cast<int>(src.size()) != D) throw std::invalid_argument("generators do not generate g");
  Mat<K> S(D, D), I(D, D);
  for (int j = 0; j < D; ++j)
    for (int i = 0; i < D; ++i) {
      S(i, j) = src[j][i];
      I(i, j) = img[j][i];
    }
  Mat<K> phi = I * inverse(S);
  std::vector<Vec<K>> col(D);
  for (int b = 0; b < D; ++b) {
    col[b].assign(D, K(0));
    for (int i = 0; i < D; ++i) col[b][i] = phi(i, b);
  }
  for (int a = 0; a < D; ++a)
    for (int b = a + 1; b < D; ++b) {
      Vec<K> lhs(D, K(0));
      for (auto& [k, n] : g.bracket_basis(a, b)) lhs = lin(lhs, K(Q(n)), col[k]);
      if (lhs != g.bracket(col[a], col[b])) throw std::invalid_argument("generator map is not a homomorphism");
    }
  return phi;
}

/// Eigenvector of sigma in g: a tau-eigenvector (eigenvalue zeta_r^texp) inside one
/// restricted-weight block.
template <class K>
struct EigenVector {
  Vec<K> v;
  int texp = 0;
  std::vector<int> folded;  // restricted weight, folded coordinates
  WeightQ weight;           // restricted weight, fundamental coordinates of g^tau
  long hval = 0;            // eigenvalue of ad h
  int cls = 0;              // sigma-eigenvalue eps^cls
};

struct TwistedAffineData {
  int l = 0;                  // |I(g^tau)|; index l is the extra node o
  std::vector<long> s;        // labels s_i, i in I(g^tau) then o
  std::vector<Q> sbar;        // normalized labels
  long sbar_gcd = 0;
  std::vector<Q> len2;        // <a_i,a_i>_tau, and <theta_0,theta_0>_tau at index l
  std::vector<int> gen_degree;  // s_i: x_i has degree s_i, y_i degree -s_i
};

template <class K>
class FiniteOrderAutomorphism {
 public:
  const SimpleLieAlgebra* g = nullptr;
  DiagramAutomorphism tau;
  int m = 1;
  int l = 0;
  std::vector<long> s;                 // size l+1
  Mat<K> tau_mat;
  std::vector<std::vector<int>> A;     // A[i][k] = a_i(coroot_k), Cartan matrix of g^tau
  std::vector<std::vector<Q>> Gco;     // <coroot_i, coroot_k>
  std::vector<std::vector<Q>> Gco_inv;
  std::vector<int> theta0;             // folded coordinates
  WeightQ theta0_f;                    // fundamental coordinates
  std::vector<Q> len2;                 // size l+1
  std::vector<Vec<K>> coroot;          // coroot_k of g^tau as elements of g (rational)
  std::vector<Vec<K>> x, y;            // Chevalley generators, i in I(g^tau) then o
  std::vector<WeightQ> hgen;           // [x_i, y_i] in coroot coordinates
  std::vector<EigenVector<K>> ev;      // eigenbasis of g
  std::vector<std::vector<int>> cls;   // class j -> indices into ev
  Mat<K> omega0;                       // involution with omega0 g_j = g_{-j}
  WeightQ h_coroot;                    // h in coroot coordinates

  std::vector<int> dims() const {
    std::vector<int> d(m);
    for (int j = 0; j < m; ++j) d[j] = static_cast<int>(cls[j].size());
    return d;
  }
  int dim_g() const { return g->dim(); }
  int hdual() const { return g->dual_coxeter; }
  bool is_A2n() const { return g->series == 'A' && g->rank % 2 == 0 && tau.r == 2; }

  int orbit_of(int node) const {
    for (int i = 0; i < l; ++i)
      for (int j : tau.orbits[i])
        if (j == node) return i;
    return -1;
  }
  std::vector<int> fold(const std::vector<int>& root) const {
    std::vector<int> f(l, 0);
    for (int j = 0; j < g->rank; ++j) f[orbit_of(j)] += root[j];
    return f;
  }
  WeightQ folded_to_fund(const std::vector<int>& f) const {
    WeightQ w(l, Q(0));
    for (int i = 0; i < l; ++i)
      for (int k = 0; k < l; ++k) w[k] += Q(f[i]) * A[i][k];
    return w;
  }
  /// Restricted weight (folded coordinates) evaluated on an element of h^tau.
  K eval_folded(const std::vector<int>& f, const Vec<K>& hv) const {
    K s(0);
    for (int i = 0; i < l; ++i) {
      if (!f[i]) continue;
      int j = tau.orbits[i][0];
      for (int k = 0; k < g->rank; ++k) {
        const K& c = hv[g->h(k)];
        if (!is_zero(c)) s += K(Q(long(f[i]) * g->cartan[j][k])) * c;
      }
    }
    return s;
  }
  /// Coordinates of an element of h^tau in the coroot basis.
  WeightQ cartan_coords(const Vec<K>& hv) const {
    Mat<K> M(g->rank, l);
    std::vector<K> b(g->rank);
    for (int k = 0; k < g->rank; ++k) {
      b[k] = hv[g->h(k)];
      for (int i = 0; i < l; ++i) M(k, i) = coroot[i][g->h(k)];
    }
    auto c = solve(M, b);
    WeightQ out(l);
    for (int i = 0; i < l; ++i) out[i] = rational_part(c[i]);
    return out;
  }
  /// Weight pairing mu(h) for h in coroot coordinates.
  static Q pair(const WeightQ& mu, const WeightQ& hc) {
    Q s(0);
    for (size_t i = 0; i < mu.size(); ++i) s += mu[i] * hc[i];
    return s;
  }
  /// <mu, nu>_tau for weights in fundamental coordinates.
  Q ip(const WeightQ& mu, const WeightQ& nu) const {
    Q s(0);
    for (int i = 0; i < l; ++i)
      for (int k = 0; k < l; ++k) s += mu[i] * Gco_inv[i][k] * nu[k];
    return s;
  }
  WeightQ simple_root_f(int i) const {
    if (i == l) {
      WeightQ w = theta0_f;
      for (auto& x : w) x = -x;
      return w;
    }
    std::vector<int> f(l, 0);
    f[i] = 1;
    return folded_to_fund(f);
  }

  TwistedAffineData labels() const {
    TwistedAffineData t;
    t.l = l;
    t.s = s;
    t.len2 = len2;
    long gg = 0;
    for (int i = 0; i <= l; ++i) {
      Q sb = Q(2 * s[i]) / len2[i];
      t.sbar.push_back(sb);
      gg = std::gcd(gg, to_long(sb));
      t.gen_degree.push_back(static_cast<int>(s[i]));
    }
    t.sbar_gcd = gg;
    return t;
  }

  /// sigma applied to a vector of g.
  Vec<K> apply_sigma(const Vec<K>& v) const {
    // decompose into ad h eigenvectors via root grading
    Vec<K> tv = mul(tau_mat, v);
    Vec<K> out(tv.size(), K(0));
    for (int b = 0; b < g->dim(); ++b) {
      if (is_zero(tv[b])) continue;
      long k = 0;
      auto f = fold(g->root_of(b));
      for (int i = 0; i < l; ++i) k += long(f[i]) * s[i];
      out[b] = tv[b] * unity<K>(m, k);
    }
    return out;
  }
};

template <class K>
FiniteOrderAutomorphism<K> build_automorphism(const SimpleLieAlgebra& g, const DiagramAutomorphism& tau,
                                              const std::vector<Q>& hs, int m) {
  FiniteOrderAutomorphism<K> S;
  S.g = &g;
  S.tau = tau;
  S.m = m;
  const int l = static_cast<int>(tau.orbits.size());
  S.l = l;
  const int D = g.dim();
  const int r = tau.r;
  if (m < 1) throw std::invalid_argument("m must be positive");
  if (m % r) throw std::invalid_argument("r = " + std::to_string(r) + " must divide m = " + std::to_string(m));
  if (static_cast<int>(hs.size()) != l)
    throw std::invalid_argument("h needs " + std::to_string(l) + " coordinates a_i(h), got " + std::to_string(hs.size()));
  for (int i = 0; i < l; ++i) {
    if (!is_integer(hs[i]) || sgn(hs[i]) < 0)
      throw std::invalid_argument("a_" + std::to_string(i + 1) + "(h) = " + to_str(hs[i]) + " violates a_i(h) in Z>=0");
    S.s.push_back(to_long(hs[i]));
  }
  if (!has_roots_of_unity<K>(r)) throw std::invalid_argument("scalar field lacks roots of unity of order r");

  // tau on g
  std::vector<Vec<K>> gens, imgs;
  for (int i = 0; i < g.rank; ++i) {
    std::vector<int> ri(g.rank, 0), rt(g.rank, 0);
    ri[i] = 1;
    rt[tau.perm[i]] = 1;
    Vec<K> a(D, K(0)), b(D, K(0)), c(D, K(0)), d(D, K(0));
    a[g.basis_of_root(ri)] = K(1);
    b[g.basis_of_root(rt)] = K(1);
    c[g.f(g.basis_of_root(ri))] = K(1);
    d[g.f(g.basis_of_root(rt))] = K(1);
    gens.push_back(a);
    imgs.push_back(b);
    gens.push_back(c);
    imgs.push_back(d);
  }
  S.tau_mat = extend_homomorphism<K>(g, gens, imgs);
  {
    Mat<K> p = Mat<K>::identity(D);
    for (int k = 0; k < r; ++k) p = p * S.tau_mat;
    if (!(p == Mat<K>::identity(D))) throw std::logic_error("tau^r != 1");
  }

  // restricted-weight blocks of basis vectors
  std::map<std::vector<int>, std::vector<int>> blocks;
  for (int b = 0; b < D; ++b) blocks[S.fold(g.root_of(b))].push_back(b);
  struct Raw {
    std::vector<int> folded;
    int texp;
    Vec<K> v;
  };
  std::vector<Raw> raw;
  for (auto& [f, idx] : blocks) {
    int n = static_cast<int>(idx.size());
    Mat<K> T(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) T(a, b) = S.tau_mat(idx[a], idx[b]);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < D; ++b)
        if (!is_zero(S.tau_mat(b, idx[a])) && std::find(idx.begin(), idx.end(), b) == idx.end())
          throw std::logic_error("tau does not preserve a restricted weight block");
    int total = 0;
    for (int j = 0; j < r; ++j) {
      Mat<K> M = T;
      K z = unity<K>(r, j);
      for (int a = 0; a < n; ++a) M(a, a) -= z;
      Mat<K> N = nullspace(M);
      total += N.c;
      for (int c = 0; c < N.c; ++c) {
        Vec<K> v(D, K(0));
        int first = -1;
        for (int a = 0; a < n; ++a)
          if (!is_zero(N(a, c)) && first < 0) first = a;
        K inv = K(1) / N(first, c);
        for (int a = 0; a < n; ++a) v[idx[a]] = N(a, c) * inv;
        raw.push_back({f, j, v});
      }
    }
    if (total != n) throw std::logic_error("tau is not diagonalizable on a block");
  }
  auto find_raw = [&](const std::vector<int>& f, int texp) -> Vec<K> {
    const Vec<K>* hit = nullptr;
    for (auto& R : raw)
      if (R.folded == f && R.texp == texp) {
        if (hit) throw std::logic_error("generator space is not one-dimensional");
        hit = &R.v;
      }
    if (!hit) throw std::logic_error("generator space is empty");
    return *hit;
  };
  auto root_on = [&](int i, const Vec<K>& hv) {
    std::vector<int> f(l, 0);
    f[i] = 1;
    return S.eval_folded(f, hv);
  };

  // generators of g^tau and coroots
  S.x.resize(l + 1);
  S.y.resize(l + 1);
  for (int i = 0; i < l; ++i) {
    std::vector<int> f(l, 0), nf(l, 0);
    f[i] = 1;
    nf[i] = -1;
    S.x[i] = find_raw(f, 0);
    Vec<K> yv = find_raw(nf, 0);
    K val = root_on(i, g.bracket(S.x[i], yv));
    for (auto& c : yv) c *= K(2) / val;
    S.y[i] = yv;
    S.coroot.push_back(g.bracket(S.x[i], S.y[i]));
  }
  S.A.assign(l, std::vector<int>(l));
  S.Gco.assign(l, std::vector<Q>(l));
  for (int i = 0; i < l; ++i)
    for (int k = 0; k < l; ++k) {
      S.A[i][k] = static_cast<int>(to_long(rational_part(root_on(i, S.coroot[k]))));
      S.Gco[i][k] = rational_part(g.form(S.coroot[i], S.coroot[k]));
    }
  {
    Mat<Q> G(l, l);
    for (int i = 0; i < l; ++i)
      for (int k = 0; k < l; ++k) G(i, k) = S.Gco[i][k];
    Mat<Q> Gi = inverse(G);
    S.Gco_inv.assign(l, std::vector<Q>(l));
    for (int i = 0; i < l; ++i)
      for (int k = 0; k < l; ++k) S.Gco_inv[i][k] = Gi(i, k);
  }
  for (int i = 0; i < l; ++i) {
    auto w = S.simple_root_f(i);
    S.len2.push_back(S.ip(w, w));
  }

  // theta_0
  if (r == 1) {
    S.theta0 = g.positive_roots[g.highest];
  } else {
    auto pr = positive_roots_from_cartan(S.A);
    Q shortest = -1;
    for (auto& rt : pr) {
      auto w = S.folded_to_fund(rt);
      Q L = S.ip(w, w);
      if (shortest < 0 || L < shortest) shortest = L;
    }
    for (auto& rt : pr) {
      auto w = S.folded_to_fund(rt);
      if (S.ip(w, w) == shortest) S.theta0 = rt;  // sorted by height
    }
    if (S.is_A2n())
      for (auto& c : S.theta0) c *= 2;
  }
  S.theta0_f = S.folded_to_fund(S.theta0);
  S.len2.push_back(S.ip(S.theta0_f, S.theta0_f));
  {
    Q want = S.is_A2n() ? Q(2) : Q(2) / r;
    if (S.len2[l] != want) throw std::logic_error("<theta_0, theta_0>_tau has unexpected value");
  }
  long th = 0;
  for (int i = 0; i < l; ++i) th += long(S.theta0[i]) * S.s[i];
  if (th * r > m)
    throw std::invalid_argument("theta_0(h) = " + std::to_string(th) + " exceeds m/r = " + to_str(Q(m, r)));
  S.s.push_back(m / r - th);

  {
    std::vector<int> nf = S.theta0;
    for (auto& c : nf) c = -c;
    S.x[l] = find_raw(nf, 1 % r);
    Vec<K> yv = find_raw(S.theta0, (r - 1) % r);
    K val = S.eval_folded(nf, g.bracket(S.x[l], yv));
    for (auto& c : yv) c *= K(2) / val;
    S.y[l] = yv;
  }
  for (int i = 0; i <= l; ++i) S.hgen.push_back(S.cartan_coords(g.bracket(S.x[i], S.y[i])));

  // eigenbasis, with the coroots as basis of h^tau
  std::vector<EigenVector<K>> all;
  std::vector<int> zero(l, 0);
  for (int k = 0; k < l; ++k) {
    EigenVector<K> e;
    e.v = S.coroot[k];
    e.texp = 0;
    e.folded = zero;
    all.push_back(e);
  }
  for (auto& R : raw) {
    if (R.folded == zero && R.texp == 0) continue;
    EigenVector<K> e;
    e.v = R.v;
    e.texp = R.texp;
    e.folded = R.folded;
    all.push_back(e);
  }
  {
    int n0 = 0;
    for (auto& R : raw)
      if (R.folded == zero && R.texp == 0) ++n0;
    if (n0 != l) throw std::logic_error("dim h^tau differs from the rank of g^tau");
  }
  S.cls.assign(m, {});
  for (auto& e : all) {
    e.weight = S.folded_to_fund(e.folded);
    e.hval = 0;
    for (int i = 0; i < l; ++i) e.hval += long(e.folded[i]) * S.s[i];
    e.cls = static_cast<int>((((long(m / r) * e.texp + e.hval) % m) + m) % m);
  }
  std::stable_sort(all.begin(), all.end(), [](auto& a, auto& b) { return a.cls < b.cls; });
  for (int i = 0; i < static_cast<int>(all.size()); ++i) S.cls[all[i].cls].push_back(i);
  S.ev = std::move(all);

  // h in coroot coordinates: a_i(h) = s_i
  {
    Mat<Q> At(l, l);
    std::vector<Q> b(l);
    for (int i = 0; i < l; ++i) {
      b[i] = S.s[i];
      for (int k = 0; k < l; ++k) At(i, k) = S.A[i][k];
    }
    S.h_coroot = solve(At, b);
  }

  // Cartan involution omega_0 = omega_std * rho, with rho a diagram automorphism
  // inverting tau under conjugation, so that omega_0 sigma = sigma^{-1} omega_0.
  {
    std::vector<int> rho(g.rank);
    std::iota(rho.begin(), rho.end(), 0);
    if (r == 3) std::swap(rho[2], rho[3]);
    std::vector<Vec<K>> ge, im;
    for (int i = 0; i < g.rank; ++i) {
      std::vector<int> ri(g.rank, 0), rr(g.rank, 0);
      ri[i] = 1;
      rr[rho[i]] = 1;
      Vec<K> a(D, K(0)), b(D, K(0)), c(D, K(0)), d(D, K(0));
      a[g.basis_of_root(ri)] = K(1);
      d[g.f(g.basis_of_root(rr))] = K(-1);
      c[g.f(g.basis_of_root(ri))] = K(1);
      b[g.basis_of_root(rr)] = K(-1);
      ge.push_back(a);
      im.push_back(d);
      ge.push_back(c);
      im.push_back(b);
    }
    S.omega0 = extend_homomorphism<K>(g, ge, im);
    if (!(S.omega0 * S.omega0 == Mat<K>::identity(D))) throw std::logic_error("omega_0 is not an involution");
  }
  return S;
}

// ---------------------------------------------------------------- weights

template <class K>
std::vector<Q> n_coefficients(const FiniteOrderAutomorphism<K>& S, const WeightQ& lambda, long c) {
  std::vector<Q> n(S.l + 1);
  for (int i = 0; i <= S.l; ++i)
    n[i] = S.pair(lambda, S.hgen[i]) + Q(2 * S.s[i] * c) / (Q(S.m) * S.len2[i]);
  return n;
}

inline bool in_nonneg_integers(const std::vector<Q>& n) {
  return std::all_of(n.begin(), n.end(), [](const Q& x) { return is_integer(x) && sgn(x) >= 0; });
}

/// D_c sorted lexicographically. Enumerates n_i in Z>=0 for i in I(g^tau) and keeps
/// those with n_o in Z>=0; n_o >= 0 bounds the search since [x_o,y_o] has
/// negative coroot coordinates.
template <class K>
std::vector<WeightQ> enumerate_Dc(const FiniteOrderAutomorphism<K>& S, long c) {
  if (c < 1) throw std::invalid_argument("level c must be >= 1");
  const int l = S.l;
  std::vector<Q> kappa(l + 1);
  for (int i = 0; i <= l; ++i) kappa[i] = Q(2 * S.s[i] * c) / (Q(S.m) * S.len2[i]);
  const WeightQ& b = S.hgen[l];
  Q bound = kappa[l];
  for (int k = 0; k < l; ++k) {
    if (sgn(b[k]) >= 0) throw std::logic_error("[x_o,y_o] has a nonnegative coroot coordinate");
    bound -= b[k] * kappa[k];
  }
  Q cap = S.labels().sbar[l] * c * S.m;
  std::vector<WeightQ> out;
  std::vector<long> n(l, 0);
  std::function<void(int, Q)> rec = [&](int k, Q budget) {
    if (k == l) {
      WeightQ lam(l);
      for (int i = 0; i < l; ++i) lam[i] = Q(n[i]) - kappa[i];
      auto nn = n_coefficients(S, lam, c);
      if (in_nonneg_integers(nn)) {
        for (auto& x : lam)
          if (x > cap) throw std::logic_error("D_c weight exceeds the documented search bound");
        out.push_back(lam);
      }
      return;
    }
    for (n[k] = 0; Q(n[k]) * (-b[k]) <= budget; ++n[k]) rec(k + 1, budget + b[k] * n[k]);
    n[k] = 0;
  };
  rec(0, bound);
  std::sort(out.begin(), out.end());
  if (out.empty()) throw std::logic_error("D_c is empty");
  return out;
}

template <class K>
bool zero_in_Dc(const FiniteOrderAutomorphism<K>& S, long c) {
  if (c < 1) throw std::invalid_argument("level c must be >= 1");
  return (S.labels().sbar_gcd * c) % S.m == 0;
}

/// Simple roots of g^sigma: indices i in Î with s_i = 0.
template <class K>
std::vector<int> gsigma_simple(const FiniteOrderAutomorphism<K>& S) {
  std::vector<int> out;
  for (int i = 0; i <= S.l; ++i)
    if (S.s[i] == 0) out.push_back(i);
  return out;
}

template <class K>
bool is_gsigma_dominant(const FiniteOrderAutomorphism<K>& S, const WeightQ& mu) {
  for (int i : gsigma_simple(S)) {
    Q p = S.pair(mu, S.hgen[i]);
    if (!is_integer(p) || sgn(p) < 0) return false;
  }
  return true;
}

/// Highest weight of V(mu)^*, i.e. -w_0(mu) for g^sigma.
template <class K>
WeightQ dual_weight(const FiniteOrderAutomorphism<K>& S, const WeightQ& mu) {
  if (!is_gsigma_dominant(S, mu)) throw std::invalid_argument("dual_weight: weight is not g^sigma-dominant");
  WeightQ nu = mu;
  for (auto& x : nu) x = -x;
  auto simple = gsigma_simple(S);
  for (bool moved = true; moved;) {
    moved = false;
    for (int i : simple) {
      Q p = S.pair(nu, S.hgen[i]);
      if (sgn(p) < 0) {
        auto a = S.simple_root_f(i);
        for (int k = 0; k < S.l; ++k) nu[k] -= p * a[k];
        moved = true;
      }
    }
  }
  return nu;
}

// ---------------------------------------------------------------- realization

/// Element x[t^k] of a loop algebra plus central part; x given in g.
template <class K>
struct LoopTerm {
  Vec<K> x;
  long k = 0;
};
template <class K>
struct LoopVec {
  std::vector<LoopTerm<K>> terms;
  K central = K(0);
};

/// phi_sigma on x[t^j] in L(g,tau), x a zeta_r^j-eigenvector of tau and an
/// eigenvector of ad h with eigenvalue k:
///   x[t^j] -> x[t^{(m/r)j + k}] + delta_{j,0} (<h,x>/m) C.
/// The central term makes the map bracket-preserving on Cartan zero modes.
template <class K>
LoopVec<K> realization_map(const FiniteOrderAutomorphism<K>& S, const Vec<K>& x, long j, long k) {
  const auto& g = *S.g;
  Vec<K> tx = mul(S.tau_mat, x);
  K z = unity<K>(S.tau.r, j);
  for (size_t i = 0; i < x.size(); ++i)
    if (tx[i] != z * x[i]) throw std::invalid_argument("realization_map: x is not a tau-eigenvector for t^j");
  LoopVec<K> out;
  out.terms.push_back({x, long(S.m / S.tau.r) * j + k});
  if (j == 0) {
    Vec<K> hv(g.dim(), K(0));
    for (int i = 0; i < S.l; ++i) hv = lin(hv, K(S.h_coroot[i]), S.coroot[i]);
    out.central = g.form(hv, x) / K(Q(S.m));
  }
  return out;
}

}  // namespace tkm
