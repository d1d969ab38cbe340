#pragma once
// The twisted loop algebra L(g,sigma) on an eigenbasis of each class g_j, and
// the finite-dimensional g^sigma-modules V(lambda) sitting in degree 0.
//
// u[t^k] requires u in g_{k mod m}. Bracket:
//   [u[t^a], v[t^b]] = [u,v][t^{a+b}] + (a/m) delta_{a+b,0} <u,v> C.

#include "twist.hpp"

namespace tkm {

template <class K>
struct LoopAlgebra {
  const FiniteOrderAutomorphism<K>* S = nullptr;
  bool inverse = false;  // realization of sigma^{-1} with x'' = -y, y'' = -x
  int m = 1, l = 0, D = 0;
  std::vector<std::vector<Vec<K>>> vec;     // vec[j][a] in g
  std::vector<std::vector<WeightQ>> wt;     // weights in this realization's coordinates
  std::vector<WeightQ> hco;                 // class 0: mu(u_a) = sum_k hco[a][k] mu_k, empty off h^tau
  std::vector<std::vector<std::vector<SVec<K>>>> br;  // br[j1*m+j2][a][b], in class j1+j2
  std::vector<std::vector<std::vector<K>>> fm;        // fm[j][a][b] = <u^j_a, u^{-j}_b>
  std::vector<std::vector<SVec<K>>> om;               // omega_0(u^j_a) in class -j

  struct Gen {
    long s = 0;
    int xcls = 0, ycls = 0;
    SVec<K> x, y;
    WeightQ h;     // [x,y] in coroot coordinates
    WeightQ root;  // weight of x
  };
  std::vector<Gen> gen;

  int cls(long k) const { return static_cast<int>(((k % m) + m) % m); }
  int n(int j) const { return static_cast<int>(vec[j].size()); }
  const SVec<K>& bracket(int j1, int a, int j2, int b) const { return br[size_t(j1) * m + j2][a][b]; }
  long hdual() const { return S->hdual(); }
  int dim_g() const { return D; }

  SVec<K> coords(int j, const Vec<K>& v) const {
    const auto& rows = pivrows_[j];
    const Mat<K>& P = pinv_[j];
    SVec<K> out;
    for (int a = 0; a < P.r; ++a) {
      K s(0);
      for (int b = 0; b < P.c; ++b)
        if (!is_zero(P(a, b)) && !is_zero(v[rows[b]])) s += P(a, b) * v[rows[b]];
      if (!is_zero(s)) out.emplace_back(a, s);
    }
    Vec<K> back(D, K(0));
    for (auto& [a, x] : out) back = lin(back, x, vec[j][a]);
    if (back != v) throw std::logic_error("vector not in the expected eigenspace");
    return out;
  }
  Vec<K> to_g(int j, const SVec<K>& c) const {
    Vec<K> out(D, K(0));
    for (auto& [a, x] : c) out = lin(out, x, vec[j][a]);
    return out;
  }

  std::vector<std::vector<int>> pivrows_;
  std::vector<Mat<K>> pinv_;
};

template <class K>
LoopAlgebra<K> build_loop_algebra(const FiniteOrderAutomorphism<K>& S, bool inverse = false) {
  LoopAlgebra<K> L;
  L.S = &S;
  L.inverse = inverse;
  L.m = S.m;
  L.l = S.l;
  L.D = S.g->dim();
  const int m = S.m, l = S.l;
  const auto& g = *S.g;
  L.vec.resize(m);
  L.wt.resize(m);
  for (int j = 0; j < m; ++j) {
    int js = inverse ? (m - j) % m : j;
    for (int e : S.cls[js]) {
      L.vec[j].push_back(S.ev[e].v);
      WeightQ w = S.ev[e].weight;
      if (inverse)
        for (auto& x : w) x = -x;
      L.wt[j].push_back(w);
    }
  }
  L.hco.assign(L.vec[0].size(), {});
  for (int a = 0; a < L.n(0); ++a)
    for (int k = 0; k < l; ++k)
      if (L.vec[0][a] == S.coroot[k]) {
        WeightQ h(l, Q(0));
        h[k] = inverse ? Q(-1) : Q(1);
        L.hco[a] = h;
      }
  L.pivrows_.resize(m);
  L.pinv_.resize(m);
  for (int j = 0; j < m; ++j) {
    int nj = L.n(j);
    Mat<K> Bt(nj, L.D);
    for (int a = 0; a < nj; ++a)
      for (int i = 0; i < L.D; ++i) Bt(a, i) = L.vec[j][a][i];
    auto piv = rref(Bt);
    if (static_cast<int>(piv.size()) != nj) throw std::logic_error("eigenbasis is dependent");
    Mat<K> Bs(nj, nj);
    for (int a = 0; a < nj; ++a)
      for (int b = 0; b < nj; ++b) Bs(b, a) = L.vec[j][a][piv[b]];
    L.pivrows_[j] = piv;
    L.pinv_[j] = nj ? tkm::inverse(Bs) : Mat<K>(0, 0);
  }
  L.br.resize(size_t(m) * m);
  for (int j1 = 0; j1 < m; ++j1)
    for (int j2 = 0; j2 < m; ++j2) {
      auto& T = L.br[size_t(j1) * m + j2];
      T.assign(L.n(j1), std::vector<SVec<K>>(L.n(j2)));
      for (int a = 0; a < L.n(j1); ++a)
        for (int b = 0; b < L.n(j2); ++b)
          T[a][b] = L.coords((j1 + j2) % m, g.bracket(L.vec[j1][a], L.vec[j2][b]));
    }
  L.fm.resize(m);
  L.om.resize(m);
  for (int j = 0; j < m; ++j) {
    int jn = (m - j) % m;
    L.fm[j].assign(L.n(j), std::vector<K>(L.n(jn), K(0)));
    for (int a = 0; a < L.n(j); ++a) {
      for (int b = 0; b < L.n(jn); ++b) L.fm[j][a][b] = g.form(L.vec[j][a], L.vec[jn][b]);
      L.om[j].push_back(L.coords(jn, mul(S.omega0, L.vec[j][a])));
    }
  }
  for (int i = 0; i <= l; ++i) {
    typename LoopAlgebra<K>::Gen G;
    G.s = S.s[i];
    G.xcls = L.cls(G.s);
    G.ycls = L.cls(-G.s);
    Vec<K> xv = S.x[i], yv = S.y[i];
    if (inverse) {
      Vec<K> nx = yv, ny = xv;
      for (auto& c : nx) c = -c;
      for (auto& c : ny) c = -c;
      xv = nx;
      yv = ny;
    }
    G.x = L.coords(G.xcls, xv);
    G.y = L.coords(G.ycls, yv);
    G.h = S.hgen[i];
    G.root = S.simple_root_f(i);
    L.gen.push_back(G);
  }
  return L;
}

/// Operator on a finite module, stored by columns.
template <class K>
using Op = std::vector<SVec<K>>;

template <class K>
SVec<K> apply_op(const Op<K>& op, const SVec<K>& v) {
  Accum<K> acc;
  for (auto& [b, x] : v) acc.add(op[b], x);
  return acc.get();
}
template <class K>
Op<K> commutator(const Op<K>& x, const Op<K>& y) {
  Op<K> z(x.size());
  for (size_t b = 0; b < x.size(); ++b) z[b] = axpy(apply_op(x, y[b]), K(-1), apply_op(y, x[b]));
  return z;
}
template <class K>
Op<K> op_comb(const std::vector<Op<K>>& ops, const SVec<K>& c, size_t dim) {
  Op<K> out(dim);
  for (size_t b = 0; b < dim; ++b) {
    Accum<K> acc;
    for (auto& [a, x] : c) acc.add(ops[a][b], x);
    out[b] = acc.get();
  }
  return out;
}

/// V(lambda) for g^sigma, with the action of every class-0 basis element.
template <class K>
struct GsigmaModule {
  WeightQ lambda;
  Irrep R;
  std::vector<Op<K>> act0;  // act0[a]
  Mat<K> form;              // contravariant form, form(v+,v+) = 1
  int dim() const { return R.dim(); }
};

template <class K>
GsigmaModule<K> build_gsigma_module(const LoopAlgebra<K>& L, const WeightQ& lambda) {
  GsigmaModule<K> V;
  V.lambda = lambda;
  std::vector<int> simple;
  for (int i = 0; i <= L.l; ++i)
    if (L.gen[i].s == 0) simple.push_back(i);
  CartanDatum cd;
  cd.w = L.l;
  for (int i : simple) {
    cd.alpha.push_back(L.gen[i].root);
    cd.coroot.push_back(L.gen[i].h);
  }
  V.R = build_irrep(cd, lambda);
  const int dv = V.R.dim(), n0 = L.n(0);
  auto toK = [&](const std::vector<SVec<Q>>& op) {
    Op<K> o(dv);
    for (int b = 0; b < dv; ++b)
      for (auto& [i, x] : op[b]) o[b].emplace_back(i, K(x));
    return o;
  };
  // span g_0 by Cartan elements and brackets of the simple generators
  Echelon<K> ech;
  std::vector<SVec<K>> el;
  std::vector<Op<K>> ops;
  auto push = [&](const SVec<K>& c, const Op<K>& o) {
    if (ech.add(c)) {
      el.push_back(c);
      ops.push_back(o);
    }
  };
  for (int a = 0; a < n0; ++a)
    if (!L.hco[a].empty()) {
      Op<K> o(dv);
      for (int b = 0; b < dv; ++b) {
        Q v = FiniteOrderAutomorphism<K>::pair(V.R.weight[b], L.hco[a]);
        if (sgn(v)) o[b] = {{b, K(v)}};
      }
      push({{a, K(1)}}, o);
    }
  std::vector<SVec<K>> gc;
  std::vector<Op<K>> go;
  for (size_t k = 0; k < simple.size(); ++k) {
    const auto& G = L.gen[simple[k]];
    gc.push_back(G.x);
    go.push_back(toK(V.R.E[k]));
    gc.push_back(G.y);
    go.push_back(toK(V.R.F[k]));
  }
  for (size_t k = 0; k < gc.size(); ++k) push(gc[k], go[k]);
  auto br0 = [&](const SVec<K>& x, const SVec<K>& y) {
    Accum<K> acc;
    for (auto& [a, xa] : x)
      for (auto& [b, yb] : y) acc.add(L.bracket(0, a, 0, b), xa * yb);
    return acc.get();
  };
  for (size_t t = 0; t < el.size() && static_cast<int>(el.size()) < n0; ++t)
    for (size_t k = 0; k < gc.size(); ++k) {
      auto c = br0(gc[k], el[t]);
      if (c.empty()) continue;
      push(c, commutator(go[k], ops[t]));
    }
  if (static_cast<int>(el.size()) != n0) throw std::logic_error("g^sigma generators do not span g_0");
  Mat<K> Em(n0, n0);
  for (int t = 0; t < n0; ++t)
    for (auto& [a, x] : el[t]) Em(a, t) = x;
  Mat<K> Ei = inverse(Em);
  V.act0.resize(n0);
  for (int a = 0; a < n0; ++a) {
    SVec<K> c;
    for (int t = 0; t < n0; ++t)
      if (!is_zero(Ei(t, a))) c.emplace_back(t, Ei(t, a));
    V.act0[a] = op_comb(ops, c, dv);
  }
  for (int a = 0; a < n0; ++a)
    for (int b = a + 1; b < n0; ++b)
      if (commutator(V.act0[a], V.act0[b]) != op_comb(V.act0, L.bracket(0, a, 0, b), dv))
        throw std::logic_error("g^sigma action is not a representation");
  // contravariant form: b(F_j w, u) = -b(w, omega(y_j) u)
  V.form = Mat<K>(dv, dv);
  V.form(0, 0) = K(1);
  for (int v = 1; v < dv; ++v) {
    auto [j, w] = V.R.origin[v];
    SVec<K> wy;
    for (auto& [a, x] : L.gen[simple[j]].y)
      for (auto& [b, y] : L.om[0][a]) wy.emplace_back(b, x * y);
    normalize(wy);
    Op<K> oy = op_comb(V.act0, wy, dv);
    for (int u = 1; u < dv; ++u) {
      if (V.R.level[u] != V.R.level[v] || V.R.weight[u] != V.R.weight[v]) continue;
      K s(0);
      for (auto& [t, x] : oy[u]) s += x * V.form(w, t);
      V.form(v, u) = -s;
    }
  }
  return V;
}

}  // namespace tkm
