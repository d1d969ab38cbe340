#pragma once
// Pairing between H(mu*) at r' and H(mu) at r'', and the gluing tensors
//   Delta_d = G'^{-1} B_d G''^{-1}  in  H(mu*)_{-d} (x) H(mu)_{-d},
// where B_d is the degree-d pairing and G', G'' are contravariant Gram matrices.
//
// r' uses the sigma realization with modes z'^n. r'' uses the inverse
// realization (x'' = -y, y'' = -x) with modes z''^n; x[z'^n] and x[z''^-n]
// share the basis index. Both modules are built from the coordinates of mu*:
// through x'' = -y the r'' module is V(mu) as a g^sigma-module.

#include "rep.hpp"

namespace tkm {

template <class K>
struct GluingData {
  WeightQ mu, mu_star;
  long c = 0;
  int dmax = 0;
  const LoopAlgebra<K>* L1 = nullptr;  // r'
  const LoopAlgebra<K>* L2 = nullptr;  // r''
  Truncation<K> H1, H2;
  std::vector<Mat<K>> B;      // B[d](p, q) = b(e'_p, e''_q) on quotient bases
  std::vector<Mat<K>> Delta;  // coefficient of e'_p (x) e''_q

  const Mat<K>& delta(int d) const { return Delta.at(d); }
};

namespace detail {

/// Invariant pairing V' x V'' -> K with b(v'_+, v''_+) = 1.
template <class K>
Mat<K> degree0_pairing(const GsigmaModule<K>& V1, const GsigmaModule<K>& V2, int n0) {
  const int a = V1.dim(), b = V2.dim();
  std::vector<int> var(size_t(a) * b, -1);
  std::vector<std::pair<int, int>> unk;
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < b; ++j)
      if (V1.R.weight[i] == V2.R.weight[j]) {
        var[size_t(i) * b + j] = static_cast<int>(unk.size());
        unk.emplace_back(i, j);
      }
  Echelon<K> E;
  for (int x = 0; x < n0; ++x)
    for (int i = 0; i < a; ++i)
      for (int j = 0; j < b; ++j) {
        // b(x v_i, w_j) + b(v_i, x w_j) = 0
        Accum<K> eq;
        for (auto& [k, y] : V1.act0[x][i])
          if (var[size_t(k) * b + j] >= 0) eq.add(var[size_t(k) * b + j], y);
        for (auto& [k, y] : V2.act0[x][j])
          if (var[size_t(i) * b + k] >= 0) eq.add(var[size_t(i) * b + k], y);
        auto row = eq.get();
        if (!row.empty()) E.add(row);
      }
  std::vector<int> freev;
  for (int u = 0; u < static_cast<int>(unk.size()); ++u)
    if (!E.is_pivot(u)) freev.push_back(u);
  if (freev.size() != 1) throw std::logic_error("degree-0 invariant pairing is not unique");
  const int f = freev[0];
  std::vector<K> sol(unk.size(), K(0));
  sol[f] = K(1);
  for (const auto& row : E.rows()) {
    int p = row.front().first;
    sol[p] = -coeff(row, f);
  }
  Mat<K> M(a, b);
  for (size_t u = 0; u < unk.size(); ++u) M(unk[u].first, unk[u].second) = sol[u];
  if (is_zero(M(0, 0))) throw std::logic_error("pairing vanishes on highest weight vectors");
  K inv = K(1) / M(0, 0);
  return scaled(M, inv);
}

}  // namespace detail

/// Pairing matrices b_{mu,d}, d = 0..d_max, on the quotient bases.
template <class K>
void build_pairing(GluingData<K>& G) {
  const auto& H1 = G.H1;
  const auto& H2 = G.H2;
  const LoopAlgebra<K>& A2 = *G.L2;
  // full[d](i, q): i a Verma monomial of H1, q a quotient basis vector of H2
  std::vector<Mat<K>> full(G.dmax + 1);
  full[0] = detail::degree0_pairing(H1.V, H2.V, G.L1->n(0));
  if (H1.dim_verma(0) != full[0].r) throw std::logic_error("degree-0 layer mismatch");
  for (int d = 1; d <= G.dmax; ++d) {
    const auto& Ly = H1.layer[d];
    Mat<K> M(H1.dim_verma(d), H2.dim(d));
    std::map<std::pair<int, int>, SVec<K>> cache;  // (ordinal, q) -> Y'' e''_q
    for (int i = 0; i < H1.dim_verma(d); ++i) {
      const std::u16string& s = Ly.mono[i];
      const auto& Y = H1.ng[s[1]];
      std::u16string rest = s;
      rest.erase(1, 1);
      const int dr = d - Y.deg;
      const int ridx = H1.mono_index(dr, rest);
      for (int q = 0; q < H2.dim(d); ++q) {
        auto key = std::make_pair(static_cast<int>(s[1]), q);
        auto it = cache.find(key);
        if (it == cache.end()) {
          // Y = u_a[z'^-n]  <->  u_a[z''^n] on H2
          SVec<K> img = H2.act(Y.deg, Y.a, d, H2.basis_vector(d, q));
          it = cache.emplace(key, std::move(img)).first;
        }
        K v(0);
        for (auto& [t, x] : it->second) v += x * full[dr](ridx, H2.kind == Truncation<K>::verma ? t : H2.hpos(dr, t));
        M(i, q) = -v;
      }
    }
    (void)A2;
    full[d] = std::move(M);
  }
  G.B.assign(G.dmax + 1, {});
  for (int d = 0; d <= G.dmax; ++d) {
    Mat<K> B(H1.dim(d), H2.dim(d));
    for (int p = 0; p < H1.dim(d); ++p) {
      int i = H1.kind == Truncation<K>::verma ? p : H1.layer[d].hbasis[p];
      for (int q = 0; q < H2.dim(d); ++q) B(p, q) = full[d](i, q);
    }
    if (rank(B) != B.r || B.r != B.c) throw std::logic_error("degenerate pairing at degree " + std::to_string(d));
    G.B[d] = std::move(B);
  }
}

template <class K>
GluingData<K> build_gluing_tensor(const LoopAlgebra<K>& L1, const LoopAlgebra<K>& L2, const WeightQ& mu, long c,
                                  int dmax) {
  if (!L2.inverse || L1.inverse) throw std::invalid_argument("expects the sigma and inverse realizations");
  GluingData<K> G;
  G.mu = mu;
  G.mu_star = dual_weight(*L1.S, mu);
  G.c = c;
  G.dmax = dmax;
  G.L1 = &L1;
  G.L2 = &L2;
  G.H1 = build_integrable_truncation(L1, G.mu_star, c, dmax);
  G.H2 = build_integrable_truncation(L2, G.mu_star, c, dmax);
  build_pairing(G);
  for (int d = 0; d <= dmax; ++d) {
    Mat<K> g1 = inverse(G.H1.quotient_gram(d));
    Mat<K> g2 = inverse(G.H2.quotient_gram(d));
    G.Delta.push_back(g1 * G.B[d] * g2);
  }
  return G;
}

/// Delta_d equals the canonical element B_d^{-T} of the pairing; at d = 0 this is I_mu.
template <class K>
bool delta_is_canonical(const GluingData<K>& G, int d) {
  return transpose(G.Delta.at(d) * transpose(G.B.at(d))) == Mat<K>::identity(G.B.at(d).r);
}

/// (x[z'^n] (x) 1) Delta_{d+n} + (1 (x) x[z''^-n]) Delta_d = 0 for x = u_a in class n mod m.
/// Both terms live in H(mu*)_{-d} (x) H(mu)_{-(d+n)}.
template <class K>
bool check_annihilation(const GluingData<K>& G, int a, long n, int d) {
  if (d < 0 && d + n < 0) return true;
  long hi = std::max<long>(d, d + n);
  if (hi > G.dmax) throw TruncationError("annihilation check needs d_max >= " + std::to_string(hi));
  const auto& H1 = G.H1;
  const auto& H2 = G.H2;
  if (d < 0) {
    // only the first term can survive; it lowers H1 below degree 0
    return true;
  }
  const int t = static_cast<int>(d + n);
  Mat<K> S(H1.dim(d), t >= 0 ? H2.dim(t) : 0);
  if (t < 0) return true;
  Mat<K> X1 = H1.matrix(n, a, t);                       // H1_{d+n} -> H1_d
  S = X1 * G.Delta.at(t);
  Mat<K> X2 = H2.matrix(-n, a, d);                      // H2_d -> H2_{d+n}
  S = S + G.Delta.at(d) * transpose(X2);
  return S.is_zero_matrix();
}

}  // namespace tkm
