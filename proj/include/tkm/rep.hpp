#pragma once
// Degree-truncated generalized Verma modules M(V(lambda), c) and their
// integrable quotients H(lambda).
//
// A basis vector of degree d is a PBW monomial Y_1 ... Y_p v with Y_i negative
// loop basis elements in (degree, index) order and v a basis vector of V(lambda).
// Elements act recursively:
//   X Y_1 R = Y_1 (X R) + [X, Y_1] R,
// with X Y_1 R kept as a monomial when X is negative and precedes Y_1.

#include "loop.hpp"

#include <unordered_map>

namespace tkm {

struct TruncationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// n_{lambda,i} for a loop algebra realization (index l is o).
template <class K>
std::vector<Q> n_coefficients(const LoopAlgebra<K>& L, const WeightQ& lambda, long c) {
  std::vector<Q> n(L.l + 1);
  for (int i = 0; i <= L.l; ++i)
    n[i] = FiniteOrderAutomorphism<K>::pair(lambda, L.gen[i].h) + Q(2 * L.gen[i].s * c) / (Q(L.m) * L.S->len2[i]);
  return n;
}

template <class K>
class Truncation {
 public:
  enum Kind { verma, integrable };

  const LoopAlgebra<K>* L = nullptr;
  GsigmaModule<K> V;
  long c = 0;
  int dmax = 0;
  Kind kind = verma;

  struct NGen {
    int deg, cls, a;
  };
  std::vector<NGen> ng;                   // ordinal -> generator u_a[t^{-deg}]
  std::vector<std::vector<int>> ng_of;    // ng_of[deg][a] -> ordinal

  struct Block {
    WeightQ weight;
    std::vector<int> members;             // monomial indices
    Echelon<K> sub;                       // kernel submodule (integrable only)
  };
  struct Layer {
    std::vector<std::u16string> mono;     // [v, ordinals...]
    std::unordered_map<std::u16string, int> id;
    std::vector<int> block;               // monomial -> block
    std::vector<int> pos;                 // monomial -> position in its block
    std::vector<Block> blocks;
    std::map<WeightQ, int> block_of;
    std::vector<int> hbasis;              // monomials spanning the quotient
  };
  std::vector<Layer> layer;

  int dim_verma(int d) const { return static_cast<int>(layer[d].mono.size()); }
  int dim(int d) const {
    return kind == verma ? dim_verma(d) : static_cast<int>(layer[d].hbasis.size());
  }
  std::vector<int> graded_dims() const {
    std::vector<int> out;
    for (int d = 0; d <= dmax; ++d) out.push_back(dim(d));
    return out;
  }
  WeightQ weight_of(int d, int idx) const { return layer[d].blocks[layer[d].block[idx]].weight; }
  int highest() const { return 0; }  // v_+ is monomial 0 of layer 0

  /// x[t^k] with x = u_a in class k mod m, applied to monomial idx of layer d.
  /// Result lies in layer d-k of the Verma truncation (not reduced).
  const SVec<K>& act_mono(long k, int a, int d, int idx) const {
    if (d - k > dmax)
      throw TruncationError("action leaves the window: degree " + std::to_string(d - k) + " > d_max " +
                            std::to_string(dmax));
    uint64_t key = ((uint64_t(k + 4096) * 1024 + uint64_t(a)) << 40) | (uint64_t(d) << 32) | uint64_t(idx);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    SVec<K> res = compute(k, a, d, idx);
    return memo_.emplace(key, std::move(res)).first->second;
  }

  /// Action on a vector of layer d. Integrable truncations return normal forms.
  SVec<K> act(long k, int a, int d, const SVec<K>& v) const {
    if (d - k < 0) return {};
    Accum<K> acc;
    for (auto& [i, x] : v) acc.add(act_mono(k, a, d, i), x);
    return reduce(d - k, acc.get());
  }
  /// x[t^k] for x given by coordinates in class k mod m.
  SVec<K> act(long k, const SVec<K>& x, int d, const SVec<K>& v) const {
    if (d - k < 0) return {};
    Accum<K> acc;
    for (auto& [a, xa] : x)
      for (auto& [i, y] : v) acc.add(act_mono(k, a, d, i), xa * y);
    return reduce(d - k, acc.get());
  }

  /// Normal form modulo the kernel submodule.
  SVec<K> reduce(int d, const SVec<K>& v) const {
    if (kind == verma || v.empty()) return v;
    const Layer& Ly = layer[d];
    // vectors produced by the action are weight-homogeneous
    std::map<int, SVec<K>> parts;
    for (auto& e : v) parts[Ly.block[e.first]].push_back(e);
    if (parts.size() == 1) return Ly.blocks[parts.begin()->first].sub.reduce(v);
    Accum<K> acc;
    for (auto& [b, p] : parts) acc.add(Ly.blocks[b].sub.reduce(p), K(1));
    return acc.get();
  }

  int mono_index(int d, const std::u16string& s) const {
    auto it = layer[d].id.find(s);
    if (it == layer[d].id.end()) throw std::logic_error("monomial outside enumerated layer");
    return it->second;
  }

  /// Position of a monomial among the quotient basis of its layer, or -1.
  int hpos(int d, int idx) const { return hpos_[d][idx]; }

  /// Dense coordinates on the quotient basis.
  std::vector<K> dense(int d, const SVec<K>& v) const {
    std::vector<K> out(dim(d), K(0));
    for (auto& [i, x] : v) {
      int p = kind == verma ? i : hpos_[d][i];
      if (p < 0) throw std::logic_error("vector not in normal form");
      out[p] = x;
    }
    return out;
  }
  SVec<K> from_dense(int d, const std::vector<K>& x) const {
    SVec<K> v;
    for (int p = 0; p < dim(d); ++p)
      if (!is_zero(x[p])) v.emplace_back(kind == verma ? p : layer[d].hbasis[p], x[p]);
    normalize(v);
    return v;
  }
  SVec<K> basis_vector(int d, int p) const {
    return {{kind == verma ? p : layer[d].hbasis[p], K(1)}};
  }
  /// Matrix of x[t^k] (x = u_a) from H_d to H_{d-k} on the quotient bases.
  Mat<K> matrix(long k, int a, int d) const {
    int t = d - static_cast<int>(k);
    Mat<K> M(t >= 0 && t <= dmax ? dim(t) : 0, dim(d));
    if (t < 0) return M;
    for (int p = 0; p < dim(d); ++p) {
      auto img = dense(t, act(k, a, d, basis_vector(d, p)));
      for (int q = 0; q < M.r; ++q) M(q, p) = img[q];
    }
    return M;
  }

  // construction
  void build();
  void build_kernel();

  const std::vector<std::pair<int, long>>& kernel_gens() const { return kgens_; }

  /// Contravariant Gram matrices of layer d on the Verma monomials, one per weight block.
  /// b(v_+, v_+) = 1 and b(Y R, w) = -b(R, varpi(Y) w) with varpi(u[t^-n]) = omega_0(u)[t^n].
  const std::vector<Mat<K>>& gram(int d) const;
  /// b(v, w) for homogeneous vectors; 0 if the degrees differ.
  K contravariant_form(int d, const SVec<K>& v, int d2, const SVec<K>& w) const {
    if (d != d2) return K(0);
    const auto& G = gram(d);
    const Layer& Ly = layer[d];
    K s(0);
    for (auto& [i, x] : v)
      for (auto& [j, y] : w)
        if (Ly.block[i] == Ly.block[j]) s += x * y * G[Ly.block[i]](Ly.pos[i], Ly.pos[j]);
    return s;
  }
  /// Gram matrix of layer d on the quotient basis, as a dense dim(d) x dim(d) matrix.
  Mat<K> quotient_gram(int d) const {
    Mat<K> out(dim(d), dim(d));
    const Layer& Ly = layer[d];
    const auto& G = gram(d);
    for (int p = 0; p < dim(d); ++p)
      for (int q = 0; q < dim(d); ++q) {
        int i = kind == verma ? p : Ly.hbasis[p], j = kind == verma ? q : Ly.hbasis[q];
        if (Ly.block[i] == Ly.block[j]) out(p, q) = G[Ly.block[i]](Ly.pos[i], Ly.pos[j]);
      }
    return out;
  }

 private:
  SVec<K> compute(long k, int a, int d, int idx) const;
  mutable std::unordered_map<uint64_t, SVec<K>> memo_;
  std::vector<std::vector<int>> hpos_;
  std::vector<std::pair<int, long>> kgens_;
  mutable std::vector<std::vector<Mat<K>>> gram_;
  mutable std::vector<char> gram_done_;
};

template <class K>
const std::vector<Mat<K>>& Truncation<K>::gram(int d) const {
  if (gram_done_.empty()) {
    gram_.assign(dmax + 1, {});
    gram_done_.assign(dmax + 1, 0);
  }
  if (gram_done_[d]) return gram_[d];
  const LoopAlgebra<K>& A = *L;
  const Layer& Ly = layer[d];
  std::vector<Mat<K>> G;
  for (auto& B : Ly.blocks) G.emplace_back(static_cast<int>(B.members.size()), static_cast<int>(B.members.size()));
  if (d == 0) {
    for (size_t b = 0; b < Ly.blocks.size(); ++b)
      for (int i : Ly.blocks[b].members)
        for (int j : Ly.blocks[b].members) G[b](Ly.pos[i], Ly.pos[j]) = V.form(Ly.mono[i][0], Ly.mono[j][0]);
  } else {
    for (size_t b = 0; b < Ly.blocks.size(); ++b) {
      const auto& mem = Ly.blocks[b].members;
      for (int i : mem) {
        const std::u16string& s = Ly.mono[i];
        const NGen& Y = ng[s[1]];
        std::u16string rest = s;
        rest.erase(1, 1);
        const int dr = d - Y.deg;
        const int ridx = mono_index(dr, rest);
        const auto& Gr = gram(dr);
        const Layer& Lr = layer[dr];
        const int rb = Lr.block[ridx], rp = Lr.pos[ridx];
        for (int j : mem) {
          Accum<K> acc;
          for (auto& [a, x] : A.om[Y.cls][Y.a]) acc.add(act_mono(Y.deg, a, d, j), x);
          K v(0);
          for (auto& [t, x] : acc.get())
            if (Lr.block[t] == rb) v += x * Gr[rb](rp, Lr.pos[t]);
          G[b](Ly.pos[i], Ly.pos[j]) = -v;
        }
      }
    }
  }
  gram_[d] = std::move(G);
  gram_done_[d] = 1;
  return gram_[d];
}

template <class K>
SVec<K> Truncation<K>::compute(long k, int a, int d, int idx) const {
  const LoopAlgebra<K>& A = *L;
  const std::u16string& s = layer[d].mono[idx];
  const int v = s[0];
  const int t = d - static_cast<int>(k);
  if (t < 0) return {};
  if (s.size() == 1) {
    if (k > 0) return {};
    if (k == 0) {
      SVec<K> out;
      for (auto& [w, x] : V.act0[a][v]) out.emplace_back(mono_index(0, std::u16string(1, char16_t(w))), x);
      normalize(out);
      return out;
    }
    std::u16string ns = s;
    ns.insert(ns.begin() + 1, char16_t(ng_of[-k][a]));
    return {{mono_index(t, ns), K(1)}};
  }
  const int y1 = s[1];
  const NGen& Y = ng[y1];
  std::u16string rest = s;
  rest.erase(1, 1);
  const int dr = d - Y.deg;
  const int ridx = mono_index(dr, rest);
  const int xcls = A.cls(k);
  Accum<K> acc;
  if (k < 0) {
    int xo = ng_of[-k][a];
    if (xo <= y1) {
      std::u16string ns = s;
      ns.insert(ns.begin() + 1, char16_t(xo));
      return {{mono_index(t, ns), K(1)}};
    }
    for (auto& [i, x] : act_mono(k, a, dr, ridx)) {
      std::u16string ns = layer[dr - k].mono[i];
      ns.insert(ns.begin() + 1, char16_t(y1));
      acc.add(mono_index(t, ns), x);
    }
  } else {
    for (auto& [i, x] : act_mono(k, a, dr, ridx)) acc.add(act_mono(-Y.deg, Y.a, dr - static_cast<int>(k), i), x);
  }
  // [X, Y1] R
  const long kb = k - Y.deg;
  for (auto& [b, x] : A.bracket(xcls, a, Y.cls, Y.a)) acc.add(act_mono(kb, b, dr, ridx), x);
  if (kb == 0) {
    K cen = K(Q(k) * Q(c) / Q(A.m)) * A.fm[xcls][a][Y.a];
    if (!is_zero(cen)) acc.add(ridx, cen);
  }
  return acc.get();
}

template <class K>
void Truncation<K>::build() {
  const LoopAlgebra<K>& A = *L;
  ng_of.assign(dmax + 1, {});
  for (int n = 1; n <= dmax; ++n) {
    int j = A.cls(-n);
    for (int a = 0; a < A.n(j); ++a) {
      ng_of[n].push_back(static_cast<int>(ng.size()));
      ng.push_back({n, j, a});
    }
  }
  if (ng.size() > 60000) throw TruncationError("too many negative generators");
  layer.assign(dmax + 1, {});
  const long cap = [] {
    const char* e = std::getenv("TKM_MAX_LAYER");
    return e ? std::atol(e) : 2000000L;
  }();
  for (int d = 0; d <= dmax; ++d) {
    Layer& Ly = layer[d];
    std::u16string cur;
    std::function<void(int, int)> rec = [&](int from, int left) {
      if (left == 0) {
        for (int v = 0; v < V.dim(); ++v) {
          std::u16string s(1, char16_t(v));
          s += cur;
          WeightQ w = V.R.weight[v];
          for (size_t q = 0; q < cur.size(); ++q) {
            const NGen& G = ng[cur[q]];
            const WeightQ& gw = A.wt[G.cls][G.a];
            for (int i = 0; i < A.l; ++i) w[i] += gw[i];
          }
          auto [it, fresh] = Ly.block_of.try_emplace(w, static_cast<int>(Ly.blocks.size()));
          if (fresh) Ly.blocks.push_back({w, {}, {}});
          int id = static_cast<int>(Ly.mono.size());
          Ly.id.emplace(s, id);
          Ly.mono.push_back(s);
          Ly.block.push_back(it->second);
          Ly.pos.push_back(static_cast<int>(Ly.blocks[it->second].members.size()));
          Ly.blocks[it->second].members.push_back(id);
          if (static_cast<long>(Ly.mono.size()) > cap)
            throw TruncationError("layer " + std::to_string(d) + " exceeds the monomial cap");
        }
        return;
      }
      for (int o = from; o < static_cast<int>(ng.size()); ++o) {
        if (ng[o].deg > left) break;
        cur.push_back(char16_t(o));
        rec(o, left - ng[o].deg);
        cur.pop_back();
      }
    };
    rec(0, d);
  }
  if (kind == integrable) build_kernel();
  hpos_.assign(dmax + 1, {});
  for (int d = 0; d <= dmax; ++d) {
    Layer& Ly = layer[d];
    hpos_[d].assign(Ly.mono.size(), -1);
    for (int i = 0; i < static_cast<int>(Ly.mono.size()); ++i)
      if (kind == verma || !Ly.blocks[Ly.block[i]].sub.is_pivot(i)) {
        hpos_[d][i] = static_cast<int>(Ly.hbasis.size());
        Ly.hbasis.push_back(i);
      }
  }
}

template <class K>
void Truncation<K>::build_kernel() {
  const LoopAlgebra<K>& A = *L;
  auto n = n_coefficients(A, V.lambda, c);
  if (!in_nonneg_integers(n)) throw std::invalid_argument("highest weight is not in D_c");
  auto add = [&](int d, const SVec<K>& v) {
    if (v.empty()) return false;
    Layer& Ly = layer[d];
    int b = Ly.block[v.front().first];
    for (auto& e : v)
      if (Ly.block[e.first] != b) throw std::logic_error("kernel vector is not weight-homogeneous");
    return Ly.blocks[b].sub.add(v);
  };
  struct Item {
    int d;
    SVec<K> v;
  };
  std::vector<Item> queue;
  for (int i = 0; i <= A.l; ++i) {
    const auto& G = A.gen[i];
    if (G.s == 0) continue;
    long e = to_long(n[i]) + 1;
    kgens_.emplace_back(i, e);
    if (e * G.s > dmax) continue;
    SVec<K> v{{0, K(1)}};
    int d = 0;
    for (long p = 0; p < e; ++p) {
      Accum<K> acc;
      for (auto& [a, x] : G.y)
        for (auto& [j, y] : v) acc.add(act_mono(-G.s, a, d, j), x * y);
      v = acc.get();
      d += static_cast<int>(G.s);
    }
    queue.push_back({d, v});
  }
  // close under the nonnegative part, generated by x_i (all i) and y_i (s_i = 0)
  for (size_t q = 0; q < queue.size(); ++q) {
    Item it = queue[q];
    if (!add(it.d, it.v)) continue;
    for (int i = 0; i <= A.l; ++i) {
      const auto& G = A.gen[i];
      if (it.d - G.s >= 0) {
        Accum<K> acc;
        for (auto& [a, x] : G.x)
          for (auto& [j, y] : it.v) acc.add(act_mono(G.s, a, it.d, j), x * y);
        queue.push_back({it.d - static_cast<int>(G.s), acc.get()});
      }
      if (G.s == 0) {
        Accum<K> acc;
        for (auto& [a, x] : G.y)
          for (auto& [j, y] : it.v) acc.add(act_mono(0, a, it.d, j), x * y);
        queue.push_back({it.d, acc.get()});
      }
    }
  }
  for (auto& B : layer[0].blocks)
    if (B.sub.rank()) throw std::logic_error("kernel submodule meets degree 0");
  // then apply the negative part in increasing degree
  for (int d = 1; d <= dmax; ++d)
    for (int nd = 1; nd <= d; ++nd) {
      int j = A.cls(-nd);
      for (auto& B : layer[d - nd].blocks)
        for (const auto& row : B.sub.rows())
          for (int a = 0; a < A.n(j); ++a) {
            Accum<K> acc;
            for (auto& [i, x] : row) acc.add(act_mono(-nd, a, d - nd, i), x);
            add(d, acc.get());
          }
    }
}

template <class K>
Truncation<K> build_verma_truncation(const LoopAlgebra<K>& L, const WeightQ& lambda, long c, int dmax) {
  Truncation<K> T;
  T.L = &L;
  T.V = build_gsigma_module(L, lambda);
  T.c = c;
  T.dmax = dmax;
  T.kind = Truncation<K>::verma;
  T.build();
  return T;
}

template <class K>
Truncation<K> build_integrable_truncation(const LoopAlgebra<K>& L, const WeightQ& lambda, long c, int dmax) {
  Truncation<K> T;
  T.L = &L;
  T.V = build_gsigma_module(L, lambda);
  T.c = c;
  T.dmax = dmax;
  T.kind = Truncation<K>::integrable;
  T.build();
  return T;
}

/// (i, n_{lambda,i}+1) for every i with s_i > 0.
template <class K>
std::vector<std::pair<int, long>> kernel_generators(const LoopAlgebra<K>& L, const WeightQ& lambda, long c) {
  auto n = n_coefficients(L, lambda, c);
  if (!in_nonneg_integers(n)) throw std::invalid_argument("highest weight is not in D_c");
  std::vector<std::pair<int, long>> out;
  for (int i = 0; i <= L.l; ++i)
    if (L.gen[i].s > 0) out.emplace_back(i, to_long(n[i]) + 1);
  return out;
}

/// Checks that the radical of the Verma Gram matrix equals the kernel submodule
/// layer by layer (t is an integrable truncation). Returns false on the first mismatch.
template <class K>
bool radical_equals_kernel(const Truncation<K>& t) {
  for (int d = 0; d <= t.dmax; ++d) {
    const auto& G = t.gram(d);
    const auto& Ly = t.layer[d];
    for (size_t b = 0; b < Ly.blocks.size(); ++b) {
      const auto& B = Ly.blocks[b];
      int n = static_cast<int>(B.members.size());
      if (rank(G[b]) != n - static_cast<int>(B.sub.rank())) return false;
      for (const auto& row : B.sub.rows())
        for (int p = 0; p < n; ++p) {
          K s(0);
          for (auto& [i, x] : row) s += G[b](p, Ly.pos[i]) * x;
          if (!is_zero(s)) return false;
        }
    }
  }
  return true;
}

/// Lemma of Kac: Y^p v_+ = alpha X^q Y^{p+q} v_+ in the Verma module, X = x_i[f],
/// Y = y_i[t^{-s_i}], f = t^{s_i}(f_0 + f_1 t^m + ...) with f_0 = 1.
/// Checked in the Verma truncation t; returns alpha.
template <class K>
Q verify_kac_identity(const Truncation<K>& t, int i, long p, long q, const std::vector<Q>& f) {
  const LoopAlgebra<K>& A = *t.L;
  const auto& G = A.gen.at(i);
  if (G.s <= 0) throw std::invalid_argument("index with s_i = 0");
  auto n = n_coefficients(A, t.V.lambda, t.c);
  if (Q(p) <= n[i]) throw std::invalid_argument("p must exceed n_{lambda,i}");
  if (q <= 0) throw std::invalid_argument("q must be positive");
  if (f.empty() || f[0] != 1) throw std::invalid_argument("f must be t^{s_i} mod t^{s_i+1}");
  if ((p + q) * G.s > t.dmax) throw TruncationError("Kac identity needs d_max >= " + std::to_string((p + q) * G.s));
  auto apply_y = [&](SVec<K> v, int d) {
    Accum<K> acc;
    for (auto& [a, x] : G.y)
      for (auto& [j, y] : v) acc.add(t.act_mono(-G.s, a, d, j), x * y);
    return acc.get();
  };
  SVec<K> v{{0, K(1)}};
  SVec<K> yp;
  int d = 0;
  for (long k = 0; k < p + q; ++k) {
    if (k == p) yp = v;
    v = apply_y(v, d);
    d += static_cast<int>(G.s);
  }
  if (p == p + q) yp = v;
  // X^q: each term x_i[t^{s_i + m j}] lowers degree by s_i + m j; keep the layer p s_i part at the end
  std::map<int, SVec<K>> cur{{d, v}};
  for (long k = 0; k < q; ++k) {
    std::map<int, Accum<K>> nxt;
    for (auto& [dd, w] : cur)
      for (size_t j = 0; j < f.size(); ++j) {
        if (f[j] == 0) continue;
        long mode = G.s + long(A.m) * long(j);
        if (dd - mode < 0) continue;
        for (auto& [a, x] : G.x)
          for (auto& [b, y] : w) nxt[dd - static_cast<int>(mode)].add(t.act_mono(mode, a, dd, b), K(f[j]) * x * y);
      }
    cur.clear();
    for (auto& [dd, acc] : nxt) cur[dd] = acc.get();
  }
  Q prod = 1;
  for (long k = p; k < p + q; ++k) prod *= Q(k + 1) * (n[i] - Q(k));
  if (prod == 0) throw std::logic_error("Kac identity: vanishing product");
  Q alpha = 1 / prod;
  for (auto& [dd, w] : cur) {
    SVec<K> lhs = dd == static_cast<int>(p * G.s) ? yp : SVec<K>{};
    SVec<K> rhs = w;
    scale(rhs, K(alpha));
    if (axpy(lhs, K(-1), rhs) != SVec<K>{}) throw std::logic_error("Kac identity fails");
  }
  if (!cur.count(static_cast<int>(p * G.s)) && !yp.empty()) throw std::logic_error("Kac identity fails");
  return alpha;
}

/// PBW generating function prod_{n>=1} (1-q^n)^{-dim g_{-n}} times dim V.
template <class K>
std::vector<long> pbw_dims(const LoopAlgebra<K>& L, int dimV, int dmax) {
  std::vector<long> p(dmax + 1, 0);
  p[0] = 1;
  for (int n = 1; n <= dmax; ++n) {
    int mult = L.n(L.cls(-n));
    for (int k = 0; k < mult; ++k)
      for (int d = n; d <= dmax; ++d) p[d] += p[d - n];
  }
  for (auto& x : p) x *= dimV;
  return p;
}

}  // namespace tkm
