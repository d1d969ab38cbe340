#pragma once
// Reference values: untwisted fusion rules and block dimensions by iterated
// fusion products, and brute-force coinvariants for Gamma acting on P^1.
//
// Fusion coefficients come from the Kac-Walton algorithm: tensor product
// multiplicities of V(a) x V(b), folded into the level c alcove by the
// shifted affine Weyl group at level c + h^vee. Block dimensions are
//   dim V_g(l_1..l_s) = (N_{l_1} ... N_{l_s} H^g)_{0,0},  H = sum_mu N_mu N_{mu*},
// an exact integer computation.

#include "curve.hpp"
#include "rep.hpp"

namespace tkm {

// ---------------------------------------------------------------- fusion

class UntwistedFusion {
 public:
  UntwistedFusion(const SimpleLieAlgebra& g, long c) : g_(&g), c_(c) {
    if (c < 1) throw std::invalid_argument("level c must be >= 1");
    const int r = g.rank;
    const auto& top = g.positive_roots[g.highest];
    comark_.resize(r);
    theta_.assign(r, 0);
    for (int i = 0; i < r; ++i) {
      Q a = Q(top[i]) * g.simple_ip[i][i] / 2;
      comark_[i] = to_long(a);
      for (int j = 0; j < r; ++j) theta_[j] += long(top[i]) * g.cartan[i][j];
    }
    std::vector<long> n(r, 0);
    std::function<void(int, long)> rec = [&](int i, long left) {
      if (i == r) {
        WeightQ w(r);
        for (int k = 0; k < r; ++k) w[k] = Q(n[k]);
        P_.push_back(w);
        return;
      }
      for (n[i] = 0; n[i] * comark_[i] <= left; ++n[i]) rec(i + 1, left - n[i] * comark_[i]);
      n[i] = 0;
    };
    rec(0, c);
    std::sort(P_.begin(), P_.end());
    for (size_t i = 0; i < P_.size(); ++i) index_[P_[i]] = static_cast<int>(i);
    const int np = size();
    N_.assign(np, std::vector<std::vector<long>>(np, std::vector<long>(np, 0)));
    for (int b = 0; b < np; ++b) {
      auto mult = weight_multiplicities(P_[b]);
      for (int a = 0; a < np; ++a)
        for (auto& [w, k] : mult) {
          std::vector<long> x(r);
          for (int i = 0; i < r; ++i) x[i] = to_long(P_[a][i] + w[i]) + 1;
          int sign = fold(x);
          if (!sign) continue;
          WeightQ nu(r);
          for (int i = 0; i < r; ++i) nu[i] = Q(x[i] - 1);
          N_[a][b][index_.at(nu)] += sign * k;
        }
    }
    for (int a = 0; a < np; ++a) dual_.push_back(index(dual_of(P_[a])));
    for (auto& A : N_)
      for (auto& row : A)
        for (long v : row)
          if (v < 0) throw std::logic_error("negative fusion coefficient");
  }

  int size() const { return static_cast<int>(P_.size()); }
  const std::vector<WeightQ>& weights() const { return P_; }
  int index(const WeightQ& w) const {
    auto it = index_.find(w);
    if (it == index_.end()) throw std::invalid_argument("weight " + weight_str(w) + " is not of level <= " + std::to_string(c_));
    return it->second;
  }
  int dual(int a) const { return dual_[a]; }
  /// N_{ab}^d: multiplicity of V(d) in the level c fusion product V(a) * V(b).
  long N(int a, int b, int d) const { return N_[a][b][d]; }

  mpz_class blocks(int genus, const std::vector<int>& legs) const {
    if (genus < 0) throw std::invalid_argument("genus must be >= 0");
    const int np = size();
    using M = std::vector<std::vector<mpz_class>>;
    auto mul = [&](const M& A, const M& B) {
      M C(np, std::vector<mpz_class>(np, 0));
      for (int i = 0; i < np; ++i)
        for (int k = 0; k < np; ++k)
          if (A[i][k] != 0)
            for (int j = 0; j < np; ++j) C[i][j] += A[i][k] * B[k][j];
      return C;
    };
    auto fmat = [&](int a) {
      M F(np, std::vector<mpz_class>(np, 0));
      for (int i = 0; i < np; ++i)
        for (int j = 0; j < np; ++j) F[i][j] = N_[a][i][j];
      return F;
    };
    M acc(np, std::vector<mpz_class>(np, 0));
    for (int i = 0; i < np; ++i) acc[i][i] = 1;
    for (int a : legs) acc = mul(acc, fmat(a));
    if (genus > 0) {
      M H(np, std::vector<mpz_class>(np, 0));
      for (int mu = 0; mu < np; ++mu) {
        M t = mul(fmat(mu), fmat(dual_[mu]));
        for (int i = 0; i < np; ++i)
          for (int j = 0; j < np; ++j) H[i][j] += t[i][j];
      }
      for (int k = 0; k < genus; ++k) acc = mul(acc, H);
    }
    int z = index(WeightQ(g_->rank, Q(0)));
    return acc[z][z];
  }

 private:
  std::map<WeightQ, long> weight_multiplicities(const WeightQ& lambda) const {
    CartanDatum cd;
    cd.w = g_->rank;
    for (int i = 0; i < g_->rank; ++i) {
      WeightQ a(g_->rank), h(g_->rank, Q(0));
      for (int j = 0; j < g_->rank; ++j) a[j] = Q(g_->cartan[i][j]);
      h[i] = 1;
      cd.alpha.push_back(a);
      cd.coroot.push_back(h);
    }
    auto R = build_irrep(cd, lambda);
    std::map<WeightQ, long> m;
    for (auto& w : R.weight) ++m[w];
    return m;
  }
  // x = lambda + rho in Dynkin labels; folds into the open alcove of level c + h^vee.
  // Returns the sign of the Weyl element used, or 0 on a wall.
  int fold(std::vector<long>& x) const {
    const int r = g_->rank;
    const long kk = c_ + g_->dual_coxeter;
    int sign = 1;
    for (int guard = 0; guard < 100000; ++guard) {
      bool moved = false;
      for (int i = 0; i < r; ++i) {
        if (x[i] == 0) return 0;
        if (x[i] < 0) {
          long xi = x[i];
          for (int j = 0; j < r; ++j) x[j] -= xi * g_->cartan[i][j];
          sign = -sign;
          moved = true;
        }
      }
      if (moved) continue;
      long lev = 0;
      for (int i = 0; i < r; ++i) lev += comark_[i] * x[i];
      if (lev == kk) return 0;
      if (lev < kk) return sign;
      for (int j = 0; j < r; ++j) x[j] -= (lev - kk) * theta_[j];
      sign = -sign;
    }
    throw std::logic_error("affine Weyl folding did not terminate");
  }
  WeightQ dual_of(const WeightQ& mu) const {
    std::vector<long> x(g_->rank);
    for (int i = 0; i < g_->rank; ++i) x[i] = -to_long(mu[i]);
    for (bool moved = true; moved;) {
      moved = false;
      for (int i = 0; i < g_->rank; ++i)
        if (x[i] < 0) {
          long xi = x[i];
          for (int j = 0; j < g_->rank; ++j) x[j] -= xi * g_->cartan[i][j];
          moved = true;
        }
    }
    WeightQ w(g_->rank);
    for (int i = 0; i < g_->rank; ++i) w[i] = Q(x[i]);
    return w;
  }

  const SimpleLieAlgebra* g_;
  long c_;
  std::vector<long> comark_, theta_;
  std::vector<WeightQ> P_;
  std::map<WeightQ, int> index_;
  std::vector<std::vector<std::vector<long>>> N_;
  std::vector<int> dual_;
};

inline mpz_class verlinde_untwisted(const SimpleLieAlgebra& g, long c, int genus, const std::vector<WeightQ>& weights) {
  UntwistedFusion F(g, c);
  std::vector<int> legs;
  for (auto& w : weights) legs.push_back(F.index(w));
  return F.blocks(genus, legs);
}

/// Fusion table entries for every Gamma-trivial trinion at level c.
inline void fill_untwisted(FusionTable& T, const UntwistedFusion& F, long c) {
  const int n = F.size();
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b)
      for (int d = b; d < n; ++d) {
        long v = F.N(a, b, F.dual(d));
        T.add(Trinion::make(c, {Leg{0, F.weights()[a]}, Leg{0, F.weights()[b]}, Leg{0, F.weights()[d]}}), v, "oracle");
      }
}

// ---------------------------------------------------------------- coinvariants

struct OraclePoint {
  int power = 0;
  WeightQ weight;
  Q position = 0;
  bool infinity = false;
};

struct CoinvariantReport {
  std::vector<long> dims;  // index = truncation degree
  bool stabilized = false;
  long value = -1;
  std::string note;
};

/// Gamma = Z/N acting on P^1 by z -> zeta z, zeta = exp(2 pi i/N), through
/// phi(gamma) on g. H(0) sits at the free orbit of p0; the marked points carry
/// finite modules V(lambda_i) of g^{Gamma_q}. The relations are
/// X.(w x v) for X = x[F], x a class-j eigenvector of phi(gamma) and
///   F(z) = sum_i zeta^{i(j+k)} (z - zeta^i p0)^{-k},   0 <= k,
/// the Gamma-average of x (z - p0)^{-k}. At truncation degree D every relation
/// with w of degree <= D - k is used; the reported number is the dimension of
/// the image of v0 x V(lambda) in the quotient, nonincreasing in D. Only the
/// total h^Gamma-weight 0 sector is assembled: the constant Cartan relations
/// kill every other sector.
template <class K>
CoinvariantReport coinvariants_bruteforce(const GroupAction<K>& G, long c, const std::vector<OraclePoint>& pts, int d_max,
                                          std::optional<Q> p0_opt = std::nullopt) {
  const int N = G.N;
  if (!has_roots_of_unity<K>(N)) throw std::invalid_argument("coinvariants: the base field lacks the N-th roots of unity");
  if (d_max < 1) throw std::invalid_argument("coinvariants: d_max must be >= 1");
  // point data
  int n0 = 0, ninf = 0;
  Q big(0);
  for (auto& q : pts) {
    if (q.infinity) {
      ++ninf;
      if (G.norm(q.power) != G.norm(-1 % N)) throw std::invalid_argument("coinvariants: the point at infinity has power N-1");
      continue;
    }
    if (is_zero(q.position)) {
      ++n0;
      if (G.norm(q.power) != G.norm(1)) throw std::invalid_argument("coinvariants: the point 0 has power 1");
    } else if (q.power != 0 && N > 1) {
      throw std::invalid_argument("coinvariants: points off 0 and infinity are unramified (power 0)");
    }
    Q a = abs(q.position);
    if (a > big) big = a;
  }
  if (n0 > 1 || ninf > 1) throw std::invalid_argument("coinvariants: 0 and infinity can carry one marking each");
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j) {
      if (pts[i].infinity || pts[j].infinity) continue;
      for (int e = 0; e < N; ++e)
        if (K(pts[i].position) == unity<K>(N, e) * K(pts[j].position))
          throw std::invalid_argument("coinvariants: two markings lie in one orbit");
    }
  Q p0 = p0_opt ? *p0_opt : big + 1;
  for (auto& q : pts)
    for (int e = 0; e < N && !q.infinity; ++e)
      if (K(q.position) == unity<K>(N, e) * K(p0)) throw std::invalid_argument("coinvariants: p0 lies on a marked orbit");

  const auto& g = *G.g;
  const auto& S1 = G.aut(1 % N);
  const auto& L1 = G.loop(1 % N);
  const auto& L0 = G.loop(0);
  const int D = g.dim();
  auto H = build_integrable_truncation(L0, WeightQ(L0.l, Q(0)), c, d_max);
  std::vector<GsigmaModule<K>> V;
  for (auto& q : pts) V.push_back(build_gsigma_module(G.loop(q.power), q.weight));
  const int np = static_cast<int>(pts.size());

  // grading by h^Gamma
  std::vector<Vec<K>> Hk;
  for (int k = 0; k < S1.l; ++k) Hk.push_back(S1.coroot[k]);
  const int nl = static_cast<int>(Hk.size());
  auto diag = [&](const SVec<K>& img, int b) -> Q {
    if (img.empty()) return Q(0);
    if (img.size() != 1 || img[0].first != b) throw std::logic_error("coinvariants: basis vector is not a weight vector");
    return rational_part(img[0].second);
  };
  // finite modules
  std::vector<std::vector<WeightQ>> vw(np);
  for (int i = 0; i < np; ++i) {
    const auto& Li = G.loop(pts[i].power);
    std::vector<Op<K>> hop;
    for (auto& h : Hk) hop.push_back(op_comb(V[i].act0, Li.coords(0, h), V[i].dim()));
    for (int b = 0; b < V[i].dim(); ++b) {
      WeightQ w(nl);
      for (int k = 0; k < nl; ++k) w[k] = diag(hop[k][b], b);
      vw[i].push_back(w);
    }
  }
  long nV = 1;
  for (auto& Vi : V) nV *= Vi.dim();
  if (nV > 200000) throw TruncationError("coinvariants: tensor product of finite modules is too large");
  std::vector<long> radix(np, 1);
  for (int i = np - 2; i >= 0; --i) radix[i] = radix[i + 1] * V[i + 1].dim();
  std::map<WeightQ, std::vector<long>> vby;
  for (long f = 0; f < nV; ++f) {
    WeightQ w(nl, Q(0));
    for (int i = 0; i < np; ++i) {
      int b = static_cast<int>((f / radix[i]) % V[i].dim());
      for (int k = 0; k < nl; ++k) w[k] += vw[i][b][k];
    }
    vby[w].push_back(f);
  }
  // H(0)
  std::vector<SVec<K>> hcoords;
  for (auto& h : Hk) hcoords.push_back(L0.coords(0, h));
  std::vector<std::vector<WeightQ>> hw(d_max + 1);
  for (int d = 0; d <= d_max; ++d)
    for (int p = 0; p < H.dim(d); ++p) {
      WeightQ w(nl);
      auto e = H.basis_vector(d, p);
      for (int k = 0; k < nl; ++k) w[k] = diag(H.act(0, hcoords[k], d, e), e[0].first);
      hw[d].push_back(w);
    }
  // generators x in the eigenbasis of phi(gamma)
  struct Gen {
    int cls;
    Vec<K> x;
    WeightQ wt;
    SVec<K> c0;                   // coordinates for the H(0) action
    std::vector<SVec<K>> cpt;     // coordinates at each marked point (empty if not needed)
  };
  std::vector<Gen> gens;
  for (int j = 0; j < L1.m; ++j)
    for (auto& x : L1.vec[j]) {
      Gen gn;
      gn.cls = j;
      gn.x = x;
      gn.wt.resize(nl);
      for (int k = 0; k < nl; ++k) {
        auto b = g.bracket(Hk[k], x);
        int piv = -1;
        for (int i = 0; i < D; ++i)
          if (!is_zero(x[i])) piv = i;
        gn.wt[k] = rational_part(b[piv] / x[piv]);
      }
      gn.c0 = L0.coords(0, x);
      gens.push_back(gn);
    }
  // scalar functions
  std::vector<K> z(N);
  for (int e = 0; e < N; ++e) z[e] = unity<K>(N, e);
  auto zpow = [&](long e) { return z[((e % N) + N) % N]; };
  auto kpow = [](K b, long e) {
    K r(1);
    if (e < 0) {
      b = K(1) / b;
      e = -e;
    }
    for (long i = 0; i < e; ++i) r *= b;
    return r;
  };
  // coefficient of t^n in F_{j,k} at p0, n >= -k
  auto coef = [&](int j, long k, long n) {
    K s(0);
    if (n == -k) s += K(1);
    if (n < 0) return s;
    Q bn(1);  // binom(-k, n)
    for (long i = 0; i < n; ++i) bn = bn * Q(-k - i) / Q(i + 1);
    for (int e = 1; e < N; ++e) s += zpow(long(e) * (j + k)) * K(bn) * kpow(K(p0) * (K(1) - z[e]), -k - n);
    return s;
  };
  auto value_at = [&](int j, long k, const OraclePoint& q) {
    K s(0);
    if (q.infinity) {
      if (k == 0)
        for (int e = 0; e < N; ++e) s += zpow(long(e) * j);
      return s;
    }
    for (int e = 0; e < N; ++e) s += zpow(long(e) * (j + k)) * kpow(K(q.position) - z[e] * K(p0), -k);
    return s;
  };

  // columns: H(0) basis (d,p) x V flat index f, weight sector 0; V0 = degree 0 at the top
  const int BIG = 1 << 30;
  std::map<std::tuple<int, int, long>, int> col;
  auto column = [&](int d, int p, long f) {
    if (d == 0) return BIG + static_cast<int>(f);
    auto key = std::make_tuple(d, p, f);
    auto it = col.find(key);
    if (it != col.end()) return it->second;
    int id = static_cast<int>(col.size());
    col.emplace(key, id);
    return id;
  };
  WeightQ zero(nl, Q(0));
  std::vector<long> v0;
  if (vby.count(zero)) v0 = vby[zero];

  Echelon<K> ech;
  CoinvariantReport rep;
  auto apply_point = [&](int i, const SVec<K>& xc, long f) {
    // x acting on tensor factor i of flat index f
    int b = static_cast<int>((f / radix[i]) % V[i].dim());
    Accum<K> acc;
    for (auto& [a, xa] : xc)
      for (auto& [b2, y] : V[i].act0[a][b]) acc.add(static_cast<int>(b2), xa * y);
    std::vector<std::pair<long, K>> out;
    for (auto& [b2, y] : acc.get()) out.emplace_back(f + (long(b2) - b) * radix[i], y);
    return out;
  };

  for (int Dg = 0; Dg <= d_max; ++Dg) {
    for (int k = 0; k <= Dg; ++k) {
      int dw = Dg - k;  // new source degree
      for (auto& gn : gens) {
        std::vector<K> fq(np);
        std::vector<SVec<K>> xq(np);
        for (int i = 0; i < np; ++i) {
          fq[i] = value_at(gn.cls, k, pts[i]);
          if (!is_zero(fq[i])) xq[i] = G.loop(pts[i].power).coords(0, gn.x);
        }
        std::vector<std::pair<long, K>> modes;
        for (long n = -k; n <= dw; ++n) {
          K cf = coef(gn.cls, k, n);
          if (!is_zero(cf)) modes.emplace_back(n, cf);
        }
        for (int p = 0; p < H.dim(dw); ++p) {
          WeightQ need(nl);
          for (int t = 0; t < nl; ++t) need[t] = -gn.wt[t] - hw[dw][p][t];
          auto it = vby.find(need);
          if (it == vby.end()) continue;
          auto e = H.basis_vector(dw, p);
          std::vector<std::pair<int, SVec<K>>> himg;  // (degree, vector)
          for (auto& [n, cf] : modes) {
            auto img = H.act(n, gn.c0, dw, e);
            if (img.empty()) continue;
            scale(img, cf);
            himg.emplace_back(static_cast<int>(dw - n), std::move(img));
          }
          for (long f : it->second) {
            Accum<K> row;
            for (auto& [dd, img] : himg)
              for (auto& [mono, y] : img) row.add(column(dd, H.hpos(dd, mono), f), y);
            for (int i = 0; i < np; ++i) {
              if (is_zero(fq[i])) continue;
              for (auto& [f2, y] : apply_point(i, xq[i], f)) row.add(column(dw, p, f2), fq[i] * y);
            }
            auto r = row.get();
            if (!r.empty()) ech.add(r);
          }
        }
      }
    }
    long killed = 0;
    for (long f : v0)
      if (ech.is_pivot(BIG + static_cast<int>(f))) ++killed;
    rep.dims.push_back(static_cast<long>(v0.size()) - killed);
  }
  size_t n = rep.dims.size();
  if (n >= 2 && rep.dims[n - 1] == rep.dims[n - 2]) {
    rep.stabilized = true;
    rep.value = rep.dims.back();
  } else {
    rep.note = "not stabilized within d_max = " + std::to_string(d_max);
  }
  return rep;
}

/// Places a genus-0 problem on P^1 with z -> zeta z: a power-1 leg at 0, a
/// power-(N-1) leg at infinity, unramified legs at 1, 2, 3, ...
inline std::vector<OraclePoint> place_on_p1(int N, const std::vector<Leg>& legs) {
  std::vector<OraclePoint> out;
  int next = 1;
  bool used0 = false, usedinf = false;
  for (auto& l : legs) {
    OraclePoint q;
    q.power = ((l.power % N) + N) % N;
    q.weight = l.weight;
    if (N > 1 && q.power == 1 % N && !used0) {
      q.position = 0;
      used0 = true;
    } else if (N > 1 && q.power == N - 1 && !usedinf) {
      q.infinity = true;
      usedinf = true;
    } else if (q.power == 0) {
      q.position = next++;
    } else {
      throw std::invalid_argument("place_on_p1: the legs do not describe a cover P^1 -> P^1 by z -> zeta z");
    }
    out.push_back(q);
  }
  int nram = used0 + usedinf;
  if (N > 1 && nram != 2)
    throw std::invalid_argument("place_on_p1: a cyclic cover of P^1 by P^1 has both 0 and infinity ramified");
  return out;
}

struct OracleFill {
  Trinion t;
  CoinvariantReport rep;
};

/// Fills missing leaves by brute-force coinvariants. Unramified trinions are
/// blocks on N disjoint copies of P^1; with plain_by_fusion they are read off
/// the untwisted fusion rules, otherwise computed with trivial Gamma. Leaves
/// whose run does not stabilize stay missing.
template <class K>
std::vector<OracleFill> fill_from_oracle(FusionTable& T, const GroupAction<K>& G, const std::vector<Trinion>& leaves, int d_max,
                                         bool plain_by_fusion = true) {
  std::vector<OracleFill> out;
  std::unique_ptr<GroupAction<K>> trivial;
  std::map<long, UntwistedFusion> fusion;
  for (auto& t : leaves) {
    if (T.find(t)) continue;
    std::vector<Leg> legs(t.legs.begin(), t.legs.end());
    bool plain = std::all_of(legs.begin(), legs.end(), [](const Leg& l) { return l.power == 0; });
    OracleFill f{t, {}};
    if (plain && plain_by_fusion) {
      auto it = fusion.try_emplace(t.level, *G.g, t.level).first;
      const auto& U = it->second;
      f.rep.stabilized = true;
      f.rep.value = U.N(U.index(legs[0].weight), U.index(legs[1].weight), U.dual(U.index(legs[2].weight)));
      f.rep.note = "fusion rules";
      T.add(t, f.rep.value, "fusion");
      out.push_back(f);
      continue;
    }
    if (plain) {
      if (!trivial) trivial = std::make_unique<GroupAction<K>>(*G.g, 1, std::vector<AutDescriptor>{});
      f.rep = coinvariants_bruteforce(*trivial, t.level, place_on_p1(1, legs), d_max);
    } else {
      f.rep = coinvariants_bruteforce(G, t.level, place_on_p1(G.N, legs), d_max);
    }
    if (f.rep.stabilized) T.add(t, f.rep.value, "oracle");
    out.push_back(f);
  }
  return out;
}

}  // namespace tkm
