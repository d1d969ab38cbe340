#pragma once
// Finite-dimensional irreducible highest weight modules of a reductive Lie
// algebra given only by its simple roots and coroots.
//
// Level l of the module is spanned by F_j w for w on level l-1. A vector on a
// level l >= 1 vanishes iff every E_i kills it, so F_j w is represented by the
// tuple (E_i F_j w)_i = (F_j E_i w + delta_ij <wt w, h_i> w)_i, which only
// involves lower levels.

#include "linalg.hpp"

#include <map>
#include <stdexcept>

namespace tkm {

using WeightQ = std::vector<Q>;

struct CartanDatum {
  int w = 0;                            // dimension of weight coordinates
  std::vector<WeightQ> alpha;           // simple roots
  std::vector<WeightQ> coroot;          // h_i(mu) = sum_k coroot[i][k] mu[k]
  int rank() const { return static_cast<int>(alpha.size()); }
  Q pair(const WeightQ& mu, int i) const {
    Q s(0);
    for (int k = 0; k < w; ++k) s += coroot[i][k] * mu[k];
    return s;
  }
};

struct Irrep {
  std::vector<WeightQ> weight;
  std::vector<int> level;
  std::vector<std::pair<int, int>> origin;  // basis vector b = F_j w, recorded as (j, w)
  std::vector<std::vector<SVec<Q>>> E, F;  // E[i][b] = E_i applied to basis vector b
  int dim() const { return static_cast<int>(weight.size()); }
};

inline SVec<Q> apply_op(const std::vector<SVec<Q>>& op, const SVec<Q>& v) {
  Accum<Q> acc;
  for (auto& [b, x] : v) acc.add(op[b], x);
  return acc.get();
}

inline Irrep build_irrep(const CartanDatum& cd, const WeightQ& lambda, int max_dim = 20000) {
  const int l = cd.rank();
  for (int i = 0; i < l; ++i) {
    Q p = cd.pair(lambda, i);
    if (!is_integer(p) || sgn(p) < 0)
      throw std::invalid_argument("highest weight not dominant integral at simple root " + std::to_string(i));
  }
  Irrep R;
  R.weight.push_back(lambda);
  R.level.push_back(0);
  R.origin.emplace_back(-1, -1);
  R.E.assign(l, std::vector<SVec<Q>>(1));
  R.F.assign(l, std::vector<SVec<Q>>(1));
  std::vector<int> prev{0};
  for (int lev = 1;; ++lev) {
    std::map<WeightQ, std::vector<std::pair<int, int>>> groups;
    for (int w : prev)
      for (int j = 0; j < l; ++j) {
        WeightQ nu = R.weight[w];
        for (int k = 0; k < cd.w; ++k) nu[k] -= cd.alpha[j][k];
        groups[nu].emplace_back(j, w);
      }
    std::vector<int> cur;
    for (auto& [nu, cands] : groups) {
      std::vector<SVec<Q>> sigs;
      for (auto [j, w] : cands) {
        Accum<Q> acc;
        for (int i = 0; i < l; ++i) {
          SVec<Q> t = apply_op(R.F[j], R.E[i][w]);
          if (i == j) t = axpy(t, cd.pair(R.weight[w], i), SVec<Q>{{w, Q(1)}});
          for (auto& [b, x] : t) acc.add(b * l + i, x);
        }
        sigs.push_back(acc.get());
      }
      Echelon<Q> ech;
      std::vector<int> chosen;  // candidate positions
      std::vector<int> newid(cands.size(), -1);
      for (size_t c = 0; c < cands.size(); ++c)
        if (ech.add(sigs[c])) {
          chosen.push_back(static_cast<int>(c));
          newid[c] = R.dim();
          R.weight.push_back(nu);
          R.level.push_back(lev);
          R.origin.push_back(cands[c]);
          cur.push_back(newid[c]);
          for (int i = 0; i < l; ++i) {
            R.E[i].emplace_back();
            R.F[i].emplace_back();
          }
          for (auto& [key, x] : sigs[c]) R.E[key % l][newid[c]].emplace_back(key / l, x);
        }
      if (R.dim() > max_dim) throw std::runtime_error("irrep dimension exceeds cap");
      // coordinates of dependent candidates in the chosen basis
      std::map<int, int> rowof;
      for (int c : chosen)
        for (auto& e : sigs[c]) rowof.emplace(e.first, 0);
      int nr = 0;
      for (auto& e : rowof) e.second = nr++;
      Mat<Q> A(nr, static_cast<int>(chosen.size()));
      for (size_t k = 0; k < chosen.size(); ++k)
        for (auto& [key, x] : sigs[chosen[k]]) A(rowof[key], static_cast<int>(k)) = x;
      for (size_t c = 0; c < cands.size(); ++c) {
        auto [j, w] = cands[c];
        if (newid[c] >= 0) {
          R.F[j][w] = {{newid[c], Q(1)}};
          continue;
        }
        if (sigs[c].empty() || chosen.empty()) {
          R.F[j][w].clear();
          continue;
        }
        std::vector<Q> b(nr, Q(0));
        for (auto& [key, x] : sigs[c]) b[rowof.at(key)] = x;
        auto coef = solve(A, b);
        SVec<Q> img;
        for (size_t k = 0; k < chosen.size(); ++k)
          if (!is_zero(coef[k])) img.emplace_back(newid[chosen[k]], coef[k]);
        normalize(img);
        R.F[j][w] = img;
      }
    }
    if (cur.empty()) break;
    prev = std::move(cur);
  }
  return R;
}

}  // namespace tkm
