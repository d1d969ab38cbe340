#pragma once
// Exact sparse vectors, dense matrices and incremental row echelon forms.

#include "scalar.hpp"

#include <algorithm>
#include <cassert>
#include <unordered_map>
#include <utility>
#include <vector>

namespace tkm {

template <class K>
using SVec = std::vector<std::pair<int, K>>;  // sorted by index, no zeros

template <class K>
void normalize(SVec<K>& v) {
  std::sort(v.begin(), v.end(), [](auto& a, auto& b) { return a.first < b.first; });
  SVec<K> out;
  out.reserve(v.size());
  for (auto& [i, x] : v) {
    if (!out.empty() && out.back().first == i)
      out.back().second += x;
    else
      out.emplace_back(i, std::move(x));
    if (is_zero(out.back().second)) out.pop_back();
  }
  v = std::move(out);
}

/// y + a*x
template <class K>
SVec<K> axpy(const SVec<K>& y, const K& a, const SVec<K>& x) {
  if (is_zero(a)) return y;
  SVec<K> out;
  out.reserve(y.size() + x.size());
  size_t i = 0, j = 0;
  while (i < y.size() || j < x.size()) {
    if (j == x.size() || (i < y.size() && y[i].first < x[j].first)) {
      out.push_back(y[i++]);
    } else if (i == y.size() || x[j].first < y[i].first) {
      out.emplace_back(x[j].first, a * x[j].second);
      ++j;
    } else {
      K s = y[i].second + a * x[j].second;
      if (!is_zero(s)) out.emplace_back(y[i].first, std::move(s));
      ++i, ++j;
    }
  }
  return out;
}

template <class K>
void scale(SVec<K>& v, const K& a) {
  if (is_zero(a)) {
    v.clear();
    return;
  }
  for (auto& e : v) e.second *= a;
}

template <class K>
K coeff(const SVec<K>& v, int i) {
  auto it = std::lower_bound(v.begin(), v.end(), i, [](auto& e, int k) { return e.first < k; });
  if (it != v.end() && it->first == i) return it->second;
  return K(0);
}

/// Accumulates many scaled sparse vectors; cheaper than repeated axpy.
template <class K>
struct Accum {
  std::unordered_map<int, K> m;
  void add(int i, const K& x) {
    if (is_zero(x)) return;
    auto [it, fresh] = m.try_emplace(i, x);
    if (!fresh) it->second += x;
  }
  void add(const SVec<K>& v, const K& a) {
    if (is_zero(a)) return;
    for (auto& [i, x] : v) add(i, a * x);
  }
  SVec<K> get() const {
    SVec<K> out;
    out.reserve(m.size());
    for (auto& [i, x] : m)
      if (!is_zero(x)) out.emplace_back(i, x);
    std::sort(out.begin(), out.end(), [](auto& a, auto& b) { return a.first < b.first; });
    return out;
  }
};

/// Incremental reduced row echelon form. Pivot of a row is its first index.
/// Rows are kept fully reduced, so reduce() yields a canonical normal form
/// supported on non-pivot columns.
template <class K>
class Echelon {
 public:
  size_t rank() const { return rows_.size(); }
  bool is_pivot(int col) const { return piv_.count(col) != 0; }
  const std::vector<SVec<K>>& rows() const { return rows_; }

  SVec<K> reduce(const SVec<K>& v) const {
    Accum<K> acc;
    bool hit = false;
    for (auto& [i, x] : v) {
      auto it = piv_.find(i);
      if (it == piv_.end()) {
        acc.add(i, x);
      } else {
        hit = true;
        // row has 1 at pivot i; subtract x*row, pivot cancels
        for (auto& [j, y] : rows_[it->second])
          if (j != i) acc.add(j, -x * y);
      }
    }
    if (!hit) return v;
    return acc.get();
  }

  /// Adds v to the span. Returns false if it was already in the span.
  bool add(const SVec<K>& v) {
    SVec<K> r = reduce(v);
    if (r.empty()) return false;
    int p = r.front().first;
    K inv = K(1) / r.front().second;
    scale(r, inv);
    for (auto& row : rows_) {
      K x = coeff(row, p);
      if (!is_zero(x)) row = axpy(row, K(-x), r);
    }
    piv_[p] = static_cast<int>(rows_.size());
    rows_.push_back(std::move(r));
    return true;
  }

 private:
  std::vector<SVec<K>> rows_;
  std::unordered_map<int, int> piv_;
};

template <class K>
struct Mat {
  int r = 0, c = 0;
  std::vector<K> a;
  Mat() = default;
  Mat(int rows, int cols) : r(rows), c(cols), a(size_t(rows) * cols, K(0)) {}
  K& operator()(int i, int j) { return a[size_t(i) * c + j]; }
  const K& operator()(int i, int j) const { return a[size_t(i) * c + j]; }
  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = K(1);
    return m;
  }
  bool operator==(const Mat& o) const { return r == o.r && c == o.c && a == o.a; }
  bool is_zero_matrix() const {
    for (auto& x : a)
      if (!tkm::is_zero(x)) return false;
    return true;
  }
};

template <class K>
Mat<K> operator*(const Mat<K>& x, const Mat<K>& y) {
  assert(x.c == y.r);
  Mat<K> z(x.r, y.c);
  for (int i = 0; i < x.r; ++i)
    for (int k = 0; k < x.c; ++k) {
      const K& v = x(i, k);
      if (is_zero(v)) continue;
      for (int j = 0; j < y.c; ++j)
        if (!is_zero(y(k, j))) z(i, j) += v * y(k, j);
    }
  return z;
}
template <class K>
Mat<K> operator+(Mat<K> x, const Mat<K>& y) {
  for (size_t i = 0; i < x.a.size(); ++i) x.a[i] += y.a[i];
  return x;
}
template <class K>
Mat<K> operator-(Mat<K> x, const Mat<K>& y) {
  for (size_t i = 0; i < x.a.size(); ++i) x.a[i] -= y.a[i];
  return x;
}
template <class K>
Mat<K> scaled(Mat<K> x, const K& s) {
  for (auto& v : x.a) v *= s;
  return x;
}
template <class K>
Mat<K> transpose(const Mat<K>& x) {
  Mat<K> t(x.c, x.r);
  for (int i = 0; i < x.r; ++i)
    for (int j = 0; j < x.c; ++j) t(j, i) = x(i, j);
  return t;
}

/// In-place reduced row echelon form; returns pivot columns.
template <class K>
std::vector<int> rref(Mat<K>& m) {
  std::vector<int> piv;
  int row = 0;
  for (int col = 0; col < m.c && row < m.r; ++col) {
    int p = -1;
    for (int i = row; i < m.r; ++i)
      if (!is_zero(m(i, col))) {
        p = i;
        break;
      }
    if (p < 0) continue;
    if (p != row)
      for (int j = 0; j < m.c; ++j) std::swap(m(p, j), m(row, j));
    K inv = K(1) / m(row, col);
    for (int j = col; j < m.c; ++j) m(row, j) *= inv;
    for (int i = 0; i < m.r; ++i) {
      if (i == row || is_zero(m(i, col))) continue;
      K f = m(i, col);
      for (int j = col; j < m.c; ++j)
        if (!is_zero(m(row, j))) m(i, j) -= f * m(row, j);
    }
    piv.push_back(col);
    ++row;
  }
  return piv;
}

template <class K>
int rank(Mat<K> m) {
  return static_cast<int>(rref(m).size());
}

/// Inverse of a square matrix; throws if singular.
template <class K>
Mat<K> inverse(const Mat<K>& m) {
  int n = m.r;
  if (m.c != n) throw std::invalid_argument("inverse: not square");
  if (n == 0) return Mat<K>();
  Mat<K> aug(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = K(1);
  }
  auto piv = rref(aug);
  if (static_cast<int>(piv.size()) < n || piv[n - 1] != n - 1) throw std::domain_error("inverse: singular matrix");
  Mat<K> inv(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

/// Basis of {x : m x = 0}, as columns of the result.
template <class K>
Mat<K> nullspace(Mat<K> m) {
  auto piv = rref(m);
  std::vector<char> is_piv(m.c, 0);
  for (int p : piv) is_piv[p] = 1;
  std::vector<int> free;
  for (int j = 0; j < m.c; ++j)
    if (!is_piv[j]) free.push_back(j);
  Mat<K> ns(m.c, static_cast<int>(free.size()));
  for (size_t f = 0; f < free.size(); ++f) {
    ns(free[f], static_cast<int>(f)) = K(1);
    for (size_t i = 0; i < piv.size(); ++i) ns(piv[i], static_cast<int>(f)) = -m(static_cast<int>(i), free[f]);
  }
  return ns;
}

/// Some x with m x = b; throws if inconsistent.
template <class K>
std::vector<K> solve(const Mat<K>& m, const std::vector<K>& b) {
  Mat<K> aug(m.r, m.c + 1);
  for (int i = 0; i < m.r; ++i) {
    for (int j = 0; j < m.c; ++j) aug(i, j) = m(i, j);
    aug(i, m.c) = b[i];
  }
  auto piv = rref(aug);
  std::vector<K> x(m.c, K(0));
  for (size_t i = 0; i < piv.size(); ++i) {
    if (piv[i] == m.c) throw std::domain_error("solve: inconsistent system");
    x[piv[i]] = aug(static_cast<int>(i), m.c);
  }
  return x;
}

}  // namespace tkm
