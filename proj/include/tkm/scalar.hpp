#pragma once
// Exact scalar fields: Q and Q(omega), omega a primitive cube root of unity.

#include <gmpxx.h>

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace tkm {

using Q = mpq_class;

inline Q qfrac(long p, long q = 1) {
  Q x(p, q);
  x.canonicalize();
  return x;
}

inline bool is_zero(const Q& x) { return sgn(x) == 0; }
inline std::string to_str(const Q& x) { return x.get_str(); }
inline bool is_integer(const Q& x) { return x.get_den() == 1; }

inline long to_long(const Q& x) {
  if (!is_integer(x)) throw std::domain_error("not an integer: " + to_str(x));
  return x.get_num().get_si();
}

/// a + b*w with w^2 = -1 - w.
struct QOmega {
  Q a, b;
  QOmega() : a(0), b(0) {}
  QOmega(long v) : a(v), b(0) {}
  QOmega(const Q& v) : a(v), b(0) {}
  QOmega(Q x, Q y) : a(std::move(x)), b(std::move(y)) {}

  static QOmega omega() { return {Q(0), Q(1)}; }

  QOmega& operator+=(const QOmega& o) { a += o.a; b += o.b; return *this; }
  QOmega& operator-=(const QOmega& o) { a -= o.a; b -= o.b; return *this; }
  QOmega& operator*=(const QOmega& o) {
    Q bd = b * o.b;
    Q na = a * o.a - bd;
    Q nb = a * o.b + b * o.a - bd;
    a = std::move(na);
    b = std::move(nb);
    return *this;
  }
  QOmega& operator/=(const QOmega& o) { return *this *= o.inverse(); }

  QOmega inverse() const {
    Q n = a * a - a * b + b * b;
    if (sgn(n) == 0) throw std::domain_error("QOmega: division by zero");
    return {(a - b) / n, -b / n};
  }
  QOmega operator-() const { return {-a, -b}; }
  bool operator==(const QOmega& o) const { return a == o.a && b == o.b; }
  bool operator!=(const QOmega& o) const { return !(*this == o); }
};

inline QOmega operator+(QOmega x, const QOmega& y) { return x += y; }
inline QOmega operator-(QOmega x, const QOmega& y) { return x -= y; }
inline QOmega operator*(QOmega x, const QOmega& y) { return x *= y; }
inline QOmega operator/(QOmega x, const QOmega& y) { return x /= y; }

inline bool is_zero(const QOmega& x) { return sgn(x.a) == 0 && sgn(x.b) == 0; }
inline std::string to_str(const QOmega& x) {
  if (sgn(x.b) == 0) return x.a.get_str();
  std::string s;
  if (sgn(x.a) != 0) s = x.a.get_str() + (sgn(x.b) > 0 ? "+" : "");
  return s + x.b.get_str() + "w";
}
inline bool is_rational(const QOmega& x) { return sgn(x.b) == 0; }
inline bool is_rational(const Q&) { return true; }
inline Q rational_part(const QOmega& x) {
  if (sgn(x.b) != 0) throw std::domain_error("irrational value " + to_str(x));
  return x.a;
}
inline Q rational_part(const Q& x) { return x; }

/// zeta_n^k = exp(2 pi i k / n) inside K, when representable.
template <class K>
K unity(long n, long k);

template <>
inline Q unity<Q>(long n, long k) {
  long kk = ((k % n) + n) % n;
  if (kk == 0) return Q(1);
  if (2 * kk == n) return Q(-1);
  throw std::domain_error("root of unity of order " + std::to_string(n / std::gcd(n, kk)) +
                          " not in Q");
}

template <>
inline QOmega unity<QOmega>(long n, long k) {
  long kk = ((k % n) + n) % n;
  long g = std::gcd(n, kk);
  long ord = n / g, e = kk / g;
  if (kk == 0) return QOmega(1);
  // zeta_6 = 1 + w
  if (6 % ord != 0) throw std::domain_error("root of unity of order " + std::to_string(ord) + " not in Q(w)");
  long six = e * (6 / ord);
  QOmega z(Q(1), Q(1)), r(1);
  for (long i = 0; i < six; ++i) r *= z;
  return r;
}

/// Whether every n-th root of unity lies in K.
template <class K>
inline bool has_roots_of_unity(long n);
template <>
inline bool has_roots_of_unity<Q>(long n) { return n == 1 || n == 2; }
template <>
inline bool has_roots_of_unity<QOmega>(long n) { return 6 % n == 0; }

}  // namespace tkm
