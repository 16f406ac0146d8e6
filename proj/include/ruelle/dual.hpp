#pragma once

#include <cmath>
#include <complex>

namespace ruelle {

/// Forward-mode dual number val + eps·ε with ε² = 0. Used to differentiate
/// user-supplied holomorphic maps written as generic lambdas.
template <class T>
struct Dual {
  T val{};
  T eps{};

  constexpr Dual() = default;
  constexpr Dual(T v) : val(v) {}  // NOLINT: implicit lift of constants
  constexpr Dual(T v, T e) : val(v), eps(e) {}
  template <class U>
    requires std::is_arithmetic_v<U>
  constexpr Dual(U v) : val(T(v)) {}  // NOLINT

  Dual& operator+=(const Dual& o) { val += o.val; eps += o.eps; return *this; }
  Dual& operator-=(const Dual& o) { val -= o.val; eps -= o.eps; return *this; }
  Dual& operator*=(const Dual& o) { *this = *this * o; return *this; }
  Dual& operator/=(const Dual& o) { *this = *this / o; return *this; }

  friend Dual operator+(const Dual& a, const Dual& b) { return {a.val + b.val, a.eps + b.eps}; }
  friend Dual operator-(const Dual& a, const Dual& b) { return {a.val - b.val, a.eps - b.eps}; }
  friend Dual operator-(const Dual& a) { return {-a.val, -a.eps}; }
  friend Dual operator*(const Dual& a, const Dual& b) {
    return {a.val * b.val, a.eps * b.val + a.val * b.eps};
  }
  friend Dual operator/(const Dual& a, const Dual& b) {
    T inv = T(1) / b.val;
    return {a.val * inv, (a.eps * b.val - a.val * b.eps) * inv * inv};
  }
};

template <class T> Dual<T> exp(const Dual<T>& a) { using std::exp; T e = exp(a.val); return {e, e * a.eps}; }
template <class T> Dual<T> log(const Dual<T>& a) { using std::log; return {log(a.val), a.eps / a.val}; }
template <class T> Dual<T> sqrt(const Dual<T>& a) {
  using std::sqrt;
  T s = sqrt(a.val);
  return {s, a.eps / (T(2) * s)};
}
template <class T> Dual<T> sin(const Dual<T>& a) { using std::sin, std::cos; return {sin(a.val), cos(a.val) * a.eps}; }
template <class T> Dual<T> cos(const Dual<T>& a) { using std::sin, std::cos; return {cos(a.val), -sin(a.val) * a.eps}; }
template <class T> Dual<T> pow(const Dual<T>& a, double p) {
  using std::pow;
  return {pow(a.val, p), T(p) * pow(a.val, p - 1.0) * a.eps};
}
template <class T> Dual<T> pow(const Dual<T>& a, int p) {
  if (p == 0) return Dual<T>(T(1));
  Dual<T> base = p > 0 ? a : Dual<T>(T(1)) / a;
  Dual<T> out(T(1));
  for (int k = 0, n = p > 0 ? p : -p; k < n; ++k) out *= base;
  return out;
}

}  // namespace ruelle
