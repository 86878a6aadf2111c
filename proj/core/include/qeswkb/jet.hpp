#pragma once

// Truncated Taylor arithmetic. A Jet carries f(x0), f'(x0), ..., f^(K)(x0)
// as Taylor coefficients c_k = f^(k)(x0) / k!, so every derivative used by
// the residual and intertwining checks is exact up to rounding.

#include <array>
#include <cmath>
#include <cstddef>

namespace qeswkb {

template <std::size_t K>
class TaylorJet {
 public:
  static constexpr std::size_t order = K;

  constexpr TaylorJet() = default;
  constexpr explicit TaylorJet(double constant) { c_[0] = constant; }

  static constexpr TaylorJet variable(double x0) {
    TaylorJet j(x0);
    if constexpr (K >= 1) j.c_[1] = 1.0;
    return j;
  }

  static constexpr TaylorJet from_coefficients(const std::array<double, K + 1>& c) {
    TaylorJet j;
    j.c_ = c;
    return j;
  }

  constexpr double value() const { return c_[0]; }
  constexpr double coefficient(std::size_t k) const { return c_[k]; }
  constexpr double& coefficient(std::size_t k) { return c_[k]; }

  // k-th derivative at the expansion point.
  constexpr double derivative(std::size_t k) const {
    double f = 1.0;
    for (std::size_t i = 2; i <= k; ++i) f *= static_cast<double>(i);
    return c_[k] * f;
  }

  // d/dx of the series; the top coefficient is lost.
  constexpr TaylorJet differentiated() const {
    TaylorJet d;
    for (std::size_t k = 0; k < K; ++k) d.c_[k] = static_cast<double>(k + 1) * c_[k + 1];
    return d;
  }

  // Drops coefficients above order J.
  template <std::size_t J>
  constexpr TaylorJet<J> truncated() const {
    static_assert(J <= K);
    std::array<double, J + 1> c{};
    for (std::size_t k = 0; k <= J; ++k) c[k] = c_[k];
    return TaylorJet<J>::from_coefficients(c);
  }

  constexpr TaylorJet& operator+=(const TaylorJet& o) {
    for (std::size_t k = 0; k <= K; ++k) c_[k] += o.c_[k];
    return *this;
  }
  constexpr TaylorJet& operator-=(const TaylorJet& o) {
    for (std::size_t k = 0; k <= K; ++k) c_[k] -= o.c_[k];
    return *this;
  }
  constexpr TaylorJet& operator*=(double s) {
    for (auto& c : c_) c *= s;
    return *this;
  }
  constexpr TaylorJet& operator+=(double s) {
    c_[0] += s;
    return *this;
  }

  friend constexpr TaylorJet operator+(TaylorJet a, const TaylorJet& b) { return a += b; }
  friend constexpr TaylorJet operator-(TaylorJet a, const TaylorJet& b) { return a -= b; }
  friend constexpr TaylorJet operator-(TaylorJet a) { return a *= -1.0; }
  friend constexpr TaylorJet operator*(TaylorJet a, double s) { return a *= s; }
  friend constexpr TaylorJet operator*(double s, TaylorJet a) { return a *= s; }
  friend constexpr TaylorJet operator+(TaylorJet a, double s) { return a += s; }
  friend constexpr TaylorJet operator+(double s, TaylorJet a) { return a += s; }
  friend constexpr TaylorJet operator-(TaylorJet a, double s) { return a += -s; }
  friend constexpr TaylorJet operator-(double s, const TaylorJet& a) { return -a + s; }

  friend constexpr TaylorJet operator*(const TaylorJet& a, const TaylorJet& b) {
    TaylorJet r;
    for (std::size_t k = 0; k <= K; ++k) {
      double s = 0.0;
      for (std::size_t j = 0; j <= k; ++j) s += a.c_[j] * b.c_[k - j];
      r.c_[k] = s;
    }
    return r;
  }

  friend constexpr TaylorJet operator/(const TaylorJet& a, const TaylorJet& b) {
    TaylorJet q;
    for (std::size_t k = 0; k <= K; ++k) {
      double s = a.c_[k];
      for (std::size_t j = 1; j <= k; ++j) s -= b.c_[j] * q.c_[k - j];
      q.c_[k] = s / b.c_[0];
    }
    return q;
  }

  friend TaylorJet exp(const TaylorJet& a) {
    TaylorJet e;
    e.c_[0] = std::exp(a.c_[0]);
    for (std::size_t k = 1; k <= K; ++k) {
      double s = 0.0;
      for (std::size_t j = 1; j <= k; ++j) s += static_cast<double>(j) * a.c_[j] * e.c_[k - j];
      e.c_[k] = s / static_cast<double>(k);
    }
    return e;
  }

  // Requires a.value() > 0.
  friend TaylorJet log(const TaylorJet& a) {
    TaylorJet l;
    l.c_[0] = std::log(a.c_[0]);
    for (std::size_t k = 1; k <= K; ++k) {
      double s = 0.0;
      for (std::size_t j = 1; j < k; ++j) s += static_cast<double>(j) * l.c_[j] * a.c_[k - j];
      l.c_[k] = (a.c_[k] - s / static_cast<double>(k)) / a.c_[0];
    }
    return l;
  }

 private:
  std::array<double, K + 1> c_{};
};

// Fourth order covers psi'' of a gauge-rotated state and phi'' of its
// first-order SUSY image.
using Jet = TaylorJet<4>;

}  // namespace qeswkb
