#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "qeswkb/jet.hpp"

namespace qeswkb {

// Dense real polynomial, coefficients stored in ascending powers.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(std::initializer_list<double> coeffs) : c_(coeffs) { trim(); }
  explicit Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Polynomial monomial(int k, double scale = 1.0);

  // -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  std::span<const double> coefficients() const { return c_; }
  double coefficient(int k) const;
  double leading() const { return c_.empty() ? 0.0 : c_.back(); }

  double operator()(double z) const;

  template <std::size_t K>
  TaylorJet<K> operator()(const TaylorJet<K>& z) const {
    TaylorJet<K> acc(0.0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
    return acc;
  }

  Polynomial derivative() const;

  // Rescaled so the highest-degree coefficient is +1.
  Polynomial monic() const;

  // Number of distinct real roots in the open half line z > 0 (Sturm).
  int positive_root_count() const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(double s, const Polynomial& a);
  friend Polynomial operator-(const Polynomial& a) { return -1.0 * a; }

 private:
  void trim();
  std::vector<double> c_;
};

}  // namespace qeswkb
