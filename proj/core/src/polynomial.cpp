#include "qeswkb/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qeswkb {

Polynomial Polynomial::monomial(int k, double scale) {
  std::vector<double> c(static_cast<std::size_t>(k) + 1, 0.0);
  c.back() = scale;
  return Polynomial(std::move(c));
}

void Polynomial::trim() {
  while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
}

double Polynomial::coefficient(int k) const {
  if (k < 0 || k > degree()) return 0.0;
  return c_[static_cast<std::size_t>(k)];
}

double Polynomial::operator()(double z) const {
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<double> d(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
  return Polynomial(std::move(d));
}

Polynomial Polynomial::monic() const {
  if (c_.empty()) return {};
  return (1.0 / c_.back()) * *this;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<double> r(std::max(a.c_.size(), b.c_.size()), 0.0);
  for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
  return Polynomial(std::move(r));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-1.0 * b); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.c_.empty() || b.c_.empty()) return {};
  std::vector<double> r(a.c_.size() + b.c_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
  return Polynomial(std::move(r));
}

Polynomial operator*(double s, const Polynomial& a) {
  std::vector<double> r(a.c_);
  for (auto& c : r) c *= s;
  return Polynomial(std::move(r));
}

namespace {

// Remainder of a / b with leading-coefficient cleanup relative to scale.
std::vector<double> remainder(std::vector<double> a, const std::vector<double>& b) {
  const double scale = std::abs(b.back());
  while (a.size() >= b.size()) {
    const double q = a.back() / b.back();
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= q * b[i];
    a.pop_back();
  }
  double amax = 0.0;
  for (double c : a) amax = std::max(amax, std::abs(c));
  const double cut = 64.0 * std::numeric_limits<double>::epsilon() * std::max(amax, scale);
  while (!a.empty() && std::abs(a.back()) <= cut) a.pop_back();
  return a;
}

int sign_changes(const std::vector<double>& signs) {
  int changes = 0;
  double prev = 0.0;
  for (double s : signs) {
    if (s == 0.0) continue;
    if (prev != 0.0 && (s > 0) != (prev > 0)) ++changes;
    prev = s;
  }
  return changes;
}

}  // namespace

int Polynomial::positive_root_count() const {
  // Roots at z = 0 are not in the open half line; strip them first.
  std::size_t lead_zeros = 0;
  while (lead_zeros < c_.size() && c_[lead_zeros] == 0.0) ++lead_zeros;
  std::vector<double> p(c_.begin() + static_cast<std::ptrdiff_t>(lead_zeros), c_.end());
  if (p.size() <= 1) return 0;

  std::vector<std::vector<double>> chain;
  chain.push_back(p);
  chain.push_back(Polynomial(p).derivative().c_);
  while (chain.back().size() > 1) {
    auto r = remainder(chain[chain.size() - 2], chain.back());
    if (r.empty()) break;
    for (auto& c : r) c = -c;
    chain.push_back(std::move(r));
  }

  std::vector<double> at_zero, at_inf;
  for (const auto& q : chain) {
    at_zero.push_back(q.front());
    at_inf.push_back(q.back());
  }
  return sign_changes(at_zero) - sign_changes(at_inf);
}

}  // namespace qeswkb
