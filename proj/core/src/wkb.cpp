#include "qeswkb/wkb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "qeswkb/errors.hpp"
#include "qeswkb/format.hpp"
#include "qeswkb/quadrature.hpp"

namespace qeswkb {

namespace {

// Largest real root of A u^3 + B u^2 + C u + D (A > 0): trigonometric form
// when all three roots are real, Cardano otherwise.
double largest_cubic_root(double A, double B, double C, double D) {
  const double b = B / A, c = C / A, d = D / A;
  const double shift = -b / 3.0;
  const double p = c - b * b / 3.0;
  const double q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
  const double disc = q * q / 4.0 + p * p * p / 27.0;
  double t;
  if (disc < 0.0) {
    const double r = std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (2.0 * p) * std::sqrt(-3.0 / p), -1.0, 1.0);
    t = 2.0 * r * std::cos(std::acos(arg) / 3.0);
  } else {
    const double s = std::sqrt(disc);
    t = std::cbrt(-q / 2.0 + s) + std::cbrt(-q / 2.0 - s);
  }
  double u = t + shift;
  // Newton polish in u.
  for (int i = 0; i < 3; ++i) {
    const double f = ((A * u + B) * u + C) * u + D;
    const double df = (3.0 * A * u + 2.0 * B) * u + C;
    if (df == 0.0) break;
    u -= f / df;
  }
  return u;
}

double newton_polish(const PotentialSpec& spec, double x, double E) {
  const Jet v = eval_jet(spec, x);
  const double slope = v.derivative(1);
  if (slope == 0.0) return x;
  return x - (v.value() - E) / slope;
}

double parameter_N(const PotentialSpec& spec) {
  if (const auto* s = spec.get_if<SexticReduced>()) return s->N;
  if (const auto* s = spec.get_if<SexticGeneral>()) return s->N;
  if (const auto* m = spec.get_if<Morse>()) return m->N;
  return std::numeric_limits<double>::quiet_NaN();
}

// V < E strictly inside (x1, x2), sampled.
void require_single_region(const PotentialSpec& spec, double x1, double x2, double E) {
  const int samples = 512;
  for (int i = 1; i < samples; ++i) {
    const double x = x1 + (x2 - x1) * i / samples;
    if (eval(spec, x) >= E)
      fail(ErrorKind::MultiWell, "E = " + format_number(E) + " lies in the tunnelling range (V >= E at x = " +
                                     format_number(x) + ")");
  }
}

double bracket_root(const PotentialSpec& spec, double E, double inside, double outside) {
  auto f = [&](double x) { return eval(spec, x) - E; };
  boost::uintmax_t iters = 200;
  auto [lo, hi] = boost::math::tools::toms748_solve(
      f, std::min(inside, outside), std::max(inside, outside), boost::math::tools::eps_tolerance<double>(53), iters);
  return 0.5 * (lo + hi);
}

// Walks outward from a point with V < E until V > E, then brackets the root.
double outward_root(const PotentialSpec& spec, double E, double start, double dir) {
  double inside = start;
  double step = 0.05;
  for (int i = 0; i < 5000; ++i) {
    const double x = inside + dir * step;
    if (eval(spec, x) > E) return bracket_root(spec, E, inside, x);
    inside = x;
    step *= 1.25;
  }
  fail(ErrorKind::AboveAsymptote, "no outer turning point for E = " + format_number(E));
}

TurningPoints sextic_points(const PotentialSpec& spec, const SexticGeneral& s, double E) {
  const auto minimum = potential_minimum(spec);
  if (E <= minimum.V) fail(ErrorKind::NoClassicalRegion, "E = " + format_number(E) + " is below the potential minimum");
  const double c1 = s.mu * s.mu - (4.0 * s.N + 3.0) * s.nu;
  if (minimum.x != 0.0 && E <= 0.0)
    fail(ErrorKind::MultiWell, "E = " + format_number(E) + " is below the barrier top V(0) = 0");
  const double u = largest_cubic_root(s.nu * s.nu, 2.0 * s.nu * s.mu, c1, -2.0 * E);
  if (!(u > 0.0)) fail(ErrorKind::NoClassicalRegion, "no positive turning point");
  const double x2 = newton_polish(spec, std::sqrt(u), E);
  require_single_region(spec, -x2, x2, E);
  return {-x2, x2};
}

TurningPoints morse_points(const Morse& m, double E) {
  const double C = 2.0 * m.b + m.alpha * (2.0 * m.N + 1.0);
  const double K = (m.N * m.alpha + m.b) * (m.N * m.alpha + m.b);
  // a^2 z^2 - a C z + (K + 2 offset - 2E) = 0
  const double qa = m.a * m.a, qb = -m.a * C, qc = K + 2.0 * m.offset - 2.0 * E;
  const double disc = qb * qb - 4.0 * qa * qc;
  if (disc <= 0.0) fail(ErrorKind::NoClassicalRegion, "E = " + format_number(E) + " is below the Morse minimum");
  if (qc <= 0.0) fail(ErrorKind::AboveAsymptote, "E = " + format_number(E) + " is at or above the Morse asymptote");
  const double sq = std::sqrt(disc);
  // Stable pair of roots.
  const double big = (-qb + sq) / (2.0 * qa);
  const double small = qc / (qa * big);
  return {-std::log(big) / m.alpha, -std::log(small) / m.alpha};
}

TurningPoints generic_points(const PotentialSpec& spec, double E) {
  const auto minimum = potential_minimum(spec);
  if (E <= minimum.V) fail(ErrorKind::NoClassicalRegion, "E = " + format_number(E) + " is below the potential minimum");
  if (auto top = asymptote(spec); top && E >= *top)
    fail(ErrorKind::AboveAsymptote, "E = " + format_number(E) + " is at or above the asymptote");
  const double x2 = outward_root(spec, E, minimum.x, +1.0);
  double x1 = outward_root(spec, E, minimum.x, -1.0);
  if (is_even(spec)) {
    if (std::abs(x1 + x2) > 1e-9 * std::max(1.0, x2))
      fail(ErrorKind::MultiWell, "E = " + format_number(E) + " lies below the central barrier");
    x1 = -x2;
  }
  require_single_region(spec, x1, x2, E);
  return {x1, x2};
}

double integrand(const PotentialSpec& spec, double E, double x) {
  return std::sqrt(std::max(0.0, 2.0 * (E - eval(spec, x))));
}

// x = mid + half sin(theta) turns the square-root endpoints into cos^2-type
// zeros, so Gauss-Legendre in theta converges spectrally.
double action_sine_map(const PotentialSpec& spec, double E, const TurningPoints& tp, bool& converged) {
  const double mid = 0.5 * (tp.x1 + tp.x2);
  const double half = 0.5 * (tp.x2 - tp.x1);
  const double hp = 0.5 * std::numbers::pi;
  double previous = std::numeric_limits<double>::quiet_NaN();
  double S = 0.0;
  for (int n = 16; n <= 1024; n *= 2) {
    const GaussRule& rule = gauss_legendre(n);
    S = 0.0;
    for (int i = 0; i < n; ++i) {
      const double theta = hp * rule.nodes[i];
      S += rule.weights[i] * integrand(spec, E, mid + half * std::sin(theta)) * std::cos(theta);
    }
    S *= hp * half;
    if (std::abs(S - previous) <= 1e-12 * std::max(1.0, S)) {
      converged = true;
      return S;
    }
    previous = S;
  }
  converged = false;
  return S;
}

}  // namespace

TurningPoints turning_points(const PotentialSpec& spec, double E) {
  if (!std::isfinite(E)) fail(ErrorKind::Domain, "turning_points: E must be finite");
  if (const auto* r = spec.get_if<SexticReduced>()) return sextic_points(spec, as_general(*r), E);
  if (const auto* s = spec.get_if<SexticGeneral>()) return sextic_points(spec, *s, E);
  if (const auto* m = spec.get_if<Morse>()) return morse_points(*m, E);
  return generic_points(spec, E);
}

double action(const PotentialSpec& spec, double E) {
  const TurningPoints tp = turning_points(spec, E);
  bool converged = false;
  const double S = action_sine_map(spec, E, tp, converged);
  if (converged) return S;

  boost::math::quadrature::tanh_sinh<double> integrator;
  const auto f = [&](double x) { return integrand(spec, E, x); };
  double error = 0.0;
  double fallback = 0.0;
  if (tp.x1 < 0.0 && tp.x2 > 0.0 && eval_jet(spec, 0.0).derivative(1) == 0.0) {
    // A barrier top at the origin just below E leaves a kink there; split on it.
    double e1 = 0.0, e2 = 0.0;
    fallback = integrator.integrate(f, tp.x1, 0.0, 1e-13, &e1) + integrator.integrate(f, 0.0, tp.x2, 1e-13, &e2);
    error = e1 + e2;
  } else {
    fallback = integrator.integrate(f, tp.x1, tp.x2, 1e-13, &error);
  }
  if (error > 1e-10 * std::max(1.0, fallback))
    fail(ErrorKind::Accuracy, "action quadrature stalled at " + format_number(fallback) + " with error estimate " +
                                  format_number(error));
  return fallback;
}

double morse_action_closed(double a, double b, double alpha, double E) {
  if (!(a > 0.0) || !(alpha > 0.0)) fail(ErrorKind::Domain, "morse_action_closed: a and alpha must be > 0");
  if (E >= 0.5 * b * b) fail(ErrorKind::AboveAsymptote, "morse_action_closed: E must be below b^2/2");
  const double v_min = 0.5 * (b * b - 0.25 * (alpha + 2.0 * b) * (alpha + 2.0 * b));
  if (E < v_min) fail(ErrorKind::NoClassicalRegion, "morse_action_closed: E below the potential minimum");
  return std::numbers::pi * (alpha - 2.0 * std::sqrt(b * b - 2.0 * E) + 2.0 * b) / (2.0 * alpha);
}

WkbRecord wkb_correction(const PotentialSpec& spec, int n, double E_n) {
  if (n < 0) fail(ErrorKind::Domain, "wkb_correction: n must be >= 0");
  const TurningPoints tp = turning_points(spec, E_n);
  const double S = action(spec, E_n);
  return WkbRecord{parameter_N(spec), n, E_n, tp.x1, tp.x2, S, S / std::numbers::pi - n - 0.5};
}

double bohr_sommerfeld_invert(const PotentialSpec& spec, int n, double gamma0) {
  if (n < 0) fail(ErrorKind::Domain, "bohr_sommerfeld_invert: n must be >= 0");
  const double target = std::numbers::pi * (n + 0.5 + gamma0);
  const auto minimum = potential_minimum(spec);

  double floor = minimum.V;
  const bool double_well = is_even(spec) && minimum.x != 0.0;
  if (double_well) floor = std::max(floor, eval(spec, 0.0));
  auto residual = [&](double E) { return action(spec, E) - target; };
  auto residual_at_floor = [&](double eps) {
    try {
      return residual(floor + eps * std::max(1.0, std::abs(floor)));
    } catch (const Error&) {
      return -target;  // vanishing classical region
    }
  };

  // The action is slow to integrate right at a barrier top, so start a
  // little above it and only move closer when the target needs it.
  double lo = floor + 1e-6 * std::max(1.0, std::abs(floor));
  double r_lo = residual_at_floor(1e-6);
  if (r_lo > 0.0) {
    lo = floor + 1e-12 * std::max(1.0, std::abs(floor));
    r_lo = residual_at_floor(1e-12);
  }
  if (r_lo > 0.0)
    fail(ErrorKind::Search, "target action lies below the bracket floor (tunnelling range or gamma0 too negative)");

  double hi;
  if (auto top = asymptote(spec)) {
    hi = *top - 1e-10 * std::max(1.0, std::abs(*top));
    if (residual(hi) < 0.0) fail(ErrorKind::Search, "target action exceeds the bound spectrum");
  } else {
    double width = 1.0;
    hi = lo + width;
    while (residual(hi) < 0.0) {
      width *= 2.0;
      hi = lo + width;
      if (width > 1e12) fail(ErrorKind::Search, "could not bracket the target action");
    }
  }
  boost::uintmax_t iters = 200;
  auto [a, b] = boost::math::tools::toms748_solve(residual, lo, hi, boost::math::tools::eps_tolerance<double>(50),
                                                  iters);
  return 0.5 * (a + b);
}

std::string wkb_csv(std::span<const WkbRecord> records, char sep) {
  std::string out = join_row({"N", "n", "E", "x1", "x2", "S", "gamma"}, sep);
  for (const auto& r : records) {
    out += join_row({format_number(r.N), std::to_string(r.n), format_number(r.E), format_number(r.x1),
                     format_number(r.x2), format_number(r.S), format_number(r.gamma)},
                    sep);
  }
  return out;
}

}  // namespace qeswkb
