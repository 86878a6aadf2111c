#pragma once

// Semiclassical quantities: turning points, the action
// S(E) = int_{x1}^{x2} sqrt(2 (E - V(x))) dx, and the WKB correction gamma
// defined by S(E_n) = pi (n + 1/2 + gamma).

#include <span>
#include <string>

#include "qeswkb/potentials.hpp"

namespace qeswkb {

struct TurningPoints {
  double x1;
  double x2;
};

// Errors: NoClassicalRegion (E at or below the minimum), MultiWell (E inside
// the tunnelling range of a double well), AboveAsymptote (E >= V(+inf)).
TurningPoints turning_points(const PotentialSpec& spec, double E);

// Throws Error{Accuracy} if the quadrature cannot reach 1e-10 max(1, S).
double action(const PotentialSpec& spec, double E);

// Closed-form action of the N = 0 QES Morse potential,
// pi (alpha - 2 sqrt(b^2 - 2E) + 2b) / (2 alpha).
double morse_action_closed(double a, double b, double alpha, double E);

struct WkbRecord {
  double N;  // family parameter, NaN when the family has none
  int n;
  double E;
  double x1;
  double x2;
  double S;
  double gamma;
};

// gamma = S(E_n) / pi - n - 1/2 with the turning points attached.
WkbRecord wkb_correction(const PotentialSpec& spec, int n, double E_n);

// E with S(E) = pi (n + 1/2 + gamma0). Throws Error{Search} if no bracket.
double bohr_sommerfeld_invert(const PotentialSpec& spec, int n, double gamma0);

std::string wkb_csv(std::span<const WkbRecord> records, char sep = ',');

}  // namespace qeswkb
