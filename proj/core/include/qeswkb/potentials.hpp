#pragma once

// One-dimensional potential families for H = -1/2 d^2/dx^2 + V(x) in atomic
// units (hbar = m = 1).

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qeswkb/jet.hpp"
#include "qeswkb/polynomial.hpp"

namespace qeswkb {

// V(x) = 1/2 (x^6 + 2x^4 - 2(2N+1)x^2)
struct SexticReduced {
  double N = 0.0;
};

// V(x) = 1/2 (nu^2 x^6 + 2 nu mu x^4 + (mu^2 - (4N+3) nu) x^2)
struct SexticGeneral {
  double nu = 1.0;
  double mu = 1.0;
  double N = 0.0;
};

// V(x) = 1/2 (a^2 z^2 - a z (2b + alpha(2N+1)) + (N alpha + b)^2) + offset,
// z = exp(-alpha x). The offset is zero for the QES family itself; it is
// non-zero only for Darboux partners, which keep the constant term of the
// potential they were built from.
struct Morse {
  double a = 1.0;
  double b = 0.0;
  double alpha = 1.0;
  double N = 0.0;
  double offset = 0.0;
};

// Coefficients of x^0 .. x^(2m); odd entries must vanish, leading entry > 0.
struct EvenPolynomial {
  std::vector<double> coeffs;
};

// Nodeless QES ground state Gamma(x^2) P(x^2) of SexticGeneral(nu, mu, N),
// Gamma(z) = exp(-nu z^2 / 4 - mu z / 2).
struct SexticGround {
  int N = 0;
  double nu = 1.0;
  double mu = 1.0;
  Polynomial poly{1.0};
};

// Nodeless QES state Gamma(z) P(z) of Morse(a, b, alpha, N) with
// Gamma = exp(-(a/alpha) z - b x); the ground state has P(z) = z^N.
struct MorseGround {
  int N = 0;
  double a = 1.0;
  double b = 0.0;
  double alpha = 1.0;
  Polynomial poly{1.0};
};

using SeedSpec = std::variant<SexticGround, MorseGround>;

MorseGround morse_ground_seed(int N, double a, double b, double alpha);

class PotentialSpec;

// V1 = V0 - (ln u)'' for the analytic seed u.
struct SusyPartner {
  std::shared_ptr<const PotentialSpec> base;
  SeedSpec seed;
};

class PotentialSpec {
 public:
  using Variant = std::variant<SexticReduced, SexticGeneral, Morse, EvenPolynomial, SusyPartner>;

  // Validates parameters; throws Error{Domain} on invalid input.
  PotentialSpec(SexticReduced s);
  PotentialSpec(SexticGeneral s);
  PotentialSpec(Morse s);
  PotentialSpec(EvenPolynomial s);
  PotentialSpec(SusyPartner s);

  const Variant& variant() const { return v_; }

  template <class T>
  const T* get_if() const {
    return std::get_if<T>(&v_);
  }

  std::string family() const;

 private:
  Variant v_;
};

PotentialSpec make_susy_partner(PotentialSpec base, SeedSpec seed);

SexticGeneral as_general(const SexticReduced& s);

double eval(const PotentialSpec& spec, double x);

// V and its first four derivatives at x.
Jet eval_jet(const PotentialSpec& spec, double x);

// ln u(x) and derivatives for the seed; throws Error{Seed} where u <= 0.
Jet seed_log_jet(const SeedSpec& seed, double x);
TaylorJet<6> seed_log_jet6(const SeedSpec& seed, double x);

// Partner of the QES Morse potential built from its ground state z^N Gamma:
// the same family with N -> N-1 and the constant term carried over.
PotentialSpec susy_partner_closed_form(const Morse& spec);

struct BarrierTop {
  double x;
  double V;
};
BarrierTop barrier_top(const SexticReduced& spec);

struct PotentialMinimum {
  double x;  // a minimiser; for even double wells the positive one
  double V;
};
PotentialMinimum potential_minimum(const PotentialSpec& spec);

bool is_even(const PotentialSpec& spec);

// Finite limit of V as x -> +infinity, if the family has one.
std::optional<double> asymptote(const PotentialSpec& spec);

// Flat key-value text: "family=sextic_reduced N=0.25".
using KeyValues = std::map<std::string, std::string, std::less<>>;

KeyValues parse_key_values(std::string_view text);
PotentialSpec spec_from_key_values(const KeyValues& kv);
PotentialSpec parse_potential(std::string_view text);
std::string to_key_value(const PotentialSpec& spec);

}  // namespace qeswkb
