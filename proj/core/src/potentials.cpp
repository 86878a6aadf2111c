#include "qeswkb/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/tools/minima.hpp>

#include "qeswkb/errors.hpp"
#include "qeswkb/format.hpp"

namespace qeswkb {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorKind::Domain, what);
}

bool finite(double v) { return std::isfinite(v); }

// ---- seeds ---------------------------------------------------------------

template <std::size_t K>
TaylorJet<K> seed_log(const SexticGround& s, double x) {
  const auto xj = TaylorJet<K>::variable(x);
  const auto z = xj * xj;
  const double pz = s.poly(x * x);
  if (!(pz > 0.0))
    fail(ErrorKind::Seed, "sextic seed polynomial is not positive at x = " + format_number(x));
  const auto log_gauge = -0.25 * s.nu * (z * z) - 0.5 * s.mu * z;
  return log_gauge + log(s.poly(z));
}

template <std::size_t K>
TaylorJet<K> seed_log(const MorseGround& s, double x) {
  const auto xj = TaylorJet<K>::variable(x);
  const auto z = exp(-s.alpha * xj);
  // P(z) = z^m Q(z) with Q(0) != 0; ln z^m = -m alpha x stays exact when z underflows.
  const auto coeffs = s.poly.coefficients();
  std::size_t m = 0;
  while (m < coeffs.size() && coeffs[m] == 0.0) ++m;
  const Polynomial q(std::vector<double>(coeffs.begin() + static_cast<std::ptrdiff_t>(m), coeffs.end()));
  const double qz = q(z.value());
  if (!(qz > 0.0))
    fail(ErrorKind::Seed, "Morse seed polynomial is not positive at x = " + format_number(x));
  const auto log_gauge = -(s.a / s.alpha) * z - s.b * xj;
  return log_gauge - (static_cast<double>(m) * s.alpha) * xj + log(q(z));
}

template <std::size_t K>
TaylorJet<K> seed_log_any(const SeedSpec& seed, double x) {
  return std::visit([x](const auto& s) { return seed_log<K>(s, x); }, seed);
}

// ---- potentials ------------------------------------------------------------

template <std::size_t K>
TaylorJet<K> sextic_jet(const SexticGeneral& s, double x) {
  const auto xj = TaylorJet<K>::variable(x);
  const auto u = xj * xj;
  const double c1 = s.mu * s.mu - (4.0 * s.N + 3.0) * s.nu;
  return 0.5 * (((s.nu * s.nu) * u + 2.0 * s.nu * s.mu) * u + c1) * u;
}

template <std::size_t K>
TaylorJet<K> morse_jet(const Morse& s, double x) {
  const auto z = exp(-s.alpha * TaylorJet<K>::variable(x));
  const double lin = s.a * (2.0 * s.b + s.alpha * (2.0 * s.N + 1.0));
  const double cst = (s.N * s.alpha + s.b) * (s.N * s.alpha + s.b);
  return 0.5 * ((s.a * s.a) * z - lin) * z + (0.5 * cst + s.offset);
}

template <std::size_t K>
TaylorJet<K> even_poly_jet(const EvenPolynomial& s, double x) {
  const auto xj = TaylorJet<K>::variable(x);
  const auto u = xj * xj;
  TaylorJet<K> acc(0.0);
  for (std::size_t k = s.coeffs.size(); k-- > 0;)
    if (k % 2 == 0) acc = acc * u + s.coeffs[k];
  return acc;
}

template <std::size_t K>
TaylorJet<K> potential_jet(const PotentialSpec& spec, double x);

template <std::size_t K>
TaylorJet<K> partner_jet(const SusyPartner& s, double x) {
  const auto base = potential_jet<K>(*s.base, x);
  const auto second = seed_log_any<K + 2>(s.seed, x).differentiated().differentiated();
  TaylorJet<K> r = base;
  for (std::size_t k = 0; k <= K; ++k) r.coefficient(k) -= second.coefficient(k);
  return r;
}

template <std::size_t K>
TaylorJet<K> potential_jet(const PotentialSpec& spec, double x) {
  return std::visit(
      overloaded{
          [x](const SexticReduced& s) { return sextic_jet<K>(as_general(s), x); },
          [x](const SexticGeneral& s) { return sextic_jet<K>(s, x); },
          [x](const Morse& s) { return morse_jet<K>(s, x); },
          [x](const EvenPolynomial& s) { return even_poly_jet<K>(s, x); },
          [x](const SusyPartner& s) { return partner_jet<K>(s, x); },
      },
      spec.variant());
}

double sextic_value(const SexticGeneral& s, double x) {
  const double u = x * x;
  const double c1 = s.mu * s.mu - (4.0 * s.N + 3.0) * s.nu;
  return 0.5 * (((s.nu * s.nu) * u + 2.0 * s.nu * s.mu) * u + c1) * u;
}

double morse_value(const Morse& s, double x) {
  const double z = std::exp(-s.alpha * x);
  const double lin = s.a * (2.0 * s.b + s.alpha * (2.0 * s.N + 1.0));
  const double cst = (s.N * s.alpha + s.b) * (s.N * s.alpha + s.b);
  return 0.5 * ((s.a * s.a * z - lin) * z + cst) + s.offset;
}

double even_poly_value(const EvenPolynomial& s, double x) {
  const double u = x * x;
  double acc = 0.0;
  for (std::size_t k = s.coeffs.size(); k-- > 0;)
    if (k % 2 == 0) acc = acc * u + s.coeffs[k];
  return acc;
}

// Golden/Brent refinement of a sampled minimum on [lo, hi].
PotentialMinimum scan_minimum(const PotentialSpec& spec, double lo, double hi, int samples = 4000) {
  double best_x = lo, best_v = eval(spec, lo);
  const double step = (hi - lo) / samples;
  for (int i = 1; i <= samples; ++i) {
    const double x = lo + i * step;
    const double v = eval(spec, x);
    if (v < best_v) {
      best_v = v;
      best_x = x;
    }
  }
  const double a = std::max(lo, best_x - step);
  const double b = std::min(hi, best_x + step);
  auto [xm, vm] = boost::math::tools::brent_find_minima(
      [&spec](double x) { return eval(spec, x); }, a, b, 52);
  if (vm < best_v) return {xm, vm};
  return {best_x, best_v};
}

double confining_extent(const PotentialSpec& spec) {
  // Smallest power of two X with V(X) well above V(0).
  const double v0 = eval(spec, 0.0);
  double X = 1.0;
  while (eval(spec, X) < v0 + 1.0 && X < 1e6) X *= 2.0;
  return X;
}

}  // namespace

// ---- construction ----------------------------------------------------------

MorseGround morse_ground_seed(int N, double a, double b, double alpha) {
  return MorseGround{N, a, b, alpha, Polynomial::monomial(N)};
}

PotentialSpec::PotentialSpec(SexticReduced s) : v_(s) {
  require(finite(s.N), "SexticReduced: N must be finite");
}

PotentialSpec::PotentialSpec(SexticGeneral s) : v_(s) {
  require(finite(s.nu) && s.nu > 0.0, "SexticGeneral: nu must be > 0");
  require(finite(s.mu) && finite(s.N), "SexticGeneral: mu and N must be finite");
}

PotentialSpec::PotentialSpec(Morse s) : v_(s) {
  require(finite(s.a) && s.a > 0.0, "Morse: a must be > 0");
  require(finite(s.alpha) && s.alpha > 0.0, "Morse: alpha must be > 0");
  require(finite(s.b) && finite(s.N) && finite(s.offset), "Morse: b, N, offset must be finite");
}

PotentialSpec::PotentialSpec(EvenPolynomial s) : v_(s) {
  require(!s.coeffs.empty() && s.coeffs.size() % 2 == 1,
          "EvenPolynomial: need coefficients for x^0 .. x^(2m)");
  for (std::size_t k = 1; k < s.coeffs.size(); k += 2)
    require(s.coeffs[k] == 0.0, "EvenPolynomial: odd-power coefficients must vanish");
  for (double c : s.coeffs) require(finite(c), "EvenPolynomial: coefficients must be finite");
  require(s.coeffs.size() >= 3 && s.coeffs.back() > 0.0,
          "EvenPolynomial: leading coefficient must be positive and degree >= 2");
}

PotentialSpec::PotentialSpec(SusyPartner s) : v_(s) {
  require(s.base != nullptr, "SusyPartner: missing base potential");
}

std::string PotentialSpec::family() const {
  return std::visit(overloaded{
                        [](const SexticReduced&) { return std::string("sextic_reduced"); },
                        [](const SexticGeneral&) { return std::string("sextic_general"); },
                        [](const Morse&) { return std::string("morse"); },
                        [](const EvenPolynomial&) { return std::string("even_polynomial"); },
                        [](const SusyPartner&) { return std::string("susy_partner"); },
                    },
                    v_);
}

PotentialSpec make_susy_partner(PotentialSpec base, SeedSpec seed) {
  return PotentialSpec(SusyPartner{std::make_shared<const PotentialSpec>(std::move(base)), std::move(seed)});
}

SexticGeneral as_general(const SexticReduced& s) { return SexticGeneral{1.0, 1.0, s.N}; }

// ---- evaluation ------------------------------------------------------------

double eval(const PotentialSpec& spec, double x) {
  if (!std::isfinite(x)) fail(ErrorKind::Domain, "potential evaluated at non-finite x");
  return std::visit(
      overloaded{
          [x](const SexticReduced& s) { return sextic_value(as_general(s), x); },
          [x](const SexticGeneral& s) { return sextic_value(s, x); },
          [x](const Morse& s) { return morse_value(s, x); },
          [x](const EvenPolynomial& s) { return even_poly_value(s, x); },
          [x](const SusyPartner& s) {
            return eval(*s.base, x) - seed_log_any<2>(s.seed, x).derivative(2);
          },
      },
      spec.variant());
}

Jet eval_jet(const PotentialSpec& spec, double x) {
  if (!std::isfinite(x)) fail(ErrorKind::Domain, "potential evaluated at non-finite x");
  return potential_jet<4>(spec, x);
}

Jet seed_log_jet(const SeedSpec& seed, double x) { return seed_log_any<4>(seed, x); }
TaylorJet<6> seed_log_jet6(const SeedSpec& seed, double x) { return seed_log_any<6>(seed, x); }

// ---- closed forms ----------------------------------------------------------

PotentialSpec susy_partner_closed_form(const Morse& spec) {
  if (spec.N < 0.0 || spec.N != std::floor(spec.N))
    fail(ErrorKind::Unsupported, "closed-form Morse partner needs a non-negative integer N");
  Morse partner = spec;
  partner.N = spec.N - 1.0;
  const double before = spec.N * spec.alpha + spec.b;
  const double after = partner.N * spec.alpha + spec.b;
  partner.offset = spec.offset + 0.5 * (before * before - after * after);
  return PotentialSpec(partner);
}

BarrierTop barrier_top(const SexticReduced& spec) {
  if (!(spec.N > -0.5))
    fail(ErrorKind::Shape, "sextic with N <= -1/2 is a single well without a barrier");
  return {0.0, 0.0};
}

bool is_even(const PotentialSpec& spec) {
  return std::visit(overloaded{
                        [](const Morse&) { return false; },
                        [](const SusyPartner& s) {
                          return is_even(*s.base) && std::holds_alternative<SexticGround>(s.seed);
                        },
                        [](const auto&) { return true; },
                    },
                    spec.variant());
}

std::optional<double> asymptote(const PotentialSpec& spec) {
  if (const auto* m = spec.get_if<Morse>()) {
    const double c = m->N * m->alpha + m->b;
    return 0.5 * c * c + m->offset;
  }
  if (const auto* p = spec.get_if<SusyPartner>()) return asymptote(*p->base);
  return std::nullopt;
}

PotentialMinimum potential_minimum(const PotentialSpec& spec) {
  if (const auto* r = spec.get_if<SexticReduced>()) {
    return potential_minimum(PotentialSpec(as_general(*r)));
  }
  if (const auto* s = spec.get_if<SexticGeneral>()) {
    // dV/du = 1/2 (3 nu^2 u^2 + 4 nu mu u + c1), u = x^2.
    const double c1 = s->mu * s->mu - (4.0 * s->N + 3.0) * s->nu;
    const double A = 3.0 * s->nu * s->nu, B = 4.0 * s->nu * s->mu;
    const double disc = B * B - 4.0 * A * c1;
    PotentialMinimum best{0.0, 0.0};
    if (disc >= 0.0) {
      const double u = (-B + std::sqrt(disc)) / (2.0 * A);
      if (u > 0.0) {
        const double x = std::sqrt(u);
        const double v = sextic_value(*s, x);
        if (v < best.V) best = {x, v};
      }
    }
    return best;
  }
  if (const auto* m = spec.get_if<Morse>()) {
    const double z = (2.0 * m->b + m->alpha * (2.0 * m->N + 1.0)) / (2.0 * m->a);
    if (!(z > 0.0)) fail(ErrorKind::Shape, "Morse parameters give no potential well");
    const double x = -std::log(z) / m->alpha;
    return {x, morse_value(*m, x)};
  }
  if (spec.get_if<EvenPolynomial>()) {
    return scan_minimum(spec, 0.0, confining_extent(spec));
  }
  const auto& p = *spec.get_if<SusyPartner>();
  if (is_even(spec)) return scan_minimum(spec, 0.0, confining_extent(spec));
  const auto base_min = potential_minimum(*p.base);
  return scan_minimum(spec, base_min.x - 6.0, base_min.x + 20.0);
}

// ---- key-value text ----------------------------------------------------------

KeyValues parse_key_values(std::string_view text) {
  KeyValues kv;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::string token;
    while (words >> token) {
      const auto eq = token.find('=');
      if (eq == std::string::npos || eq == 0 || eq + 1 == token.size())
        fail(ErrorKind::Parse, "line " + std::to_string(line_no) + ": expected key=value, got '" + token + "'");
      auto key = token.substr(0, eq);
      if (kv.count(key))
        fail(ErrorKind::Parse, "line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
      kv.emplace(std::move(key), token.substr(eq + 1));
    }
  }
  return kv;
}

namespace {

double need(const KeyValues& kv, const char* key) {
  auto it = kv.find(key);
  if (it == kv.end()) fail(ErrorKind::Parse, std::string("missing parameter '") + key + "'");
  return parse_number(it->second, key);
}

double optional_number(const KeyValues& kv, const char* key, double fallback) {
  auto it = kv.find(key);
  return it == kv.end() ? fallback : parse_number(it->second, key);
}

int need_integer_N(const KeyValues& kv) {
  const double N = need(kv, "N");
  if (N < 0.0 || N != std::floor(N)) fail(ErrorKind::Parse, "N: seed requires a non-negative integer");
  return static_cast<int>(N);
}

PotentialSpec base_from(const std::string& family, const KeyValues& kv) {
  if (family == "sextic_reduced") return SexticReduced{need(kv, "N")};
  if (family == "sextic_general") return SexticGeneral{need(kv, "nu"), need(kv, "mu"), need(kv, "N")};
  if (family == "morse")
    return Morse{need(kv, "a"), need(kv, "b"), need(kv, "alpha"), need(kv, "N"),
                 optional_number(kv, "offset", 0.0)};
  if (family == "even_polynomial") {
    auto it = kv.find("coeffs");
    if (it == kv.end()) fail(ErrorKind::Parse, "missing parameter 'coeffs'");
    return EvenPolynomial{parse_number_list(it->second, "coeffs")};
  }
  fail(ErrorKind::Parse, "unknown potential family '" + family + "'");
}

}  // namespace

PotentialSpec spec_from_key_values(const KeyValues& kv) {
  auto it = kv.find("family");
  if (it == kv.end()) fail(ErrorKind::Parse, "missing key 'family'");
  if (it->second != "susy_partner") return base_from(it->second, kv);

  auto base_it = kv.find("base");
  if (base_it == kv.end()) fail(ErrorKind::Parse, "susy_partner needs 'base'");
  PotentialSpec base = base_from(base_it->second, kv);
  if (const auto* m = base.get_if<Morse>()) {
    return make_susy_partner(base, morse_ground_seed(need_integer_N(kv), m->a, m->b, m->alpha));
  }
  auto coeff_it = kv.find("seed_coeffs");
  if (coeff_it == kv.end()) fail(ErrorKind::Parse, "sextic susy_partner needs 'seed_coeffs'");
  SexticGeneral g;
  if (const auto* r = base.get_if<SexticReduced>()) {
    g = as_general(*r);
  } else if (const auto* s = base.get_if<SexticGeneral>()) {
    g = *s;
  } else {
    fail(ErrorKind::Parse, "susy_partner base must be sextic or morse");
  }
  return make_susy_partner(base, SexticGround{need_integer_N(kv), g.nu, g.mu,
                                              Polynomial(parse_number_list(coeff_it->second, "seed_coeffs"))});
}

PotentialSpec parse_potential(std::string_view text) { return spec_from_key_values(parse_key_values(text)); }

std::string to_key_value(const PotentialSpec& spec) {
  auto num = [](double v) { return format_number(v, 17); };
  return std::visit(
      overloaded{
          [&](const SexticReduced& s) { return "family=sextic_reduced N=" + num(s.N); },
          [&](const SexticGeneral& s) {
            return "family=sextic_general nu=" + num(s.nu) + " mu=" + num(s.mu) + " N=" + num(s.N);
          },
          [&](const Morse& s) {
            std::string out = "family=morse a=" + num(s.a) + " b=" + num(s.b) + " alpha=" + num(s.alpha) +
                              " N=" + num(s.N);
            if (s.offset != 0.0) out += " offset=" + num(s.offset);
            return out;
          },
          [&](const EvenPolynomial& s) {
            std::string out = "family=even_polynomial coeffs=";
            for (std::size_t i = 0; i < s.coeffs.size(); ++i) out += (i ? "," : "") + num(s.coeffs[i]);
            return out;
          },
          [&](const SusyPartner& s) {
            std::string base = to_key_value(*s.base);
            base.replace(0, 7, "family=susy_partner base=");
            if (const auto* g = std::get_if<SexticGround>(&s.seed)) {
              base += " seed_coeffs=";
              const auto c = g->poly.coefficients();
              for (std::size_t i = 0; i < c.size(); ++i) base += (i ? "," : "") + num(c[i]);
            }
            return base;
          },
      },
      spec.variant());
}

}  // namespace qeswkb
