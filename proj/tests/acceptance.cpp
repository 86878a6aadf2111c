// Acceptance run: one line per criterion with the measured values, the
// pinned thresholds and the wall time. Exit status is nonzero on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "qeswkb/eigensolver.hpp"
#include "qeswkb/fitmodels.hpp"
#include "qeswkb/qes_algebra.hpp"
#include "qeswkb/wkb.hpp"

using namespace qeswkb;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kA = 1.0, kB = 8.0, kAlpha = std::numbers::sqrt2;
const double kMorsePrinted[] = {0.0, 10.313708498985, 18.62741699797, 24.94112549695, 29.25483399594, 31.56854249492};
const double kNs[] = {0.0, 0.25, 0.5, 0.7};

struct Measure {
  std::string name;
  double value;
  double limit;
  bool pass() const { return value <= limit; }
};

int failures = 0;

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

void report(int id, const std::string& title, const std::vector<Measure>& ms, double seconds, double time_limit) {
  bool ok = seconds < time_limit;
  std::string detail;
  for (const auto& m : ms) {
    ok = ok && m.pass();
    detail += " " + m.name + "=" + sci(m.value) + (m.pass() ? "<=" : ">") + sci(m.limit);
  }
  if (!ok) ++failures;
  std::printf("[%s] %2d %s:%s time=%.2fs(<%gs)\n", ok ? "PASS" : "FAIL", id, title.c_str(), detail.c_str(), seconds,
              time_limit);
  std::fflush(stdout);
}

// Runs body, reporting Error exceptions as a failed criterion.
void criterion(int id, const std::string& title, double time_limit, const std::function<std::vector<Measure>()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<Measure> ms;
  try {
    ms = body();
  } catch (const std::exception& e) {
    ++failures;
    std::printf("[FAIL] %2d %s: exception: %s\n", id, title.c_str(), e.what());
    return;
  }
  report(id, title, ms, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), time_limit);
}

struct SexticData {
  std::vector<FitPoint> energies;  // 0..50
  std::vector<FitPoint> gammas;    // 3..50
  double oracle_energy_dev = 0.0;  // vs oscillator-basis levels, relative
  double oracle_gamma_dev = 0.0;   // vs independent tanh-sinh action, absolute
};

std::map<double, SexticData> sextic_data;

// gamma from the oscillator-basis level and a tanh-sinh action between
// bisected turning points; shares nothing with the library solvers.
double oracle_gamma(double N, int n, double E) {
  const auto c = oracle::sextic_coeffs(N);
  const auto V = [&](double x) {
    double v = 0.0, p = 1.0;
    for (double ck : c) {
      v += ck * p;
      p *= x;
    }
    return v;
  };
  const double x2 = oracle::bisect([&](double x) { return V(x) - E; }, 0.0, 20.0);
  return oracle::action(V, E, -x2, x2) / kPi - n - 0.5;
}

}  // namespace

int main() {
  std::printf("acceptance criteria (all primary)\n");

  criterion(1, "Morse exact spectrum", 5.0, [] {
    const PotentialSpec spec(Morse{kA, kB, kAlpha, 0.0});
    const auto closed = morse_exact_spectrum(kA, kB, kAlpha, 5);
    const Spectrum num = lowest_eigen(spec, 6, 1e-10);
    double dc = 0.0, dn = 0.0;
    for (int n = 0; n < 6; ++n) {
      dc = std::max(dc, std::abs(closed[n] - kMorsePrinted[n]));
      dn = std::max(dn, std::abs(num.energies[n] - kMorsePrinted[n]));
    }
    return std::vector<Measure>{{"closed_max_dE", dc, 1e-9}, {"numeric_max_dE", dn, 1e-6}};
  });

  criterion(2, "Morse exact WKB", 2.0, [] {
    const PotentialSpec spec(Morse{kA, kB, kAlpha, 0.0});
    double gc = 0.0, gq = 0.0;
    for (int n = 0; n <= 5; ++n) {
      const double E = 0.5 * kAlpha * n * (2.0 * kB - kAlpha * n);
      gc = std::max(gc, std::abs(morse_action_closed(kA, kB, kAlpha, E) / kPi - n - 0.5));
      gq = std::max(gq, std::abs(wkb_correction(spec, n, E).gamma));
    }
    return std::vector<Measure>{{"closed_max_gamma", gc, 1e-8}, {"quadrature_max_gamma", gq, 1e-6}};
  });

  criterion(3, "Harmonic oracle", 5.0, [] {
    const PotentialSpec spec(EvenPolynomial{{0.0, 0.0, 0.5}});
    const Spectrum s = lowest_eigen(spec, 11, 1e-12);
    double de = 0.0, dg = 0.0;
    for (int n = 0; n <= 10; ++n) {
      de = std::max(de, std::abs(s.energies[n] - (n + 0.5)));
      dg = std::max(dg, std::abs(wkb_correction(spec, n, s.energies[n]).gamma));
    }
    return std::vector<Measure>{{"max_dE", de, 1e-10}, {"max_gamma", dg, 1e-9}};
  });

  criterion(4, "Sextic QES cross-check", 10.0, [] {
    const double e0 = lowest_eigen(PotentialSpec(SexticReduced{0.0}), 1, 1e-13).energies[0];
    const auto alg = qes_energies(sextic_h0_matrix(1, 1.0, 1.0));
    const double lo = 1.5 - std::sqrt(3.0), hi = 1.5 + std::sqrt(3.0);
    const Spectrum s = lowest_eigen(PotentialSpec(SexticReduced{1.0}), 3, 1e-12);
    const double d_alg = std::max(std::abs(alg[0] - lo), std::abs(alg[1] - hi));
    const double d_mesh = std::max(std::abs(s.energies[0] - alg[0]), std::abs(s.energies[2] - alg[1]));
    return std::vector<Measure>{
        {"N0_ground_dE", std::abs(e0 - 0.5), 1e-10}, {"algebraic_dE", d_alg, 1e-12}, {"mesh_vs_algebraic", d_mesh, 1e-8}};
  });

  criterion(5, "Published gamma-fit envelope", 180.0, [] {
    std::vector<Measure> ms;
    double oe = 0.0, og = 0.0;
    for (double N : kNs) {
      const PotentialSpec spec(SexticReduced{N});
      const Spectrum s = lowest_eigen(spec, 51, 1e-12);
      const auto ref = oracle::ho_basis_levels(oracle::sextic_coeffs(N), 300, 8.0, 51);
      SexticData d;
      for (int n = 0; n <= 50; ++n) {
        d.energies.push_back({n, s.energies[n]});
        oe = std::max(oe, std::abs(s.energies[n] - ref[n]) / std::max(1.0, std::abs(ref[n])));
        if (n >= 3) {
          const double g = wkb_correction(spec, n, s.energies[n]).gamma;
          d.gammas.push_back({n, g});
          og = std::max(og, std::abs(g - oracle_gamma(N, n, ref[n])));
        }
      }
      std::vector<double> fit;
      for (const auto& p : d.gammas) fit.push_back(gamma_fit_eval(published_gamma_params(N), p.n));
      ms.push_back({"N" + sci(N), relative_errors(d.gammas, fit, 3, 50).first, 5e-3});
      sextic_data[N] = std::move(d);
    }
    ms.push_back({"data_vs_oracle_E", oe, 1e-9});
    ms.push_back({"data_vs_oracle_gamma", og, 1e-8});
    return ms;
  });

  criterion(6, "Published E-fit envelope", 180.0, [] {
    std::vector<Measure> ms;
    for (double N : kNs) {
      const SexticData& d = sextic_data.at(N);
      std::vector<double> fit;
      for (const auto& p : d.energies)
        fit.push_back(energy_fit_eval(published_energy_params(N, d.energies[0].value), p.n));
      ms.push_back({"N" + sci(N), relative_errors(d.energies, fit, 3, 50).first, N == 0.0 ? 5e-4 : 5e-3});
    }
    return ms;
  });

  criterion(7, "Refit quality", 60.0, [] {
    std::vector<Measure> ms;
    for (double N : kNs) {
      const SexticData& d = sextic_data.at(N);
      const FitReport g = fit_gamma(d.gammas, published_gamma_params(N));
      const double E0 = d.energies[0].value;
      const FitReport e = fit_energy(d.energies, E0, published_energy_params(N, E0));
      ms.push_back({"gamma_N" + sci(N), g.max_rel_error, 2e-3});
      ms.push_back({"E_N" + sci(N), e.max_rel_error, N == 0.0 ? 1e-4 : 1e-3});
    }
    return ms;
  });

  criterion(8, "Asymptotics", 1.0, [] {
    // Pure sextic: S(E) = K E^{2/3}, so Bohr-Sommerfeld gives E ~ (pi / K)^{3/2} n^{3/2}.
    const double oracle_c = std::pow(kPi / oracle::pure_sextic_action(1.0), 1.5);
    const double c = asymptotic_coefficient();
    const double table2[] = {1.14224, 1.15169, 1.1596};
    double dt = 0.0;
    for (int i = 0; i < 3; ++i)
      dt = std::max(dt, std::abs(asymptotic_ratio(published_energy_params(kNs[i + 1], 0.0)) - table2[i]));
    return std::vector<Measure>{{"coef_vs_1.13254", std::abs(c - 1.13254), 5e-5},
                                {"coef_vs_oracle", std::abs(c - oracle_c), 1e-10},
                                {"N0_ratio_vs_1.13424", std::abs(asymptotic_ratio(published_energy_params(0.0, 0.0)) - 1.13424), 1e-4},
                                {"table2_ratios", dt, 1e-4}};
  });

  criterion(9, "N_critical", 30.0, [] {
    const double Nc = critical_N(1e-3);
    // The oscillator-basis ground level must change sign inside the reported bracket.
    const double lo = oracle::ho_basis_levels(oracle::sextic_coeffs(Nc - 1e-3), 200, 6.0, 1)[0];
    const double hi = oracle::ho_basis_levels(oracle::sextic_coeffs(Nc + 1e-3), 200, 6.0, 1)[0];
    return std::vector<Measure>{{"|Nc-0.73295|", std::abs(Nc - 0.73295), 2e-3},
                                {"oracle_sign_change", (lo > 0.0 && hi < 0.0) ? 0.0 : 1.0, 0.0}};
  });

  criterion(10, "SUSY algebra suite", 5.0, [] {
    double comm = 0.0;
    for (int N = 0; N <= 5; ++N) {
      const auto g = sl2_generators(N, N + 1);
      const auto& P = g.raising;
      const auto& Z = g.cartan;
      const auto& L = g.lowering;
      comm = std::max({comm, (Z * P - P * Z - P).cwiseAbs().maxCoeff(), (Z * L - L * Z + L).cwiseAbs().maxCoeff(),
                       (P * L - L * P + 2.0 * Z).cwiseAbs().maxCoeff()});
    }
    double lie = 0.0;
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.5, 2.5);
    for (int trial = 0; trial < 4; ++trial) {
      const double a = trial == 0 ? kA : u(rng), b = trial == 0 ? kB : u(rng), al = trial == 0 ? kAlpha : u(rng);
      for (int N = 0; N <= 5; ++N) lie = std::max(lie, morse_lie_form_check(N, a, b, al));
    }

    // Darboux partner of Morse(N) against Morse(N-1) raised by
    // R = alpha/2 (2b + alpha (2N - 1)), pointwise.
    double shape = 0.0;
    const auto grid = oracle::linspace(-2.0, 6.0, 161);
    for (int N = 1; N <= 3; ++N) {
      const PotentialSpec base(Morse{kA, kB, kAlpha, static_cast<double>(N)});
      const auto states = qes_states(base);
      const DarbouxResult d = darboux(base, states[0]);
      const double R = 0.5 * kAlpha * (2.0 * kB + kAlpha * (2.0 * N - 1.0));
      const PotentialSpec lowered(Morse{kA, kB, kAlpha, N - 1.0, R});
      for (double x : grid) shape = std::max(shape, std::abs(eval(d.partner, x) - eval(lowered, x)));
    }

    double inter = 0.0, annihilation = 0.0;
    const std::pair<PotentialSpec, std::vector<double>> cases[] = {
        {PotentialSpec(Morse{kA, kB, kAlpha, 1.0}), oracle::linspace(-2.0, 6.0, 161)},
        {PotentialSpec(SexticReduced{1.0}), oracle::linspace(-3.0, 3.0, 121)}};
    for (const auto& [spec, g] : cases) {
      const auto states = qes_states(spec);
      const QesState& seed = nodeless_state(states);
      for (const auto& st : states) {
        const IntertwiningResult r = intertwining_residual(spec, seed, st, g);
        if (&st == &seed) annihilation = std::max(annihilation, r.image_max);
        else inter = std::max(inter, r.residual);
      }
    }
    return std::vector<Measure>{{"commutators", comm, 1e-13},      {"lie_form", lie, 1e-12},
                                {"shape_invariance", shape, 1e-10}, {"intertwining", inter, 1e-8},
                                {"seed_annihilation", annihilation, 1e-12}};
  });

  std::printf("%s: %d of 10 criteria failed\n", failures == 0 ? "OK" : "FAILED", failures);
  return failures == 0 ? 0 : 1;
}
