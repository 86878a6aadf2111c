#include <cmath>
#include <map>
#include <numbers>

#include <gtest/gtest.h>

#include "qeswkb/eigensolver.hpp"
#include "qeswkb/fitmodels.hpp"
#include "qeswkb/wkb.hpp"

using namespace qeswkb;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no qeswkb::Error thrown";
  return ErrorKind::Domain;
}

struct Fresh {
  std::vector<FitPoint> energies;  // n = 0..50
  std::vector<FitPoint> gammas;    // n = 3..50
};

const Fresh& fresh(double N) {
  static std::map<double, Fresh> cache;
  if (auto it = cache.find(N); it != cache.end()) return it->second;
  const PotentialSpec spec(SexticReduced{N});
  const Spectrum s = lowest_eigen(spec, 51, 1e-12);
  Fresh f;
  for (int n = 0; n <= 50; ++n) {
    f.energies.push_back({n, s.energies[n]});
    if (n >= 3) f.gammas.push_back({n, wkb_correction(spec, n, s.energies[n]).gamma});
  }
  return cache.emplace(N, std::move(f)).first->second;
}

std::vector<double> eval_all(const FitReport& r, std::span<const FitPoint> data) {
  std::vector<double> out;
  for (const auto& p : data) {
    if (const auto* g = std::get_if<GammaFitParams>(&r.params)) out.push_back(gamma_fit_eval(*g, p.n));
    else out.push_back(energy_fit_eval(std::get<EnergyFitParams>(r.params), p.n));
  }
  return out;
}

}  // namespace

TEST(Models, GammaEvaluation) {
  const GammaFitParams p = published_gamma_params(0.0);
  EXPECT_NEAR(gamma_fit_eval(p, 3), 0.013944, 1e-6);
  const double g10 = gamma_fit_eval(published_gamma_params(0.5), 10);
  EXPECT_GT(g10, 0.0);
  EXPECT_LT(g10, 0.05);
  const double m = 1e6;
  EXPECT_NEAR(gamma_fit_eval(p, m + 2) * std::abs(p.b4) * m / p.a1, 1.0, 1e-2);
  EXPECT_EQ(kind_of([&] { gamma_fit_eval(p, 2); }), ErrorKind::ModelDomain);
  EXPECT_EQ(kind_of([&] { gamma_fit_eval(p, -1); }), ErrorKind::ModelDomain);
}

TEST(Models, EnergyEvaluationAndRatios) {
  const EnergyFitParams p0 = published_energy_params(0.0, 0.5);
  EXPECT_EQ(energy_fit_eval(p0, 0), 0.5);
  EXPECT_EQ(energy_fit_eval(published_energy_params(0.7, -0.123), 0), -0.123);
  EXPECT_NEAR(asymptotic_ratio(p0), 1.06539 / (0.969174 * 0.969174), 1e-12);
  EXPECT_NEAR(asymptotic_ratio(p0), 1.13424, 1e-4);
  EXPECT_NEAR(asymptotic_ratio(published_energy_params(0.25, 0.0)), 1.14224, 1e-4);
  EXPECT_NEAR(asymptotic_ratio(published_energy_params(0.5, 0.0)), 1.15169, 1e-4);
  EXPECT_NEAR(asymptotic_ratio(published_energy_params(0.7, 0.0)), 1.1596, 1e-4);
  EXPECT_EQ(published_gamma_params(0.3).a0, published_gamma_params(0.25).a0);
  EXPECT_EQ(published_N_values().size(), 4u);
}

TEST(Models, DenominatorsStayPositive) {
  for (double N : published_N_values()) {
    const auto g = published_gamma_params(N);
    const auto e = published_energy_params(N, 1.0);
    for (double n = 2.01; n < 1e4; n *= 1.07) {
      EXPECT_TRUE(std::isfinite(gamma_fit_eval(g, n)));
      EXPECT_TRUE(std::isfinite(energy_fit_eval(e, n)));
      EXPECT_GT(energy_fit_eval(e, n), 0.0);
    }
  }
}

TEST(Asymptotics, CoefficientOfThePureSextic) {
  const double c = asymptotic_coefficient();
  EXPECT_NEAR(c, 1.13254, 5e-5);
  const double direct = 0.5 * std::pow(std::numbers::pi, 0.75) *
                        std::pow(std::tgamma(5.0 / 3.0) / std::tgamma(7.0 / 6.0), 1.5);
  EXPECT_NEAR(c, direct, 1e-14);
  EXPECT_LT(std::abs(1.13424 / c - 1.0), 0.015);
  // The published large-n ratios drift away from c as N grows: 0.86%,
  // 1.69% and 2.39% for N = 1/4, 1/2, 7/10.
  double prev = std::abs(asymptotic_ratio(published_energy_params(0.0, 0.0)) / c - 1.0);
  for (double N : {0.25, 0.5, 0.7}) {
    const double dev = std::abs(asymptotic_ratio(published_energy_params(N, 0.0)) / c - 1.0);
    EXPECT_GT(dev, prev);
    EXPECT_LT(dev, 0.025);
    prev = dev;
  }
}

TEST(Asymptotics, LargeNLogSlope) {
  for (double N : published_N_values()) {
    const auto e = published_energy_params(N, 0.5);
    const double n = 1e4, f = 1.01;
    const double slope = std::log(energy_fit_eval(e, n * f) / energy_fit_eval(e, n / f)) / (2.0 * std::log(f));
    EXPECT_NEAR(slope, 1.5, 0.01) << "N = " << N;
  }
}

TEST(Fits, SyntheticRoundTrips) {
  for (double N : published_N_values()) {
    const GammaFitParams g = published_gamma_params(N);
    std::vector<FitPoint> gd;
    for (int n = 3; n <= 50; ++n) gd.push_back({n, gamma_fit_eval(g, n)});
    GammaFitParams gi = g;
    gi.a0 *= 1.01;
    gi.b2 *= 0.99;
    gi.b4 *= 1.02;
    const FitReport gr = fit_gamma(gd, gi);
    EXPECT_TRUE(gr.converged);
    EXPECT_LT(gr.max_rel_error, 1e-10);
    EXPECT_EQ(gr.n_range, std::make_pair(3, 50));

    const EnergyFitParams e = published_energy_params(N, 0.5);
    std::vector<FitPoint> ed;
    for (int n = 0; n <= 50; ++n) ed.push_back({n, energy_fit_eval(e, n)});
    EnergyFitParams ei = e;
    ei.A[0] *= 1.01;
    ei.A[6] *= 1.01;
    ei.B[4] *= 0.99;
    const FitReport er = fit_energy(ed, 0.5, ei);
    EXPECT_TRUE(er.converged);
    EXPECT_LT(er.max_rel_error, 1e-10) << "N = " << N;
    EXPECT_EQ(std::get<EnergyFitParams>(er.params).E0, 0.5);
  }
}

TEST(Fits, PublishedParametersAgainstFreshData) {
  for (double N : {0.0, 0.7}) {
    const Fresh& f = fresh(N);
    std::vector<double> g, e;
    for (const auto& p : f.gammas) g.push_back(gamma_fit_eval(published_gamma_params(N), p.n));
    for (const auto& p : f.energies) e.push_back(energy_fit_eval(published_energy_params(N, f.energies[0].value), p.n));
    EXPECT_LE(relative_errors(f.gammas, g, 3, 50).first, 5e-3);
    EXPECT_LE(relative_errors(f.energies, e, 3, 50).first, N == 0.0 ? 5e-4 : 5e-3);
  }
}

TEST(Fits, RefitsOnFreshData) {
  for (double N : {0.0, 0.7}) {
    const Fresh& f = fresh(N);
    const FitReport gr = fit_gamma(f.gammas, published_gamma_params(N));
    EXPECT_TRUE(gr.converged);
    EXPECT_LE(gr.max_rel_error, 2e-3);
    const auto fitted = eval_all(gr, f.gammas);
    EXPECT_NEAR(relative_errors(f.gammas, fitted, 3, 50).first, gr.max_rel_error, 1e-15);

    const double E0 = f.energies[0].value;
    const FitReport er = fit_energy(f.energies, E0, published_energy_params(N, E0));
    EXPECT_TRUE(er.converged);
    EXPECT_LE(er.max_rel_error, N == 0.0 ? 1e-4 : 1e-3);
    EXPECT_LE(er.rms_rel_error, er.max_rel_error);
  }
}

TEST(Fits, DeterministicAcrossCalls) {
  const Fresh& f = fresh(0.0);
  const FitReport a = fit_gamma(f.gammas, published_gamma_params(0.0));
  const FitReport b = fit_gamma(f.gammas, published_gamma_params(0.0));
  EXPECT_EQ(a.max_rel_error, b.max_rel_error);
  EXPECT_EQ(std::get<GammaFitParams>(a.params).b4, std::get<GammaFitParams>(b.params).b4);
}

TEST(Tables, RoundTripAndParseErrors) {
  std::vector<GammaFitParams> gs;
  std::vector<EnergyFitParams> es;
  for (double N : published_N_values()) {
    gs.push_back(published_gamma_params(N));
    es.push_back(published_energy_params(N, 0.125 + N));
  }
  const auto g2 = parse_gamma_params_table(gamma_params_table(gs));
  ASSERT_EQ(g2.size(), gs.size());
  for (std::size_t i = 0; i < gs.size(); ++i) {
    EXPECT_EQ(g2[i].a0, gs[i].a0);
    EXPECT_EQ(g2[i].b4, gs[i].b4);
    EXPECT_EQ(g2[i].N_label, gs[i].N_label);
  }
  const std::string et = energy_params_table(es);
  EXPECT_NE(et.find("A6/B5^2"), std::string::npos);
  const auto e2 = parse_energy_params_table(et);
  ASSERT_EQ(e2.size(), es.size());
  for (std::size_t i = 0; i < es.size(); ++i) {
    EXPECT_EQ(e2[i].E0, es[i].E0);
    EXPECT_EQ(e2[i].A, es[i].A);
    EXPECT_EQ(e2[i].B, es[i].B);
  }
  EXPECT_EQ(kind_of([] { parse_gamma_params_table("param\tN=0\na0\tnope\n"); }), ErrorKind::Parse);
  EXPECT_EQ(kind_of([] { parse_energy_params_table("param\tN=0\nE0\t1\n"); }), ErrorKind::Parse);
  EXPECT_EQ(kind_of([] { parse_gamma_params_table(""); }), ErrorKind::Parse);
}

TEST(Tables, ResidualCsv) {
  const std::vector<FitPoint> data{{3, 2.0}, {4, 4.0}};
  const std::vector<double> fit{2.0, 5.0};
  const std::string csv = residual_csv(data, fit);
  EXPECT_EQ(csv, "n,exact,fit,rel_error\n3,2,2,0\n4,4,5,0.25\n");
  const auto [mx, rms] = relative_errors(data, fit, 3, 50);
  EXPECT_DOUBLE_EQ(mx, 0.25);
  EXPECT_DOUBLE_EQ(rms, 0.25 / std::sqrt(2.0));
}
