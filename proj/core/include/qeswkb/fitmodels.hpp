#pragma once

// Rational interpolations of the WKB correction gamma(n) and of the
// spectrum E_n of the sextic QES oscillator, with least-squares refits.

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace qeswkb {

// gamma_fit(n) = (a0 + a1 m) / sqrt(1 + b1^2 m + b2^2 m^2 + b3^2 m^3 + b4^2 m^4), m = n - 2
struct GammaFitParams {
  double a0 = 0.0, a1 = 0.0;
  double b1 = 0.0, b2 = 0.0, b3 = 0.0, b4 = 0.0;
  double N_label = 0.0;
};

// E_fit(n) = E0 m + sqrt(m - 1) (A0 + ... + A6 m^6) / (1 + B1^2 m + ... + B5^2 m^5), m = n + 1
struct EnergyFitParams {
  double E0 = 0.0;
  std::array<double, 7> A{};
  std::array<double, 5> B{};
  double N_label = 0.0;
};

// Throws Error{ModelDomain} for n <= 2.
double gamma_fit_eval(const GammaFitParams& p, double n);
// n >= 0; real n is allowed for asymptotic checks.
double energy_fit_eval(const EnergyFitParams& p, double n);

// Bohr-Sommerfeld coefficient of n^{3/2} for V ~ x^6 / 2.
double asymptotic_coefficient();
// A6 / B5^2, the large-n coefficient of the energy model.
double asymptotic_ratio(const EnergyFitParams& p);

// Published parameter sets for N = 0, 1/4, 1/2, 7/10; other N map to the
// nearest column. The energy sets carry the supplied ground energy.
std::vector<double> published_N_values();
GammaFitParams published_gamma_params(double N);
EnergyFitParams published_energy_params(double N, double E0);

struct FitPoint {
  int n;
  double value;
};

struct FitReport {
  std::variant<GammaFitParams, EnergyFitParams> params;
  double max_rel_error = 0.0;
  double rms_rel_error = 0.0;
  std::pair<int, int> n_range{0, 0};
  int iterations = 0;
  bool converged = false;
};

struct FitOptions {
  int n_low = 3;  // inclusive range used for the objective and the report
  int n_high = 50;
  int starts = 8;  // the initial guess plus starts - 1 perturbed copies
  double perturbation = 0.1;
  unsigned long long seed = 20240611ULL;
};

// Relative-residual least squares; init defaults to the published set for N.
FitReport fit_gamma(std::span<const FitPoint> data, const GammaFitParams& init, const FitOptions& options = {});
FitReport fit_energy(std::span<const FitPoint> data, double E0, const EnergyFitParams& init,
                     const FitOptions& options = {});

// Max and rms of |fit/exact - 1| over points with n in [n_low, n_high].
std::pair<double, double> relative_errors(std::span<const FitPoint> data, std::span<const double> fit, int n_low,
                                          int n_high);

// Flat tables with one column per parameter set.
std::string gamma_params_table(std::span<const GammaFitParams> sets);
std::string energy_params_table(std::span<const EnergyFitParams> sets);
std::vector<GammaFitParams> parse_gamma_params_table(std::string_view text);
std::vector<EnergyFitParams> parse_energy_params_table(std::string_view text);

// n, exact, fit, rel_error
std::string residual_csv(std::span<const FitPoint> data, std::span<const double> fit, char sep = ',');

}  // namespace qeswkb
