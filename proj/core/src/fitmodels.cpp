#include "qeswkb/fitmodels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "qeswkb/errors.hpp"
#include "qeswkb/format.hpp"
#include "qeswkb/least_squares.hpp"

namespace qeswkb {

namespace {

constexpr std::array<double, 4> kPublishedN{0.0, 0.25, 0.5, 0.7};

constexpr std::array<std::array<double, 6>, 4> kGamma{{
    {0.019202, 0.0038722, 1.09402, 0.672026, 0.291328, 0.068666},
    {0.0332512, 0.0419986, 3.70908, 2.96296, 2.23779, 0.749137},
    {0.0469388, 0.0656, 5.57123, 4.45283, 3.46547, 1.17011},
    {0.041918, 0.0622568, 5.08444, 4.17168, 3.26907, 1.11086},
}};

constexpr std::array<std::array<double, 12>, 4> kEnergy{{
    {-303.678, -13.8988, 185.841, 22.0053, 13.4821, 0.777246, 1.06539, 16.0303, 4.22639, 3.82635, 1.17858, 0.969174},
    {-2961.78, 407.572, 687.568, 684.966, -1.90414, 0.755926, 1.06975, 40.1137, 22.2057, 3.02188, 0.936421, 0.967749},
    {-4024.34, 1776.87, 553.412, 210.095, 13.202, 1.7131, 1.07253, 37.9358, 5.64541, 5.36947, 1.09358, 0.965024},
    {-6563.79, 3617.77, 25.2448, 443.209, 20.7142, 2.55102, 1.07404, 40.0919, 11.9183, 6.51999, 1.18494, 0.962401},
}};

std::size_t nearest_column(double N) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < kPublishedN.size(); ++i)
    if (std::abs(kPublishedN[i] - N) < std::abs(kPublishedN[best] - N)) best = i;
  return best;
}

Eigen::VectorXd to_vector(const GammaFitParams& p) {
  Eigen::VectorXd v(6);
  v << p.a0, p.a1, p.b1, p.b2, p.b3, p.b4;
  return v;
}

GammaFitParams gamma_from(const Eigen::VectorXd& v, double N) { return {v(0), v(1), v(2), v(3), v(4), v(5), N}; }

Eigen::VectorXd to_vector(const EnergyFitParams& p) {
  Eigen::VectorXd v(12);
  for (int i = 0; i < 7; ++i) v(i) = p.A[i];
  for (int i = 0; i < 5; ++i) v(7 + i) = p.B[i];
  return v;
}

EnergyFitParams energy_from(const Eigen::VectorXd& v, double E0, double N) {
  EnergyFitParams p;
  p.E0 = E0;
  p.N_label = N;
  for (int i = 0; i < 7; ++i) p.A[i] = v(i);
  for (int i = 0; i < 5; ++i) p.B[i] = v(7 + i);
  return p;
}

std::vector<FitPoint> in_range(std::span<const FitPoint> data, const FitOptions& o) {
  std::vector<FitPoint> out;
  for (const auto& d : data)
    if (d.n >= o.n_low && d.n <= o.n_high) out.push_back(d);
  if (out.size() < 12) fail(ErrorKind::Domain, "fit needs at least 12 data points in the fit range");
  for (const auto& d : out)
    if (d.value == 0.0 || !std::isfinite(d.value))
      fail(ErrorKind::Domain, "fit data must be finite and non-zero (relative residuals)");
  return out;
}

LmResult multistart(const ResidualFunction& f, const Eigen::VectorXd& init, const FitOptions& o) {
  std::mt19937_64 rng(o.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  LmResult best;
  bool have = false;
  for (int s = 0; s < std::max(1, o.starts); ++s) {
    Eigen::VectorXd start = init;
    if (s > 0)
      for (Eigen::Index i = 0; i < start.size(); ++i) start(i) *= 1.0 + o.perturbation * normal(rng);
    LmResult r = levenberg_marquardt(f, start);
    if (!std::isfinite(r.cost)) continue;
    if (!have || r.cost < best.cost) {
      best = std::move(r);
      have = true;
    }
  }
  if (!have) fail(ErrorKind::Convergence, "least squares produced no finite solution");
  return best;
}

}  // namespace

double gamma_fit_eval(const GammaFitParams& p, double n) {
  if (!(n > 2.0)) fail(ErrorKind::ModelDomain, "gamma fit is defined for n >= 3, got n = " + format_number(n));
  const double m = n - 2.0;
  const double den = 1.0 + m * (p.b1 * p.b1 + m * (p.b2 * p.b2 + m * (p.b3 * p.b3 + m * p.b4 * p.b4)));
  return (p.a0 + p.a1 * m) / std::sqrt(den);
}

double energy_fit_eval(const EnergyFitParams& p, double n) {
  if (!(n >= 0.0)) fail(ErrorKind::ModelDomain, "energy fit is defined for n >= 0, got n = " + format_number(n));
  const double m = n + 1.0;
  double num = 0.0;
  for (int i = 6; i >= 0; --i) num = num * m + p.A[i];
  double den = 0.0;
  for (int i = 4; i >= 0; --i) den = (den + p.B[i] * p.B[i]) * m;
  den += 1.0;
  return p.E0 * m + std::sqrt(m - 1.0) * num / den;
}

double asymptotic_coefficient() {
  return 0.5 * std::pow(std::numbers::pi, 0.75) * std::pow(std::tgamma(5.0 / 3.0) / std::tgamma(7.0 / 6.0), 1.5);
}

double asymptotic_ratio(const EnergyFitParams& p) { return p.A[6] / (p.B[4] * p.B[4]); }

std::vector<double> published_N_values() { return {kPublishedN.begin(), kPublishedN.end()}; }

GammaFitParams published_gamma_params(double N) {
  const auto& g = kGamma[nearest_column(N)];
  return {g[0], g[1], g[2], g[3], g[4], g[5], N};
}

EnergyFitParams published_energy_params(double N, double E0) {
  const auto& e = kEnergy[nearest_column(N)];
  EnergyFitParams p;
  p.E0 = E0;
  p.N_label = N;
  std::copy(e.begin(), e.begin() + 7, p.A.begin());
  std::copy(e.begin() + 7, e.end(), p.B.begin());
  return p;
}

std::pair<double, double> relative_errors(std::span<const FitPoint> data, std::span<const double> fit, int n_low,
                                          int n_high) {
  if (fit.size() != data.size()) fail(ErrorKind::Domain, "relative_errors: size mismatch");
  double worst = 0.0, sum = 0.0;
  int count = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data[i].n < n_low || data[i].n > n_high) continue;
    const double e = std::abs(fit[i] / data[i].value - 1.0);
    worst = std::max(worst, e);
    sum += e * e;
    ++count;
  }
  return {worst, count ? std::sqrt(sum / count) : 0.0};
}

FitReport fit_gamma(std::span<const FitPoint> data, const GammaFitParams& init, const FitOptions& options) {
  const auto pts = in_range(data, options);
  const auto rows = static_cast<Eigen::Index>(pts.size());
  ResidualFunction f = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r, Eigen::MatrixXd* J) {
    r.resize(rows);
    if (J) J->resize(rows, 6);
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double m = pts[i].n - 2.0, y = pts[i].value;
      const double pw[5] = {1.0, m, m * m, m * m * m, m * m * m * m};
      double den = 1.0;
      for (int k = 1; k <= 4; ++k) den += p(1 + k) * p(1 + k) * pw[k];
      const double num = p(0) + p(1) * m;
      const double s = 1.0 / std::sqrt(den);
      r(i) = (num * s - y) / y;
      if (J) {
        (*J)(i, 0) = s / y;
        (*J)(i, 1) = m * s / y;
        for (int k = 1; k <= 4; ++k) (*J)(i, 1 + k) = -num * p(1 + k) * pw[k] * s * s * s / y;
      }
    }
  };
  const LmResult best = multistart(f, to_vector(init), options);
  FitReport rep;
  const GammaFitParams fitted = gamma_from(best.params, init.N_label);
  rep.params = fitted;
  std::vector<double> values;
  for (const auto& d : pts) values.push_back(gamma_fit_eval(fitted, d.n));
  std::tie(rep.max_rel_error, rep.rms_rel_error) = relative_errors(pts, values, options.n_low, options.n_high);
  rep.n_range = {options.n_low, options.n_high};
  rep.iterations = best.iterations;
  rep.converged = best.converged;
  return rep;
}

FitReport fit_energy(std::span<const FitPoint> data, double E0, const EnergyFitParams& init,
                     const FitOptions& options) {
  const auto pts = in_range(data, options);
  const auto rows = static_cast<Eigen::Index>(pts.size());
  ResidualFunction f = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r, Eigen::MatrixXd* J) {
    r.resize(rows);
    if (J) J->resize(rows, 12);
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double m = pts[i].n + 1.0, y = pts[i].value;
      double pw[7];
      pw[0] = 1.0;
      for (int k = 1; k < 7; ++k) pw[k] = pw[k - 1] * m;
      double num = 0.0, den = 1.0;
      for (int k = 0; k < 7; ++k) num += p(k) * pw[k];
      for (int k = 1; k <= 5; ++k) den += p(6 + k) * p(6 + k) * pw[k];
      const double s = std::sqrt(m - 1.0);
      r(i) = (E0 * m + s * num / den - y) / y;
      if (J) {
        for (int k = 0; k < 7; ++k) (*J)(i, k) = s * pw[k] / den / y;
        for (int k = 1; k <= 5; ++k) (*J)(i, 6 + k) = -2.0 * s * num * p(6 + k) * pw[k] / (den * den) / y;
      }
    }
  };
  const LmResult best = multistart(f, to_vector(init), options);
  FitReport rep;
  const EnergyFitParams fitted = energy_from(best.params, E0, init.N_label);
  rep.params = fitted;
  std::vector<double> values;
  for (const auto& d : pts) values.push_back(energy_fit_eval(fitted, d.n));
  std::tie(rep.max_rel_error, rep.rms_rel_error) = relative_errors(pts, values, options.n_low, options.n_high);
  rep.n_range = {options.n_low, options.n_high};
  rep.iterations = best.iterations;
  rep.converged = best.converged;
  return rep;
}

namespace {

std::string table_header(std::span<const double> Ns) {
  std::vector<std::string> head{"param"};
  for (double N : Ns) head.push_back("N=" + format_number(N));
  return join_row(head, '\t');
}

std::string table_row(const std::string& name, const std::vector<double>& values) {
  std::vector<std::string> row{name};
  for (double v : values) row.push_back(format_number(v));
  return join_row(row, '\t');
}

// name -> values per column; the header gives the N labels.
struct ParsedTable {
  std::vector<double> Ns;
  std::vector<std::pair<std::string, std::vector<double>>> rows;
};

ParsedTable parse_table(std::string_view text) {
  ParsedTable t;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream cells(line);
    std::vector<std::string> tok;
    for (std::string c; cells >> c;) tok.push_back(c);
    if (tok.empty() || tok[0][0] == '#') continue;
    const std::string ctx = "line " + std::to_string(line_no);
    if (!header) {
      if (tok[0] != "param") fail(ErrorKind::Parse, ctx + ": expected a 'param' header");
      for (std::size_t i = 1; i < tok.size(); ++i) {
        if (tok[i].rfind("N=", 0) != 0) fail(ErrorKind::Parse, ctx + ": column label must read N=<value>");
        t.Ns.push_back(parse_number(std::string_view(tok[i]).substr(2), ctx));
      }
      header = true;
      continue;
    }
    if (tok.size() != t.Ns.size() + 1)
      fail(ErrorKind::Parse, ctx + ": expected " + std::to_string(t.Ns.size()) + " values for " + tok[0]);
    std::vector<double> v;
    for (std::size_t i = 1; i < tok.size(); ++i) v.push_back(parse_number(tok[i], ctx + " (" + tok[0] + ")"));
    t.rows.emplace_back(tok[0], std::move(v));
  }
  if (!header) fail(ErrorKind::Parse, "parameter table has no header");
  return t;
}

const std::vector<double>& need_row(const ParsedTable& t, const std::string& name) {
  for (const auto& [n, v] : t.rows)
    if (n == name) return v;
  fail(ErrorKind::Parse, "parameter table is missing row " + name);
}

}  // namespace

std::string gamma_params_table(std::span<const GammaFitParams> sets) {
  std::vector<double> Ns;
  for (const auto& s : sets) Ns.push_back(s.N_label);
  std::string out = table_header(Ns);
  auto row = [&](const std::string& name, double GammaFitParams::*field) {
    std::vector<double> v;
    for (const auto& s : sets) v.push_back(s.*field);
    out += table_row(name, v);
  };
  row("a0", &GammaFitParams::a0);
  row("a1", &GammaFitParams::a1);
  row("b1", &GammaFitParams::b1);
  row("b2", &GammaFitParams::b2);
  row("b3", &GammaFitParams::b3);
  row("b4", &GammaFitParams::b4);
  return out;
}

std::string energy_params_table(std::span<const EnergyFitParams> sets) {
  std::vector<double> Ns;
  for (const auto& s : sets) Ns.push_back(s.N_label);
  std::string out = table_header(Ns);
  std::vector<double> v;
  for (const auto& s : sets) v.push_back(s.E0);
  out += table_row("E0", v);
  for (int k = 0; k < 7; ++k) {
    v.clear();
    for (const auto& s : sets) v.push_back(s.A[k]);
    out += table_row("A" + std::to_string(k), v);
  }
  for (int k = 0; k < 5; ++k) {
    v.clear();
    for (const auto& s : sets) v.push_back(s.B[k]);
    out += table_row("B" + std::to_string(k + 1), v);
  }
  v.clear();
  for (const auto& s : sets) v.push_back(asymptotic_ratio(s));
  out += table_row("A6/B5^2", v);
  return out;
}

std::vector<GammaFitParams> parse_gamma_params_table(std::string_view text) {
  const ParsedTable t = parse_table(text);
  std::vector<GammaFitParams> out(t.Ns.size());
  const char* names[6] = {"a0", "a1", "b1", "b2", "b3", "b4"};
  double GammaFitParams::*fields[6] = {&GammaFitParams::a0, &GammaFitParams::a1, &GammaFitParams::b1,
                                       &GammaFitParams::b2, &GammaFitParams::b3, &GammaFitParams::b4};
  for (int r = 0; r < 6; ++r) {
    const auto& v = need_row(t, names[r]);
    for (std::size_t i = 0; i < out.size(); ++i) out[i].*fields[r] = v[i];
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i].N_label = t.Ns[i];
  return out;
}

std::vector<EnergyFitParams> parse_energy_params_table(std::string_view text) {
  const ParsedTable t = parse_table(text);
  std::vector<EnergyFitParams> out(t.Ns.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].N_label = t.Ns[i];
    out[i].E0 = need_row(t, "E0")[i];
    for (int k = 0; k < 7; ++k) out[i].A[k] = need_row(t, "A" + std::to_string(k))[i];
    for (int k = 0; k < 5; ++k) out[i].B[k] = need_row(t, "B" + std::to_string(k + 1))[i];
  }
  return out;
}

std::string residual_csv(std::span<const FitPoint> data, std::span<const double> fit, char sep) {
  if (fit.size() != data.size()) fail(ErrorKind::Domain, "residual_csv: size mismatch");
  std::string out = join_row({"n", "exact", "fit", "rel_error"}, sep);
  for (std::size_t i = 0; i < data.size(); ++i)
    out += join_row({std::to_string(data[i].n), format_number(data[i].value), format_number(fit[i]),
                     format_number(fit[i] / data[i].value - 1.0)},
                    sep);
  return out;
}

}  // namespace qeswkb
