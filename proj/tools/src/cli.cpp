#include "qeswkb_tools/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "qeswkb/eigensolver.hpp"
#include "qeswkb/errors.hpp"
#include "qeswkb/fitmodels.hpp"
#include "qeswkb/format.hpp"
#include "qeswkb/qes_algebra.hpp"
#include "qeswkb/wkb.hpp"
#include "qeswkb_tools/pipeline.hpp"

namespace qeswkb::tools {

namespace fs = std::filesystem;

namespace {

class Output {
 public:
  Output(const RunConfig& c, std::ostream& out) : config_(c), out_(out) {
    if (!c.output_dir.empty()) fs::create_directories(c.output_dir);
  }

  std::string ext() const { return config_.sep == '\t' ? ".tsv" : ".csv"; }

  // The main table goes to stdout when no output directory was given.
  void table(const std::string& stem, const std::string& text, bool main = true) {
    if (config_.output_dir.empty()) {
      if (main) out_ << text;
      return;
    }
    write(stem + ext(), text);
  }

  void text(const std::string& name, const std::string& text, bool main = false) {
    if (config_.output_dir.empty()) {
      if (main) out_ << text;
      return;
    }
    write(name, text);
  }

  void note(const std::string& line) { out_ << line << '\n'; }

 private:
  void write(const std::string& name, const std::string& text) {
    std::lock_guard lock(mutex_);
    const fs::path path = fs::path(config_.output_dir) / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) fail(ErrorKind::Domain, "cannot write " + path.string());
    f << text;
  }

  const RunConfig& config_;
  std::ostream& out_;
  std::mutex mutex_;
};

std::string label(double N) { return "N" + format_number(N); }

const SexticReduced& need_sextic_reduced(const RunConfig& c) {
  const auto* s = c.potential.get_if<SexticReduced>();
  if (!s) fail(ErrorKind::Unsupported, "this command needs --family sextic_reduced");
  return *s;
}

const Morse& need_morse(const RunConfig& c) {
  const auto* m = c.potential.get_if<Morse>();
  if (!m) fail(ErrorKind::Unsupported, "this command needs --family morse");
  return *m;
}

std::vector<double> sample_grid(double lo, double hi, double step) {
  std::vector<double> g;
  const int n = static_cast<int>(std::lround((hi - lo) / step));
  for (int i = 0; i <= n; ++i) g.push_back(lo + step * i);
  return g;
}

std::vector<double> grid_for(const PotentialSpec& spec) {
  if (spec.get_if<Morse>()) return sample_grid(-3.0, 6.0, 0.05);
  return sample_grid(-3.0, 3.0, 0.05);
}

std::string report_line(const std::string& what, const FitReport& r) {
  std::ostringstream s;
  s << what << ": max_rel_error=" << format_number(r.max_rel_error, 6)
    << " rms_rel_error=" << format_number(r.rms_rel_error, 6) << " n=[" << r.n_range.first << ","
    << r.n_range.second << "] iterations=" << r.iterations << " converged=" << (r.converged ? "yes" : "no");
  return s.str();
}

std::vector<double> gamma_values(const GammaFitParams& p, std::span<const FitPoint> pts) {
  std::vector<double> v;
  for (const auto& d : pts) v.push_back(gamma_fit_eval(p, d.n));
  return v;
}

std::vector<double> energy_values(const EnergyFitParams& p, std::span<const FitPoint> pts) {
  std::vector<double> v;
  for (const auto& d : pts) v.push_back(energy_fit_eval(p, d.n));
  return v;
}

// ---- commands -----------------------------------------------------------------

int cmd_spectrum(const RunConfig& c, Output& o) {
  const Spectrum sp = lowest_eigen(c.potential, c.n_max + 1, c.tol);
  o.table("spectrum", spectrum_csv(sp, c.sep));
  o.table("eigenfunctions", eigenfunctions_csv(sp, c.sep), false);
  return kExitOk;
}

int cmd_wkb(const RunConfig& c, Output& o) {
  const Spectrum sp = lowest_eigen(c.potential, c.n_max + 1, c.tol);
  std::vector<WkbRecord> records(sp.energies.size());
  parallel_for(static_cast<int>(records.size()),
               [&](int n) { records[n] = wkb_correction(c.potential, n, sp.energies[n]); });
  o.table("wkb", wkb_csv(records, c.sep));
  return kExitOk;
}

int cmd_fit_gamma(const RunConfig& c, Output& o) {
  const double N = need_sextic_reduced(c).N;
  const SexticDataset d = sextic_dataset(N, c.n_max, c.tol);
  const auto pts = gamma_points(d);
  const GammaFitParams published = published_gamma_params(N);
  FitOptions opt;
  opt.n_high = c.n_max;
  const FitReport rep = fit_gamma(pts, published, opt);
  const auto& refit = std::get<GammaFitParams>(rep.params);
  o.text("gamma_params_published.txt", gamma_params_table(std::span(&published, 1)));
  o.text("gamma_params_refit.txt", gamma_params_table(std::span(&refit, 1)), true);
  o.table("gamma_residuals_published", residual_csv(pts, gamma_values(published, pts), c.sep), false);
  o.table("gamma_residuals_refit", residual_csv(pts, gamma_values(refit, pts), c.sep), false);
  o.note(report_line("gamma refit " + label(N), rep));
  return kExitOk;
}

int cmd_fit_energy(const RunConfig& c, Output& o) {
  const double N = need_sextic_reduced(c).N;
  const SexticDataset d = sextic_dataset(N, c.n_max, c.tol);
  const auto pts = energy_points(d);
  const double E0 = d.spectrum.energies[0];
  const EnergyFitParams published = published_energy_params(N, E0);
  FitOptions opt;
  opt.n_high = c.n_max;
  const FitReport rep = fit_energy(pts, E0, published, opt);
  const auto& refit = std::get<EnergyFitParams>(rep.params);
  o.text("energy_params_published.txt", energy_params_table(std::span(&published, 1)));
  o.text("energy_params_refit.txt", energy_params_table(std::span(&refit, 1)), true);
  o.table("energy_residuals_published", residual_csv(pts, energy_values(published, pts), c.sep), false);
  o.table("energy_residuals_refit", residual_csv(pts, energy_values(refit, pts), c.sep), false);
  o.note(report_line("energy refit " + label(N), rep));
  return kExitOk;
}

int cmd_qes(const RunConfig& c, Output& o) {
  const auto states = qes_states(c.potential);
  o.text("qes.txt", qes_report(states), true);
  const auto grid = grid_for(c.potential);
  std::string res = join_row({"index", "E", "residual"}, c.sep);
  for (std::size_t i = 0; i < states.size(); ++i)
    res += join_row({std::to_string(i), format_number(states[i].energy),
                     format_number(residual_check(c.potential, states[i], grid), 6)},
                    c.sep);
  o.table("qes_residuals", res, false);
  return kExitOk;
}

int cmd_susy(const RunConfig& c, Output& o) {
  const auto states = qes_states(c.potential);
  const QesState& seed = nodeless_state(states);
  const DarbouxResult d = darboux(c.potential, seed);
  const auto grid = grid_for(c.potential);
  o.table("partner", partner_samples_csv(c.potential, d.partner, grid, c.sep));
  std::string rows = join_row({"index", "E", "residual", "image", "annihilated"}, c.sep);
  for (std::size_t i = 0; i < states.size(); ++i) {
    const IntertwiningResult r = intertwining_residual(c.potential, seed, states[i], grid);
    rows += join_row({std::to_string(i), format_number(states[i].energy), format_number(r.residual, 6),
                      format_number(r.image_max, 6), r.annihilated ? "1" : "0"},
                     c.sep);
  }
  o.table("intertwining", rows, false);
  o.text("partner.txt", to_key_value(d.partner) + "\n");
  return kExitOk;
}

int cmd_morse(const RunConfig& c, Output& o) {
  const Morse& m = need_morse(c);
  const int count = *bound_state_count(c.potential);
  const int n_max = std::min(c.n_max, count - 1);
  const auto exact = morse_closed_energies(m, n_max);
  const Spectrum sp = lowest_eigen(c.potential, n_max + 1, c.tol);
  const double b_eff = m.b + m.N * m.alpha;
  std::string rows = join_row({"n", "E_exact", "E_numeric", "abs_diff", "gamma_closed", "gamma_quadrature"}, c.sep);
  for (int n = 0; n <= n_max; ++n) {
    const double g_closed = morse_action_closed(m.a, b_eff, m.alpha, exact[n] - m.offset) / std::numbers::pi - n - 0.5;
    const double g_quad = wkb_correction(c.potential, n, exact[n]).gamma;
    rows += join_row({std::to_string(n), format_number(exact[n]), format_number(sp.energies[n]),
                      format_number(std::abs(exact[n] - sp.energies[n]), 6), format_number(g_closed, 6),
                      format_number(g_quad, 6)},
                     c.sep);
  }
  o.table("morse", rows);
  return kExitOk;
}

// ---- reproduce --------------------------------------------------------------------

struct Summary {
  std::vector<Check> checks;
  std::vector<std::string> errors;
  std::mutex mutex;

  void add(Check c) {
    std::lock_guard lock(mutex);
    checks.push_back(std::move(c));
  }
  void error(const std::string& where, const Error& e) {
    std::lock_guard lock(mutex);
    errors.push_back(where + "\t" + std::string(to_string(e.kind())) + "\t" + e.what());
  }
};

template <class Fn>
void guarded(Summary& s, const std::string& where, Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    s.error(where, e);
  } catch (const std::exception& e) {
    s.error(where, Error(ErrorKind::Domain, e.what()));
  }
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

struct SexticOutcome {
  GammaFitParams gamma_refit;
  EnergyFitParams energy_refit;
  GammaFitParams gamma_published;
  EnergyFitParams energy_published;
  std::vector<Check> checks;
};

SexticOutcome sextic_part(double N, const RunConfig& c, Output& o) {
  const SexticDataset d = sextic_dataset(N, 50, c.tol, 2);
  const std::string tag = label(N);
  o.table("spectrum_" + tag, spectrum_csv(d.spectrum, c.sep));
  o.table("wkb_" + tag, wkb_csv(d.wkb, c.sep));

  SexticOutcome out;
  const auto gpts = gamma_points(d);
  const auto epts = energy_points(d);
  const double E0 = d.spectrum.energies[0];
  out.gamma_published = published_gamma_params(N);
  out.energy_published = published_energy_params(N, E0);

  const auto g_pub = gamma_values(out.gamma_published, gpts);
  const auto e_pub = energy_values(out.energy_published, epts);
  o.table("gamma_residuals_published_" + tag, residual_csv(gpts, g_pub, c.sep));
  o.table("energy_residuals_published_" + tag, residual_csv(epts, e_pub, c.sep));
  out.checks.push_back(check_below("gamma_fit_published_" + tag, relative_errors(gpts, g_pub, 3, 50).first, 5e-3));
  out.checks.push_back(check_below("energy_fit_published_" + tag, relative_errors(epts, e_pub, 3, 50).first,
                                   N == 0.0 ? 5e-4 : 5e-3));

  const FitReport gr = fit_gamma(gpts, out.gamma_published);
  const FitReport er = fit_energy(epts, E0, out.energy_published);
  out.gamma_refit = std::get<GammaFitParams>(gr.params);
  out.energy_refit = std::get<EnergyFitParams>(er.params);
  o.table("gamma_residuals_refit_" + tag, residual_csv(gpts, gamma_values(out.gamma_refit, gpts), c.sep));
  o.table("energy_residuals_refit_" + tag, residual_csv(epts, energy_values(out.energy_refit, epts), c.sep));
  out.checks.push_back(check_below("gamma_refit_" + tag, gr.max_rel_error, 2e-3));
  out.checks.push_back(check_below("energy_refit_" + tag, er.max_rel_error, N == 0.0 ? 1e-4 : 1e-3));
  if (N == 0.0) out.checks.push_back(check_below("sextic_N0_ground", std::abs(E0 - 0.5), 1e-10));
  return out;
}

void morse_part(const RunConfig& c, Output& o, Summary& s) {
  const double alpha = std::numbers::sqrt2;
  const std::vector<double> printed{0.0, 10.313708498985, 18.62741699797, 24.94112549695, 29.25483399594,
                                    31.56854249492};
  const PotentialSpec v0(Morse{1.0, 8.0, alpha, 0.0});
  RunConfig mc = c;
  mc.potential = v0;
  mc.n_max = 5;
  std::ostringstream sink;
  Output mo(mc, sink);
  cmd_morse(mc, mo);

  const auto exact = morse_exact_spectrum(1.0, 8.0, alpha, 5);
  const Spectrum sp = lowest_eigen(v0, 6, c.tol);
  s.add(check_below("morse_closed_vs_printed", max_abs_diff(exact, printed), 1e-9));
  s.add(check_below("morse_numeric_vs_printed", max_abs_diff(sp.energies, printed), 1e-6));
  double g_closed = 0.0, g_quad = 0.0;
  for (int n = 0; n <= 5; ++n) {
    g_closed = std::max(g_closed, std::abs(morse_action_closed(1.0, 8.0, alpha, exact[n]) / std::numbers::pi - n - 0.5));
    g_quad = std::max(g_quad, std::abs(wkb_correction(v0, n, exact[n]).gamma));
  }
  s.add(check_below("morse_gamma_closed", g_closed, 1e-8));
  s.add(check_below("morse_gamma_quadrature", g_quad, 1e-6));

  // Potentials and levels for N = 0 and N = 1, with their partners.
  const auto grid = sample_grid(-3.0, 6.0, 0.05);
  double shape = 0.0;
  for (int N = 0; N <= 3; ++N) {
    const PotentialSpec base(Morse{1.0, 8.0, alpha, static_cast<double>(N)});
    const auto states = qes_states(base);
    const DarbouxResult d = darboux(base, nodeless_state(states));
    if (N <= 1) {
      o.table("morse_partner_N" + std::to_string(N), partner_samples_csv(base, d.partner, grid, c.sep));
      std::string levels = join_row({"index", "E"}, c.sep);
      const auto E = morse_closed_energies(*base.get_if<Morse>(), *bound_state_count(base) - 1);
      for (std::size_t i = 0; i < E.size(); ++i) levels += join_row({std::to_string(i), format_number(E[i])}, c.sep);
      o.table("morse_levels_N" + std::to_string(N), levels);
    }
    if (N >= 1) {
      const PotentialSpec closed = susy_partner_closed_form(*base.get_if<Morse>());
      for (double x : grid) shape = std::max(shape, std::abs(eval(d.partner, x) - eval(closed, x)));
    }
  }
  s.add(check_below("morse_shape_invariance", shape, 1e-10));
  o.text("morse.txt", sink.str());
}

void algebra_part(Summary& s) {
  double comm = 0.0;
  for (int N = 0; N <= 6; ++N) {
    const auto g = sl2_generators(N, N + 2);
    const int m = N + 1;
    auto block = [m](const Eigen::MatrixXd& a) { return a.topLeftCorner(m, m); };
    comm = std::max(comm, block(g.cartan * g.raising - g.raising * g.cartan - g.raising).cwiseAbs().maxCoeff());
    comm = std::max(comm, block(g.cartan * g.lowering - g.lowering * g.cartan + g.lowering).cwiseAbs().maxCoeff());
    comm = std::max(comm, block(g.raising * g.lowering - g.lowering * g.raising + 2.0 * g.cartan).cwiseAbs().maxCoeff());
  }
  s.add(check_below("sl2_commutators", comm, 1e-13));

  double lie = 0.0;
  for (int N = 0; N <= 5; ++N) {
    lie = std::max(lie, morse_lie_form_check(N, 1.0, 8.0, std::numbers::sqrt2));
    lie = std::max(lie, morse_lie_form_check(N, 1.3, 5.0, 0.9));
  }
  s.add(check_below("morse_lie_form", lie, 1e-12));

  const auto grid_m = sample_grid(-3.0, 6.0, 0.05);
  const auto grid_s = sample_grid(-3.0, 3.0, 0.05);
  const PotentialSpec morse1(Morse{1.0, 8.0, std::numbers::sqrt2, 1.0});
  const PotentialSpec sextic1(SexticReduced{1.0});
  const auto ms = qes_states(morse1);
  const auto ss = qes_states(sextic1);
  const double r_m = intertwining_residual(morse1, ms[0], ms[1], grid_m).residual;
  const double r_s = intertwining_residual(sextic1, ss[0], ss[1], grid_s).residual;
  s.add(check_below("intertwining_residual", std::max(r_m, r_s), 1e-8));
  const double a_m = intertwining_residual(morse1, ms[0], ms[0], grid_m).image_max;
  const double a_s = intertwining_residual(sextic1, ss[0], ss[0], grid_s).image_max;
  s.add(check_below("seed_annihilation", std::max(a_m, a_s), 1e-12));
}

void baseline_part(const RunConfig& c, Summary& s) {
  const PotentialSpec ho(EvenPolynomial{{0.0, 0.0, 0.5}});
  const Spectrum sp = lowest_eigen(ho, 11, c.tol);
  double de = 0.0, dg = 0.0;
  for (int n = 0; n <= 10; ++n) {
    de = std::max(de, std::abs(sp.energies[n] - (n + 0.5)));
    dg = std::max(dg, std::abs(wkb_correction(ho, n, sp.energies[n]).gamma));
  }
  s.add(check_below("harmonic_energy", de, 1e-10));
  s.add(check_below("harmonic_gamma", dg, 1e-9));

  const PotentialSpec sextic1(SexticReduced{1.0});
  const Spectrum s1 = lowest_eigen(sextic1, 4, c.tol);
  double qes = 0.0;
  for (const auto& st : qes_states(sextic1)) {
    double best = INFINITY;
    for (double e : s1.energies) best = std::min(best, std::abs(e - st.energy));
    qes = std::max(qes, best);
  }
  s.add(check_below("sextic_N1_qes_vs_mesh", qes, 1e-8));
  s.add(check_below("N_critical", std::abs(critical_N(1e-8) - 0.73295), 2e-3));
  s.add(check_below("asymptotic_coefficient", std::abs(asymptotic_coefficient() - 1.13254), 5e-5));
  const double printed_ratio[4] = {1.13424, 1.14224, 1.15169, 1.1596};
  const auto Ns = published_N_values();
  for (std::size_t i = 0; i < Ns.size(); ++i)
    s.add(check_below("asymptotic_ratio_" + label(Ns[i]),
                      std::abs(asymptotic_ratio(published_energy_params(Ns[i], 0.0)) - printed_ratio[i]), 1e-4));
}

int cmd_reproduce(const RunConfig& c, Output& o, std::ostream& out) {
  Summary s;
  const auto Ns = published_N_values();
  std::vector<SexticOutcome> outcomes(Ns.size());
  std::vector<char> ok(Ns.size(), 0);

  // Four sextic pipelines, the Morse suite and the algebra checks run side by side.
  const int tasks = static_cast<int>(Ns.size()) + 3;
  parallel_for(tasks, [&](int t) {
    if (t < static_cast<int>(Ns.size())) {
      guarded(s, "sextic " + label(Ns[t]), [&] {
        outcomes[t] = sextic_part(Ns[t], c, o);
        ok[t] = 1;
      });
    } else if (t == static_cast<int>(Ns.size())) {
      guarded(s, "morse", [&] { morse_part(c, o, s); });
    } else if (t == static_cast<int>(Ns.size()) + 1) {
      guarded(s, "algebra", [&] { algebra_part(s); });
    } else {
      guarded(s, "baseline", [&] { baseline_part(c, s); });
    }
  });

  std::vector<GammaFitParams> g_pub, g_fit;
  std::vector<EnergyFitParams> e_pub, e_fit;
  for (std::size_t i = 0; i < Ns.size(); ++i) {
    if (!ok[i]) continue;
    for (auto& ch : outcomes[i].checks) s.checks.push_back(ch);
    g_pub.push_back(outcomes[i].gamma_published);
    g_fit.push_back(outcomes[i].gamma_refit);
    e_pub.push_back(outcomes[i].energy_published);
    e_fit.push_back(outcomes[i].energy_refit);
  }
  o.text("table1_published.txt", gamma_params_table(g_pub));
  o.text("table1_refit.txt", gamma_params_table(g_fit));
  o.text("table2_published.txt", energy_params_table(e_pub));
  o.text("table2_refit.txt", energy_params_table(e_fit));

  // Fixed order independent of scheduling.
  std::stable_sort(s.checks.begin(), s.checks.end(), [](const Check& a, const Check& b) { return a.name < b.name; });
  std::sort(s.errors.begin(), s.errors.end());
  const std::string summary = summary_text(s.checks, s.errors);
  o.text("summary.tsv", summary);
  out << summary;

  if (!s.errors.empty()) return kExitComputation;
  const bool all = std::all_of(s.checks.begin(), s.checks.end(), [](const Check& ch) { return ch.pass; });
  return all ? kExitOk : kExitChecksFailed;
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    Output o(config, out);
    switch (config.command) {
      case Command::Spectrum: return cmd_spectrum(config, o);
      case Command::Wkb: return cmd_wkb(config, o);
      case Command::FitGamma: return cmd_fit_gamma(config, o);
      case Command::FitEnergy: return cmd_fit_energy(config, o);
      case Command::Qes: return cmd_qes(config, o);
      case Command::Susy: return cmd_susy(config, o);
      case Command::Morse: return cmd_morse(config, o);
      case Command::Reproduce: return cmd_reproduce(config, o, out);
    }
  } catch (const Error& e) {
    err << "error\t" << to_string(e.kind()) << "\t" << e.what() << '\n';
    return kExitComputation;
  } catch (const std::exception& e) {
    err << "error\tio\t" << e.what() << '\n';
    return kExitComputation;
  }
  return kExitUsage;
}

namespace {

struct Flags {
  std::string family, N, nu, mu, a, b, alpha, coeffs, config_file;
  int n_max = 20;
  double tol = 1e-12;
  std::string out;
  std::string format = "csv";
};

void add_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--family", f.family, "sextic_reduced | sextic_general | morse | even_polynomial | susy_partner");
  sub->add_option("--N", f.N, "cohomology parameter N");
  sub->add_option("--nu", f.nu, "sextic nu");
  sub->add_option("--mu", f.mu, "sextic mu");
  sub->add_option("--a", f.a, "Morse a");
  sub->add_option("--b", f.b, "Morse b");
  sub->add_option("--alpha", f.alpha, "Morse alpha");
  sub->add_option("--coeffs", f.coeffs, "even_polynomial coefficients c0,c1,...");
  sub->add_option("--n-max", f.n_max, "highest level index")->check(CLI::Range(0, 200));
  sub->add_option("--tol", f.tol, "relative convergence tolerance")->check(CLI::Range(1e-14, 1e-4));
  sub->add_option("--out", f.out, "output directory");
  sub->add_option("--format", f.format, "csv or tsv")->check(CLI::IsMember({"csv", "tsv"}));
  sub->add_option("--config", f.config_file, "key=value potential file")->check(CLI::ExistingFile);
}

PotentialSpec potential_from(const Flags& f, const char* default_family) {
  KeyValues kv;
  if (!f.config_file.empty()) {
    std::ifstream in(f.config_file, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    try {
      kv = parse_key_values(buf.str());
    } catch (const Error& e) {
      fail(e.kind(), f.config_file + ": " + e.what());
    }
  }
  auto set = [&kv](const char* key, const std::string& v) {
    if (!v.empty()) kv[key] = v;
  };
  set("family", f.family);
  set("N", f.N);
  set("nu", f.nu);
  set("mu", f.mu);
  set("a", f.a);
  set("b", f.b);
  set("alpha", f.alpha);
  set("coeffs", f.coeffs);
  if (!kv.contains("family")) kv["family"] = default_family;
  if (!kv.contains("N") && kv["family"] != "even_polynomial") kv["N"] = "0";
  return spec_from_key_values(kv);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectra, WKB corrections, fits and SUSY checks for QES sextic and Morse potentials", "qeswkb"};
  app.require_subcommand(1);
  Flags f;
  const std::pair<const char*, Command> commands[] = {
      {"spectrum", Command::Spectrum}, {"wkb", Command::Wkb},   {"fit-gamma", Command::FitGamma},
      {"fit-energy", Command::FitEnergy}, {"qes", Command::Qes}, {"susy", Command::Susy},
      {"morse", Command::Morse},       {"reproduce", Command::Reproduce},
  };
  for (const auto& [name, cmd] : commands) add_flags(app.add_subcommand(name), f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  RunConfig config;
  for (const auto& [name, cmd] : commands)
    if (app.got_subcommand(name)) config.command = cmd;
  config.n_max = f.n_max;
  config.tol = f.tol;
  config.sep = f.format == "tsv" ? '\t' : ',';
  config.output_dir = f.out;
  if (config.command == Command::Reproduce && config.output_dir.empty()) config.output_dir = "paper_run";
  if ((config.command == Command::FitGamma || config.command == Command::FitEnergy) && config.n_max < 14) {
    err << "usage error: --n-max must be at least 14 for fits\n";
    return kExitUsage;
  }
  try {
    config.potential = potential_from(f, config.command == Command::Morse ? "morse" : "sextic_reduced");
  } catch (const Error& e) {
    err << "usage error: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return kExitUsage;
  }
  return run(config, out, err);
}

}  // namespace qeswkb::tools
