// Acceptance gate: one PASS/FAIL line per criterion.
//
//   acceptance                     run every criterion
//   acceptance --criterion N       run one
//   acceptance --cli PATH          criterion 10 drives the command-line binary
//
// Exit status is nonzero if any selected criterion fails.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "alphavac/measures.hpp"
#include "alphavac/sweep.hpp"

using namespace alphavac;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

double max_abs(const Matrix<double>& m) { return m.cwiseAbs().maxCoeff(); }

const std::vector<double> kGridF{0.0, 0.1, 0.2, 1.0 / 3.0};
const std::vector<double> kGridT{0.1, 0.2, 0.4};
const std::vector<Vacuum<double>> kGridAlpha{AlphaVacuum<double>{-0.5}, AlphaVacuum<double>{-1},
                                             AlphaVacuum<double>{-2}, BunchDavies{}};
const std::vector<double> kGridOmega{0.1, 1.0, 2.0};
constexpr std::size_t kGridTau = 20;

struct GridRun {
  InitialFamily<double> family;
  BathCoefficients<double> coeffs;
  Trajectory<double> numeric;
};

// Numeric trajectories over the grid, 20 samples on [0, 10/A] each.
struct Grid {
  std::vector<GridRun> runs;
  double seconds = 0;
};

const Grid& grid() {
  static const Grid g = [] {
    Grid out;
    const auto start = std::chrono::steady_clock::now();
    for (double f : kGridF)
      for (double t : kGridT)
        for (const auto& v : kGridAlpha)
          for (double w : kGridOmega) {
            const InitialFamily<double> family(f);
            const auto coeffs = bath_coefficients(BathParams<double>(w, t, v));
            const auto config = rk4_config(coeffs, 10.0 / coeffs.A(), kGridTau - 1);
            out.runs.push_back({family, coeffs, evolve_numeric(initial_state(family), coeffs, config)});
          }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
  }();
  return g;
}

// Same grid points and tau samples, without the numerical integration.
template <typename Fn>
void for_grid_closed_form(Fn&& fn) {
  for (double f : kGridF)
    for (double t : kGridT)
      for (const auto& v : kGridAlpha)
        for (double w : kGridOmega) {
          const GridRun run{InitialFamily<double>(f),
                            bath_coefficients(BathParams<double>(w, t, v)), {}};
          const double tau_max = 10.0 / run.coeffs.A();
          for (std::size_t k = 0; k < kGridTau; ++k)
            fn(run, tau_max * static_cast<double>(k) / static_cast<double>(kGridTau - 1));
        }
}

Outcome criterion1() {
  const auto& g = grid();
  double worst = 0;
  for (const auto& run : g.runs)
    for (std::size_t k = 0; k < run.numeric.tau.size(); ++k) {
      const auto ref = evolve_closed_form(run.family, run.coeffs, run.numeric.tau[k]);
      worst = std::max(worst, max_abs(run.numeric.states[k].matrix() - ref.matrix()));
    }
  const std::size_t states = g.runs.size() * kGridTau;
  return {worst <= 1e-8 && g.seconds < 10.0,
          "numeric vs closed form, " + std::to_string(states) + " states: max diff " + sci(worst) +
              " (tol 1e-8), " + sci(g.seconds) + " s (target < 10 s)"};
}

Outcome criterion2() {
  double margin = std::numeric_limits<double>::infinity();
  std::size_t checked = 0;
  try {
    for (const auto& run : grid().runs)
      for (std::size_t k = 0; k < run.numeric.tau.size(); ++k) {
        const auto& rho = run.numeric.states[k];
        margin = std::min(margin, entropic_uncertainty_L(rho) - entropic_bound_R(rho));
        ++checked;
      }
    for (Preset p : {Preset::fig1, Preset::fig2, Preset::fig3, Preset::fig4, Preset::fig5}) {
      RunConfig config;
      apply_preset(config, p);
      for (const auto& row : run_sweep(config)) {
        margin = std::min(margin, row.L - row.R);
        ++checked;
      }
    }
  } catch (const Error& e) {
    return {false, std::string("evaluation failed: ") + e.what()};
  }
  return {margin >= -1e-9, "min(L - R) over " + std::to_string(checked) +
                               " states (grid + fig1..fig5 trajectories) = " + sci(margin) +
                               " (tol -1e-9)"};
}

Outcome criterion3() {
  double worst = 0;
  std::string values;
  for (double t : {0.1, 0.2, 0.3, 0.4}) {
    const auto coeffs = bath_coefficients(BathParams<double>(1.0, t, AlphaVacuum<double>{-1}));
    const double tau_eq = 40.0 / (4.0 * coeffs.A());
    const InitialFamily<double> family(0.0);
    const double closed = entropic_uncertainty_L(evolve_closed_form(family, coeffs, tau_eq));
    const auto numeric =
        evolve_numeric(initial_state(family), coeffs, rk4_config(coeffs, tau_eq, 1));
    const double num = entropic_uncertainty_L(numeric.states.back());
    worst = std::max({worst, std::abs(closed - 2.5), std::abs(num - 2.5)});
    values += " T=" + sci(t) + ":" + format_number(closed);
  }
  return {worst <= 1e-3, "L(tau_eq) at f=0, alpha=-1, omega=1:" + values +
                             "; max |L - 2.5| = " + sci(worst) + " (tol 1e-3)"};
}

Outcome criterion4() {
  double worst = 0;
  double rise = 0;
  for (const auto& run : grid().runs) {
    const double tau_eq = 40.0 / (4.0 * run.coeffs.A());
    worst = std::max(worst, negativity(evolve_closed_form(run.family, run.coeffs, tau_eq)));
    worst = std::max(worst, negativity(run.numeric.states.back()));
    for (std::size_t k = 1; k < run.numeric.states.size(); ++k) {
      rise = std::max(rise, negativity(run.numeric.states[k]) -
                                negativity(run.numeric.states[k - 1]));
    }
  }
  return {worst < 1e-6 && rise <= 1e-9,
          "max negativity at tau_eq = " + sci(worst) + " (tol 1e-6); max step increase along " +
              "trajectories = " + sci(rise)};
}

Outcome criterion5() {
  double bd_gap = 0;
  double alpha_gap = std::numeric_limits<double>::infinity();
  for (double w : {0.1, 1.0, 2.0, 3.0})
    for (double t : {0.1, 0.2, 0.3, 0.4, 0.5, 1.0}) {
      const auto thermal = thermal_state_V(w, t).matrix();
      const auto bd = equilibrium_reduced_V(bath_coefficients(BathParams<double>(w, t, BunchDavies{})));
      bd_gap = std::max(bd_gap, max_abs(bd.matrix() - thermal));
      const auto a =
          equilibrium_reduced_V(bath_coefficients(BathParams<double>(w, t, AlphaVacuum<double>{-1})));
      alpha_gap = std::min(alpha_gap, max_abs(a.matrix() - thermal));
    }
  return {bd_gap <= 1e-12 && alpha_gap > 1e-6,
          "Bunch-Davies max gap to thermal = " + sci(bd_gap) + " (tol 1e-12); alpha=-1 min gap = " +
              sci(alpha_gap) + " (needs > 1e-6)"};
}

Outcome criterion6() {
  double worst = 0;
  double at_zero = 0;
  for_grid_closed_form([&](const GridRun& run, double tau) {
    const double closed = mixedness_closed_form(run.family, run.coeffs, tau);
    const double numeric = mixedness(evolve_closed_form(run.family, run.coeffs, tau));
    worst = std::max(worst, std::abs(closed - numeric));
    if (tau == 0) {
      const double f = run.family.f();
      const double expected = 4.8 * f - 6.6 * f * f;
      at_zero = std::max({at_zero, std::abs(closed - expected), std::abs(numeric - expected)});
    }
  });
  return {worst <= 1e-10 && at_zero <= 1e-10,
          "closed-form vs (6/5)(1 - Tr rho^2): max diff " + sci(worst) +
              " (tol 1e-10); tau=0 vs 4.8f - 6.6f^2: " + sci(at_zero)};
}

Outcome criterion7() {
  double z_gap = 0;
  double x_gap = 0;
  const auto sz = qutrit_sigma_z();
  const auto sx = qutrit_sigma_x();
  for_grid_closed_form([&](const GridRun& run, double tau) {
    const auto rho = evolve_closed_form(run.family, run.coeffs, tau);
    const auto q = closed_form_entries(run.family, run.coeffs, tau);
    Matrix<double> diag = Matrix<double>::Zero(6, 6);
    for (int k = 0; k < 6; ++k) diag(k, k) = q[k];
    z_gap = std::max(z_gap, max_abs(post_measurement_state(rho, sz).matrix() - diag));
    x_gap = std::max(x_gap, max_abs(post_measurement_state(rho, sx).matrix() -
                                    sigma_x_post_measurement_closed_form(run.family, run.coeffs, tau)
                                        .matrix()));
  });
  return {z_gap == 0 && x_gap <= 1e-12, "sigma_z vs diag(Q1..Q6): max diff " + sci(z_gap) +
                                            " (exact); sigma_x vs F matrix: " + sci(x_gap) +
                                            " (tol 1e-12)"};
}

Outcome criterion8() {
  RunConfig config;
  apply_preset(config, Preset::fig5);
  const auto rows = run_sweep(config);
  const auto& ps = config.strength;
  const std::size_t n = config.tau_points;
  if (rows.size() != ps.size() * n) return {false, "unexpected row count"};
  // Rows are sorted by p, then tau.
  std::size_t violations = 0;
  double worst = 0;
  double worst_tau = 0, worst_lo = 0, worst_hi = 0;
  for (std::size_t j = 1; j < ps.size(); ++j)
    for (std::size_t k = 0; k < n; ++k) {
      const auto& lower_p = rows[(j - 1) * n + k];
      const auto& higher_p = rows[j * n + k];
      const double excess = higher_p.L - lower_p.L;
      if (excess > 1e-9) {
        ++violations;
        if (excess > worst) {
          worst = excess;
          worst_tau = higher_p.tau;
          worst_lo = lower_p.strength;
          worst_hi = higher_p.strength;
        }
      }
    }
  if (violations == 0) {
    return {true, "L non-increasing in p at all " + std::to_string(n) + " tau samples"};
  }
  const double l0 = rows[0].L;
  const double l9 = rows[(ps.size() - 1) * n].L;
  return {false, std::to_string(violations) + " of " + std::to_string((ps.size() - 1) * n) +
                     " order checks violated; worst L(p=" + sci(worst_hi) + ") - L(p=" +
                     sci(worst_lo) + ") = " + sci(worst) + " at tau=" + sci(worst_tau) +
                     "; at tau=0 L(p=0)=" + format_number(l0) + ", L(p=0.9)=" + format_number(l9)};
}

Outcome criterion9() {
  std::vector<double> L, N;
  for (double t : {0.1, 0.2, 0.3, 0.4}) {
    const auto coeffs = bath_coefficients(BathParams<double>(1.0, t, AlphaVacuum<double>{-1}));
    const auto r = uncertainty_report(evolve_closed_form(InitialFamily<double>(0.0), coeffs, 1.0), 1.0);
    L.push_back(r.L);
    N.push_back(r.negativity);
  }
  bool ok = true;
  for (std::size_t k = 1; k < L.size(); ++k) ok = ok && L[k] > L[k - 1] && N[k] < N[k - 1];
  std::string detail = "tau=1, T=0.1..0.4: L =";
  for (double x : L) detail += " " + format_number(x);
  detail += "; negativity =";
  for (double x : N) detail += " " + format_number(x);
  return {ok, detail};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome criterion10(const std::string& cli) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("alphavac_accept_" + std::to_string(std::chrono::steady_clock::now()
                                                             .time_since_epoch()
                                                             .count()));
  std::filesystem::create_directories(dir);
  std::vector<std::string> outputs;
  const std::vector<unsigned> threads{1, 1, 1, 4};
  for (std::size_t k = 0; k < threads.size(); ++k) {
    const auto path = dir / ("run" + std::to_string(k) + ".csv");
    if (!cli.empty()) {
      const std::string cmd = "\"" + cli + "\" sweep --preset fig1 --threads " +
                              std::to_string(threads[k]) + " --output \"" + path.string() + "\"";
      if (std::system(cmd.c_str()) != 0) return {false, "command failed: " + cmd};
    } else {
      RunConfig config;
      apply_preset(config, Preset::fig1);
      config.threads = threads[k];
      config.output = path.string();
      emit_csv(run_sweep(config), config.output);
    }
    outputs.push_back(slurp(path));
  }
  std::filesystem::remove_all(dir);
  bool same = !outputs[0].empty();
  for (const auto& o : outputs) same = same && o == outputs[0];
  return {same, std::string(cli.empty() ? "in-process" : "CLI") +
                    " sweep --preset fig1: 3 single-thread runs and a 4-thread run " +
                    (same ? "byte-identical" : "differ") + " (" +
                    std::to_string(outputs[0].size()) + " bytes)"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int only = 0;
  std::string cli;
  app.add_option("--criterion", only, "run a single criterion (1-10)")->check(CLI::Range(1, 10));
  app.add_option("--cli", cli, "path to the alphavac binary for criterion 10");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"oracle equivalence", criterion1},
      {"uncertainty relation", criterion2},
      {"saturation value", criterion3},
      {"entanglement death", criterion4},
      {"thermalization limit", criterion5},
      {"mixedness consistency", criterion6},
      {"post-measurement closed forms", criterion7},
      {"WMR steering", criterion8},
      {"short-time temperature order", criterion9},
      {"determinism", [&] { return criterion10(cli); }},
  };

  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    if (only != 0 && static_cast<std::size_t>(only) != k + 1) continue;
    Outcome out;
    try {
      out = criteria[k].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (out.pass ? "PASS" : "FAIL") << "  criterion " << k + 1 << " ("
              << criteria[k].first << "): " << out.detail << '\n';
    failures += out.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
