#pragma once

// Parameter sweeps over (f, T, alpha, omega, p) and their CSV serialization.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "alphavac/bath_spectrum.hpp"
#include "alphavac/dynamics.hpp"

namespace alphavac {

enum class Preset { fig1, fig2, fig3, fig4, fig5 };

std::optional<Preset> preset_from_string(std::string_view name);
std::string_view to_string(Preset preset);

enum class EvolutionMethod { automatic, closed_form, numeric };

struct RunConfig {
  std::vector<double> f{0.0};
  std::vector<double> temperature{0.2};
  std::vector<Vacuum<double>> vacuum{AlphaVacuum<double>{-1.0}};
  std::vector<double> omega{1.0};
  std::vector<double> strength{0.0};
  // Empty means 10 / (4 A_min) over the swept bath points.
  std::optional<double> tau_max;
  std::size_t tau_points = 200;
  std::string output = "-";
  std::optional<Preset> preset;
  unsigned threads = 1;
  EvolutionMethod method = EvolutionMethod::automatic;
  Integrator integrator = Integrator::rk4_fixed;
  bool dump_state = false;

  /// Throws UsageError naming the offending key.
  void validate() const;
  std::size_t grid_size() const;
};

/// Overwrite the swept lists with a figure's parameters.
void apply_preset(RunConfig& config, Preset preset);

/// Parse command-line tokens (without the program or subcommand name).
/// `--config FILE` reads a flat `key = value` file whose keys mirror the long
/// flag names; flags given on the command line win.  Errors are UsageError.
RunConfig parse_config(const std::vector<std::string>& args);

/// Help text for parse_config's options.
std::string config_help();

struct ResultRow {
  double f = 0;
  double temperature = 0;
  Vacuum<double> vacuum = BunchDavies{};
  double omega = 0;
  double strength = 0;
  double tau = 0;
  double L = 0;
  double R = 0;
  double negativity = 0;
  double mixedness = 0;
  double purity = 0;
};

/// Lexicographic on (f, T, alpha, omega, p, tau); Bunch-Davies sorts as alpha = -inf.
bool row_less(const ResultRow& a, const ResultRow& b);

/// 10 / (4 A_min) over every (T, vacuum, omega) of the config.
double default_tau_max(const RunConfig& config);

std::vector<double> tau_grid(const RunConfig& config);

/// Evaluate every grid point.  Points run on config.threads workers; the
/// returned rows are sorted, so the result does not depend on scheduling.
std::vector<ResultRow> run_sweep(const RunConfig& config);

/// One trajectory for a single grid point (used by run_sweep and the
/// `evolve` subcommand).
Trajectory<double> trajectory_for(double f, const BathParams<double>& bath, double strength,
                                  const std::vector<double>& taus, EvolutionMethod method,
                                  Integrator integrator);

/// Decimal with 12 significant digits, locale-independent.
std::string format_number(double x);
std::string format_alpha(const Vacuum<double>& vacuum);

inline constexpr std::string_view kCsvHeader =
    "f,T,alpha,omega,p,tau,L,R,negativity,mixedness,purity";

void emit_csv(const std::vector<ResultRow>& rows, std::ostream& out);

/// "-" writes to standard output; otherwise the file is replaced.  IoError
/// if the destination cannot be written.
void emit_csv(const std::vector<ResultRow>& rows, const std::string& destination);

}  // namespace alphavac
