// alphavac: command-line front end.
//
//   alphavac coeffs      A, B for each bath point
//   alphavac evolve      one trajectory (trace, purity, min eigenvalue; --dump-state adds the state)
//   alphavac measures    L, R, negativity, mixedness, purity along one trajectory
//   alphavac sweep       the same over a parameter grid (--preset fig1..fig5)
//   alphavac equilibrium measures of the closed-form tau -> infinity state
//
// Exit status: 0 success, 2 usage, 3 numerical validation, 4 I/O.

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "alphavac/errors.hpp"
#include "alphavac/measures.hpp"
#include "alphavac/sweep.hpp"

namespace {

using namespace alphavac;

constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

const char* kUsage =
    "usage: alphavac <coeffs|evolve|measures|sweep|equilibrium> [options]\n"
    "       alphavac <subcommand> --help\n";

void write_to(const std::string& destination, const std::function<void(std::ostream&)>& body) {
  if (destination == "-") {
    body(std::cout);
    std::cout.flush();
    if (!std::cout) throw IoError("failed writing to standard output");
    return;
  }
  std::ofstream file(destination, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + destination + "' for writing");
  body(file);
  file.close();
  if (!file) throw IoError("failed writing to '" + destination + "'");
}

void require_single_point(const RunConfig& config, const char* subcommand) {
  if (config.grid_size() != 1) {
    throw UsageError(std::string(subcommand) +
                     ": expects exactly one value for each of --f, --T, --alpha, --omega, --p");
  }
}

BathParams<double> single_bath(const RunConfig& config) {
  return BathParams<double>(config.omega.front(), config.temperature.front(),
                            config.vacuum.front());
}

int run_coeffs(const RunConfig& config) {
  struct Row {
    double t;
    double alpha;
    double omega;
    std::string line;
    bool operator<(const Row& o) const {
      return std::tie(t, alpha, omega) < std::tie(o.t, o.alpha, o.omega);
    }
  };
  std::vector<Row> rows;
  for (double t : config.temperature) {
    for (const auto& v : config.vacuum) {
      for (double w : config.omega) {
        const BathParams<double> bath(w, t, v);
        const auto c = bath_coefficients(bath);
        const double key = bath.alpha().value_or(-std::numeric_limits<double>::infinity());
        rows.push_back({t, key, w,
                        format_number(t) + ',' + format_alpha(v) + ',' + format_number(w) + ',' +
                            format_number(c.A()) + ',' + format_number(c.B())});
      }
    }
  }
  std::sort(rows.begin(), rows.end());
  write_to(config.output, [&](std::ostream& out) {
    out << "T,alpha,omega,A,B\n";
    for (const auto& r : rows) out << r.line << '\n';
  });
  return 0;
}

int run_evolve(RunConfig config) {
  require_single_point(config, "evolve");
  if (config.method == EvolutionMethod::automatic) config.method = EvolutionMethod::numeric;
  config.validate();
  const auto trajectory = trajectory_for(config.f.front(), single_bath(config),
                                         config.strength.front(), tau_grid(config), config.method,
                                         config.integrator);
  write_to(config.output, [&](std::ostream& out) {
    out << "tau,trace,purity,min_eigenvalue";
    if (config.dump_state) {
      for (int r = 0; r < 6; ++r)
        for (int c = 0; c < 6; ++c) out << ",re_" << r << c << ",im_" << r << c;
    }
    out << '\n';
    for (std::size_t k = 0; k < trajectory.tau.size(); ++k) {
      const auto& rho = trajectory.states[k];
      out << format_number(trajectory.tau[k]) << ',' << format_number(rho.matrix().trace().real())
          << ',' << format_number(purity(rho)) << ','
          << format_number(rho.eigenvalues()(rho.dim() - 1));
      if (config.dump_state) {
        for (int r = 0; r < 6; ++r)
          for (int c = 0; c < 6; ++c)
            out << ',' << format_number(rho(r, c).real()) << ',' << format_number(rho(r, c).imag());
      }
      out << '\n';
    }
  });
  return 0;
}

int run_measures(const RunConfig& config) {
  require_single_point(config, "measures");
  emit_csv(run_sweep(config), config.output);
  return 0;
}

int run_sweep_command(const RunConfig& config) {
  emit_csv(run_sweep(config), config.output);
  return 0;
}

int run_equilibrium(const RunConfig& config) {
  std::vector<ResultRow> keys;
  std::vector<std::string> lines;
  for (double f : config.f) {
    for (double t : config.temperature) {
      for (const auto& v : config.vacuum) {
        for (double w : config.omega) {
          const InitialFamily<double> family(f);
          const BathParams<double> bath(w, t, v);
          const auto coeffs = bath_coefficients(bath);
          const auto rho = equilibrium_state(family, coeffs);
          const auto report = uncertainty_report(rho, std::numeric_limits<double>::infinity());
          const auto rho_v = equilibrium_reduced_V(coeffs);
          const auto thermal = thermal_state_V(w, t);
          ResultRow key;
          key.f = f;
          key.temperature = t;
          key.vacuum = v;
          key.omega = w;
          keys.push_back(key);
          lines.push_back(
              format_number(f) + ',' + format_number(t) + ',' + format_alpha(v) + ',' +
              format_number(w) + ',' + format_number(report.L) + ',' + format_number(report.R) +
              ',' + format_number(report.negativity) + ',' + format_number(report.mixedness) +
              ',' +
              format_number(mixedness_closed_form(family, coeffs,
                                                  std::numeric_limits<double>::infinity())) +
              ',' + format_number(report.purity) + ',' + format_number(rho_v(0, 0).real()) +
              ',' + format_number(rho_v(1, 1).real()) + ',' +
              format_number(thermal(0, 0).real()) + ',' + format_number(thermal(1, 1).real()));
        }
      }
    }
  }
  std::vector<std::size_t> order(keys.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return row_less(keys[a], keys[b]); });
  write_to(config.output, [&](std::ostream& out) {
    out << "f,T,alpha,omega,L,R,negativity,mixedness,mixedness_closed_form,purity,"
           "rhoV_00,rhoV_11,thermal_00,thermal_11\n";
    for (std::size_t k : order) out << lines[k] << '\n';
  });
  return 0;
}

int dispatch(const std::string& subcommand, const std::vector<std::string>& args) {
  static const std::set<std::string> known{"coeffs", "evolve", "measures", "sweep", "equilibrium"};
  if (!known.count(subcommand)) throw UsageError("unknown subcommand '" + subcommand + "'");
  const RunConfig config = parse_config(args);
  if (subcommand == "coeffs") return run_coeffs(config);
  if (subcommand == "evolve") return run_evolve(config);
  if (subcommand == "measures") return run_measures(config);
  if (subcommand == "sweep") return run_sweep_command(config);
  return run_equilibrium(config);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << kUsage;
    return kExitUsage;
  }
  const std::string subcommand = argv[1];
  if (subcommand == "--help" || subcommand == "-h") {
    std::cout << kUsage << '\n' << config_help();
    return 0;
  }
  const std::vector<std::string> args(argv + 2, argv + argc);
  if (std::find(args.begin(), args.end(), "--help") != args.end() ||
      std::find(args.begin(), args.end(), "-h") != args.end()) {
    std::cout << "alphavac " << subcommand << " [options]\n\n" << config_help();
    return 0;
  }
  try {
    return dispatch(subcommand, args);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n' << kUsage;
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const Error& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumeric;
  }
}
