#include "alphavac/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <fstream>
#include <iostream>
#include <limits>
#include <thread>
#include <tuple>

#include "alphavac/errors.hpp"
#include "alphavac/measures.hpp"

namespace alphavac {

namespace {

struct GridPoint {
  double f;
  double temperature;
  Vacuum<double> vacuum;
  double omega;
  double strength;
};

double alpha_key(const Vacuum<double>& v) {
  if (const auto* a = std::get_if<AlphaVacuum<double>>(&v)) return a->alpha;
  return -std::numeric_limits<double>::infinity();
}

std::string describe(const GridPoint& p) {
  return "f=" + format_number(p.f) + " T=" + format_number(p.temperature) +
         " alpha=" + format_alpha(p.vacuum) + " omega=" + format_number(p.omega) +
         " p=" + format_number(p.strength);
}

std::vector<GridPoint> expand(const RunConfig& config) {
  std::vector<GridPoint> points;
  points.reserve(config.grid_size());
  for (double f : config.f)
    for (double t : config.temperature)
      for (const auto& v : config.vacuum)
        for (double w : config.omega)
          for (double p : config.strength) points.push_back({f, t, v, w, p});
  return points;
}

// Re-throw with the grid point prefixed, keeping the error category.
[[noreturn]] void rethrow_at(std::exception_ptr error, const GridPoint& point) {
  const std::string where = "at " + describe(point) + ": ";
  try {
    std::rethrow_exception(error);
  } catch (const IntegrationError& e) {
    throw IntegrationError(where + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(where + e.what());
  } catch (const DomainError& e) {
    throw DomainError(where + e.what());
  } catch (const DimensionError& e) {
    throw DimensionError(where + e.what());
  }
}

std::vector<ResultRow> evaluate(const GridPoint& point, const std::vector<double>& taus,
                                const RunConfig& config) {
  const BathParams<double> bath(point.omega, point.temperature, point.vacuum);
  const auto trajectory =
      trajectory_for(point.f, bath, point.strength, taus, config.method, config.integrator);
  std::vector<ResultRow> rows;
  rows.reserve(trajectory.tau.size());
  for (std::size_t k = 0; k < trajectory.tau.size(); ++k) {
    const auto report = uncertainty_report(trajectory.states[k], trajectory.tau[k]);
    rows.push_back({point.f, point.temperature, point.vacuum, point.omega, point.strength,
                    report.tau, report.L, report.R, report.negativity, report.mixedness,
                    report.purity});
  }
  return rows;
}

}  // namespace

bool row_less(const ResultRow& a, const ResultRow& b) {
  return std::make_tuple(a.f, a.temperature, alpha_key(a.vacuum), a.omega, a.strength, a.tau) <
         std::make_tuple(b.f, b.temperature, alpha_key(b.vacuum), b.omega, b.strength, b.tau);
}

double default_tau_max(const RunConfig& config) {
  double a_min = std::numeric_limits<double>::infinity();
  for (double t : config.temperature)
    for (const auto& v : config.vacuum)
      for (double w : config.omega)
        a_min = std::min(a_min, bath_coefficients(BathParams<double>(w, t, v)).A());
  return 10.0 / (4.0 * a_min);
}

std::vector<double> tau_grid(const RunConfig& config) {
  const double tau_max = config.tau_max.value_or(default_tau_max(config));
  const std::size_t n = config.tau_points;
  std::vector<double> taus(n, 0.0);
  for (std::size_t k = 1; k < n; ++k) {
    taus[k] = tau_max * static_cast<double>(k) / static_cast<double>(n - 1);
  }
  return taus;
}

Trajectory<double> trajectory_for(double f, const BathParams<double>& bath, double strength,
                                  const std::vector<double>& taus, EvolutionMethod method,
                                  Integrator integrator) {
  const InitialFamily<double> family(f);
  const auto coeffs = bath_coefficients(bath);
  const bool closed = method == EvolutionMethod::closed_form ||
                      (method == EvolutionMethod::automatic && strength == 0.0);
  if (closed) {
    if (strength != 0.0) {
      throw DomainError("closed-form evolution is only defined without weak measurement reversal");
    }
    Trajectory<double> out;
    for (double tau : taus) {
      out.tau.push_back(tau);
      out.states.push_back(evolve_closed_form(family, coeffs, tau));
    }
    return out;
  }

  auto rho0 = initial_state(family);
  if (strength > 0) rho0 = weak_measurement_reversal(rho0, strength);
  if (taus.size() < 2) return Trajectory<double>{{0.0}, {rho0}};
  auto config = rk4_config(coeffs, taus.back(), taus.size() - 1);
  config.integrator = integrator;
  return evolve_numeric(rho0, coeffs, config);
}

std::vector<ResultRow> run_sweep(const RunConfig& config) {
  config.validate();
  const auto points = expand(config);
  const auto taus = tau_grid(config);

  std::vector<std::vector<ResultRow>> results(points.size());
  std::vector<std::exception_ptr> errors(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < points.size(); k = next++) {
      try {
        results[k] = evaluate(points[k], taus, config);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };

  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(config.threads, std::max<std::size_t>(points.size(), 1)));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  for (std::size_t k = 0; k < points.size(); ++k) {
    if (errors[k]) rethrow_at(errors[k], points[k]);
  }

  std::vector<ResultRow> rows;
  for (auto& chunk : results) rows.insert(rows.end(), chunk.begin(), chunk.end());
  std::sort(rows.begin(), rows.end(), row_less);
  return rows;
}

std::string format_number(double x) {
  if (x == 0) return "0";  // folds -0
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), x,
                                       std::chars_format::general, 12);
  if (ec != std::errc()) return "nan";
  return std::string(buffer, ptr);
}

std::string format_alpha(const Vacuum<double>& vacuum) {
  if (const auto* a = std::get_if<AlphaVacuum<double>>(&vacuum)) return format_number(a->alpha);
  return "BD";
}

void emit_csv(const std::vector<ResultRow>& rows, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << format_number(r.f) << ',' << format_number(r.temperature) << ','
        << format_alpha(r.vacuum) << ',' << format_number(r.omega) << ','
        << format_number(r.strength) << ',' << format_number(r.tau) << ','
        << format_number(r.L) << ',' << format_number(r.R) << ','
        << format_number(r.negativity) << ',' << format_number(r.mixedness) << ','
        << format_number(r.purity) << '\n';
  }
}

void emit_csv(const std::vector<ResultRow>& rows, const std::string& destination) {
  if (destination == "-") {
    emit_csv(rows, std::cout);
    std::cout.flush();
    if (!std::cout) throw IoError("failed writing CSV to standard output");
    return;
  }
  std::ofstream file(destination, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + destination + "' for writing");
  emit_csv(rows, file);
  file.close();
  if (!file) throw IoError("failed writing CSV to '" + destination + "'");
}

}  // namespace alphavac
