#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "alphavac/errors.hpp"
#include "alphavac/sweep.hpp"

namespace alphavac {

namespace {

struct RawOptions {
  std::vector<double> f;
  std::vector<double> temperature;
  std::vector<double> ell;
  std::vector<std::string> alpha;
  std::vector<double> omega;
  std::vector<double> strength;
  double tau_max = 0;
  std::size_t tau_points = 0;
  std::string output;
  std::string preset;
  unsigned threads = 1;
  std::string method = "auto";
  std::string integrator = "rk4";
  bool dump_state = false;
};

struct Registered {
  CLI::Option* f;
  CLI::Option* temperature;
  CLI::Option* ell;
  CLI::Option* alpha;
  CLI::Option* omega;
  CLI::Option* strength;
  CLI::Option* tau_max;
  CLI::Option* tau_points;
  CLI::Option* output;
  CLI::Option* preset;
  CLI::Option* threads;
  CLI::Option* method;
  CLI::Option* integrator;
};

Registered register_options(CLI::App& app, RawOptions& raw) {
  Registered r{};
  r.f = app.add_option("--f", raw.f, "initial-family parameter(s) in [0, 1/3]")->delimiter(',');
  r.temperature =
      app.add_option("--T", raw.temperature, "Gibbons-Hawking temperature(s) > 0")->delimiter(',');
  r.ell = app.add_option("--ell", raw.ell, "curvature radius(es); sets T = 1/(2 pi ell)")
              ->delimiter(',');
  r.alpha = app.add_option("--alpha", raw.alpha, "vacuum parameter(s) <= -1e-6, or BD")
                ->delimiter(',');
  r.omega = app.add_option("--omega", raw.omega, "level spacing(s) > 0")->delimiter(',');
  r.strength = app.add_option("--p", raw.strength, "weak-measurement-reversal strength(s) in [0, 1)")
                   ->delimiter(',');
  r.tau_max = app.add_option("--tau-max", raw.tau_max, "largest proper time");
  r.tau_points = app.add_option("--tau-points", raw.tau_points, "number of tau samples");
  r.output = app.add_option("--output,-o", raw.output, "CSV destination, - for stdout");
  r.preset = app.add_option("--preset", raw.preset, "fig1 | fig2 | fig3 | fig4 | fig5");
  r.threads = app.add_option("--threads", raw.threads, "worker threads for sweeps");
  r.method = app.add_option("--method", raw.method, "auto | closed | numeric");
  r.integrator = app.add_option("--integrator", raw.integrator, "rk4 | rk45");
  app.add_flag("--dump-state", raw.dump_state, "evolve: append flattened re/im state columns");
  app.set_config("--config", "", "flat key = value file mirroring the long flag names");
  app.allow_config_extras(CLI::config_extras_mode::error);
  return r;
}

Vacuum<double> parse_alpha(const std::string& token) {
  if (token == "BD" || token == "bd") return BunchDavies{};
  double value = 0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw UsageError("--alpha: cannot parse '" + token + "' (expected a number or BD)");
  }
  if (!std::isfinite(value) || !(value <= kAlphaCeiling)) {
    throw UsageError("--alpha: value " + token + " must be <= -1e-6 (use BD for alpha -> -inf)");
  }
  return AlphaVacuum<double>{value};
}

template <typename T>
void require_nonempty(const std::vector<T>& values, const char* key) {
  if (values.empty()) throw UsageError(std::string(key) + ": list must not be empty");
}

}  // namespace

std::optional<Preset> preset_from_string(std::string_view name) {
  if (name == "fig1") return Preset::fig1;
  if (name == "fig2") return Preset::fig2;
  if (name == "fig3") return Preset::fig3;
  if (name == "fig4") return Preset::fig4;
  if (name == "fig5") return Preset::fig5;
  return std::nullopt;
}

std::string_view to_string(Preset preset) {
  switch (preset) {
    case Preset::fig1: return "fig1";
    case Preset::fig2: return "fig2";
    case Preset::fig3: return "fig3";
    case Preset::fig4: return "fig4";
    case Preset::fig5: return "fig5";
  }
  return "unknown";
}

void apply_preset(RunConfig& config, Preset preset) {
  config.preset = preset;
  config.vacuum = {AlphaVacuum<double>{-1.0}};
  config.strength = {0.0};
  switch (preset) {
    case Preset::fig1:
      config.f = {0.0};
      config.omega = {1.0};
      config.temperature = {0.1, 0.2, 0.3, 0.4};
      break;
    case Preset::fig2:
      config.f = {0.0};
      config.omega = {1.0};
      config.temperature = {0.1};
      break;
    case Preset::fig3:
      config.f = {0.0, 0.1, 0.2, 1.0 / 3.0};
      config.omega = {0.1};
      config.temperature = {0.2};
      break;
    case Preset::fig4:
      config.f = {0.1};
      config.omega = {0.1};
      config.temperature = {0.2};
      break;
    case Preset::fig5:
      config.f = {0.0};
      config.omega = {0.1};
      config.temperature = {0.2};
      config.strength = {0.0, 0.3, 0.6, 0.9};
      break;
  }
}

void RunConfig::validate() const {
  require_nonempty(f, "--f");
  require_nonempty(temperature, "--T");
  require_nonempty(vacuum, "--alpha");
  require_nonempty(omega, "--omega");
  require_nonempty(strength, "--p");
  for (double x : f) {
    if (!(x >= 0) || !(x <= 1.0 / 3.0)) {
      throw UsageError("--f: value " + format_number(x) + " outside [0, 1/3]");
    }
  }
  for (double x : temperature) {
    if (!(x > 0) || !std::isfinite(x)) {
      throw UsageError("--T: value " + format_number(x) + " must be positive");
    }
  }
  for (const auto& v : vacuum) {
    if (const auto* a = std::get_if<AlphaVacuum<double>>(&v); a && !(a->alpha <= kAlphaCeiling)) {
      throw UsageError("--alpha: value " + format_number(a->alpha) + " must be <= -1e-6");
    }
  }
  for (double x : omega) {
    if (!(x > 0) || !std::isfinite(x)) {
      throw UsageError("--omega: value " + format_number(x) + " must be positive");
    }
  }
  for (double x : strength) {
    if (!(x >= 0) || !(x < 1)) {
      throw UsageError("--p: value " + format_number(x) + " outside [0, 1)");
    }
  }
  if (tau_max && (!(*tau_max > 0) || !std::isfinite(*tau_max))) {
    throw UsageError("--tau-max: must be positive");
  }
  if (tau_points < 1) throw UsageError("--tau-points: must be >= 1");
  if (threads < 1) throw UsageError("--threads: must be >= 1");
  if (method == EvolutionMethod::closed_form) {
    for (double p : strength) {
      if (p != 0) throw UsageError("--method: closed form is only available for --p 0");
    }
  }
}

std::size_t RunConfig::grid_size() const {
  return f.size() * temperature.size() * vacuum.size() * omega.size() * strength.size();
}

RunConfig parse_config(const std::vector<std::string>& args) {
  CLI::App app{"alphavac run options"};
  RawOptions raw;
  const Registered opt = register_options(app, raw);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw UsageError(app.help());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  if (!reversed.empty()) throw UsageError("unexpected argument '" + reversed.back() + "'");

  RunConfig config;
  if (opt.preset->count() > 0) {
    const auto preset = preset_from_string(raw.preset);
    if (!preset) throw UsageError("--preset: unknown preset '" + raw.preset + "'");
    apply_preset(config, *preset);
  }
  if (opt.temperature->count() > 0 && opt.ell->count() > 0) {
    throw UsageError("--T and --ell are mutually exclusive");
  }
  if (opt.f->count() > 0) config.f = raw.f;
  if (opt.temperature->count() > 0) config.temperature = raw.temperature;
  if (opt.ell->count() > 0) {
    config.temperature.clear();
    for (double ell : raw.ell) {
      if (!(ell > 0)) throw UsageError("--ell: value " + format_number(ell) + " must be positive");
      config.temperature.push_back(gibbons_hawking_temperature(ell));
    }
  }
  if (opt.alpha->count() > 0) {
    config.vacuum.clear();
    for (const auto& token : raw.alpha) config.vacuum.push_back(parse_alpha(token));
  }
  if (opt.omega->count() > 0) config.omega = raw.omega;
  if (opt.strength->count() > 0) config.strength = raw.strength;
  if (opt.tau_max->count() > 0) config.tau_max = raw.tau_max;
  if (opt.tau_points->count() > 0) config.tau_points = raw.tau_points;
  if (opt.output->count() > 0) config.output = raw.output;
  if (opt.threads->count() > 0) config.threads = raw.threads;
  if (opt.method->count() > 0) {
    if (raw.method == "auto") config.method = EvolutionMethod::automatic;
    else if (raw.method == "closed") config.method = EvolutionMethod::closed_form;
    else if (raw.method == "numeric") config.method = EvolutionMethod::numeric;
    else throw UsageError("--method: unknown value '" + raw.method + "'");
  }
  if (opt.integrator->count() > 0) {
    if (raw.integrator == "rk4") config.integrator = Integrator::rk4_fixed;
    else if (raw.integrator == "rk45") config.integrator = Integrator::rk45_adaptive;
    else throw UsageError("--integrator: unknown value '" + raw.integrator + "'");
  }
  config.dump_state = raw.dump_state;
  config.validate();
  return config;
}

std::string config_help() {
  CLI::App app{"Run options (lists are comma separated)"};
  RawOptions raw;
  register_options(app, raw);
  return app.help();
}

}  // namespace alphavac
