#include "semilab/cli.hpp"

#include "format.hpp"
#include "semilab/report.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

namespace semilab::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(std::string_view text, std::string_view key) {
  const std::string t = trim(text);
  T value{};
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw Error(ErrorCode::InvalidArgument, "cannot parse " + std::string(key) + " value '" + t + "'");
  }
  return value;
}

template <typename T>
std::vector<T> parse_list(std::string_view text, std::string_view key) {
  std::vector<T> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find(',', pos), text.size());
    out.push_back(parse_number<T>(text.substr(pos, end - pos), key));
    pos = end + 1;
  }
  return out;
}

void apply_tolerance(ToleranceConfig& tol, std::string_view text) {
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find(',', pos), text.size());
    const std::string item = trim(text.substr(pos, end - pos));
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      tol.eq_tol = parse_number<Real>(item, "tol");
    } else {
      const std::string name = trim(item.substr(0, eq));
      const Real v = parse_number<Real>(item.substr(eq + 1), "tol");
      if (name == "eq") tol.eq_tol = v;
      else if (name == "argmax") tol.argmax_tol = v;
      else if (name == "spectral") tol.spectral_tol = v;
      else throw Error(ErrorCode::InvalidArgument, "unknown tolerance '" + name + "'");
    }
    pos = end + 1;
  }
}

TimeGrid grid_for(const RunConfig& c, Real stop) {
  if (c.grid_start) return TimeGrid::lattice(*c.grid_start, c.grid_stop, c.grid_step);
  return TimeGrid::lattice(0.0, stop, 0.1);
}

RVector to_rvector(const std::vector<Real>& v) {
  return Eigen::Map<const RVector>(v.data(), static_cast<Index>(v.size()));
}

void print_result(const ScenarioResult& r, std::ostream& log) {
  for (const auto& a : r.assertions) {
    log << (a.passed ? "PASS " : "FAIL ") << r.name << '.' << a.label << " metric=" << detail::fmt17(a.metric) << '\n';
  }
  log << r.name << ": " << (r.overall() ? "pass" : "fail") << '\n';
}

bool wants(const RunConfig& c, const char* fmt) { return c.formats.count(fmt) > 0; }

int finish(const RunConfig& c, const ScenarioResult& r, const std::string& stem, std::ostream& log) {
  if (wants(c, "json")) emit_report(r, c.output_dir, stem);
  print_result(r, log);
  return r.overall() ? 0 : 1;
}

std::string trajectory_csv(const TimeGrid& grid, const std::vector<Complex>& values) {
  std::ostringstream out;
  write_trajectory_csv(out, grid, values);
  return out.str();
}

void check_unwrap(const TimeGrid& grid, const std::vector<Real>& omega) {
  Real bound = 0;
  for (Real w : omega) bound = std::max(bound, std::abs(w));
  if (grid.max_gap() * bound >= std::numbers::pi) {
    throw Error(ErrorCode::UnwrapAliasing, "grid step times max |omega| must stay below pi");
  }
}

int run_verify(const RunConfig& c, std::ostream& log) {
  const ToleranceConfig& tol = c.tolerances;
  if (c.scenario == "example") {
    const TimeGrid grid = grid_for(c, 10.0);
    const ScenarioResult r = run_example_scenario(c.dim, grid, tol);
    if (wants(c, "csv")) {
      const auto s = SemigroupEvaluator::closed_form(c.dim);
      const auto values = trajectory_pairing(s, TruncVector::basis(c.dim, 0), DualityWitness::coordinate(c.dim, 0), grid);
      write_text_file(c.output_dir, "trajectories.csv", trajectory_csv(grid, values));
    }
    return finish(c, r, "example", log);
  }
  if (c.scenario == "isometric") {
    const TimeGrid grid = grid_for(c, 5.0);
    std::optional<SemigroupEvaluator> s;
    std::optional<RVector> expected;
    if (c.input == "paper") {
      s = SemigroupEvaluator::closed_form(c.dim);
    } else {
      const std::vector<Real> omega = c.omega.empty() ? std::vector<Real>{1.0, -2.0, 3.141592} : c.omega;
      check_unwrap(grid, omega);
      s = SemigroupEvaluator::diagonal_phase(to_rvector(omega));
      expected = to_rvector(omega);
    }
    const ScenarioResult r = isometric_scenario(*s, grid, expected, tol);
    if (wants(c, "csv")) {
      std::vector<PhaseFit> fits;
      for (const auto& f : r.details.at("frequencies")) {
        fits.push_back({f.at("omega").get<Real>(), f.at("max_residual").get<Real>(), f.at("modulus_defect").get<Real>()});
      }
      write_text_file(c.output_dir, "frequencies.csv", frequencies_csv(fits));
    }
    return finish(c, r, "isometric", log);
  }
  if (c.scenario == "shift") {
    const Index dim = c.dim;
    return finish(c, shift_isometry_scenario(dim, c.trials, c.seed, tol), "shift", log);
  }
  if (c.scenario == "l1") {
    const TimeGrid grid = grid_for(c, 5.0);
    const std::vector<Real> omega = c.omega.empty() ? std::vector<Real>{1.0, -2.0, 0.5} : c.omega;
    check_unwrap(grid, omega);
    const ScenarioResult r = l1_diagonal_scenario(to_rvector(omega), grid, tol);
    if (wants(c, "csv")) {
      const auto fits = recover_frequencies(SemigroupEvaluator::diagonal_phase(to_rvector(omega)), grid);
      write_text_file(c.output_dir, "frequencies.csv", frequencies_csv(fits));
    }
    return finish(c, r, "l1", log);
  }
  if (c.scenario == "hilbert") {
    const TimeGrid grid = grid_for(c, 2.0);
    return finish(c, hilbert_control_scenario(to_rvector(c.lambda), to_rvector(c.mu), grid, tol), "hilbert", log);
  }
  throw Error(ErrorCode::UnknownScenario, "unknown scenario '" + c.scenario + "'");
}

int run_spectrum(const RunConfig& c, std::ostream& log) {
  const SpuriousZeroReport report = spurious_zero_analysis(c.dims, c.tolerances);
  if (wants(c, "json")) {
    nlohmann::json spectra = nlohmann::json::object();
    for (Index n : c.dims) spectra[std::to_string(n)] = to_json(eig(paper_generator(n).matrix, c.tolerances));
    write_text_file(c.output_dir, "spectrum.json",
                    canonical_json({{"spurious_zero", to_json(report)}, {"spectra", spectra}}));
  }
  if (wants(c, "csv")) {
    std::ostringstream rows;
    write_spurious_zero_csv(rows, report);
    write_text_file(c.output_dir, "spectrum.csv", rows.str());
    for (Index n : c.dims) {
      std::ostringstream out;
      write_spectrum_csv(out, eig(paper_generator(n).matrix, c.tolerances));
      write_text_file(c.output_dir, "spectrum_N" + std::to_string(n) + ".csv", out.str());
    }
  }
  for (const auto& row : report.rows) {
    log << (row.passed ? "PASS " : "FAIL ") << "spectrum.N" << row.dim << " zero_defect=" << detail::fmt17(row.zero_defect)
        << " imaginary=" << row.imaginary_count << " artifact=" << (row.artifact_flagged ? "yes" : "no") << '\n';
  }
  log << "spectrum: " << (report.passed() ? "pass" : "fail") << '\n';
  return report.passed() ? 0 : 1;
}

int run_trajectory(const RunConfig& c, std::ostream& log) {
  const TimeGrid grid = grid_for(c, 10.0);
  const SemigroupEvaluator s = c.input == "paper" || c.omega.empty()
                                   ? SemigroupEvaluator::closed_form(c.dim)
                                   : SemigroupEvaluator::diagonal_phase(to_rvector(c.omega));
  if (c.k < 1 || c.k > s.dim()) throw Error(ErrorCode::InvalidArgument, "k must lie in 1..dim");
  const auto values = trajectory_pairing(s, TruncVector::basis(s.dim(), c.k - 1),
                                         DualityWitness::coordinate(s.dim(), c.k - 1), grid);
  if (wants(c, "csv")) write_text_file(c.output_dir, "trajectory.csv", trajectory_csv(grid, values));
  if (wants(c, "json")) {
    nlohmann::json points = nlohmann::json::array();
    for (std::size_t i = 0; i < values.size(); ++i) {
      points.push_back({{"t", grid.points()[i]}, {"re", values[i].real()}, {"im", values[i].imag()},
                        {"modulus", std::abs(values[i])}});
    }
    write_text_file(c.output_dir, "trajectory.json",
                    canonical_json({{"evaluator", to_json(s)}, {"k", c.k}, {"points", points}}));
  }
  log << "trajectory: " << values.size() << " points\n";
  return 0;
}

}  // namespace

void RunConfig::validate() const {
  tolerances.validate();
  if (command == "verify") {
    static const std::set<std::string> known{"example", "isometric", "shift", "l1", "hilbert"};
    if (!known.count(scenario)) throw Error(ErrorCode::UnknownScenario, "unknown scenario '" + scenario + "'");
  } else if (command != "spectrum" && command != "trajectory") {
    throw Error(ErrorCode::UnknownScenario, "unknown command '" + command + "'");
  }
  if (dim < 2) throw Error(ErrorCode::InvalidArgument, "dim must be >= 2");
  for (Index n : dims) {
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "every entry of dims must be >= 2");
  }
  if (grid_start) {
    if (!(grid_step > 0)) throw Error(ErrorCode::InvalidGrid, "grid_step must be positive");
    if (!(*grid_start >= 0) || !(grid_stop > *grid_start)) throw Error(ErrorCode::InvalidGrid, "need 0 <= start < stop");
  }
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");
  if (input != "phase" && input != "paper") throw Error(ErrorCode::InvalidArgument, "input must be phase or paper");
  for (const auto& f : formats) {
    if (f != "json" && f != "csv") throw Error(ErrorCode::InvalidArgument, "unknown format '" + f + "'");
  }
}

Settings parse_settings_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot read config file " + path.string());
  Settings out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string body = trim(line.substr(0, line.find('#')));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::InvalidArgument, path.string() + ":" + std::to_string(lineno) + ": expected key = value");
    }
    out[trim(body.substr(0, eq))] = trim(body.substr(eq + 1));
  }
  return out;
}

void apply_settings(RunConfig& c, const Settings& settings) {
  for (const auto& [key, value] : settings) {
    if (key == "scenario") c.scenario = value;
    else if (key == "dim") c.dim = parse_number<Index>(value, key);
    else if (key == "dims") c.dims = parse_list<Index>(value, key);
    else if (key == "grid") {
      const auto a = value.find(':');
      const auto b = a == std::string::npos ? a : value.find(':', a + 1);
      if (b == std::string::npos) throw Error(ErrorCode::InvalidGrid, "grid must be start:stop:step");
      c.grid_start = parse_number<Real>(value.substr(0, a), key);
      c.grid_stop = parse_number<Real>(value.substr(a + 1, b - a - 1), key);
      c.grid_step = parse_number<Real>(value.substr(b + 1), key);
    } else if (key == "omega") c.omega = parse_list<Real>(value, key);
    else if (key == "lambda") c.lambda = parse_list<Real>(value, key);
    else if (key == "mu") c.mu = parse_list<Real>(value, key);
    else if (key == "seed") c.seed = parse_number<std::uint64_t>(value, key);
    else if (key == "trials") c.trials = parse_number<int>(value, key);
    else if (key == "k") c.k = parse_number<Index>(value, key);
    else if (key == "input") c.input = value;
    else if (key == "tol") apply_tolerance(c.tolerances, value);
    else if (key == "eq_tol") c.tolerances.eq_tol = parse_number<Real>(value, key);
    else if (key == "argmax_tol") c.tolerances.argmax_tol = parse_number<Real>(value, key);
    else if (key == "spectral_tol") c.tolerances.spectral_tol = parse_number<Real>(value, key);
    else if (key == "out") c.output_dir = value;
    else if (key == "format") {
      c.formats.clear();
      std::size_t pos = 0;
      while (pos <= value.size()) {
        const std::size_t end = std::min(value.find(',', pos), value.size());
        c.formats.insert(trim(std::string_view(value).substr(pos, end - pos)));
        pos = end + 1;
      }
    } else {
      throw Error(ErrorCode::InvalidArgument, "unknown setting '" + key + "'");
    }
  }
}

int run(const RunConfig& config, std::ostream& log) {
  config.validate();
  if (config.command == "verify") return run_verify(config, log);
  if (config.command == "spectrum") return run_spectrum(config, log);
  return run_trajectory(config, log);
}

int main_entry(int argc, const char* const* argv, std::ostream& log, std::ostream& err) {
  CLI::App app{"Finite-section verification of contraction and isometric semigroups on c0"};
  app.require_subcommand(1);

  Settings flags;
  std::string config_file;
  std::string scenario;
  const std::vector<std::pair<std::string, std::string>> flag_specs{
      {"dim", "Truncation dimension N"},
      {"dims", "Comma-separated dimensions for `spectrum`"},
      {"grid", "Time grid start:stop:step"},
      {"omega", "Comma-separated frequencies"},
      {"lambda", "Comma-separated imaginary parts for `verify hilbert`"},
      {"mu", "Comma-separated damping rates for `verify hilbert`"},
      {"seed", "Random seed"},
      {"trials", "Random trials for isometry sampling"},
      {"k", "One-based basis index for `trajectory`"},
      {"input", "phase | paper"},
      {"tol", "eq=..,argmax=..,spectral=.. or a bare eq tolerance"},
      {"out", "Output directory"},
      {"format", "json, csv or json,csv"},
  };
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;

  auto add_flags = [&](CLI::App* sub) {
    for (const auto& [name, help] : flag_specs) {
      options[sub->get_name() + "/" + name] = sub->add_option("--" + name, values[sub->get_name() + "/" + name], help);
    }
    sub->add_option("--config", config_file, "Flat key = value config file; flags win");
  };
  CLI::App* verify = app.add_subcommand("verify", "Run one verification scenario");
  verify->add_option("scenario", scenario, "example | isometric | shift | l1 | hilbert")->required();
  add_flags(verify);
  CLI::App* spectrum = app.add_subcommand("spectrum", "Spectral truncation-artifact analysis");
  add_flags(spectrum);
  CLI::App* trajectory = app.add_subcommand("trajectory", "Emit <T_t e_k, e*_k> along a grid");
  add_flags(trajectory);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    log << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    RunConfig config;
    CLI::App* chosen = app.get_subcommands().front();
    config.command = chosen->get_name();
    config.scenario = scenario;
    if (!config_file.empty()) apply_settings(config, parse_settings_file(config_file));
    if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') config.output_dir = env;
    for (const auto& [name, help] : flag_specs) {
      const std::string key = config.command + "/" + name;
      if (options.at(key)->count() > 0) flags[name] = values.at(key);
    }
    apply_settings(config, flags);
    return run(config, log);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace semilab::cli
