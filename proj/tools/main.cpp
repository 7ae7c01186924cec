#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bilqctrl/io.hpp"
#include "bilqctrl/version.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using namespace bilqctrl;

struct CommonOpts {
  std::string system = "molecule:10";
  int levels = 0;  // 0 keeps the resolved size
  std::string out_dir = "out";
  std::uint64_t seed = 42;
  double gap_tol = kDefaultGapTol;
  int resolution = kDefaultStepsPerPeriod;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--system", o.system, "system source: molecule:N or a file path");
  cmd->add_option("--levels", o.levels, "truncate the system to this many levels");
  cmd->add_option("--out-dir", o.out_dir, "output directory");
  cmd->add_option("--seed", o.seed, "random seed, recorded in the manifest");
  cmd->add_option("--gap-tol", o.gap_tol, "relative tolerance for spectral gap comparison");
  cmd->add_option("--resolution", o.resolution, "pulse discretization steps per period");
}

GalerkinSystem resolve_system(const CommonOpts& o) {
  GalerkinSystem sys;
  const std::string prefix = "molecule:";
  if (o.system.rfind(prefix, 0) == 0) {
    const std::string tail = o.system.substr(prefix.size());
    int n = 0;
    try {
      size_t used = 0;
      n = std::stoi(tail, &used);
      if (used != tail.size()) throw std::invalid_argument(tail);
    } catch (const std::exception&) {
      throw ValidationError("bad system spec '" + o.system + "', expected molecule:N");
    }
    sys = build_molecule(n);
  } else {
    sys = load_system(o.system);
  }
  if (o.levels > 0 && o.levels != sys.n_levels) {
    sys = truncate(sys, o.levels);
  }
  return sys;
}

// Canonicalized run configuration; written next to the outputs so any run
// can be reproduced from its manifest alone.
class RunConfig {
 public:
  RunConfig(std::string subcommand, const CommonOpts& o) : subcommand_(std::move(subcommand)) {
    set("system", o.system);
    set("levels", o.levels);
    set("out-dir", o.out_dir);
    flags_["seed"] = std::to_string(o.seed);
    set("gap-tol", o.gap_tol);
    set("resolution", o.resolution);
  }

  void set(const std::string& key, const std::string& value) { flags_[key] = value; }
  void set(const std::string& key, const char* value) { flags_[key] = value; }
  void set(const std::string& key, double value) { flags_[key] = format_g12(value); }
  void set(const std::string& key, int value) { flags_[key] = std::to_string(value); }
  void set(const std::string& key, bool value) { flags_[key] = value ? "true" : "false"; }
  void set(const std::string& key, const std::vector<double>& values) {
    std::ostringstream joined;
    for (size_t i = 0; i < values.size(); ++i) {
      if (i > 0) joined << ',';
      joined << format_g12(values[i]);
    }
    flags_[key] = joined.str();
  }
  void set(const std::string& key, const std::vector<int>& values) {
    std::ostringstream joined;
    for (size_t i = 0; i < values.size(); ++i) {
      if (i > 0) joined << ',';
      joined << values[i];
    }
    flags_[key] = joined.str();
  }

  void add_output(const std::string& name) { outputs_.push_back(name); }

  void write(const fs::path& out_dir) const {
    json doc;
    doc["format"] = "bilqctrl.manifest.v1";
    doc["tool"] = kToolName;
    doc["version"] = kToolVersion;
    doc["subcommand"] = subcommand_;
    doc["flags"] = flags_;
    doc["outputs"] = outputs_;
    write_text_file((out_dir / "manifest.json").string(), doc.dump(2) + "\n");
  }

 private:
  std::string subcommand_;
  std::map<std::string, std::string> flags_;
  std::vector<std::string> outputs_;
};

fs::path ensure_out_dir(const CommonOpts& o) {
  fs::path dir(o.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create output directory '" + o.out_dir + "': " + ec.message());
  }
  return dir;
}

std::pair<int, int> parse_pair(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    throw ValidationError("bad pair '" + text + "', expected j,k");
  }
  try {
    size_t used = 0;
    const int j = std::stoi(text.substr(0, comma), &used);
    if (used != comma) throw std::invalid_argument(text);
    const std::string rest = text.substr(comma + 1);
    const int k = std::stoi(rest, &used);
    if (used != rest.size()) throw std::invalid_argument(text);
    return {j, k};
  } catch (const std::exception&) {
    throw ValidationError("bad pair '" + text + "', expected j,k");
  }
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError("bad number '" + item + "' in list '" + text + "'");
    }
  }
  if (out.empty()) {
    throw ValidationError("empty list '" + text + "'");
  }
  return out;
}

std::vector<int> parse_ints(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_doubles(text)) {
    const int n = static_cast<int>(v);
    if (static_cast<double>(n) != v) {
      throw ValidationError("expected integers in list '" + text + "'");
    }
    out.push_back(n);
  }
  return out;
}

std::string complex_str(const Complex& z) {
  if (z.imag() == 0.0) return format_g12(z.real());
  std::string imag_part = format_g12(z.imag()) + "i";
  if (z.real() == 0.0) return imag_part;
  return format_g12(z.real()) + (z.imag() >= 0.0 ? "+" : "") + imag_part;
}

void print_matrix(std::ostream& out, const ComplexMatrix& m) {
  for (Eigen::Index row = 0; row < m.rows(); ++row) {
    out << "[";
    for (Eigen::Index col = 0; col < m.cols(); ++col) {
      out << ' ' << complex_str(m(row, col));
    }
    out << " ]\n";
  }
}

PeriodicPulse pulse_from_flags(const GalerkinSystem& sys, int j, int k,
                               const std::string& shape, double eta, double amplitude) {
  if (shape == "cosine") {
    return make_cosine_pulse(sys, j, k, amplitude);
  }
  if (shape == "duty") {
    return make_duty_pulse(sys, j, k, eta, amplitude);
  }
  throw ValidationError("bad shape '" + shape + "', expected cosine or duty");
}

int run_model(const CommonOpts& o, bool print, const std::string& save_path) {
  const GalerkinSystem sys = resolve_system(o);
  std::cout << "label: " << sys.label << "\n";
  std::cout << "levels: " << sys.n_levels << "\n";
  if (print) {
    std::cout << "spectrum:";
    for (double lambda : sys.spectrum) std::cout << ' ' << format_g12(lambda);
    std::cout << "\nA:\n";
    print_matrix(std::cout, a_matrix(sys));
    std::cout << "B:\n";
    print_matrix(std::cout, sys.coupling);
  }
  const fs::path dir = ensure_out_dir(o);
  RunConfig config("model", o);
  config.set("print", print);
  if (!save_path.empty()) {
    save_system(sys, (dir / save_path).string());
    config.set("save", save_path);
    config.add_output(save_path);
    std::cout << "wrote " << save_path << "\n";
  }
  config.write(dir);
  return 0;
}

int run_propagate(const CommonOpts& o, int initial, const std::string& control_path,
                  double const_u, double duration, int samples, const std::string& csv_name) {
  const GalerkinSystem sys = resolve_system(o);
  PiecewiseConstantControl u;
  const bool have_file = !control_path.empty();
  const bool have_const = duration > 0.0;
  if (have_file == have_const) {
    throw ValidationError("pass exactly one of --control or --const-u with --duration");
  }
  u = have_file ? load_control(control_path) : constant_control(const_u, duration);
  if (samples < 2) {
    throw ValidationError("--samples must be at least 2");
  }
  const StateVector psi0 = basis_state(sys.n_levels, initial);
  const Trajectory traj = propagate(sys, u, psi0, linspace(0.0, u.duration(), samples));

  const fs::path dir = ensure_out_dir(o);
  const fs::path csv_path = dir / csv_name;
  write_text_file(csv_path.string(), trajectory_csv(sys, traj));

  RunConfig config("propagate", o);
  config.set("initial", initial);
  if (have_file) config.set("control", control_path);
  if (have_const) {
    config.set("const-u", const_u);
    config.set("duration", duration);
  }
  config.set("samples", samples);
  config.set("csv", csv_name);
  config.add_output(csv_name);
  config.write(dir);

  const StateVector& last = traj.states.back();
  std::cout << "final norm " << format_g12(last.norm()) << " energy "
            << format_g12(energy(sys, last)) << "\n";
  std::cout << "wrote " << csv_path.string() << "\n";
  return 0;
}

int run_transitions(const CommonOpts& o, const std::string& json_name) {
  const GalerkinSystem sys = resolve_system(o);
  json doc;
  doc["system"] = sys.label;
  doc["n_levels"] = sys.n_levels;
  json records = json::array();
  json resonances = json::array();
  for (int j = 1; j <= sys.n_levels; ++j) {
    for (int k = j + 1; k <= sys.n_levels; ++k) {
      if (sys.coupling(j - 1, k - 1) == Complex(0.0, 0.0)) continue;
      const TransitionRecord rec = is_nondegenerate(sys, j, k, o.gap_tol);
      records.push_back(to_json(rec));
      if (rec.nondegenerate()) {
        resonances.push_back(to_json(resonance_set(sys, j, k, o.gap_tol)));
      }
    }
  }
  doc["records"] = std::move(records);
  doc["resonance_sets"] = std::move(resonances);
  doc["chain"] = to_json(chain_of_connectedness(sys, o.gap_tol));

  const std::string text = doc.dump(2) + "\n";
  std::cout << text;
  const fs::path dir = ensure_out_dir(o);
  write_text_file((dir / json_name).string(), text);
  RunConfig config("transitions", o);
  config.set("json", json_name);
  config.add_output(json_name);
  config.write(dir);
  return 0;
}

int run_synthesize(const CommonOpts& o, const std::string& pair_text, const std::string& shape,
                   double eta, double amplitude, int n, const std::string& scan_name,
                   const std::string& schedule_name) {
  const GalerkinSystem sys = resolve_system(o);
  const auto [j, k] = parse_pair(pair_text);
  const PeriodicPulse pulse = pulse_from_flags(sys, j, k, shape, eta, amplitude);
  FidelityScan scan;
  const PulseSchedule sched =
      find_optimal_time(sys, j, k, pulse, n, o.resolution, scan_name.empty() ? nullptr : &scan);

  const std::string text = to_json(sched).dump(2) + "\n";
  std::cout << text;
  const fs::path dir = ensure_out_dir(o);
  write_text_file((dir / schedule_name).string(), text);

  RunConfig config("synthesize", o);
  config.set("pair", pair_text);
  config.set("shape", shape);
  if (shape == "duty") config.set("eta", eta);
  config.set("amplitude", amplitude);
  config.set("n", n);
  config.set("schedule-json", schedule_name);
  config.add_output(schedule_name);
  if (!scan_name.empty()) {
    write_text_file((dir / scan_name).string(), fidelity_scan_csv(scan));
    config.set("scan-csv", scan_name);
    config.add_output(scan_name);
  }
  config.write(dir);
  return 0;
}

int run_cost_sweep(const CommonOpts& o, const std::string& pair_text, const std::string& etas_text,
                   double target, int max_n, const std::string& r_text, double lr_eta,
                   const std::string& lr_n_text, int trials, const std::string& budgets_text) {
  const GalerkinSystem sys = resolve_system(o);
  const auto [j, k] = parse_pair(pair_text);
  const std::vector<double> etas = parse_doubles(etas_text);
  const std::vector<double> r_values = parse_doubles(r_text);
  const std::vector<int> lr_n = parse_ints(lr_n_text);
  const std::vector<double> budgets = parse_doubles(budgets_text);

  const std::vector<C1SweepRow> sweep = c1_upper_sweep(sys, j, k, etas, target, max_n,
                                                       o.resolution);
  std::vector<LrScalingRow> lr_rows;
  for (double r : r_values) {
    const PeriodicPulse pulse = make_duty_pulse(sys, j, k, lr_eta);
    const std::vector<LrScalingRow> rows = lr_scaling_report(sys, j, k, pulse, r, lr_n,
                                                             o.resolution);
    lr_rows.insert(lr_rows.end(), rows.begin(), rows.end());
  }
  std::vector<CapCheckReport> cap_reports;
  for (size_t i = 0; i < budgets.size(); ++i) {
    cap_reports.push_back(verify_fidelity_cap(sys, trials, budgets[i], o.seed + i));
  }
  const C1Bracket bracket = c1_bracket(sys, j, k, sweep, target);

  const fs::path dir = ensure_out_dir(o);
  write_text_file((dir / "c1_sweep.csv").string(), c1_sweep_csv(sweep));
  write_text_file((dir / "lr_scaling.csv").string(), lr_scaling_csv(lr_rows));
  write_text_file((dir / "cap_trials.csv").string(), cap_trials_csv(cap_reports));

  json summary;
  summary["c1_bracket"] = {{"lower", round12(bracket.lower)},
                           {"upper", round12(bracket.upper)},
                           {"upper_valid", bracket.upper_valid}};
  json sweep_json = json::array();
  for (const C1SweepRow& row : sweep) {
    sweep_json.push_back({{"eta", round12(row.eta)},
                          {"n", row.n},
                          {"reached", row.reached},
                          {"fidelity", round12(row.fidelity)},
                          {"l1_cost", round12(row.l1_cost)},
                          {"analytic_bound", round12(row.analytic_bound)}});
  }
  summary["c1_sweep"] = std::move(sweep_json);
  json caps = json::array();
  for (const CapCheckReport& report : cap_reports) caps.push_back(to_json(report));
  summary["cap_reports"] = std::move(caps);
  const std::string text = summary.dump(2) + "\n";
  std::cout << text;
  write_text_file((dir / "summary.json").string(), text);

  RunConfig config("cost-sweep", o);
  config.set("pair", pair_text);
  config.set("etas", etas);
  config.set("target-fidelity", target);
  config.set("max-n", max_n);
  config.set("r-values", r_values);
  config.set("lr-eta", lr_eta);
  config.set("lr-n", lr_n);
  config.set("trials", trials);
  config.set("cap-budgets", budgets);
  for (const char* name : {"c1_sweep.csv", "lr_scaling.csv", "cap_trials.csv", "summary.json"}) {
    config.add_output(name);
  }
  config.write(dir);
  return 0;
}

int run_convergence(const CommonOpts& o, const std::string& mode, const std::string& pair_text,
                    const std::string& shape, double eta, double amplitude,
                    const std::string& resolutions_text, int oracle_steps, int periods,
                    int initial, int small_levels, int large_levels, double pad_factor, int n,
                    int samples) {
  const auto [j, k] = parse_pair(pair_text);
  const fs::path dir = ensure_out_dir(o);
  RunConfig config("convergence", o);
  config.set("mode", mode);
  config.set("pair", pair_text);
  config.set("shape", shape);
  if (shape == "duty") config.set("eta", eta);
  config.set("amplitude", amplitude);

  const bool do_discretization = mode == "discretization" || mode == "both";
  const bool do_galerkin = mode == "galerkin" || mode == "both";
  if (!do_discretization && !do_galerkin) {
    throw ValidationError("bad mode '" + mode + "', expected discretization, galerkin or both");
  }

  if (do_discretization) {
    const GalerkinSystem sys = resolve_system(o);
    const std::vector<int> resolutions = parse_ints(resolutions_text);
    if (oracle_steps < 2) {
      throw ValidationError("--oracle-steps must be at least 2");
    }
    if (periods < 1) {
      throw ValidationError("--periods must be at least 1");
    }
    const PeriodicPulse pulse = pulse_from_flags(sys, j, k, shape, eta, amplitude);
    const double duration = periods * pulse.period;
    const StateVector psi0 = basis_state(sys.n_levels, initial);
    const StateVector oracle =
        propagate_final(sys, discretize_pulse(pulse, duration, oracle_steps), psi0);
    std::vector<std::pair<int, double>> rows;
    for (int res : resolutions) {
      const StateVector endpoint =
          propagate_final(sys, discretize_pulse(pulse, duration, res), psi0);
      rows.push_back({res, (endpoint - oracle).norm()});
    }
    write_text_file((dir / "convergence_discretization.csv").string(), convergence_csv(rows));
    config.set("resolutions", resolutions);
    config.set("oracle-steps", oracle_steps);
    config.set("periods", periods);
    config.set("initial", initial);
    config.add_output("convergence_discretization.csv");
    for (const auto& [res, err] : rows) {
      std::cout << "discretization " << res << " endpoint error " << format_g12(err) << "\n";
    }
  }

  if (do_galerkin) {
    const GalerkinSystem sys = resolve_system(o);
    if (small_levels >= large_levels || large_levels > sys.n_levels) {
      std::ostringstream msg;
      msg << "need small < large <= " << sys.n_levels << ", got " << small_levels << ", "
          << large_levels;
      throw ValidationError(msg.str());
    }
    const GalerkinSystem sys_small = truncate(sys, small_levels);
    const GalerkinSystem sys_large = truncate(sys, large_levels);
    const PeriodicPulse pulse = pulse_from_flags(sys_small, j, k, shape, eta, amplitude);
    const PulseSchedule sched = find_optimal_time(sys_small, j, k, pulse, n, o.resolution);
    const PiecewiseConstantControl u =
        restrict_control(schedule_control(pulse, sched), sched.t_star_n);
    const StateVector psi0 = basis_state(small_levels, initial);
    const double deviation =
        galerkin_compare(sys_small, sys_large, u, psi0, linspace(0.0, u.duration(), samples));
    const PiecewiseConstantControl padded = zero_pad(u, pad_factor * u.duration());
    // original sample grid plus pad samples, so the maxima are comparable
    std::vector<double> padded_times = linspace(0.0, u.duration(), samples);
    const std::vector<double> tail = linspace(u.duration(), padded.duration(), samples);
    padded_times.insert(padded_times.end(), tail.begin() + 1, tail.end());
    const double deviation_padded =
        galerkin_compare(sys_small, sys_large, padded, psi0, padded_times);
    std::ostringstream csv;
    csv << "# bilqctrl.galerkin.v1\n";
    csv << "n_small,n_large,l1,deviation,deviation_padded\n";
    csv << small_levels << ',' << large_levels << ',' << format_g12(lp_norm(u, 1.0)) << ','
        << format_g12(deviation) << ',' << format_g12(deviation_padded) << '\n';
    write_text_file((dir / "convergence_galerkin.csv").string(), csv.str());
    config.set("small", small_levels);
    config.set("large", large_levels);
    config.set("pad-factor", pad_factor);
    config.set("n", n);
    config.set("samples", samples);
    config.add_output("convergence_galerkin.csv");
    std::cout << "galerkin deviation " << format_g12(deviation) << " padded "
              << format_g12(deviation_padded) << "\n";
  }

  config.write(dir);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bilinear quantum control: propagation, pulse synthesis and cost bounds"};
  app.require_subcommand(1);

  CommonOpts model_opts;
  bool model_print = false;
  std::string model_save;
  CLI::App* model = app.add_subcommand("model", "inspect or export a system");
  add_common(model, model_opts);
  model->add_flag("--print", model_print, "print spectrum and matrices");
  model->add_option("--save", model_save, "write the system to this JSON file");

  CommonOpts prop_opts;
  int prop_initial = 1;
  std::string prop_control;
  double prop_const_u = 0.0;
  double prop_duration = 0.0;
  int prop_samples = 201;
  std::string prop_csv = "trajectory.csv";
  CLI::App* prop = app.add_subcommand("propagate", "integrate a control and export the trajectory");
  add_common(prop, prop_opts);
  prop->add_option("--initial", prop_initial, "1-based initial level");
  prop->add_option("--control", prop_control, "piecewise-constant control JSON file");
  prop->add_option("--const-u", prop_const_u, "constant control value");
  prop->add_option("--duration", prop_duration, "horizon for --const-u");
  prop->add_option("--samples", prop_samples, "number of sample times");
  prop->add_option("--csv", prop_csv, "trajectory CSV file name");

  CommonOpts trans_opts;
  std::string trans_json = "transitions.json";
  CLI::App* trans = app.add_subcommand("transitions", "non-degeneracy and resonance analysis");
  add_common(trans, trans_opts);
  trans->add_option("--json", trans_json, "report file name");

  CommonOpts synth_opts;
  std::string synth_pair = "1,2";
  std::string synth_shape = "cosine";
  double synth_eta = 0.1;
  double synth_amplitude = 1.0;
  int synth_n = 8;
  std::string synth_scan;
  std::string synth_schedule = "schedule.json";
  CLI::App* synth = app.add_subcommand("synthesize", "build a transfer pulse schedule");
  add_common(synth, synth_opts);
  synth->add_option("--pair", synth_pair, "transition levels j,k");
  synth->add_option("--shape", synth_shape, "pulse shape: cosine or duty");
  synth->add_option("--eta", synth_eta, "duty window length");
  synth->add_option("--amplitude", synth_amplitude, "pulse amplitude before 1/n scaling");
  synth->add_option("--n", synth_n, "amplitude divisor of the averaging limit");
  synth->add_option("--scan-csv", synth_scan, "also write the fidelity scan CSV");
  synth->add_option("--schedule-json", synth_schedule, "schedule file name");

  CommonOpts cost_opts;
  std::string cost_pair = "1,2";
  std::string cost_etas = "0.4,0.2,0.1";
  double cost_target = 0.99;
  int cost_max_n = 64;
  std::string cost_r = "2";
  double cost_lr_eta = 0.1;
  std::string cost_lr_n = "4,8,16,32";
  int cost_trials = 200;
  std::string cost_budgets = "2.0,3.0";
  CLI::App* cost = app.add_subcommand("cost-sweep", "cost bound evidence tables"
                                      " (BILQCTRL_THREADS caps parallel cells)");
  add_common(cost, cost_opts);
  cost->add_option("--pair", cost_pair, "transition levels j,k");
  cost->add_option("--etas", cost_etas, "duty windows for the upper-bound sweep");
  cost->add_option("--target-fidelity", cost_target, "fidelity the sweep must reach");
  cost->add_option("--max-n", cost_max_n, "largest amplitude divisor tried");
  cost->add_option("--r-values", cost_r, "exponents for the L^r decay table");
  cost->add_option("--lr-eta", cost_lr_eta, "duty window for the L^r table");
  cost->add_option("--lr-n", cost_lr_n, "divisors for the L^r table");
  cost->add_option("--trials", cost_trials, "random controls per budget");
  cost->add_option("--cap-budgets", cost_budgets, "L1 budgets for the cap check, below pi");

  CommonOpts conv_opts;
  std::string conv_mode = "both";
  std::string conv_pair = "1,2";
  std::string conv_shape = "cosine";
  double conv_eta = 0.1;
  double conv_amplitude = 1.0;
  std::string conv_resolutions = "16,32,64";
  int conv_oracle = 1024;
  int conv_periods = 6;
  int conv_initial = 1;
  int conv_small = 8;
  int conv_large = 14;
  double conv_pad = 5.0;
  int conv_n = 24;
  int conv_samples = 101;
  CLI::App* conv = app.add_subcommand("convergence", "discretization and truncation studies");
  add_common(conv, conv_opts);
  conv->add_option("--mode", conv_mode, "discretization, galerkin or both");
  conv->add_option("--pair", conv_pair, "transition levels j,k");
  conv->add_option("--shape", conv_shape, "pulse shape: cosine or duty");
  conv->add_option("--eta", conv_eta, "duty window length");
  conv->add_option("--amplitude", conv_amplitude, "pulse amplitude");
  conv->add_option("--resolutions", conv_resolutions, "steps per period to compare");
  conv->add_option("--oracle-steps", conv_oracle, "steps per period of the reference run");
  conv->add_option("--periods", conv_periods, "horizon in pulse periods");
  conv->add_option("--initial", conv_initial, "1-based initial level");
  conv->add_option("--small", conv_small, "levels of the small truncation");
  conv->add_option("--large", conv_large, "levels of the large truncation");
  conv->add_option("--pad-factor", conv_pad, "zero-pad multiple for the stability check");
  conv->add_option("--n", conv_n, "amplitude divisor for the truncation study");
  conv->add_option("--samples", conv_samples, "sample times per comparison");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (model->parsed()) {
      return run_model(model_opts, model_print, model_save);
    }
    if (prop->parsed()) {
      return run_propagate(prop_opts, prop_initial, prop_control, prop_const_u, prop_duration,
                           prop_samples, prop_csv);
    }
    if (trans->parsed()) {
      return run_transitions(trans_opts, trans_json);
    }
    if (synth->parsed()) {
      return run_synthesize(synth_opts, synth_pair, synth_shape, synth_eta, synth_amplitude,
                            synth_n, synth_scan, synth_schedule);
    }
    if (cost->parsed()) {
      return run_cost_sweep(cost_opts, cost_pair, cost_etas, cost_target, cost_max_n, cost_r,
                            cost_lr_eta, cost_lr_n, cost_trials, cost_budgets);
    }
    if (conv->parsed()) {
      return run_convergence(conv_opts, conv_mode, conv_pair, conv_shape, conv_eta,
                             conv_amplitude, conv_resolutions, conv_oracle, conv_periods,
                             conv_initial, conv_small, conv_large, conv_pad, conv_n,
                             conv_samples);
    }
    std::cerr << "error: no subcommand\n";
    return 1;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
