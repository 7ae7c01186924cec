#include "bilqctrl/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace bilqctrl {

namespace {

using nlohmann::json;

json pair_json(const LevelPair& p) { return json::array({p.first, p.second}); }

json r12(double x) { return round12(x); }

}  // namespace

std::string format_g12(double x) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.12g", x);
  return buffer;
}

double round12(double x) {
  return std::strtod(format_g12(x).c_str(), nullptr);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open for reading: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    throw IoError("read failure: " + path);
  }
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open for writing: " + path);
  }
  out << content;
  out.flush();
  if (!out) {
    throw IoError("write failure: " + path);
  }
}

PiecewiseConstantControl parse_control_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("control file: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("breakpoints") || !doc.contains("values")) {
    throw ParseError("control file: needs 'breakpoints' and 'values' arrays");
  }
  const json& bp = doc["breakpoints"];
  const json& vals = doc["values"];
  if (!bp.is_array() || !vals.is_array()) {
    throw ParseError("control file: 'breakpoints' and 'values' must be arrays");
  }
  PiecewiseConstantControl u;
  for (const json& b : bp) {
    if (!b.is_number()) throw ParseError("control file: breakpoints must be numbers");
    u.breakpoints.push_back(b.get<double>());
  }
  for (const json& v : vals) {
    if (!v.is_number()) throw ParseError("control file: values must be numbers");
    u.values.push_back(v.get<double>());
  }
  u.validate();
  return u;
}

std::string control_to_json(const PiecewiseConstantControl& u) {
  u.validate();
  json doc;
  doc["format"] = "bilqctrl.control.v1";
  doc["breakpoints"] = u.breakpoints;
  doc["values"] = u.values;
  return doc.dump(2) + "\n";
}

PiecewiseConstantControl load_control(const std::string& path) {
  return parse_control_json(read_text_file(path));
}

void save_control(const PiecewiseConstantControl& u, const std::string& path) {
  write_text_file(path, control_to_json(u));
}

std::string trajectory_csv(const GalerkinSystem& sys, const Trajectory& traj) {
  std::ostringstream out;
  out << "# bilqctrl.trajectory.v1\n";
  out << "t";
  for (int k = 1; k <= sys.n_levels; ++k) {
    out << ",re_" << k << ",im_" << k;
  }
  out << ",norm,energy\n";
  for (size_t i = 0; i < traj.times.size(); ++i) {
    const StateVector& psi = traj.states[i];
    out << format_g12(traj.times[i]);
    for (int k = 0; k < sys.n_levels; ++k) {
      out << ',' << format_g12(psi[k].real()) << ',' << format_g12(psi[k].imag());
    }
    out << ',' << format_g12(psi.norm()) << ',' << format_g12(energy(sys, psi)) << '\n';
  }
  return out.str();
}

std::string fidelity_scan_csv(const FidelityScan& scan) {
  std::ostringstream out;
  out << "# bilqctrl.fidelity_scan.v1\n";
  out << "t,fidelity\n";
  for (size_t i = 0; i < scan.times.size(); ++i) {
    out << format_g12(scan.times[i]) << ',' << format_g12(scan.fidelities[i]) << '\n';
  }
  return out.str();
}

std::string c1_sweep_csv(const std::vector<C1SweepRow>& rows) {
  std::ostringstream out;
  out << "# bilqctrl.c1_sweep.v1\n";
  out << "eta,n,reached,fidelity,l1_cost,analytic_bound,t_star_n\n";
  for (const C1SweepRow& row : rows) {
    out << format_g12(row.eta) << ',' << row.n << ',' << (row.reached ? 1 : 0) << ','
        << format_g12(row.fidelity) << ',' << format_g12(row.l1_cost) << ','
        << format_g12(row.analytic_bound) << ',' << format_g12(row.t_star_n) << '\n';
  }
  return out.str();
}

std::string lr_scaling_csv(const std::vector<LrScalingRow>& rows) {
  std::ostringstream out;
  out << "# bilqctrl.lr_scaling.v1\n";
  out << "r,n,t_star_n,measured,analytic_bound\n";
  for (const LrScalingRow& row : rows) {
    out << format_g12(row.r) << ',' << row.n << ',' << format_g12(row.t_star_n) << ','
        << format_g12(row.measured) << ',' << format_g12(row.analytic_bound) << '\n';
  }
  return out.str();
}

std::string cap_trials_csv(const std::vector<CapCheckReport>& reports) {
  std::ostringstream out;
  out << "# bilqctrl.cap_trials.v1\n";
  out << "budget,trial,duration,l1,y1,y2,margin_sin,margin_cos\n";
  for (const CapCheckReport& report : reports) {
    for (const CapCheckTrial& row : report.rows) {
      out << format_g12(report.budget) << ',' << row.index << ',' << format_g12(row.duration)
          << ',' << format_g12(row.l1) << ',' << format_g12(row.y1_mod) << ','
          << format_g12(row.y2_mod) << ',' << format_g12(row.margin_sin) << ','
          << format_g12(row.margin_cos) << '\n';
    }
  }
  return out.str();
}

std::string convergence_csv(const std::vector<std::pair<int, double>>& rows) {
  std::ostringstream out;
  out << "# bilqctrl.convergence.v1\n";
  out << "resolution,endpoint_error\n";
  for (const auto& [resolution, error] : rows) {
    out << resolution << ',' << format_g12(error) << '\n';
  }
  return out.str();
}

json to_json(const TransitionRecord& rec) {
  json doc;
  doc["pair"] = pair_json(rec.pair);
  doc["gap"] = r12(rec.gap);
  doc["coupled"] = rec.coupled;
  doc["nondegenerate"] = rec.nondegenerate();
  json conflicts = json::array();
  for (const LevelPair& p : rec.degenerate_conflicts) conflicts.push_back(pair_json(p));
  doc["degenerate_conflicts"] = std::move(conflicts);
  doc["truncation"] = rec.truncation;
  return doc;
}

json to_json(const ResonanceSet& set) {
  json doc;
  doc["transition"] = pair_json(set.transition);
  json pairs = json::array();
  for (const LevelPair& p : set.pairs) pairs.push_back(pair_json(p));
  doc["pairs"] = std::move(pairs);
  doc["truncation"] = set.truncation;
  return doc;
}

json to_json(const ConnectivityChain& chain) {
  json doc;
  doc["n_levels"] = chain.n_levels;
  doc["exists"] = chain.exists;
  json edges = json::array();
  for (const LevelPair& p : chain.edges) edges.push_back(pair_json(p));
  doc["edges"] = std::move(edges);
  doc["components"] = chain.components;
  return doc;
}

json to_json(const PulseSchedule& sched) {
  json doc;
  doc["pair"] = pair_json(sched.pair);
  doc["period"] = r12(sched.period);
  doc["fourier_coeff"] = {{"re", r12(sched.fourier_coeff.real())},
                          {"im", r12(sched.fourier_coeff.imag())}};
  doc["t_star"] = r12(sched.t_star);
  doc["n"] = sched.n;
  doc["window"] = {r12(sched.window_lo), r12(sched.window_hi)};
  doc["t_star_n"] = r12(sched.t_star_n);
  doc["fidelity"] = r12(sched.fidelity);
  doc["l1_cost"] = r12(sched.l1_cost);
  doc["steps_per_period"] = sched.steps_per_period;
  return doc;
}

json to_json(const CapCheckReport& report) {
  json doc;
  doc["budget"] = r12(report.budget);
  doc["trials"] = report.trials;
  doc["seed"] = report.seed;
  doc["min_margin_sin"] = r12(report.min_margin_sin);
  doc["min_margin_cos"] = r12(report.min_margin_cos);
  return doc;
}

json to_json(const CostReport& report) {
  json doc;
  doc["control_id"] = report.control_id;
  doc["duration"] = r12(report.duration);
  json norms = json::object();
  for (const auto& [p, value] : report.norms) {
    norms[format_g12(p)] = r12(value);
  }
  doc["norms"] = std::move(norms);
  doc["fidelity"] = r12(report.fidelity);
  doc["generic_l1_lower"] = {{"value", r12(report.generic_l1_lower.value)},
                             {"holds", report.generic_l1_lower.holds}};
  if (report.two_level_l1_lower) {
    doc["two_level_l1_lower"] = {{"value", r12(report.two_level_l1_lower->value)},
                                 {"holds", report.two_level_l1_lower->holds}};
  }
  if (report.fidelity_cap) {
    doc["fidelity_cap"] = {{"value", r12(report.fidelity_cap->value)},
                           {"holds", report.fidelity_cap->holds}};
  }
  return doc;
}

}  // namespace bilqctrl
