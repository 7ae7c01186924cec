#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "bilqctrl/cost.hpp"
#include "bilqctrl/propagation.hpp"
#include "bilqctrl/pulse.hpp"
#include "bilqctrl/transitions.hpp"

namespace bilqctrl {

// All floating output goes through 12 significant digits so repeated runs
// diff cleanly.
std::string format_g12(double x);
// The double closest to the 12-digit decimal form of x.
double round12(double x);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

PiecewiseConstantControl parse_control_json(const std::string& text);
std::string control_to_json(const PiecewiseConstantControl& u);
PiecewiseConstantControl load_control(const std::string& path);
void save_control(const PiecewiseConstantControl& u, const std::string& path);

// CSV with a versioned `# tag` first line, then the header row:
// t, re_1, im_1, ..., re_N, im_N, norm, energy
std::string trajectory_csv(const GalerkinSystem& sys, const Trajectory& traj);

std::string fidelity_scan_csv(const FidelityScan& scan);
std::string c1_sweep_csv(const std::vector<C1SweepRow>& rows);
std::string lr_scaling_csv(const std::vector<LrScalingRow>& rows);
std::string cap_trials_csv(const std::vector<CapCheckReport>& reports);
std::string convergence_csv(const std::vector<std::pair<int, double>>& rows);

nlohmann::json to_json(const TransitionRecord& rec);
nlohmann::json to_json(const ResonanceSet& set);
nlohmann::json to_json(const ConnectivityChain& chain);
nlohmann::json to_json(const PulseSchedule& sched);
nlohmann::json to_json(const CapCheckReport& report);
nlohmann::json to_json(const CostReport& report);

}  // namespace bilqctrl
