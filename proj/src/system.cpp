#include "bilqctrl/system.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include <json.hpp>

namespace bilqctrl {

namespace {

using nlohmann::json;

constexpr const char* kSystemFormat = "bilqctrl.system.v1";

const json& require_field(const json& doc, const char* name) {
  auto it = doc.find(name);
  if (it == doc.end()) {
    throw ParseError(std::string("system file: missing field '") + name + "'");
  }
  return *it;
}

}  // namespace

void GalerkinSystem::validate() const {
  if (n_levels < 1) {
    throw ValidationError("system: n_levels must be at least 1");
  }
  if (static_cast<int>(spectrum.size()) != n_levels) {
    std::ostringstream msg;
    msg << "system: spectrum has " << spectrum.size() << " entries, expected " << n_levels;
    throw ValidationError(msg.str());
  }
  for (int k = 0; k < n_levels; ++k) {
    if (!std::isfinite(spectrum[k])) {
      throw ValidationError("system: spectrum has non-finite entries");
    }
    const bool ok = allow_zero_spectrum ? spectrum[k] >= 0.0 : spectrum[k] > 0.0;
    if (!ok) {
      std::ostringstream msg;
      msg << "system: spectrum must be " << (allow_zero_spectrum ? "non-negative" : "positive")
          << ", level " << (k + 1) << " is " << spectrum[k];
      throw ValidationError(msg.str());
    }
    if (k > 0 && spectrum[k] < spectrum[k - 1]) {
      std::ostringstream msg;
      msg << "system: spectrum must be non-decreasing, violated at level " << (k + 1);
      throw ValidationError(msg.str());
    }
  }
  if (coupling.rows() != n_levels || coupling.cols() != n_levels) {
    std::ostringstream msg;
    msg << "system: coupling is " << coupling.rows() << "x" << coupling.cols()
        << ", expected " << n_levels << "x" << n_levels;
    throw ValidationError(msg.str());
  }
  if (!coupling.allFinite()) {
    throw ValidationError("system: coupling has non-finite entries");
  }
  if (!is_skew_hermitian(coupling, kSkewHermitianTol)) {
    std::ostringstream msg;
    msg << "system: coupling must be skew-Hermitian within " << kSkewHermitianTol;
    throw ValidationError(msg.str());
  }
}

GalerkinSystem build_molecule(int n_levels) {
  if (n_levels < 2) {
    throw ValidationError("build_molecule: needs at least 2 levels");
  }
  GalerkinSystem sys;
  sys.n_levels = n_levels;
  sys.spectrum.resize(n_levels);
  for (int k = 0; k < n_levels; ++k) {
    sys.spectrum[k] = static_cast<double>(k + 1) * static_cast<double>(k + 1);
  }
  sys.coupling = ComplexMatrix::Zero(n_levels, n_levels);
  for (int k = 0; k + 1 < n_levels; ++k) {
    sys.coupling(k, k + 1) = Complex(0.0, -0.5);
    sys.coupling(k + 1, k) = Complex(0.0, -0.5);
  }
  sys.label = "molecule-" + std::to_string(n_levels);
  sys.validate();
  return sys;
}

ComplexMatrix a_matrix(const GalerkinSystem& sys) {
  sys.validate();
  ComplexMatrix a = ComplexMatrix::Zero(sys.n_levels, sys.n_levels);
  for (int k = 0; k < sys.n_levels; ++k) {
    a(k, k) = Complex(0.0, -sys.spectrum[k]);
  }
  return a;
}

GalerkinSystem truncate(const GalerkinSystem& sys, int n_levels) {
  sys.validate();
  if (n_levels < 1 || n_levels > sys.n_levels) {
    std::ostringstream msg;
    msg << "truncate: requested " << n_levels << " levels from a system with "
        << sys.n_levels;
    throw ValidationError(msg.str());
  }
  GalerkinSystem out;
  out.n_levels = n_levels;
  out.spectrum.assign(sys.spectrum.begin(), sys.spectrum.begin() + n_levels);
  out.coupling = sys.coupling.topLeftCorner(n_levels, n_levels);
  out.label = sys.label;
  out.allow_zero_spectrum = sys.allow_zero_spectrum;
  out.validate();
  return out;
}

bool is_truncation_of(const GalerkinSystem& small, const GalerkinSystem& large) {
  if (small.n_levels > large.n_levels) return false;
  for (int k = 0; k < small.n_levels; ++k) {
    if (small.spectrum[k] != large.spectrum[k]) return false;
  }
  return small.coupling == large.coupling.topLeftCorner(small.n_levels, small.n_levels);
}

GalerkinSystem parse_system_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("system file: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ParseError("system file: top level must be an object");
  }
  const json& format = require_field(doc, "format");
  if (!format.is_string() || format.get<std::string>() != kSystemFormat) {
    throw ParseError(std::string("system file: expected format '") + kSystemFormat + "'");
  }

  GalerkinSystem sys;
  const json& n = require_field(doc, "n_levels");
  if (!n.is_number_integer()) {
    throw ParseError("system file: 'n_levels' must be an integer");
  }
  sys.n_levels = n.get<int>();
  if (sys.n_levels < 1) {
    throw ParseError("system file: 'n_levels' must be at least 1");
  }

  const json& spectrum = require_field(doc, "spectrum");
  if (!spectrum.is_array()) {
    throw ParseError("system file: 'spectrum' must be an array");
  }
  for (const json& v : spectrum) {
    if (!v.is_number()) {
      throw ParseError("system file: 'spectrum' entries must be numbers");
    }
    sys.spectrum.push_back(v.get<double>());
  }

  if (auto it = doc.find("label"); it != doc.end()) {
    if (!it->is_string()) throw ParseError("system file: 'label' must be a string");
    sys.label = it->get<std::string>();
  }
  if (auto it = doc.find("allow_zero_spectrum"); it != doc.end()) {
    if (!it->is_boolean()) {
      throw ParseError("system file: 'allow_zero_spectrum' must be a boolean");
    }
    sys.allow_zero_spectrum = it->get<bool>();
  }

  const json& entries = require_field(doc, "coupling_entries");
  if (!entries.is_array()) {
    throw ParseError("system file: 'coupling_entries' must be an array");
  }
  sys.coupling = ComplexMatrix::Zero(sys.n_levels, sys.n_levels);
  std::set<std::pair<int, int>> seen;
  for (const json& entry : entries) {
    if (!entry.is_object()) {
      throw ParseError("system file: coupling entries must be objects");
    }
    const json& j_field = require_field(entry, "j");
    const json& k_field = require_field(entry, "k");
    const json& re_field = require_field(entry, "re");
    const json& im_field = require_field(entry, "im");
    if (!j_field.is_number_integer() || !k_field.is_number_integer()) {
      throw ParseError("system file: coupling indices must be integers");
    }
    if (!re_field.is_number() || !im_field.is_number()) {
      throw ParseError("system file: coupling values must be numbers");
    }
    const int j = j_field.get<int>();
    const int k = k_field.get<int>();
    if (j < 1 || k < 1 || j > sys.n_levels || k > sys.n_levels) {
      std::ostringstream msg;
      msg << "system file: coupling entry (" << j << "," << k << ") out of range 1.."
          << sys.n_levels;
      throw ParseError(msg.str());
    }
    if (j > k) {
      std::ostringstream msg;
      msg << "system file: coupling entry (" << j << "," << k
          << ") must satisfy j <= k; the lower triangle is implied";
      throw ParseError(msg.str());
    }
    if (!seen.insert({j, k}).second) {
      std::ostringstream msg;
      msg << "system file: duplicate coupling entry (" << j << "," << k << ")";
      throw ParseError(msg.str());
    }
    const Complex value(re_field.get<double>(), im_field.get<double>());
    sys.coupling(j - 1, k - 1) = value;
    if (j != k) {
      sys.coupling(k - 1, j - 1) = -std::conj(value);
    }
  }

  sys.validate();
  return sys;
}

std::string system_to_json(const GalerkinSystem& sys) {
  sys.validate();
  json doc;
  doc["format"] = kSystemFormat;
  doc["label"] = sys.label;
  doc["n_levels"] = sys.n_levels;
  doc["spectrum"] = sys.spectrum;
  doc["allow_zero_spectrum"] = sys.allow_zero_spectrum;
  json entries = json::array();
  for (int j = 0; j < sys.n_levels; ++j) {
    for (int k = j; k < sys.n_levels; ++k) {
      const Complex value = sys.coupling(j, k);
      if (value == Complex(0.0, 0.0)) continue;
      entries.push_back({{"j", j + 1}, {"k", k + 1}, {"re", value.real()}, {"im", value.imag()}});
    }
  }
  doc["coupling_entries"] = std::move(entries);
  return doc.dump(2) + "\n";
}

GalerkinSystem load_system(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open system file for reading: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    throw IoError("read failure on system file: " + path);
  }
  return parse_system_json(buffer.str());
}

void save_system(const GalerkinSystem& sys, const std::string& path) {
  const std::string text = system_to_json(sys);
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open system file for writing: " + path);
  }
  out << text;
  if (!out) {
    throw IoError("write failure on system file: " + path);
  }
}

}  // namespace bilqctrl
