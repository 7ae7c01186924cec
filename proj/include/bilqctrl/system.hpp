#pragma once

#include <string>
#include <vector>

#include "bilqctrl/linalg.hpp"

namespace bilqctrl {

// Finite truncation of a bilinear pair (A, B) written in the eigenbasis of
// the drift: the drift matrix is diag(-i * spectrum[k]) and `coupling` is the
// skew-Hermitian control matrix in the same basis.
struct GalerkinSystem {
  int n_levels = 0;
  std::vector<double> spectrum;  // non-decreasing, positive unless relaxed
  ComplexMatrix coupling;
  std::string label;
  // Relaxes the spectrum constraint from positive to non-negative, which
  // admits models with a zero ground level.
  bool allow_zero_spectrum = false;

  // Throws ValidationError naming the violated invariant.
  void validate() const;
};

// Rotational ladder: spectrum k^2 for k = 1..n, nearest-neighbor coupling
// with entries -i/2.
GalerkinSystem build_molecule(int n_levels);

// The drift matrix diag(-i * spectrum[k]).
ComplexMatrix a_matrix(const GalerkinSystem& sys);

// Restriction to the first n_levels levels.
GalerkinSystem truncate(const GalerkinSystem& sys, int n_levels);

// True when `small` equals the leading block of `large` exactly.
bool is_truncation_of(const GalerkinSystem& small, const GalerkinSystem& large);

GalerkinSystem parse_system_json(const std::string& text);
std::string system_to_json(const GalerkinSystem& sys);

GalerkinSystem load_system(const std::string& path);
void save_system(const GalerkinSystem& sys, const std::string& path);

}  // namespace bilqctrl
