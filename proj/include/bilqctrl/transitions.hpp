#pragma once

#include <utility>
#include <vector>

#include "bilqctrl/system.hpp"

namespace bilqctrl {

// Relative tolerance for comparing spectral gaps.
inline constexpr double kDefaultGapTol = 1e-9;

// Unordered pair of 1-based level indices, stored with first < second.
using LevelPair = std::pair<int, int>;

struct TransitionRecord {
  LevelPair pair{0, 0};
  double gap = 0.0;  // |lambda_j - lambda_k|
  bool coupled = false;
  // Coupled pairs sharing an index with `pair` whose gap matches within tol.
  std::vector<LevelPair> degenerate_conflicts;
  // The check only sees levels 1..truncation; larger systems could add
  // conflicts this record cannot rule out.
  int truncation = 0;

  bool nondegenerate() const { return coupled && gap > 0.0 && degenerate_conflicts.empty(); }
};

struct ResonanceSet {
  LevelPair transition{0, 0};
  // Coupled pairs sharing an index with `transition` whose gap is an integer
  // multiple >= 2 of the transition gap.
  std::vector<LevelPair> pairs;
  int truncation = 0;
};

struct ConnectivityChain {
  int n_levels = 0;
  bool exists = false;
  std::vector<LevelPair> edges;
  std::vector<std::vector<int>> components;

  // Edge sequence joining the two levels; throws if they are disconnected.
  std::vector<LevelPair> path_between(int level_a, int level_b) const;
};

// Symmetric in (j, k); j == k is rejected.
TransitionRecord is_nondegenerate(const GalerkinSystem& sys, int j, int k,
                                  double gap_tol = kDefaultGapTol);

// Requires (j, k) non-degenerate. Factor-1 multiples (the transition's own
// frequency) are never members.
ResonanceSet resonance_set(const GalerkinSystem& sys, int j, int k,
                           double gap_tol = kDefaultGapTol);

// Graph of non-degenerate coupled transitions over all levels.
ConnectivityChain chain_of_connectedness(const GalerkinSystem& sys,
                                         double gap_tol = kDefaultGapTol);

}  // namespace bilqctrl
