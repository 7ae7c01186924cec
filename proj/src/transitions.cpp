#include "bilqctrl/transitions.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

namespace bilqctrl {

namespace {

void require_pair(const GalerkinSystem& sys, int j, int k, const char* who) {
  if (j < 1 || k < 1 || j > sys.n_levels || k > sys.n_levels) {
    std::ostringstream msg;
    msg << who << ": pair (" << j << "," << k << ") outside 1.." << sys.n_levels;
    throw ValidationError(msg.str());
  }
  if (j == k) {
    std::ostringstream msg;
    msg << who << ": levels must differ, got (" << j << "," << k << ")";
    throw ValidationError(msg.str());
  }
}

bool same_gap(double g1, double g2, double gap_tol) {
  return std::abs(g1 - g2) <= gap_tol * std::max(std::abs(g1), std::abs(g2));
}

bool coupled_at(const GalerkinSystem& sys, int l, int m) {
  return sys.coupling(l - 1, m - 1) != Complex(0.0, 0.0);
}

bool shares_index(const LevelPair& a, const LevelPair& b) {
  return a.first == b.first || a.first == b.second || a.second == b.first ||
         a.second == b.second;
}

}  // namespace

TransitionRecord is_nondegenerate(const GalerkinSystem& sys, int j, int k, double gap_tol) {
  sys.validate();
  require_pair(sys, j, k, "is_nondegenerate");
  if (!(gap_tol >= 0.0)) {
    throw ValidationError("is_nondegenerate: gap_tol must be non-negative");
  }
  TransitionRecord rec;
  rec.pair = std::minmax(j, k);
  rec.gap = std::abs(sys.spectrum[rec.pair.second - 1] - sys.spectrum[rec.pair.first - 1]);
  rec.coupled = coupled_at(sys, rec.pair.first, rec.pair.second);
  rec.truncation = sys.n_levels;
  for (int l = 1; l <= sys.n_levels; ++l) {
    for (int m = l + 1; m <= sys.n_levels; ++m) {
      const LevelPair other{l, m};
      if (other == rec.pair) continue;
      if (!coupled_at(sys, l, m)) continue;
      if (!shares_index(other, rec.pair)) continue;
      const double other_gap = std::abs(sys.spectrum[m - 1] - sys.spectrum[l - 1]);
      if (same_gap(other_gap, rec.gap, gap_tol)) {
        rec.degenerate_conflicts.push_back(other);
      }
    }
  }
  return rec;
}

ResonanceSet resonance_set(const GalerkinSystem& sys, int j, int k, double gap_tol) {
  const TransitionRecord rec = is_nondegenerate(sys, j, k, gap_tol);
  if (!rec.nondegenerate()) {
    std::ostringstream msg;
    msg << "resonance_set: transition (" << rec.pair.first << "," << rec.pair.second
        << ") is not non-degenerate";
    throw ValidationError(msg.str());
  }
  ResonanceSet out;
  out.transition = rec.pair;
  out.truncation = sys.n_levels;
  for (int l = 1; l <= sys.n_levels; ++l) {
    for (int m = l + 1; m <= sys.n_levels; ++m) {
      const LevelPair other{l, m};
      if (!coupled_at(sys, l, m)) continue;
      if (!shares_index(other, rec.pair)) continue;
      const double other_gap = std::abs(sys.spectrum[m - 1] - sys.spectrum[l - 1]);
      // integer multiple >= 2 of the driven gap, within gap_tol
      const double ratio = other_gap / rec.gap;
      const double q = std::round(ratio);
      if (q < 2.0) continue;
      if (same_gap(other_gap, q * rec.gap, gap_tol)) {
        out.pairs.push_back(other);
      }
    }
  }
  return out;
}

ConnectivityChain chain_of_connectedness(const GalerkinSystem& sys, double gap_tol) {
  sys.validate();
  ConnectivityChain chain;
  chain.n_levels = sys.n_levels;
  for (int j = 1; j <= sys.n_levels; ++j) {
    for (int k = j + 1; k <= sys.n_levels; ++k) {
      if (!coupled_at(sys, j, k)) continue;
      if (is_nondegenerate(sys, j, k, gap_tol).nondegenerate()) {
        chain.edges.push_back({j, k});
      }
    }
  }

  std::vector<int> component(sys.n_levels + 1, 0);
  int n_components = 0;
  for (int start = 1; start <= sys.n_levels; ++start) {
    if (component[start] != 0) continue;
    ++n_components;
    std::queue<int> frontier;
    frontier.push(start);
    component[start] = n_components;
    while (!frontier.empty()) {
      const int at = frontier.front();
      frontier.pop();
      for (const LevelPair& e : chain.edges) {
        int next = 0;
        if (e.first == at) next = e.second;
        if (e.second == at) next = e.first;
        if (next != 0 && component[next] == 0) {
          component[next] = n_components;
          frontier.push(next);
        }
      }
    }
  }
  chain.components.resize(n_components);
  for (int level = 1; level <= sys.n_levels; ++level) {
    chain.components[component[level] - 1].push_back(level);
  }
  chain.exists = n_components == 1 && sys.n_levels >= 1;
  return chain;
}

std::vector<LevelPair> ConnectivityChain::path_between(int level_a, int level_b) const {
  if (level_a < 1 || level_b < 1 || level_a > n_levels || level_b > n_levels) {
    std::ostringstream msg;
    msg << "path_between: levels (" << level_a << "," << level_b << ") outside 1.." << n_levels;
    throw ValidationError(msg.str());
  }
  if (level_a == level_b) return {};

  std::vector<int> parent(n_levels + 1, 0);
  std::queue<int> frontier;
  frontier.push(level_a);
  parent[level_a] = level_a;
  while (!frontier.empty() && parent[level_b] == 0) {
    const int at = frontier.front();
    frontier.pop();
    for (const LevelPair& e : edges) {
      int next = 0;
      if (e.first == at) next = e.second;
      if (e.second == at) next = e.first;
      if (next != 0 && parent[next] == 0) {
        parent[next] = at;
        frontier.push(next);
      }
    }
  }
  if (parent[level_b] == 0) {
    std::ostringstream msg;
    msg << "path_between: levels " << level_a << " and " << level_b << " are disconnected";
    throw ValidationError(msg.str());
  }
  std::vector<LevelPair> path;
  for (int at = level_b; at != level_a; at = parent[at]) {
    path.push_back(std::minmax(parent[at], at));
  }
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace bilqctrl
