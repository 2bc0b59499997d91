#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "latsch/lattice.hpp"

namespace latsch {

/// End-to-end decay demonstration: truncate -Δ̂ + V̂ with an exponentially
/// enveloped attractive potential on growing boxes, follow the
/// interior-concentrated eigenpair, and check that its tail mass collapses
/// while no interior-concentrated candidate exists at energies inside the
/// essential spectrum.
struct RellichDemoOptions {
  int d = 2;
  double C = 2.5;
  double alpha = 1.0;
  std::uint64_t seed = 1;
  std::vector<double> R_values = {10, 15, 20, 25, 30};
  double interior_radius = 5.0;          // concentration is measured inside |n| <= this
  double concentration_threshold = 0.99;
  double tail_fraction = 2.0 / 3.0;      // tail = mass beyond |n| > fraction * R
  double threshold_margin = 0.05;        // candidates keep this distance from T̃
  int growth_n_max = 4;
};

struct RellichDemoRow {
  double R = 0;
  int box_size = 0;
  double candidate_lambda = 0;
  double concentration = 0;
  double tail_mass = 0;  // relative to total mass
};

struct RellichDemoResult {
  std::vector<RellichDemoRow> rows;
  std::vector<double> thresholds_used;
  double radiation_value_at_max_R = 0;
  int embedded_candidates = 0;       // interior-concentrated pairs inside (-0.9, 0.9)
  bool growth_bound_ok = false;
  double measured_decay_rate = 0;    // fitted single-exponential rate of the candidate
  double decay_log_ratio = 0;        // log(C0 D0) - measured rate (a = 1)
  int certificate_n_with_margin2 = 0;  // certificate index if A/a = log(C0 D0) + 2
  bool tail_monotone = false;
  bool tail_below_1e10 = false;

  bool passed() const {
    return tail_monotone && tail_below_1e10 && growth_bound_ok && embedded_candidates == 0;
  }

  std::string to_json() const;
};

RellichDemoResult run_rellich_demo(const RellichDemoOptions& options);

}  // namespace latsch
