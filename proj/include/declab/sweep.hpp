#pragma once

#include <iosfwd>

#include "declab/ensembles.hpp"
#include "declab/verifiers.hpp"

namespace declab {

// One batch of check runs over seeded ensemble draws and an alpha grid.
struct SweepConfig {
  std::string check = "all";
  RingKind kind = RingKind::INT_MOD;
  u64 p = 3;
  unsigned N = 2;
  std::string ensemble = "random_phase";
  unsigned trials = 1;
  u64 seed = 1;
  double density = 0.1;
  double beta = 1.0;
  double p_exp = std::numeric_limits<double>::quiet_NaN();
  double q_exp = std::numeric_limits<double>::quiet_NaN();
  std::string alpha_grid;  // "", "auto", "auto:n", "lo:hi:n" (geometric)
  double tol_override = std::numeric_limits<double>::quiet_NaN();
  unsigned threads = 1;
  std::vector<u64> set;  // charsum support
  CheckParams extra;     // forwarded verbatim to every check
};

struct SweepResult {
  std::vector<VerificationReport> reports;
  unsigned failures = 0;
};

// geometric grid; "" gives an empty vector (checks fall back to their
// default alpha), "auto" spans [lo_auto, hi_auto] with 8 points
std::vector<double> parse_alpha_grid(const std::string& s, double lo_auto, double hi_auto);

// whether the named check consumes the alpha parameter; alpha-blind checks
// run once per trial regardless of the grid
bool check_uses_alpha(const std::string& name);

// Deterministic: trial t draws with seed split_seed(cfg.seed, t), workers
// fill a task-indexed table, reports are concatenated in task order.
SweepResult run_sweep(const SweepConfig& cfg);

std::string manifest_json_line(const SweepConfig& cfg);
std::string report_json_line(const VerificationReport& r);
void write_ndjson(std::ostream& os, const SweepConfig& cfg,
                  const std::vector<VerificationReport>& reports);

}  // namespace declab
