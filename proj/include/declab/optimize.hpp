#pragma once

#include "declab/ensembles.hpp"
#include "declab/verifiers.hpp"

namespace declab {

// Random-restart coordinate ascent on coefficient phases (optionally also
// magnitudes), maximizing the decoupling ratio at fixed exponents.
struct SearchConfig {
  double beta = 1.0;
  double p_exp = 4.0;
  double q_exp = 4.0;
  unsigned restarts = 8;
  u64 budget = 2000;  // probe evaluations per restart
  u64 seed = 1;
  unsigned threads = 1;
  unsigned support_size = 0;  // 0 = full coefficient line
  bool magnitude_moves = false;
  double step_init = 1.5707963267948966;   // pi/2
  double step_min = 0.012271846303085130;  // pi/256
};

struct SearchResult {
  ParabolaFunction best;
  double ratio = 0.0;         // recomputed independently from `best`
  double ratio_search = 0.0;  // value tracked by the incremental ascent
  unsigned best_restart = 0;
  u64 probes = 0;                      // total across restarts
  std::vector<double> restart_ratios;  // per restart, index order
};

// Restart 0 starts from the block example, later restarts from seeded random
// phases. Parallel restarts merge deterministically: best ratio, ties to the
// lowest restart index.
SearchResult maximize_ratio(const ModelParams& P, const SearchConfig& cfg);

}  // namespace declab
