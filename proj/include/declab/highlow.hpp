#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "declab/caps.hpp"

namespace declab {

// Frequency annuli by minimal component valuation; radius p^{-j}, j in
// [0, 2N], with j = 2N+1 encoding radius zero (the origin only).
struct Annulus {
  unsigned vmin_lo = 0;  // keep vmin(xi) >= vmin_lo
  unsigned vmin_hi = 0;  // and vmin(xi) <= vmin_hi (sentinel 2N+1 = origin)

  static Annulus le(const ModelParams& P, unsigned j);      // |xi| <= p^{-j}
  static Annulus gt(const ModelParams& P, unsigned j);      // |xi| >  p^{-j}
  static Annulus range(const ModelParams& P, unsigned j_lo, unsigned j_hi);  // p^{-j_lo} < |xi| <= p^{-j_hi}
};

unsigned vmin(const ModelParams& P, u64 xi1, u64 xi2);  // 2N+1 at the origin

SpatialFunction bandpass(const SpatialFunction& g, const Annulus& ann);
Eigen::ArrayXXcd bandpass_grid(const ModelParams& P, const Eigen::ArrayXXcd& grid,
                               const Annulus& ann);
Eigen::ArrayXXcd bandpass_grid(const ModelParams& P, const Eigen::ArrayXXd& grid,
                               const Annulus& ann);

// sum over level-N caps theta (inside tau if given) of |f_theta|^2
SpatialFunction square_function(const ParabolaFunction& f);
SpatialFunction square_function(const ParabolaFunction& f, const Cap& tau);

// Iterative pruning at tolerance alpha: level N keeps envelopes where the
// average of |f_theta|^2 clears the threshold, lower levels threshold the
// partially pruned square function. f_k aggregates the surviving pieces.
struct PruningResult {
  ModelParams P;
  double alpha = 0.0;
  ThresholdMode mode = ThresholdMode::PRUNING;
  std::vector<ParabolaFunction> f_levels;         // f_k, index k = 0..N
  std::vector<ParabolaFunction> f_bad;            // f^B_k = f_k - f_{k-1}, index k-1
  std::vector<std::vector<std::vector<u64>>> good;  // [k][cap index at level k] -> coset ids
  std::vector<unsigned> nonvanishing;             // of the original f, per level

  const ParabolaFunction& f_level(unsigned k) const { return f_levels.at(k); }
  const ParabolaFunction& f_bad_at(unsigned m) const { return f_bad.at(m - 1); }
};

PruningResult prune(const ParabolaFunction& f, double alpha,
                    ThresholdMode mode = ThresholdMode::PRUNING);

// Per-point least m whose pruned layer dominates: 0 when
// |f_0| >= (N^5+1)^{-1} |f_N|, else the least m >= 1 with
// |f^B_m| >= N^{-1}(1+N^{-5})^{-1} |f_N|; -1 where f_N vanishes.
Eigen::ArrayXXi classify_pruning_levels(const PruningResult& pr);

// V_alpha superlevel mask of the pruned function
Eigen::Array<bool, -1, -1> v_alpha_mask(const PruningResult& pr);
// U_alpha^m = V_alpha points of class m
Eigen::Array<bool, -1, -1> u_alpha_mask(const PruningResult& pr, int m);

// Broad/narrow splitting of U_alpha^m along the cap tree; level k holds one
// mask per level-(k-1) parent cap.
struct BroadNarrowResult {
  ModelParams P;
  unsigned m = 0;
  // broad[k-1] / narrow[k-1]: one mask per level-(k-1) parent cap residue,
  // Broad_{k,m}(parent) resp. Narrow_{k,m}(parent) within that branch
  std::vector<std::vector<Eigen::Array<bool, -1, -1>>> broad;
  std::vector<std::vector<Eigen::Array<bool, -1, -1>>> narrow;
};

BroadNarrowResult broad_narrow(const PruningResult& pr, unsigned m);

// Level-set uniformization over small caps gamma at scale R^beta: classifies
// (gamma, envelope) pairs by sup |1_U f_gamma| into the ladder e^{-j} down to
// N^{-2} R^{-1/2}, then groups gammas by class population.
struct UniformClass {
  int j = 0;               // lambda = e^{-j}; j < 0 when sup norms exceed 1
  int i = 0;               // population bracket (e^{i-1}, e^i]
  double lambda = 1.0;
  std::vector<u64> gammas;  // residues of participating caps
  u64 pair_count = 0;       // number of (gamma, U) pairs in the class
  ParabolaFunction g;       // (1/lambda) sum of the pair pieces
};

struct UniformizationResult {
  ModelParams P;
  double beta = 1.0;
  unsigned M = 0;
  double cutoff = 0.0;     // N^{-2} R^{-1/2}
  std::vector<UniformClass> classes;
  ParabolaFunction eta;    // leftover / cutoff
  double eta_sup = 0.0;
};

UniformizationResult uniformize(const ParabolaFunction& f, double beta);

}  // namespace declab
