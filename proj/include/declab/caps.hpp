#pragma once

#include <Eigen/Dense>
#include <vector>

#include "declab/model.hpp"

namespace declab {

// Residue class {a : a = residue mod ϖ^level}; anchor is the residue itself.
struct Cap {
  unsigned level = 0;
  u64 residue = 0;
};

// Coset {u : u1 + 2*anchor*u2 = coset mod ϖ^kexp} of measure q^2 / p^kexp.
struct Envelope {
  Cap tau;
  unsigned kexp = 0;
  u64 coset = 0;
};

enum class ThresholdMode { PRUNING, THEOREM };

std::vector<Cap> caps_at_level(const ModelParams& P, unsigned level);
Cap cap_of(const ModelParams& P, unsigned level, u64 a);
std::vector<Cap> children(const ModelParams& P, const Cap& tau, unsigned child_level);
bool cap_contains(const Cap& tau, u64 a, const ModelParams& P);
std::vector<Cap> small_cap_partition(const ModelParams& P, double beta);

ParabolaFunction project_cap(const ParabolaFunction& f, const Cap& tau);

// caps at `level` whose coefficient block has L2 norm > 1e-12
unsigned nonvanishing_count(const ParabolaFunction& f, unsigned level);
unsigned nonvanishing_count(const ParabolaFunction& f, const Cap& parent, unsigned level);

std::vector<Envelope> envelope_tiling(const ModelParams& P, const Cap& tau);  // kexp = tau.level
std::vector<Envelope> envelope_tiling(const ModelParams& P, const Cap& tau, unsigned kexp);
double envelope_measure(const ModelParams& P, const Envelope& U);

// coset id of the grid point (u1, u2) under anchor/kexp
u64 envelope_coset_of(const ModelParams& P, u64 anchor, unsigned kexp, u64 u1, u64 u2);

// sum of g over each coset, indexed by coset id (one grid pass)
Eigen::VectorXd coset_sum_table(const Eigen::ArrayXXd& g, const ModelParams& P, u64 anchor,
                                unsigned kexp);
Eigen::VectorXcd coset_sum_table(const Eigen::ArrayXXcd& g, const ModelParams& P, u64 anchor,
                                 unsigned kexp);
std::complex<double> coset_average(const SpatialFunction& g, const Envelope& U);

// grid whose value at u is table[coset id of u]
Eigen::ArrayXXd paint_cosets(const Eigen::VectorXd& table, const ModelParams& P, u64 anchor,
                             unsigned kexp);

// Constant-modulus profile of f on a cap at level >= N: values T(s) for
// s < p^{2N-level}, with |f_cap(u)| = |T(w mod ϖ^{2N-level})|, w = u1 + 2*anchor*u2.
Eigen::VectorXcd cap_profile(const ParabolaFunction& f, const Cap& cap);

// Exact coefficient-space product of f (supported in tau) with the indicator
// of the union of listed cosets at exponent kexp <= N.
ParabolaFunction restrict_to_cosets(const ParabolaFunction& f, const Cap& tau, unsigned kexp,
                                    const std::vector<u64>& cosets);

// Good envelopes of the pruning process, built from grids: level-N caps
// threshold the original square pieces, lower levels threshold the partially
// pruned square function. Thresholds use nonvanishing counts of the original f.
std::vector<Envelope> good_envelopes(const ParabolaFunction& f, const Cap& tau, double alpha,
                                     ThresholdMode mode);

double pruning_threshold(const ModelParams& P, double alpha, unsigned nonvanishing,
                         ThresholdMode mode);

}  // namespace declab
