#pragma once

#include <string>
#include <vector>

#include "declab/model.hpp"

namespace declab {

enum class EnsembleKind { RANDOM_PHASE, SPARSE, BLOCK, CHARSUM };

EnsembleKind ensemble_from_name(const std::string& name);
std::string ensemble_name(EnsembleKind kind);

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::RANDOM_PHASE;
  u64 seed = 0;
  double density = 0.1;         // SPARSE: support size max(1, round(density*q))
  double beta = 1.0;            // BLOCK: strip exponent
  std::vector<u64> set;         // CHARSUM: integer set, reduced mod q
};

ParabolaFunction generate(const EnsembleSpec& spec, const ModelParams& P);

// number of (a,b,c,d) in A^4 with a+b=c+d and a^2+b^2=c^2+d^2 in the ring
u64 parabola_energy(const std::vector<u64>& A, const RingPtr& ring);

// sum over pair keys (a+b, a^2+b^2) of |sum of c_a c_b|^2; equals q^{-2} * L4^4
double quartic_coefficient_sum(const ParabolaFunction& f);

// exact block ratio p^{(M-N)(p-p/q-1)} and the generic lower bound
// R^{(beta-1/2)(1-1/p-1/q)} it dominates
double block_ratio_closed_form(const ModelParams& P, double beta, double p_exp, double q_exp);
double block_lower_bound(const ModelParams& P, double beta, double p_exp, double q_exp);

}  // namespace declab
