#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <vector>

#include "declab/transforms.hpp"

namespace declab {

struct Cap;
struct Envelope;

// Finite model at resolution R = q = p^{2N}: spatial grid (O/ϖ^{2N})^2 with
// counting measure, parabola spectrum {(a, a^2 mod ϖ^{2N})}.
class ModelParams {
 public:
  static ModelParams make(RingKind kind, u64 p, unsigned N);

  const RingPtr& ring() const { return impl_->ring; }
  RingKind kind() const { return impl_->ring->kind(); }
  unsigned N() const { return impl_->N; }
  u64 p() const { return impl_->ring->p(); }
  u64 q() const { return impl_->ring->q(); }
  u64 R() const { return q(); }
  double bold_p() const { return static_cast<double>(p()); }
  double norm_two() const { return impl_->ring->norm_two(); }

  u64 Rk(unsigned k) const;  // p^k for 0 <= k <= 2N
  u64 sigma(u64 a) const { return impl_->sigma[a]; }
  u64 two_times(u64 a) const;  // 2a in the ring

  const LineTransform& transform() const { return *impl_->transform; }
  // precision-k quotient ring and its transform; 1 <= k <= 2N
  const RingPtr& subring(unsigned k) const;
  const LineTransform& subtransform(unsigned k) const;

  // M with R^beta = p^M; beta in [1/2, 1] and 2N*beta integral
  unsigned M_of_beta(double beta) const;

 private:
  struct Impl {
    RingPtr ring;
    unsigned N = 0;
    std::shared_ptr<const LineTransform> transform;
    std::vector<u64> sigma;
    std::vector<RingPtr> subrings;                                  // index k-1
    std::vector<std::shared_ptr<const LineTransform>> subtransforms;  // index k-1
  };
  std::shared_ptr<const Impl> impl_;
};

class SpatialFunction;

// Immutable coefficient vector over the parabola; spatial values are cached
// on first use.
class ParabolaFunction {
 public:
  ParabolaFunction(ModelParams params, Eigen::VectorXcd coeffs);

  const ModelParams& params() const { return params_; }
  const Eigen::VectorXcd& coeffs() const { return coeffs_; }
  const Eigen::ArrayXXcd& spatial() const;  // grid (u1, u2)
  bool is_zero() const { return coeffs_.isZero(0.0); }

 private:
  struct Cache;
  ModelParams params_;
  Eigen::VectorXcd coeffs_;
  std::shared_ptr<Cache> cache_;
};

// Grid values plus a lazy full 2D spectrum.
class SpatialFunction {
 public:
  SpatialFunction(ModelParams params, Eigen::ArrayXXcd grid);
  SpatialFunction(ModelParams params, Eigen::ArrayXXcd grid, Eigen::ArrayXXcd spectrum);

  const ModelParams& params() const { return params_; }
  const Eigen::ArrayXXcd& grid() const { return grid_; }
  const Eigen::ArrayXXcd& spectrum() const;

 private:
  struct Cache;
  ModelParams params_;
  Eigen::ArrayXXcd grid_;
  std::shared_ptr<Cache> cache_;
};

ParabolaFunction make_function(const ModelParams& params, Eigen::VectorXcd coeffs);
SpatialFunction evaluate_spatial(const ParabolaFunction& f);

// |x|^e summed over the grid (counting measure); e = inf gives sup via lp variants below
double lp_pow(const Eigen::ArrayXXcd& grid, double e);
double lp_pow(const ParabolaFunction& f, double e);
double lp_norm(const ParabolaFunction& f, double e);
double lp_norm(const SpatialFunction& g, double e);
double sup_norm(const ParabolaFunction& f);
double sup_norm(const SpatialFunction& g);

u64 superlevel_measure(const ParabolaFunction& f, double alpha);
u64 superlevel_measure(const SpatialFunction& g, double alpha);

ParabolaFunction project(const ParabolaFunction& f, const std::function<bool(u64)>& freq_pred);

// Spatial product with the envelope indicator; result must stay on the
// parabola (checked), which holds for envelope exponents <= N.
ParabolaFunction multiply_indicator(const ParabolaFunction& f, const Envelope& U);

// |x|^{e} for x >= 0 given x2 = x^2, avoiding pow for the common exponents
double abs_pow_from_sq(double x2, double e);

}  // namespace declab
