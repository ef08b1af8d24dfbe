#include "declab/model.hpp"

#include <cmath>
#include <mutex>

#include "declab/caps.hpp"
#include "declab/errors.hpp"

namespace declab {

namespace {
constexpr u64 kGridCap = 4096;
}

ModelParams ModelParams::make(RingKind kind, u64 p, unsigned N) {
  require(N >= 1, Err::N_TOO_SMALL, "model needs N >= 1");
  auto impl = std::make_shared<Impl>();
  impl->ring = make_ring(kind, p, 2 * N);
  require(impl->ring->q() <= kGridCap, Err::MODEL_TOO_LARGE,
          "grid side q = p^{2N} must be <= " + std::to_string(kGridCap));
  impl->N = N;
  impl->transform = std::make_shared<LineTransform>(impl->ring);
  const u64 q = impl->ring->q();
  impl->sigma.resize(q);
  for (u64 a = 0; a < q; ++a) impl->sigma[a] = impl->ring->sqr(a);
  impl->subrings.reserve(2 * N);
  impl->subtransforms.reserve(2 * N);
  for (unsigned k = 1; k <= 2 * N; ++k) {
    RingPtr r = (k == 2 * N) ? impl->ring : make_ring(kind, p, k);
    impl->subrings.push_back(r);
    impl->subtransforms.push_back(k == 2 * N ? impl->transform
                                             : std::make_shared<LineTransform>(r));
  }
  ModelParams P;
  P.impl_ = std::move(impl);
  return P;
}

u64 ModelParams::Rk(unsigned k) const {
  require(k <= 2 * N(), Err::LEVEL_RANGE, "R_k needs k <= 2N");
  return ipow(p(), k);
}

u64 ModelParams::two_times(u64 a) const { return impl_->ring->mul(impl_->ring->two(), a); }

const RingPtr& ModelParams::subring(unsigned k) const {
  require(k >= 1 && k <= 2 * N(), Err::LEVEL_RANGE, "subring precision out of range");
  return impl_->subrings[k - 1];
}

const LineTransform& ModelParams::subtransform(unsigned k) const {
  require(k >= 1 && k <= 2 * N(), Err::LEVEL_RANGE, "subtransform precision out of range");
  return *impl_->subtransforms[k - 1];
}

unsigned ModelParams::M_of_beta(double beta) const {
  require(beta >= 0.5 - 1e-12 && beta <= 1.0 + 1e-12, Err::BETA_NOT_REPRESENTABLE,
          "beta must lie in [1/2, 1]");
  const double m = 2.0 * N() * beta;
  const double r = std::round(m);
  require(std::abs(m - r) < 1e-9, Err::BETA_NOT_REPRESENTABLE,
          "2N*beta must be an integer at this resolution");
  return static_cast<unsigned>(r);
}

struct ParabolaFunction::Cache {
  std::once_flag flag;
  Eigen::ArrayXXcd grid;
};

ParabolaFunction::ParabolaFunction(ModelParams params, Eigen::VectorXcd coeffs)
    : params_(std::move(params)), coeffs_(std::move(coeffs)), cache_(std::make_shared<Cache>()) {
  require(static_cast<u64>(coeffs_.size()) == params_.q(), Err::INDEX_RANGE,
          "coefficient vector must have length q");
}

const Eigen::ArrayXXcd& ParabolaFunction::spatial() const {
  std::call_once(cache_->flag, [&] {
    const u64 q = params_.q();
    Eigen::ArrayXXcd spec = Eigen::ArrayXXcd::Zero(q, q);
    for (u64 a = 0; a < q; ++a)
      if (coeffs_[a] != 0.0) spec(a, params_.sigma(a)) += coeffs_[a];
    cache_->grid = params_.transform().synthesize2d(spec);
  });
  return cache_->grid;
}

struct SpatialFunction::Cache {
  std::once_flag flag;
  Eigen::ArrayXXcd spectrum;
  bool seeded = false;
};

SpatialFunction::SpatialFunction(ModelParams params, Eigen::ArrayXXcd grid)
    : params_(std::move(params)), grid_(std::move(grid)), cache_(std::make_shared<Cache>()) {
  require(grid_.rows() == static_cast<long>(params_.q()) &&
              grid_.cols() == static_cast<long>(params_.q()),
          Err::INDEX_RANGE, "grid must be q by q");
}

SpatialFunction::SpatialFunction(ModelParams params, Eigen::ArrayXXcd grid,
                                 Eigen::ArrayXXcd spectrum)
    : SpatialFunction(std::move(params), std::move(grid)) {
  cache_->spectrum = std::move(spectrum);
  cache_->seeded = true;
}

const Eigen::ArrayXXcd& SpatialFunction::spectrum() const {
  std::call_once(cache_->flag, [&] {
    if (!cache_->seeded) cache_->spectrum = params_.transform().analyze2d(grid_);
  });
  return cache_->spectrum;
}

ParabolaFunction make_function(const ModelParams& params, Eigen::VectorXcd coeffs) {
  return ParabolaFunction(params, std::move(coeffs));
}

SpatialFunction evaluate_spatial(const ParabolaFunction& f) {
  return SpatialFunction(f.params(), f.spatial());
}

double abs_pow_from_sq(double x2, double e) {
  if (e == 2.0) return x2;
  if (e == 4.0) return x2 * x2;
  if (e == 6.0) return x2 * x2 * x2;
  if (e == 8.0) return (x2 * x2) * (x2 * x2);
  if (e == 1.0) return std::sqrt(x2);
  if (e == 3.0) return x2 * std::sqrt(x2);
  return std::pow(x2, 0.5 * e);
}

double lp_pow(const Eigen::ArrayXXcd& grid, double e) {
  require(e >= 1.0, Err::INDEX_RANGE, "Lebesgue exponent must be >= 1");
  double s = 0.0;
  const std::complex<double>* d = grid.data();
  const long n = grid.size();
  for (long i = 0; i < n; ++i) s += abs_pow_from_sq(std::norm(d[i]), e);
  return s;
}

double lp_pow(const ParabolaFunction& f, double e) { return lp_pow(f.spatial(), e); }

namespace {
double sup_of(const Eigen::ArrayXXcd& g) {
  double m = 0.0;
  const std::complex<double>* d = g.data();
  for (long i = 0; i < g.size(); ++i) m = std::max(m, std::norm(d[i]));
  return std::sqrt(m);
}
}  // namespace

double lp_norm(const ParabolaFunction& f, double e) {
  if (std::isinf(e)) return sup_of(f.spatial());
  return std::pow(lp_pow(f, e), 1.0 / e);
}

double lp_norm(const SpatialFunction& g, double e) {
  if (std::isinf(e)) return sup_of(g.grid());
  return std::pow(lp_pow(g.grid(), e), 1.0 / e);
}

double sup_norm(const ParabolaFunction& f) { return sup_of(f.spatial()); }
double sup_norm(const SpatialFunction& g) { return sup_of(g.grid()); }

namespace {
u64 count_above(const Eigen::ArrayXXcd& g, double alpha) {
  require(alpha > 0.0, Err::ALPHA_NONPOSITIVE, "superlevel threshold must be positive");
  const double a2 = alpha * alpha;
  u64 c = 0;
  const std::complex<double>* d = g.data();
  for (long i = 0; i < g.size(); ++i)
    if (std::norm(d[i]) > a2) ++c;
  return c;
}
}  // namespace

u64 superlevel_measure(const ParabolaFunction& f, double alpha) {
  return count_above(f.spatial(), alpha);
}

u64 superlevel_measure(const SpatialFunction& g, double alpha) {
  return count_above(g.grid(), alpha);
}

ParabolaFunction project(const ParabolaFunction& f, const std::function<bool(u64)>& freq_pred) {
  Eigen::VectorXcd c = f.coeffs();
  for (u64 a = 0; a < f.params().q(); ++a)
    if (!freq_pred(a)) c[a] = 0.0;
  return ParabolaFunction(f.params(), std::move(c));
}

ParabolaFunction multiply_indicator(const ParabolaFunction& f, const Envelope& U) {
  const ModelParams& P = f.params();
  require(U.kexp <= P.N(), Err::LEVEL_RANGE, "envelope exponent must be <= N");
  const u64 q = P.q();
  Eigen::ArrayXXcd g = f.spatial();
  for (u64 j = 0; j < q; ++j)
    for (u64 i = 0; i < q; ++i)
      if (envelope_coset_of(P, U.tau.residue, U.kexp, i, j) != U.coset) g(i, j) = 0.0;
  Eigen::ArrayXXcd spec = P.transform().analyze2d(g);
  double on2 = 0.0, off2 = 0.0;
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(q);
  for (u64 a = 0; a < q; ++a) c[a] = spec(a, P.sigma(a));
  for (u64 j = 0; j < q; ++j)
    for (u64 i = 0; i < q; ++i) {
      const double m = std::norm(spec(i, j));
      if (P.sigma(i) == j)
        on2 += m;
      else
        off2 += m;
    }
  require(off2 <= 1e-16 * std::max(on2, 1e-300) || off2 <= 1e-24, Err::SPECTRUM_LEAK,
          "indicator product left the parabola");
  return ParabolaFunction(P, std::move(c));
}

}  // namespace declab
