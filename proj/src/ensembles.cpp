#include "declab/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "declab/errors.hpp"
#include "declab/rng.hpp"

namespace declab {

EnsembleKind ensemble_from_name(const std::string& name) {
  if (name == "random_phase" || name == "random") return EnsembleKind::RANDOM_PHASE;
  if (name == "sparse") return EnsembleKind::SPARSE;
  if (name == "block") return EnsembleKind::BLOCK;
  if (name == "charsum") return EnsembleKind::CHARSUM;
  fail(Err::PARAM_MISSING, "unknown ensemble '" + name + "'");
}

std::string ensemble_name(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::RANDOM_PHASE: return "random_phase";
    case EnsembleKind::SPARSE: return "sparse";
    case EnsembleKind::BLOCK: return "block";
    case EnsembleKind::CHARSUM: return "charsum";
  }
  return "?";
}

namespace {
std::complex<double> unit_phase(Rng& rng) {
  const double t = 2.0 * std::numbers::pi * rng.next_double();
  return {std::cos(t), std::sin(t)};
}
}  // namespace

ParabolaFunction generate(const EnsembleSpec& spec, const ModelParams& P) {
  const u64 q = P.q();
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(q);
  switch (spec.kind) {
    case EnsembleKind::RANDOM_PHASE: {
      Rng rng(spec.seed);
      for (u64 a = 0; a < q; ++a) c[a] = unit_phase(rng);
      break;
    }
    case EnsembleKind::SPARSE: {
      Rng rng(spec.seed);
      const u64 m = std::max<u64>(
          1, static_cast<u64>(std::llround(spec.density * static_cast<double>(q))));
      require(m <= q, Err::INDEX_RANGE, "sparse density too large");
      std::vector<u64> idx(q);
      std::iota(idx.begin(), idx.end(), 0);
      for (u64 i = 0; i < m; ++i) std::swap(idx[i], idx[i + rng.next_below(q - i)]);
      idx.resize(m);
      std::sort(idx.begin(), idx.end());
      for (u64 a : idx) c[a] = unit_phase(rng);
      break;
    }
    case EnsembleKind::BLOCK: {
      const unsigned N = P.N(), M = P.M_of_beta(spec.beta);
      const u64 pn = ipow(P.p(), N), pm = ipow(P.p(), M);
      for (u64 j = 0; j < ipow(P.p(), M - N); ++j)
        for (u64 i = 0; i < ipow(P.p(), 2 * N - M); ++i) c[pn * j + pm * i] = 1.0;
      break;
    }
    case EnsembleKind::CHARSUM: {
      require(!spec.set.empty(), Err::EMPTY_SET, "character sum over the empty set");
      for (u64 x : spec.set) c[x % q] += 1.0;
      break;
    }
  }
  return make_function(P, std::move(c));
}

u64 parabola_energy(const std::vector<u64>& A, const RingPtr& ring) {
  require(!A.empty(), Err::EMPTY_SET, "energy of the empty set");
  std::vector<std::pair<u64, u64>> keys;
  keys.reserve(A.size() * A.size());
  for (u64 x : A)
    for (u64 y : A) {
      const u64 a = x % ring->q(), b = y % ring->q();
      keys.emplace_back(ring->add(a, b), ring->add(ring->sqr(a), ring->sqr(b)));
    }
  std::sort(keys.begin(), keys.end());
  u64 e = 0;
  for (std::size_t i = 0; i < keys.size();) {
    std::size_t j = i;
    while (j < keys.size() && keys[j] == keys[i]) ++j;
    e += (j - i) * (j - i);
    i = j;
  }
  return e;
}

double quartic_coefficient_sum(const ParabolaFunction& f) {
  const ModelParams& P = f.params();
  std::vector<u64> support;
  for (u64 a = 0; a < P.q(); ++a)
    if (f.coeffs()[a] != 0.0) support.push_back(a);
  std::vector<std::pair<std::pair<u64, u64>, std::complex<double>>> terms;
  terms.reserve(support.size() * support.size());
  const auto& ring = P.ring();
  for (u64 a : support)
    for (u64 b : support)
      terms.push_back({{ring->add(a, b), ring->add(P.sigma(a), P.sigma(b))},
                       f.coeffs()[a] * f.coeffs()[b]});
  std::sort(terms.begin(), terms.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  double s = 0.0;
  for (std::size_t i = 0; i < terms.size();) {
    std::complex<double> acc = 0.0;
    std::size_t j = i;
    while (j < terms.size() && terms[j].first == terms[i].first) acc += terms[j++].second;
    s += std::norm(acc);
    i = j;
  }
  return s;
}

double block_ratio_closed_form(const ModelParams& P, double beta, double p_exp, double q_exp) {
  const unsigned N = P.N(), M = P.M_of_beta(beta);
  const double poq = std::isinf(q_exp) ? 0.0 : p_exp / q_exp;
  return std::pow(static_cast<double>(P.p()),
                  static_cast<double>(M - N) * (p_exp - poq - 1.0));
}

double block_lower_bound(const ModelParams& P, double beta, double p_exp, double q_exp) {
  const double R = static_cast<double>(P.q());
  const double iq = std::isinf(q_exp) ? 0.0 : 1.0 / q_exp;
  return std::pow(R, (beta - 0.5) * (1.0 - 1.0 / p_exp - iq));
}

}  // namespace declab
