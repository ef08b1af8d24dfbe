#include "declab/caps.hpp"

#include <algorithm>
#include <cmath>

#include "declab/errors.hpp"

namespace declab {

namespace {
constexpr double kVanish2 = 1e-24;  // squared L2 cutoff for a vanishing block
}

std::vector<Cap> caps_at_level(const ModelParams& P, unsigned level) {
  require(level <= 2 * P.N(), Err::LEVEL_RANGE, "cap level must be <= 2N");
  std::vector<Cap> out;
  const u64 m = ipow(P.p(), level);
  out.reserve(m);
  for (u64 r = 0; r < m; ++r) out.push_back(Cap{level, r});
  return out;
}

Cap cap_of(const ModelParams& P, unsigned level, u64 a) {
  require(level <= 2 * P.N(), Err::LEVEL_RANGE, "cap level must be <= 2N");
  require(a < P.q(), Err::INDEX_RANGE, "frequency index out of range");
  return Cap{level, P.ring()->low_digits(a, level)};
}

std::vector<Cap> children(const ModelParams& P, const Cap& tau, unsigned child_level) {
  require(child_level >= tau.level && child_level <= 2 * P.N(), Err::LEVEL_RANGE,
          "child level must lie in [cap level, 2N]");
  std::vector<Cap> out;
  const u64 step = ipow(P.p(), tau.level);
  const u64 m = ipow(P.p(), child_level - tau.level);
  out.reserve(m);
  for (u64 d = 0; d < m; ++d) out.push_back(Cap{child_level, tau.residue + d * step});
  return out;
}

bool cap_contains(const Cap& tau, u64 a, const ModelParams& P) {
  return P.ring()->low_digits(a, tau.level) == tau.residue;
}

std::vector<Cap> small_cap_partition(const ModelParams& P, double beta) {
  return caps_at_level(P, P.M_of_beta(beta));
}

ParabolaFunction project_cap(const ParabolaFunction& f, const Cap& tau) {
  const ModelParams& P = f.params();
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(P.q());
  for (u64 a = tau.residue; a < P.q(); a += ipow(P.p(), tau.level)) c[a] = f.coeffs()[a];
  return ParabolaFunction(P, std::move(c));
}

namespace {
std::vector<double> block_mass(const ParabolaFunction& f, unsigned level) {
  const ModelParams& P = f.params();
  std::vector<double> mass(ipow(P.p(), level), 0.0);
  for (u64 a = 0; a < P.q(); ++a) {
    const double m = std::norm(f.coeffs()[a]);
    if (m > 0.0) mass[P.ring()->low_digits(a, level)] += m;
  }
  return mass;
}
}  // namespace

unsigned nonvanishing_count(const ParabolaFunction& f, unsigned level) {
  require(level <= 2 * f.params().N(), Err::LEVEL_RANGE, "cap level must be <= 2N");
  auto mass = block_mass(f, level);
  unsigned c = 0;
  for (double m : mass)
    if (m > kVanish2) ++c;
  return c;
}

unsigned nonvanishing_count(const ParabolaFunction& f, const Cap& parent, unsigned level) {
  require(level >= parent.level, Err::LEVEL_RANGE, "child level below parent");
  auto mass = block_mass(f, level);
  unsigned c = 0;
  const u64 step = ipow(f.params().p(), parent.level);
  const u64 m = ipow(f.params().p(), level - parent.level);
  for (u64 d = 0; d < m; ++d)
    if (mass[parent.residue + d * step] > kVanish2) ++c;
  return c;
}

std::vector<Envelope> envelope_tiling(const ModelParams& P, const Cap& tau) {
  return envelope_tiling(P, tau, tau.level);
}

std::vector<Envelope> envelope_tiling(const ModelParams& P, const Cap& tau, unsigned kexp) {
  require(kexp <= P.N(), Err::LEVEL_RANGE, "envelope exponent must be <= N");
  std::vector<Envelope> out;
  const u64 m = ipow(P.p(), kexp);
  out.reserve(m);
  for (u64 c = 0; c < m; ++c) out.push_back(Envelope{tau, kexp, c});
  return out;
}

double envelope_measure(const ModelParams& P, const Envelope& U) {
  const double q = static_cast<double>(P.q());
  return q * q / static_cast<double>(ipow(P.p(), U.kexp));
}

u64 envelope_coset_of(const ModelParams& P, u64 anchor, unsigned kexp, u64 u1, u64 u2) {
  if (kexp == 0) return 0;
  const auto& ring = P.ring();
  const u64 w = ring->add(u1, ring->mul(P.two_times(anchor), u2));
  return ring->low_digits(w, kexp);
}

namespace {

// per-point coset ids for one anchor/exponent, one O(q^2) pass
std::vector<u32> coset_id_grid(const ModelParams& P, u64 anchor, unsigned kexp) {
  const u64 q = P.q();
  std::vector<u32> id(q * q, 0);
  if (kexp == 0) return id;
  const auto& ring = P.ring();
  const u64 pk = ipow(P.p(), kexp);
  const u64 slope = P.two_times(anchor);
  std::vector<u32> low(q);
  for (u64 i = 0; i < q; ++i) low[i] = static_cast<u32>(ring->low_digits(i, kexp));
  // low-k digits of a sum depend only on the low-k digits of the summands
  std::vector<u32> addk(pk * pk);
  const auto& rk = kexp == 2 * P.N() ? P.ring() : P.subring(kexp);
  for (u64 x = 0; x < pk; ++x)
    for (u64 y = 0; y < pk; ++y) addk[x * pk + y] = static_cast<u32>(rk->add(x, y));
  for (u64 j = 0; j < q; ++j) {
    const u32 tk = low[ring->mul(slope, j)];
    u32* col = id.data() + j * q;
    for (u64 i = 0; i < q; ++i) col[i] = addk[static_cast<u64>(low[i]) * pk + tk];
  }
  return id;
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> sum_table(const Eigen::Array<Scalar, -1, -1>& g,
                                                   const ModelParams& P, u64 anchor,
                                                   unsigned kexp) {
  const u64 pk = ipow(P.p(), kexp);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out =
      Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(pk);
  auto id = coset_id_grid(P, anchor, kexp);
  const Scalar* d = g.data();
  for (u64 i = 0; i < id.size(); ++i) out[id[i]] += d[i];
  return out;
}

}  // namespace

Eigen::VectorXd coset_sum_table(const Eigen::ArrayXXd& g, const ModelParams& P, u64 anchor,
                                unsigned kexp) {
  return sum_table<double>(g, P, anchor, kexp);
}

Eigen::VectorXcd coset_sum_table(const Eigen::ArrayXXcd& g, const ModelParams& P, u64 anchor,
                                 unsigned kexp) {
  return sum_table<std::complex<double>>(g, P, anchor, kexp);
}

std::complex<double> coset_average(const SpatialFunction& g, const Envelope& U) {
  const ModelParams& P = g.params();
  const u64 q = P.q();
  std::complex<double> s = 0.0;
  u64 count = 0;
  for (u64 j = 0; j < q; ++j)
    for (u64 i = 0; i < q; ++i)
      if (envelope_coset_of(P, U.tau.residue, U.kexp, i, j) == U.coset) {
        s += g.grid()(i, j);
        ++count;
      }
  require(count > 0, Err::EMPTY_SET, "envelope has no grid points");
  return s / static_cast<double>(count);
}

Eigen::ArrayXXd paint_cosets(const Eigen::VectorXd& table, const ModelParams& P, u64 anchor,
                             unsigned kexp) {
  const u64 q = P.q();
  require(table.size() == static_cast<long>(ipow(P.p(), kexp)), Err::INDEX_RANGE,
          "table size must be p^kexp");
  auto id = coset_id_grid(P, anchor, kexp);
  Eigen::ArrayXXd out(q, q);
  double* d = out.data();
  for (u64 i = 0; i < id.size(); ++i) d[i] = table[id[i]];
  return out;
}

Eigen::VectorXcd cap_profile(const ParabolaFunction& f, const Cap& cap) {
  const ModelParams& P = f.params();
  const unsigned N = P.N();
  require(cap.level >= N && cap.level <= 2 * N, Err::LEVEL_RANGE,
          "profiles exist for cap levels in [N, 2N]");
  const unsigned ks = 2 * N - cap.level;
  const u64 len = ipow(P.p(), ks);
  const u64 step = ipow(P.p(), cap.level);
  Eigen::VectorXcd b(len);
  for (u64 d = 0; d < len; ++d) b[d] = f.coeffs()[cap.residue + d * step];
  if (ks == 0) return b;
  return P.subtransform(ks).synthesize(b);
}

ParabolaFunction restrict_to_cosets(const ParabolaFunction& f, const Cap& tau, unsigned kexp,
                                    const std::vector<u64>& cosets) {
  const ModelParams& P = f.params();
  require(kexp <= P.N(), Err::LEVEL_RANGE, "envelope exponent must be <= N");
  const u64 q = P.q();
  const u64 pk = ipow(P.p(), kexp);
  for (u64 a = 0; a < q; ++a)
    require(f.coeffs()[a] == 0.0 || cap_contains(tau, a, P), Err::SPECTRUM_LEAK,
            "input must be supported in the cap");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(q);
  if (cosets.empty()) return ParabolaFunction(P, std::move(out));
  if (kexp == 0) return f;
  Eigen::VectorXcd ind = Eigen::VectorXcd::Zero(pk);
  for (u64 c : cosets) {
    require(c < pk, Err::INDEX_RANGE, "coset id out of range");
    ind[c] = 1.0;
  }
  // kappa(t) = p^{-k} sum_{c in set} conj(e_k(t c)); shifting by t*ϖ^{2N-k}
  // along the tangent line stays on the parabola for kexp <= N
  Eigen::VectorXcd kappa = P.subtransform(kexp).synthesize(ind).conjugate() /
                           static_cast<double>(pk);
  const auto& ring = P.ring();
  const u64 shift_unit = ring->pow_uniformizer(2 * P.N() - kexp);
  std::vector<u64> shift(pk);
  for (u64 t = 0; t < pk; ++t) shift[t] = ring->mul(shift_unit, t);
  for (u64 a = 0; a < q; ++a) {
    const std::complex<double> ca = f.coeffs()[a];
    if (ca == 0.0) continue;
    for (u64 t = 0; t < pk; ++t)
      if (kappa[t] != 0.0) out[ring->add(a, shift[t])] += ca * kappa[t];
  }
  return ParabolaFunction(P, std::move(out));
}

double pruning_threshold(const ModelParams& P, double alpha, unsigned nonvanishing,
                         ThresholdMode mode) {
  require(alpha > 0.0, Err::ALPHA_NONPOSITIVE, "pruning threshold needs alpha > 0");
  require(nonvanishing >= 1, Err::ZERO_FUNCTION, "no nonvanishing caps at this level");
  const double e2 = std::exp(2.0);
  const double cnt = static_cast<double>(nonvanishing);
  double t = alpha * alpha / (2.0 * e2 * cnt * cnt);
  if (mode == ThresholdMode::THEOREM) {
    const double n = static_cast<double>(P.N());
    t /= n * n;
  }
  return t;
}

std::vector<Envelope> good_envelopes(const ParabolaFunction& f, const Cap& tau, double alpha,
                                     ThresholdMode mode) {
  const ModelParams& P = f.params();
  const unsigned N = P.N();
  require(tau.level <= N, Err::LEVEL_RANGE, "good envelopes exist for cap levels <= N");
  require(!f.is_zero(), Err::ZERO_FUNCTION, "good envelopes of the zero function");
  const u64 q = P.q();

  std::vector<Cap> thetas = children(P, tau, N);
  const std::size_t nth = thetas.size();
  std::vector<Eigen::ArrayXXd> absq(nth);
  std::vector<Eigen::Array<bool, -1, -1>> mask(nth);
  for (std::size_t i = 0; i < nth; ++i) {
    absq[i] = project_cap(f, thetas[i]).spatial().abs2();
    mask[i] = Eigen::Array<bool, -1, -1>::Constant(q, q, true);
  }

  std::vector<unsigned> cnt(N + 1);
  for (unsigned j = 0; j <= N; ++j) cnt[j] = nonvanishing_count(f, j);

  for (unsigned j = N; j + 1 > tau.level; --j) {
    const double thr = pruning_threshold(P, alpha, cnt[j], mode);
    const u64 pj = ipow(P.p(), j);
    const double mu = static_cast<double>(q) * static_cast<double>(q) / static_cast<double>(pj);
    const u64 sub = ipow(P.p(), j - tau.level);
    for (u64 d = 0; d < sub; ++d) {
      const Cap tj{j, tau.residue + d * ipow(P.p(), tau.level)};
      // theta blocks under tj sit at stride p^j in the level-N enumeration
      std::vector<std::size_t> mine;
      for (std::size_t i = 0; i < nth; ++i)
        if (P.ring()->low_digits(thetas[i].residue, j) == tj.residue) mine.push_back(i);
      Eigen::ArrayXXd sq = Eigen::ArrayXXd::Zero(q, q);
      for (std::size_t i : mine) sq += absq[i] * mask[i].cast<double>();
      Eigen::VectorXd table = coset_sum_table(sq, P, tj.residue, j) / mu;
      std::vector<bool> keep(pj);
      for (u64 c = 0; c < pj; ++c) keep[c] = table[c] >= thr;
      if (j == tau.level) {
        std::vector<Envelope> out;
        for (u64 c = 0; c < pj; ++c)
          if (keep[c]) out.push_back(Envelope{tau, j, c});
        return out;
      }
      Eigen::VectorXd keepv(pj);
      for (u64 c = 0; c < pj; ++c) keepv[c] = keep[c] ? 1.0 : 0.0;
      const Eigen::ArrayXXd keep_grid = paint_cosets(keepv, P, tj.residue, j);
      for (std::size_t i : mine) mask[i] = mask[i] && (keep_grid > 0.5);
    }
  }
  fail(Err::LEVEL_RANGE, "unreachable");
}

}  // namespace declab
