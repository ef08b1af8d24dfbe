#include "declab/highlow.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "declab/errors.hpp"

namespace declab {

namespace {
unsigned check_radius(const ModelParams& P, unsigned j) {
  require(j <= 2 * P.N() + 1, Err::RADIUS_NOT_IN_RANGE,
          "radius exponent must lie in [0, 2N] (2N+1 encodes radius zero)");
  return j;
}
}  // namespace

Annulus Annulus::le(const ModelParams& P, unsigned j) {
  return Annulus{check_radius(P, j), 2 * P.N() + 1};
}

Annulus Annulus::gt(const ModelParams& P, unsigned j) {
  check_radius(P, j);
  if (j == 0) return Annulus{1, 0};  // |xi| > 1 is empty
  return Annulus{0, j - 1};
}

Annulus Annulus::range(const ModelParams& P, unsigned j_lo, unsigned j_hi) {
  check_radius(P, j_lo);
  check_radius(P, j_hi);
  require(j_hi < j_lo, Err::RADIUS_NOT_IN_RANGE, "annulus needs inner radius < outer radius");
  return Annulus{j_hi, j_lo - 1};
}

unsigned vmin(const ModelParams& P, u64 xi1, u64 xi2) {
  if (xi1 == 0 && xi2 == 0) return 2 * P.N() + 1;
  return std::min(P.ring()->valuation(xi1), P.ring()->valuation(xi2));
}

namespace {
Eigen::ArrayXXcd mask_and_synthesize(const ModelParams& P, Eigen::ArrayXXcd spec,
                                     const Annulus& ann, Eigen::ArrayXXcd* spec_out) {
  const u64 q = P.q();
  std::vector<unsigned> val(q);
  for (u64 i = 0; i < q; ++i) val[i] = P.ring()->valuation(i);
  for (u64 j = 0; j < q; ++j)
    for (u64 i = 0; i < q; ++i) {
      const unsigned v = (i == 0 && j == 0) ? 2 * P.N() + 1 : std::min(val[i], val[j]);
      if (v < ann.vmin_lo || v > ann.vmin_hi) spec(i, j) = 0.0;
    }
  if (spec_out) *spec_out = spec;
  return P.transform().synthesize2d(spec);
}
}  // namespace

SpatialFunction bandpass(const SpatialFunction& g, const Annulus& ann) {
  Eigen::ArrayXXcd spec;
  Eigen::ArrayXXcd grid = mask_and_synthesize(g.params(), g.spectrum(), ann, &spec);
  return SpatialFunction(g.params(), std::move(grid), std::move(spec));
}

Eigen::ArrayXXcd bandpass_grid(const ModelParams& P, const Eigen::ArrayXXcd& grid,
                               const Annulus& ann) {
  return mask_and_synthesize(P, P.transform().analyze2d(grid), ann, nullptr);
}

Eigen::ArrayXXcd bandpass_grid(const ModelParams& P, const Eigen::ArrayXXd& grid,
                               const Annulus& ann) {
  return bandpass_grid(P, grid.cast<std::complex<double>>().eval(), ann);
}

SpatialFunction square_function(const ParabolaFunction& f) {
  return square_function(f, Cap{0, 0});
}

SpatialFunction square_function(const ParabolaFunction& f, const Cap& tau) {
  const ModelParams& P = f.params();
  const u64 q = P.q();
  Eigen::ArrayXXd sq = Eigen::ArrayXXd::Zero(q, q);
  for (const Cap& th : children(P, tau, P.N())) {
    ParabolaFunction ft = project_cap(f, th);
    if (!ft.is_zero()) sq += ft.spatial().abs2();
  }
  return SpatialFunction(P, sq.cast<std::complex<double>>());
}

PruningResult prune(const ParabolaFunction& f, double alpha, ThresholdMode mode) {
  const ModelParams& P = f.params();
  require(alpha > 0.0, Err::ALPHA_NONPOSITIVE, "pruning needs alpha > 0");
  require(!f.is_zero(), Err::ZERO_FUNCTION, "pruning the zero function");
  const unsigned N = P.N();
  const u64 pn = ipow(P.p(), N);
  const u64 q = P.q();

  PruningResult pr{P, alpha, mode, {}, {}, {}, {}};
  pr.nonvanishing.resize(N + 1);
  for (unsigned k = 0; k <= N; ++k) pr.nonvanishing[k] = nonvanishing_count(f, k);
  pr.good.assign(N + 1, {});

  // per level-N cap: constant-modulus profile and the surviving class mask
  std::vector<Eigen::VectorXcd> prof(pn);
  std::vector<std::vector<char>> keep(pn, std::vector<char>(pn, 1));
  for (u64 t = 0; t < pn; ++t) prof[t] = cap_profile(f, Cap{N, t});

  auto assemble = [&](void) -> ParabolaFunction {
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(q);
    for (u64 t = 0; t < pn; ++t) {
      Eigen::VectorXcd masked = prof[t];
      for (u64 s = 0; s < pn; ++s)
        if (!keep[t][s]) masked[s] = 0.0;
      Eigen::VectorXcd b = P.subtransform(N).analyze(masked);
      for (u64 d = 0; d < pn; ++d) c[t + d * pn] = b[d];
    }
    return ParabolaFunction(P, std::move(c));
  };

  std::vector<ParabolaFunction> levels_rev;  // f_N first
  {
    const double thr = pruning_threshold(P, alpha, pr.nonvanishing[N], mode);
    pr.good[N].assign(pn, {});
    for (u64 t = 0; t < pn; ++t)
      for (u64 s = 0; s < pn; ++s) {
        if (std::norm(prof[t][s]) >= thr)
          pr.good[N][t].push_back(s);
        else
          keep[t][s] = 0;
      }
    levels_rev.push_back(assemble());
  }

  for (unsigned k = N; k-- > 0;) {
    const double thr = pruning_threshold(P, alpha, pr.nonvanishing[k], mode);
    const u64 pk = ipow(P.p(), k);
    pr.good[k].assign(pk, {});
    for (u64 r = 0; r < pk; ++r) {
      // average over a level-k coset of the surviving square function
      std::vector<double> avg(pk, 0.0);
      for (u64 t = r; t < pn; t += pk)
        for (u64 s = 0; s < pn; ++s)
          if (keep[t][s]) avg[P.ring()->low_digits(s, k)] += std::norm(prof[t][s]);
      const double scale = static_cast<double>(ipow(P.p(), k)) / static_cast<double>(pn);
      std::vector<char> ok(pk, 0);
      for (u64 c = 0; c < pk; ++c) {
        if (avg[c] * scale >= thr) {
          ok[c] = 1;
          pr.good[k][r].push_back(c);
        }
      }
      for (u64 t = r; t < pn; t += pk)
        for (u64 s = 0; s < pn; ++s)
          if (!ok[P.ring()->low_digits(s, k)]) keep[t][s] = 0;
    }
    levels_rev.push_back(assemble());
  }

  pr.f_levels.assign(levels_rev.rbegin(), levels_rev.rend());
  pr.f_bad.clear();
  for (unsigned m = 1; m <= N; ++m)
    pr.f_bad.push_back(
        ParabolaFunction(P, pr.f_levels[m].coeffs() - pr.f_levels[m - 1].coeffs()));

  // telescoping and per-cap spectrum containment are exact by construction;
  // verify anyway
  Eigen::VectorXcd tele = pr.f_levels[0].coeffs();
  for (const auto& fb : pr.f_bad) tele += fb.coeffs();
  require((tele - pr.f_levels[N].coeffs()).lpNorm<Eigen::Infinity>() <=
              1e-12 * std::max(1.0, pr.f_levels[N].coeffs().lpNorm<Eigen::Infinity>()),
          Err::SPECTRUM_LEAK, "pruning telescoping failed");
  return pr;
}

namespace {
struct ClassifyGrids {
  Eigen::ArrayXXd fN, f0;
  std::vector<Eigen::ArrayXXd> fb;
};

ClassifyGrids classify_grids(const PruningResult& pr) {
  ClassifyGrids g;
  g.fN = pr.f_levels.back().spatial().abs();
  g.f0 = pr.f_levels.front().spatial().abs();
  for (const auto& fb : pr.f_bad) g.fb.push_back(fb.spatial().abs());
  return g;
}
}  // namespace

Eigen::ArrayXXi classify_pruning_levels(const PruningResult& pr) {
  const ModelParams& P = pr.P;
  const double n = static_cast<double>(P.N());
  const double thr0 = 1.0 / (std::pow(n, 5.0) + 1.0);
  const double thrm = 1.0 / (n * (1.0 + std::pow(n, -5.0)));
  ClassifyGrids g = classify_grids(pr);
  const u64 q = P.q();
  Eigen::ArrayXXi cls(q, q);
  const double tiny = 1e-14 * std::max(1.0, g.fN.maxCoeff());
  for (u64 j = 0; j < q; ++j)
    for (u64 i = 0; i < q; ++i) {
      const double fn = g.fN(i, j);
      if (fn <= tiny) {
        cls(i, j) = -1;
        continue;
      }
      if (g.f0(i, j) >= thr0 * fn) {
        cls(i, j) = 0;
        continue;
      }
      int best = -1;
      double best_ratio = 0.0;
      for (unsigned m = 1; m <= P.N(); ++m) {
        const double r = g.fb[m - 1](i, j) / (thrm * fn);
        if (r >= 1.0) {
          cls(i, j) = static_cast<int>(m);
          best = static_cast<int>(m);
          break;
        }
        if (r > best_ratio) {
          best_ratio = r;
          best = static_cast<int>(m);
        }
      }
      // coverage is forced up to roundoff; fall back to the nearest layer
      cls(i, j) = best;
    }
  return cls;
}

Eigen::Array<bool, -1, -1> v_alpha_mask(const PruningResult& pr) {
  const double n = static_cast<double>(pr.P.N());
  const double thr = (1.0 - 1.0 / (std::sqrt(2.0) * std::exp(1.0) * n)) * pr.alpha;
  return pr.f_levels.back().spatial().abs() > thr;
}

Eigen::Array<bool, -1, -1> u_alpha_mask(const PruningResult& pr, int m) {
  return v_alpha_mask(pr) && (classify_pruning_levels(pr) == m);
}

BroadNarrowResult broad_narrow(const PruningResult& pr, unsigned m) {
  const ModelParams& P = pr.P;
  const unsigned N = P.N();
  require(N >= 2, Err::N_TOO_SMALL, "broad/narrow splitting needs N >= 2");
  require(m >= 1 && m <= N, Err::LEVEL_RANGE, "layer index m must lie in [1, N]");
  const u64 q = P.q();
  const ParabolaFunction& fb = pr.f_bad_at(m);

  // |f^B_{m,tau}| grids per level
  std::vector<std::vector<Eigen::ArrayXXd>> absb(N + 1);
  for (unsigned k = 0; k <= N; ++k) {
    const u64 pk = ipow(P.p(), k);
    absb[k].resize(pk);
    for (u64 r = 0; r < pk; ++r) absb[k][r] = project_cap(fb, Cap{k, r}).spatial().abs();
  }

  BroadNarrowResult out{P, m, {}, {}};
  out.broad.resize(N);
  out.narrow.resize(N);
  const double pN = P.bold_p() * static_cast<double>(N);

  std::vector<Eigen::Array<bool, -1, -1>> narrow_prev{u_alpha_mask(pr, static_cast<int>(m))};
  for (unsigned j = 1; j <= N; ++j) {
    const u64 parents = ipow(P.p(), j - 1);
    out.broad[j - 1].resize(parents);
    out.narrow[j - 1].resize(parents);
    std::vector<Eigen::Array<bool, -1, -1>> narrow_next(ipow(P.p(), j));
    for (u64 r = 0; r < parents; ++r) {
      Eigen::ArrayXXd top1 = Eigen::ArrayXXd::Zero(q, q);
      Eigen::ArrayXXd top2 = Eigen::ArrayXXd::Zero(q, q);
      for (const Cap& ch : children(P, Cap{j - 1, r}, j)) {
        const Eigen::ArrayXXd& v = absb[j][ch.residue];
        for (u64 cj = 0; cj < q; ++cj)
          for (u64 ci = 0; ci < q; ++ci) {
            const double x = v(ci, cj);
            if (x > top1(ci, cj)) {
              top2(ci, cj) = top1(ci, cj);
              top1(ci, cj) = x;
            } else if (x > top2(ci, cj)) {
              top2(ci, cj) = x;
            }
          }
      }
      const Eigen::Array<bool, -1, -1> cond =
          absb[j - 1][r] <= pN * (top1 * top2).sqrt() + 1e-300;
      out.broad[j - 1][r] = narrow_prev[r] && cond;
      out.narrow[j - 1][r] = narrow_prev[r] && !cond;
      for (const Cap& ch : children(P, Cap{j - 1, r}, j))
        narrow_next[ch.residue] = out.narrow[j - 1][r];
    }
    narrow_prev = std::move(narrow_next);
  }
  return out;
}

UniformizationResult uniformize(const ParabolaFunction& f, double beta) {
  const ModelParams& P = f.params();
  const unsigned N = P.N();
  const unsigned M = P.M_of_beta(beta);
  const unsigned ks = 2 * N - M;
  const u64 q = P.q();

  double theta_sup = 0.0;
  for (u64 t = 0; t < ipow(P.p(), N); ++t) {
    Eigen::VectorXcd T = cap_profile(f, Cap{N, t});
    for (long i = 0; i < T.size(); ++i) theta_sup = std::max(theta_sup, std::abs(T[i]));
  }
  require(std::abs(theta_sup - 1.0) <= 1e-9, Err::NOT_NORMALIZED,
          "uniformization expects max cap sup norm 1");

  const double cutoff =
      1.0 / (static_cast<double>(N) * static_cast<double>(N) * std::sqrt(static_cast<double>(q)));

  UniformizationResult out{P, beta, M, cutoff, {}, ParabolaFunction(P, Eigen::VectorXcd::Zero(q)),
                           0.0};

  // (j, gamma) -> classified coset ids
  std::map<std::pair<int, u64>, std::vector<u64>> buckets;
  const u64 pm = ipow(P.p(), M);
  const u64 pks = ipow(P.p(), ks);
  std::vector<ParabolaFunction> fg;
  fg.reserve(pm);
  for (u64 g = 0; g < pm; ++g) {
    Eigen::VectorXcd T = cap_profile(f, Cap{M, g});
    fg.push_back(project_cap(f, Cap{M, g}));
    for (u64 s = 0; s < pks; ++s) {
      const double v = std::abs(T[s]);
      if (v <= cutoff) continue;
      // largest j with e^{-j} >= v, so |T|/lambda lands in (1/e, 1]
      const int j = static_cast<int>(std::floor(-std::log(v) + 1e-12));
      buckets[{j, g}].push_back(s);
    }
  }

  // population brackets per (j, gamma), then classes keyed by (j, i)
  struct ClassAgg {
    std::vector<u64> gammas;
    u64 pair_count = 0;
  };
  std::map<std::pair<int, int>, ClassAgg> agg;
  for (const auto& [key, cosets] : buckets) {
    const auto [j, g] = key;
    const double r = static_cast<double>(cosets.size());
    const int i = std::max(0, static_cast<int>(std::ceil(std::log(r) - 1e-12)));
    auto& a = agg[{j, i}];
    a.gammas.push_back(g);
    a.pair_count += cosets.size();
  }

  Eigen::VectorXcd classified = Eigen::VectorXcd::Zero(q);
  for (auto& [key, a] : agg) {
    const auto [j, i] = key;
    const double lambda = std::exp(-static_cast<double>(j));
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(q);
    for (u64 g : a.gammas) {
      const auto& cosets = buckets.at({j, g});
      ParabolaFunction piece = restrict_to_cosets(fg[g], Cap{M, g}, ks, cosets);
      acc += piece.coeffs();

      // exact class inequalities: |T|/lambda in (1/e, 1] on every kept coset
      Eigen::VectorXcd T = cap_profile(f, Cap{M, g});
      const double mu = static_cast<double>(q) * static_cast<double>(q) /
                        static_cast<double>(pks);
      const double pcrit = 2.0 + 2.0 / beta;
      double l2 = 0.0, lp = 0.0;
      for (u64 s : cosets) {
        const double t = std::abs(T[s]) / lambda;
        l2 += t * t;
        lp += std::pow(t, pcrit);
      }
      const double rr = static_cast<double>(cosets.size());
      require(l2 * mu <= rr * mu * (1.0 + 1e-9), Err::NOT_NORMALIZED,
              "uniformization class L2 bound failed");
      require(rr * mu <= std::exp(pcrit) * lp * mu * (1.0 + 1e-9), Err::NOT_NORMALIZED,
              "uniformization class Lp bound failed");
    }
    classified += acc;
    out.classes.push_back(UniformClass{j, i, lambda, std::move(a.gammas), a.pair_count,
                                       ParabolaFunction(P, (acc / lambda).eval())});
  }

  out.eta = ParabolaFunction(P, ((f.coeffs() - classified) / cutoff).eval());
  out.eta_sup = sup_norm(out.eta);

  // exact reconstruction
  Eigen::VectorXcd rec = cutoff * out.eta.coeffs();
  for (const auto& cls : out.classes) rec += cls.lambda * cls.g.coeffs();
  require((rec - f.coeffs()).lpNorm<Eigen::Infinity>() <=
              1e-9 * std::max(1.0, f.coeffs().lpNorm<Eigen::Infinity>()),
          Err::SPECTRUM_LEAK, "uniformization reconstruction failed");
  return out;
}

}  // namespace declab
