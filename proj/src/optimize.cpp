#include "declab/optimize.hpp"

#include <atomic>
#include <cmath>
#include <complex>
#include <thread>

#include "declab/caps.hpp"
#include "declab/errors.hpp"
#include "declab/rng.hpp"

namespace declab {

namespace {

using cd = std::complex<double>;

// Incremental state for one candidate: spatial grid, numerator, per-cap
// norms of the denominator. Single-coefficient probes cost O(q^2).
struct AscentState {
  const ModelParams& P;
  double beta, p_exp, q_exp;
  unsigned M, ks;
  u64 q, pM, pks;
  double mu_s;

  Eigen::VectorXcd coeffs;
  Eigen::ArrayXXcd grid;
  double num = 0.0;
  std::vector<double> np;  // ||f_gamma||_p^p per residue mod p^M
  double denom = 0.0;      // sum np^{q/p}, or unused when q = inf

  // character factorization of the wave of frequency (a, sigma(a))
  std::vector<Eigen::VectorXcd> row, col;

  AscentState(const ModelParams& Pp, double b, double pe, double qe)
      : P(Pp),
        beta(b),
        p_exp(pe),
        q_exp(qe),
        M(P.M_of_beta(b)),
        ks(2 * P.N() - M),
        q(P.q()),
        pM(ipow(P.p(), M)),
        pks(ipow(P.p(), ks)),
        mu_s(double(q) * double(q) / double(pks)),
        coeffs(Eigen::VectorXcd::Zero(q)),
        np(pM, 0.0),
        row(q),
        col(q) {}

  const Eigen::VectorXcd& wave_row(u64 a) {
    if (row[a].size() == 0) {
      row[a].resize(q);
      for (u64 u = 0; u < q; ++u) row[a][u] = P.ring()->character(P.ring()->mul(u, a));
    }
    return row[a];
  }
  const Eigen::VectorXcd& wave_col(u64 a) {
    if (col[a].size() == 0) {
      col[a].resize(q);
      const u64 sa = P.sigma(a);
      for (u64 u = 0; u < q; ++u) col[a][u] = P.ring()->character(P.ring()->mul(u, sa));
    }
    return col[a];
  }

  double gamma_norm_pow(u64 gres, cd replace_at, u64 a, bool do_replace) const {
    Eigen::VectorXcd b(pks);
    for (u64 d = 0; d < pks; ++d) {
      const u64 idx = gres + d * pM;
      b[d] = do_replace && idx == a ? replace_at : coeffs[idx];
    }
    Eigen::VectorXcd T = ks == 0 ? b : P.subtransform(ks).synthesize(b);
    double s = 0.0;
    for (long i = 0; i < T.size(); ++i) s += abs_pow_from_sq(std::norm(T[i]), p_exp);
    return s * mu_s;
  }

  void rebuild() {
    ParabolaFunction f(P, coeffs);
    grid = f.spatial();
    num = lp_pow(grid, p_exp);
    denom = 0.0;
    for (u64 g = 0; g < pM; ++g) {
      np[g] = gamma_norm_pow(g, cd{}, 0, false);
      if (!std::isinf(q_exp) && np[g] > 0.0) denom += std::pow(np[g], q_exp / p_exp);
    }
  }

  double ratio_from(double numv, const std::vector<double>& npv, double denomv) const {
    if (std::isinf(q_exp)) {
      double mx = 0.0;
      for (double v : npv) mx = std::max(mx, v);
      return mx > 0.0 ? numv / mx : 0.0;
    }
    return denomv > 0.0 ? numv / std::pow(denomv, p_exp / q_exp) : 0.0;
  }

  double ratio() const { return ratio_from(num, np, denom); }

  // ratio if coefficient a became v; outputs the pieces needed to accept
  double probe(u64 a, cd v, double& num_out, double& np_out, double& denom_out) {
    const cd delta = v - coeffs[a];
    const Eigen::VectorXcd& r = wave_row(a);
    const Eigen::VectorXcd& c = wave_col(a);
    double nm = 0.0;
    for (u64 u2 = 0; u2 < q; ++u2) {
      const cd cs = delta * c[u2];
      const cd* gp = grid.data() + u2 * q;
      for (u64 u1 = 0; u1 < q; ++u1) {
        const cd val = gp[u1] + cs * r[u1];
        nm += abs_pow_from_sq(std::norm(val), p_exp);
      }
    }
    const u64 gres = a % pM;
    const double np_new = gamma_norm_pow(gres, v, a, true);
    double dn = denom;
    if (!std::isinf(q_exp)) {
      if (np[gres] > 0.0) dn -= std::pow(np[gres], q_exp / p_exp);
      if (np_new > 0.0) dn += std::pow(np_new, q_exp / p_exp);
    }
    num_out = nm;
    np_out = np_new;
    denom_out = dn;
    if (std::isinf(q_exp)) {
      double mx = 0.0;
      for (u64 g = 0; g < pM; ++g) mx = std::max(mx, g == gres ? np_new : np[g]);
      return mx > 0.0 ? nm / mx : 0.0;
    }
    return dn > 0.0 ? nm / std::pow(dn, p_exp / q_exp) : 0.0;
  }

  void accept(u64 a, cd v, double num_new, double np_new, double denom_new) {
    const cd delta = v - coeffs[a];
    const Eigen::VectorXcd& r = wave_row(a);
    const Eigen::VectorXcd& c = wave_col(a);
    for (u64 u2 = 0; u2 < q; ++u2) {
      const cd cs = delta * c[u2];
      cd* gp = grid.data() + u2 * q;
      for (u64 u1 = 0; u1 < q; ++u1) gp[u1] += cs * r[u1];
    }
    coeffs[a] = v;
    num = num_new;
    np[a % pM] = np_new;
    denom = denom_new;
  }
};

struct RestartOut {
  double ratio = -1.0;
  Eigen::VectorXcd coeffs;
  u64 probes = 0;
};

RestartOut run_restart(const ModelParams& P, const SearchConfig& cfg, unsigned r) {
  Rng rng(split_seed(cfg.seed, r));
  AscentState st(P, cfg.beta, cfg.p_exp, cfg.q_exp);
  const u64 q = P.q();

  std::vector<u64> support;
  if (r == 0) {
    EnsembleSpec spec;
    spec.kind = EnsembleKind::BLOCK;
    spec.beta = cfg.beta;
    st.coeffs = generate(spec, P).coeffs();
    for (u64 a = 0; a < q; ++a)
      if (std::abs(st.coeffs[a]) > 0.0) support.push_back(a);
  } else {
    if (cfg.support_size == 0 || cfg.support_size >= q) {
      support.resize(q);
      for (u64 a = 0; a < q; ++a) support[a] = a;
    } else {
      std::vector<u64> pool(q);
      for (u64 a = 0; a < q; ++a) pool[a] = a;
      for (unsigned i = 0; i < cfg.support_size; ++i) {
        const u64 j = i + rng.next_below(q - i);
        std::swap(pool[i], pool[j]);
      }
      support.assign(pool.begin(), pool.begin() + cfg.support_size);
      std::sort(support.begin(), support.end());
    }
    const double two_pi = 6.283185307179586;
    for (u64 a : support) {
      const double phi = two_pi * rng.next_double();
      st.coeffs[a] = cd(std::cos(phi), std::sin(phi));
    }
  }
  st.rebuild();

  double best = st.ratio();
  double step = cfg.step_init;
  unsigned rejects = 0;
  u64 used = 0;
  const double mag_up = 1.25, mag_dn = 0.8;

  auto try_move = [&](u64 a, cd v) -> bool {
    double nm, npv, dn;
    const double cand = st.probe(a, v, nm, npv, dn);
    ++used;
    if (cand > best * (1.0 + 1e-12) + 1e-300) {
      st.accept(a, v, nm, npv, dn);
      best = cand;
      rejects = 0;
      return true;
    }
    ++rejects;
    return false;
  };

  bool converged = false;
  while (used < cfg.budget && !converged) {
    for (u64 a : support) {
      if (used >= cfg.budget || converged) break;
      const cd cur = st.coeffs[a];
      const double mag = std::abs(cur);
      if (mag <= 0.0) continue;
      const double phi = std::arg(cur);
      for (double d : {step, -step}) {
        if (used >= cfg.budget) break;
        const double ph = phi + d;
        try_move(a, mag * cd(std::cos(ph), std::sin(ph)));
        if (rejects >= 50) {
          step *= 0.5;
          rejects = 0;
          if (step < cfg.step_min) {
            converged = true;
            break;
          }
        }
      }
      if (cfg.magnitude_moves && used < cfg.budget && !converged) {
        const cd cur2 = st.coeffs[a];
        for (double m : {mag_up, mag_dn}) {
          if (used >= cfg.budget) break;
          try_move(a, cur2 * m);
          if (rejects >= 50) {
            step *= 0.5;
            rejects = 0;
            if (step < cfg.step_min) {
              converged = true;
              break;
            }
          }
        }
      }
    }
    // kill roundoff drift before the next sweep; the ratio is scale invariant
    const double mx = st.coeffs.cwiseAbs().maxCoeff();
    if (mx > 0.0) st.coeffs /= mx;
    st.rebuild();
    best = st.ratio();
  }

  RestartOut out;
  out.ratio = best;
  out.coeffs = st.coeffs;
  out.probes = used;
  return out;
}

}  // namespace

SearchResult maximize_ratio(const ModelParams& P, const SearchConfig& cfg) {
  require(cfg.restarts >= 1 && cfg.budget >= 1, Err::BUDGET_ZERO,
          "need at least one restart and a positive probe budget");

  std::vector<RestartOut> outs(cfg.restarts);
  const unsigned workers = std::max(1u, cfg.threads);
  if (workers == 1) {
    for (unsigned r = 0; r < cfg.restarts; ++r) outs[r] = run_restart(P, cfg, r);
  } else {
    std::atomic<unsigned> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (;;) {
          const unsigned r = next.fetch_add(1);
          if (r >= cfg.restarts) return;
          outs[r] = run_restart(P, cfg, r);
        }
      });
    for (auto& t : pool) t.join();
  }

  unsigned best_r = 0;
  for (unsigned r = 1; r < cfg.restarts; ++r)
    if (outs[r].ratio > outs[best_r].ratio) best_r = r;

  ParabolaFunction best(P, outs[best_r].coeffs);
  SearchResult res{best, decoupling_ratio(best, cfg.beta, cfg.p_exp, cfg.q_exp),
                   outs[best_r].ratio, best_r, 0, {}};
  for (const auto& o : outs) {
    res.probes += o.probes;
    res.restart_ratios.push_back(o.ratio);
  }
  return res;
}

}  // namespace declab
