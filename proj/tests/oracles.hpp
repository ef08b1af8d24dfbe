#pragma once

// Deliberately naive reference implementations the fast library paths are
// tested against. Everything here is direct-definition arithmetic.

#include <complex>
#include <vector>

#include "declab/caps.hpp"
#include "declab/model.hpp"

namespace declab::oracle {

// character sum synthesis, O(q^2)
inline Eigen::VectorXcd naive_synthesize(const RingPtr& ring, const Eigen::VectorXcd& spec) {
  const u64 q = ring->q();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(q);
  for (u64 u = 0; u < q; ++u)
    for (u64 xi = 0; xi < q; ++xi) out[u] += spec[xi] * ring->character(ring->mul(u, xi));
  return out;
}

// 2D character sum synthesis, O(q^4); keep q small
inline Eigen::ArrayXXcd naive_synthesize2d(const RingPtr& ring, const Eigen::ArrayXXcd& spec) {
  const u64 q = ring->q();
  Eigen::ArrayXXcd out = Eigen::ArrayXXcd::Zero(q, q);
  for (u64 u1 = 0; u1 < q; ++u1)
    for (u64 u2 = 0; u2 < q; ++u2) {
      std::complex<double> acc = 0.0;
      for (u64 x1 = 0; x1 < q; ++x1)
        for (u64 x2 = 0; x2 < q; ++x2) {
          if (spec(x1, x2) == 0.0) continue;
          acc += spec(x1, x2) *
                 ring->character(ring->add(ring->mul(u1, x1), ring->mul(u2, x2)));
        }
      out(u1, u2) = acc;
    }
  return out;
}

// quadruple count with a+b = c+d and a^2+b^2 = c^2+d^2, O(|A|^4)
inline u64 brute_energy(const std::vector<u64>& A, const RingPtr& ring) {
  u64 count = 0;
  for (u64 a : A)
    for (u64 b : A)
      for (u64 c : A)
        for (u64 d : A) {
          const bool lin = ring->add(a, b) == ring->add(c, d);
          const bool quad = ring->add(ring->sqr(a), ring->sqr(b)) ==
                            ring->add(ring->sqr(c), ring->sqr(d));
          if (lin && quad) ++count;
        }
  return count;
}

// mean of g over {u : u1 + 2*anchor*u2 = coset mod p^kexp} by full scan
inline std::complex<double> naive_coset_average(const Eigen::ArrayXXcd& g, const ModelParams& P,
                                                const Envelope& U) {
  const u64 q = P.q();
  const RingPtr& ring = P.ring();
  const u64 two_a = P.two_times(U.tau.residue);
  std::complex<double> acc = 0.0;
  u64 n = 0;
  for (u64 u1 = 0; u1 < q; ++u1)
    for (u64 u2 = 0; u2 < q; ++u2) {
      const u64 w = ring->add(u1, ring->mul(two_a, u2));
      if (ring->low_digits(w, U.kexp) == U.coset) {
        acc += g(u1, u2);
        ++n;
      }
    }
  return acc / static_cast<double>(n);
}

inline double naive_lp_pow(const Eigen::ArrayXXcd& g, double e) {
  double s = 0.0;
  for (long i = 0; i < g.size(); ++i) s += std::pow(std::abs(g.data()[i]), e);
  return s;
}

}  // namespace declab::oracle
