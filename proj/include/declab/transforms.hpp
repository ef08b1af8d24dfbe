#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "declab/local_ring.hpp"

namespace declab {

// Exact Fourier analysis on O/ϖ^n and its square.
// Synthesis: v[u] = Σ_ξ s[ξ] χ(uξ).  Analysis: s[ξ] = q^{-1} Σ_u v[u] conj(χ(uξ)).
// INT_MOD lines are radix-p Cooley-Tukey; POLY_MOD pairing χ(uξ) factors through
// <digits(u), rev(digits(ξ))>, so the line transform is a digit-reversed tensor DFT.
class LineTransform {
 public:
  explicit LineTransform(RingPtr ring);

  const RingPtr& ring() const { return ring_; }

  Eigen::VectorXcd synthesize(const Eigen::VectorXcd& spec) const;
  Eigen::VectorXcd analyze(const Eigen::VectorXcd& vals) const;

  // Grid layout: entry (i, j) is the value at u = (i, j) or frequency (ξ1, ξ2) = (i, j).
  Eigen::ArrayXXcd synthesize2d(const Eigen::ArrayXXcd& spec) const;
  Eigen::ArrayXXcd analyze2d(const Eigen::ArrayXXcd& vals) const;

  cplx chi(u64 z) const;  // table-backed character

  void fft_line(cplx* a, std::ptrdiff_t stride, int sign) const;

 private:
  cplx root(u64 m, u64 B, int sign) const;  // ω_B^{±m}, B = p^s
  cplx proot(u64 x, int sign) const;        // ω_p^{±x}

  RingPtr ring_;
  std::vector<u64> rev_;          // base-p digit reversal on [0, q)
  std::vector<cplx> roots_;       // ω_q^k (INT_MOD only)
  std::vector<cplx> proots_;      // ω_p^r
};

}  // namespace declab
