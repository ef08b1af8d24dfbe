#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <string>

#include "declab/errors.hpp"

namespace declab {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using cplx = std::complex<double>;

enum class RingKind { INT_MOD, POLY_MOD };

inline u64 ipow(u64 base, unsigned exp) {
  u64 r = 1;
  while (exp--) r *= base;
  return r;
}

// O/ϖ^n for O the ring of integers of Q_p (INT_MOD) or F_p[[t]] (POLY_MOD).
// Elements are canonical reps sum d_i p^i in [0, p^n); for POLY_MOD the d_i
// are the t-adic coefficients, so low-digit truncation is rep % p^m for both.
class LocalRing {
 public:
  static std::shared_ptr<const LocalRing> make(RingKind kind, u64 p, unsigned n);

  RingKind kind() const { return kind_; }
  u64 p() const { return p_; }
  unsigned n() const { return n_; }
  u64 q() const { return q_; }

  u64 add(u64 x, u64 y) const;
  u64 sub(u64 x, u64 y) const;
  u64 neg(u64 x) const;
  u64 mul(u64 x, u64 y) const;
  u64 sqr(u64 x) const { return mul(x, x); }

  unsigned valuation(u64 x) const;             // in [0, n]; valuation(0) = n
  double norm(u64 x) const;                    // p^{-valuation}
  cplx character(u64 z) const;                 // additive character of O/ϖ^n
  u64 pow_uniformizer(unsigned k) const;       // rep of ϖ^k
  u64 low_digits(u64 x, unsigned m) const;     // x mod ϖ^m as rep in [0, p^m)
  u64 two() const;                             // rep of 2
  u64 bold_p() const { return p_; }            // 𝐩 for the supported fields
  double norm_two() const;                     // |2|

  std::string name() const;

 private:
  LocalRing(RingKind kind, u64 p, unsigned n);
  RingKind kind_;
  u64 p_;
  unsigned n_;
  u64 q_;
};

using RingPtr = std::shared_ptr<const LocalRing>;

RingPtr make_ring(RingKind kind, u64 p, unsigned precision);

// Value with a ring tag; mixing rings is a RING_MISMATCH error.
struct RingElem {
  u64 rep = 0;
  RingPtr ring;
};

RingElem make_elem(const RingPtr& ring, u64 rep);
RingElem add(const RingElem& x, const RingElem& y);
RingElem sub(const RingElem& x, const RingElem& y);
RingElem neg(const RingElem& x);
RingElem mul(const RingElem& x, const RingElem& y);
RingElem sqr(const RingElem& x);
unsigned valuation(const RingElem& x);
double norm(const RingElem& x);
cplx character(const RingElem& z);

}  // namespace declab
