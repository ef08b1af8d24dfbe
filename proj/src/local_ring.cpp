#include "declab/local_ring.hpp"

#include <cmath>
#include <numbers>

namespace declab {

namespace {

bool is_prime(u64 p) {
  if (p < 2) return false;
  for (u64 d = 2; d * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

LocalRing::LocalRing(RingKind kind, u64 p, unsigned n) : kind_(kind), p_(p), n_(n), q_(ipow(p, n)) {}

std::shared_ptr<const LocalRing> LocalRing::make(RingKind kind, u64 p, unsigned n) {
  require(is_prime(p), Err::NON_PRIME, "p = " + std::to_string(p));
  require(!(kind == RingKind::POLY_MOD && p == 2), Err::CHAR_TWO_POLY,
          "F_2[[t]] models are not supported");
  require(n >= 1, Err::LEVEL_RANGE, "precision must be >= 1");
  long double size = std::pow(static_cast<long double>(p), static_cast<long double>(n));
  require(size <= std::ldexp(1.0L, 40), Err::PRECISION_OVERFLOW,
          "p^n exceeds 2^40 for p = " + std::to_string(p) + ", n = " + std::to_string(n));
  return std::shared_ptr<const LocalRing>(new LocalRing(kind, p, n));
}

RingPtr make_ring(RingKind kind, u64 p, unsigned precision) { return LocalRing::make(kind, p, precision); }

u64 LocalRing::add(u64 x, u64 y) const {
  if (kind_ == RingKind::INT_MOD) {
    u64 s = x + y;
    return s >= q_ ? s - q_ : s;
  }
  u64 out = 0, place = 1;
  for (unsigned i = 0; i < n_; ++i) {
    u64 d = x % p_ + y % p_;
    if (d >= p_) d -= p_;
    out += d * place;
    place *= p_;
    x /= p_;
    y /= p_;
  }
  return out;
}

u64 LocalRing::neg(u64 x) const {
  if (kind_ == RingKind::INT_MOD) return x == 0 ? 0 : q_ - x;
  u64 out = 0, place = 1;
  for (unsigned i = 0; i < n_; ++i) {
    u64 d = x % p_;
    out += (d == 0 ? 0 : p_ - d) * place;
    place *= p_;
    x /= p_;
  }
  return out;
}

u64 LocalRing::sub(u64 x, u64 y) const { return add(x, neg(y)); }

u64 LocalRing::mul(u64 x, u64 y) const {
  if (kind_ == RingKind::INT_MOD) {
    return static_cast<u64>((static_cast<unsigned __int128>(x) * y) % q_);
  }
  u64 xd[64], yd[64];
  for (unsigned i = 0; i < n_; ++i) {
    xd[i] = x % p_;
    yd[i] = y % p_;
    x /= p_;
    y /= p_;
  }
  u64 out = 0, place = 1;
  for (unsigned k = 0; k < n_; ++k) {
    u64 c = 0;
    for (unsigned i = 0; i <= k; ++i) c += xd[i] * yd[k - i] % p_;
    out += (c % p_) * place;
    place *= p_;
  }
  return out;
}

unsigned LocalRing::valuation(u64 x) const {
  if (x == 0) return n_;
  unsigned v = 0;
  while (x % p_ == 0) {
    x /= p_;
    ++v;
  }
  return v;
}

double LocalRing::norm(u64 x) const { return std::pow(static_cast<double>(p_), -static_cast<double>(valuation(x))); }

cplx LocalRing::character(u64 z) const {
  if (kind_ == RingKind::INT_MOD) {
    double t = kTwoPi * static_cast<double>(z) / static_cast<double>(q_);
    return {std::cos(t), std::sin(t)};
  }
  u64 top = z / (q_ / p_);  // coefficient of t^{n-1}
  double t = kTwoPi * static_cast<double>(top) / static_cast<double>(p_);
  return {std::cos(t), std::sin(t)};
}

u64 LocalRing::pow_uniformizer(unsigned k) const {
  require(k <= n_, Err::LEVEL_RANGE, "uniformizer power beyond precision");
  return k == n_ ? 0 : ipow(p_, k);
}

u64 LocalRing::low_digits(u64 x, unsigned m) const {
  require(m <= n_, Err::LEVEL_RANGE, "digit count beyond precision");
  return x % ipow(p_, m);
}

u64 LocalRing::two() const { return kind_ == RingKind::INT_MOD ? 2 % q_ : (p_ == 2 ? 0 : 2); }

double LocalRing::norm_two() const { return (kind_ == RingKind::INT_MOD && p_ == 2) ? 0.5 : 1.0; }

std::string LocalRing::name() const {
  std::string base = kind_ == RingKind::INT_MOD ? "Z/" : "F_" + std::to_string(p_) + "[t]/t^";
  if (kind_ == RingKind::INT_MOD) return base + std::to_string(p_) + "^" + std::to_string(n_);
  return base + std::to_string(n_);
}

namespace {
const LocalRing& same_ring(const RingElem& x, const RingElem& y) {
  require(x.ring && y.ring && x.ring.get() == y.ring.get(), Err::RING_MISMATCH,
          "operands from different rings");
  return *x.ring;
}
}  // namespace

RingElem make_elem(const RingPtr& ring, u64 rep) {
  require(ring != nullptr, Err::RING_MISMATCH, "null ring");
  require(rep < ring->q(), Err::INDEX_RANGE, "rep " + std::to_string(rep) + " out of [0, q)");
  return {rep, ring};
}

RingElem add(const RingElem& x, const RingElem& y) { return {same_ring(x, y).add(x.rep, y.rep), x.ring}; }
RingElem sub(const RingElem& x, const RingElem& y) { return {same_ring(x, y).sub(x.rep, y.rep), x.ring}; }
RingElem neg(const RingElem& x) {
  require(x.ring != nullptr, Err::RING_MISMATCH, "null ring");
  return {x.ring->neg(x.rep), x.ring};
}
RingElem mul(const RingElem& x, const RingElem& y) { return {same_ring(x, y).mul(x.rep, y.rep), x.ring}; }
RingElem sqr(const RingElem& x) {
  require(x.ring != nullptr, Err::RING_MISMATCH, "null ring");
  return {x.ring->sqr(x.rep), x.ring};
}
unsigned valuation(const RingElem& x) {
  require(x.ring != nullptr, Err::RING_MISMATCH, "null ring");
  return x.ring->valuation(x.rep);
}
double norm(const RingElem& x) {
  require(x.ring != nullptr, Err::RING_MISMATCH, "null ring");
  return x.ring->norm(x.rep);
}
cplx character(const RingElem& z) {
  require(z.ring != nullptr, Err::RING_MISMATCH, "null ring");
  return z.ring->character(z.rep);
}

}  // namespace declab
