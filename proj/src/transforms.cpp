#include "declab/transforms.hpp"

#include <cmath>
#include <numbers>
#include <utility>

namespace declab {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

LineTransform::LineTransform(RingPtr ring) : ring_(std::move(ring)) {
  const u64 q = ring_->q();
  const u64 p = ring_->p();
  const unsigned n = ring_->n();

  rev_.resize(q);
  for (u64 i = 0; i < q; ++i) {
    u64 x = i, r = 0;
    for (unsigned d = 0; d < n; ++d) {
      r = r * p + x % p;
      x /= p;
    }
    rev_[i] = r;
  }

  if (ring_->kind() == RingKind::INT_MOD) {
    roots_.resize(q);
    for (u64 k = 0; k < q; ++k) {
      double t = kTwoPi * static_cast<double>(k) / static_cast<double>(q);
      roots_[k] = {std::cos(t), std::sin(t)};
    }
  }
  proots_.resize(p);
  for (u64 r = 0; r < p; ++r) {
    double t = kTwoPi * static_cast<double>(r) / static_cast<double>(p);
    proots_[r] = {std::cos(t), std::sin(t)};
  }
}

cplx LineTransform::chi(u64 z) const {
  if (ring_->kind() == RingKind::INT_MOD) return roots_[z];
  return proots_[z / (ring_->q() / ring_->p())];
}

cplx LineTransform::root(u64 m, u64 B, int sign) const {
  u64 idx = (m % B) * (ring_->q() / B);
  if (sign < 0 && idx > 0) idx = ring_->q() - idx;
  return roots_[idx];
}

cplx LineTransform::proot(u64 x, int sign) const {
  const u64 p = ring_->p();
  u64 idx = x % p;
  if (sign < 0 && idx > 0) idx = p - idx;
  return proots_[idx];
}

void LineTransform::fft_line(cplx* a, std::ptrdiff_t stride, int sign) const {
  const u64 q = ring_->q();
  const u64 p = ring_->p();
  const unsigned n = ring_->n();

  for (u64 i = 0; i < q; ++i) {
    u64 r = rev_[i];
    if (r > i) std::swap(a[static_cast<std::ptrdiff_t>(i) * stride], a[static_cast<std::ptrdiff_t>(r) * stride]);
  }

  std::vector<cplx> z(p);
  if (ring_->kind() == RingKind::INT_MOD) {
    for (unsigned s = 1; s <= n; ++s) {
      const u64 B = ipow(p, s);
      const u64 T = B / p;
      for (u64 b = 0; b < q; b += B) {
        for (u64 j = 0; j < T; ++j) {
          for (u64 r = 0; r < p; ++r) {
            z[r] = a[static_cast<std::ptrdiff_t>(b + r * T + j) * stride] * root(r * j, B, sign);
          }
          for (u64 t = 0; t < p; ++t) {
            cplx acc = z[0];
            for (u64 r = 1; r < p; ++r) acc += z[r] * proot(r * t, sign);
            a[static_cast<std::ptrdiff_t>(b + t * T + j) * stride] = acc;
          }
        }
      }
    }
  } else {
    for (unsigned axis = 0; axis < n; ++axis) {
      const u64 A = ipow(p, axis);
      for (u64 base = 0; base < q; ++base) {
        if ((base / A) % p != 0) continue;
        for (u64 r = 0; r < p; ++r) z[r] = a[static_cast<std::ptrdiff_t>(base + r * A) * stride];
        for (u64 t = 0; t < p; ++t) {
          cplx acc = z[0];
          for (u64 r = 1; r < p; ++r) acc += z[r] * proot(r * t, sign);
          a[static_cast<std::ptrdiff_t>(base + t * A) * stride] = acc;
        }
      }
    }
  }
}

Eigen::VectorXcd LineTransform::synthesize(const Eigen::VectorXcd& spec) const {
  require(static_cast<u64>(spec.size()) == ring_->q(), Err::INDEX_RANGE, "spectrum length != q");
  Eigen::VectorXcd out = spec;
  fft_line(out.data(), 1, +1);
  return out;
}

Eigen::VectorXcd LineTransform::analyze(const Eigen::VectorXcd& vals) const {
  require(static_cast<u64>(vals.size()) == ring_->q(), Err::INDEX_RANGE, "value length != q");
  Eigen::VectorXcd out = vals;
  fft_line(out.data(), 1, -1);
  out /= static_cast<double>(ring_->q());
  return out;
}

Eigen::ArrayXXcd LineTransform::synthesize2d(const Eigen::ArrayXXcd& spec) const {
  const auto q = static_cast<Eigen::Index>(ring_->q());
  require(spec.rows() == q && spec.cols() == q, Err::INDEX_RANGE, "spectrum grid != q x q");
  Eigen::ArrayXXcd m = spec;
  for (Eigen::Index j = 0; j < q; ++j) {
    if (!m.col(j).isZero(0.0)) fft_line(m.col(j).data(), 1, +1);
  }
  for (Eigen::Index i = 0; i < q; ++i) {
    fft_line(m.data() + i, q, +1);
  }
  return m;
}

Eigen::ArrayXXcd LineTransform::analyze2d(const Eigen::ArrayXXcd& vals) const {
  const auto q = static_cast<Eigen::Index>(ring_->q());
  require(vals.rows() == q && vals.cols() == q, Err::INDEX_RANGE, "value grid != q x q");
  Eigen::ArrayXXcd m = vals;
  for (Eigen::Index j = 0; j < q; ++j) {
    fft_line(m.col(j).data(), 1, -1);
  }
  for (Eigen::Index i = 0; i < q; ++i) {
    fft_line(m.data() + i, q, -1);
  }
  m /= static_cast<double>(ring_->q()) * static_cast<double>(ring_->q());
  return m;
}

}  // namespace declab
