#include <doctest.h>

#include "declab/ensembles.hpp"
#include "declab/rng.hpp"
#include "declab/verifiers.hpp"
#include "oracles.hpp"

using namespace declab;

TEST_CASE("energy of {0,1} mod 9") {
  RingPtr r = make_ring(RingKind::INT_MOD, 3, 2);
  const std::vector<u64> A{0, 1};
  CHECK(parabola_energy(A, r) == 6);
  CHECK(oracle::brute_energy(A, r) == 6);
}

TEST_CASE("energy matches the quadruple count on random sets") {
  Rng rng(101);
  for (auto kind : {RingKind::INT_MOD, RingKind::POLY_MOD})
    for (unsigned n : {2u, 4u}) {
      RingPtr r = make_ring(kind, 3, n);
      for (int rep = 0; rep < 3; ++rep) {
        const u64 m = 3 + rng.next_below(10);  // |A| <= 12
        std::vector<u64> A;
        for (u64 i = 0; i < m; ++i) A.push_back(rng.next_below(r->q()));
        CHECK(parabola_energy(A, r) == oracle::brute_energy(A, r));
      }
    }
}

TEST_CASE("quartic coefficient sum equals the L4 integral") {
  ModelParams P = ModelParams::make(RingKind::INT_MOD, 3, 2);
  for (u64 seed : {11ull, 12ull}) {
    EnsembleSpec spec;
    spec.kind = EnsembleKind::SPARSE;
    spec.seed = seed;
    spec.density = 0.15;
    ParabolaFunction f = generate(spec, P);
    const double q2 = 81.0 * 81.0;
    CHECK(q2 * quartic_coefficient_sum(f) == doctest::Approx(lp_pow(f, 4.0)).epsilon(1e-9));
  }
  // charsum multiplicities feed the same identity with integer weights
  EnsembleSpec cs;
  cs.kind = EnsembleKind::CHARSUM;
  cs.set = {0, 1, 5, 5, 86};
  ParabolaFunction g = generate(cs, P);
  CHECK(81.0 * 81.0 * quartic_coefficient_sum(g) == doctest::Approx(lp_pow(g, 4.0)).epsilon(1e-9));
}

TEST_CASE("ensemble draws have the advertised shape") {
  ModelParams P = ModelParams::make(RingKind::INT_MOD, 3, 2);
  EnsembleSpec spec;
  spec.seed = 7;

  spec.kind = EnsembleKind::RANDOM_PHASE;
  ParabolaFunction rp = generate(spec, P);
  for (u64 a = 0; a < 81; ++a) CHECK(std::abs(rp.coeffs()[a]) == doctest::Approx(1.0));

  spec.kind = EnsembleKind::SPARSE;
  spec.density = 0.1;
  ParabolaFunction sp = generate(spec, P);
  u64 nnz = 0;
  for (u64 a = 0; a < 81; ++a)
    if (sp.coeffs()[a] != 0.0) {
      ++nnz;
      CHECK(std::abs(sp.coeffs()[a]) == doctest::Approx(1.0));
    }
  CHECK(nnz == 8);  // round(0.1 * 81)

  spec.kind = EnsembleKind::BLOCK;
  spec.beta = 0.75;  // M = 3, support {9j + 27i : j < 3, i < 3} = multiples of 9
  ParabolaFunction bk = generate(spec, P);
  bool block_ok = true;
  for (u64 a = 0; a < 81; ++a)
    block_ok &= bk.coeffs()[a] == (a % 9 == 0 ? cplx(1.0) : cplx(0.0));
  CHECK(block_ok);

  spec.kind = EnsembleKind::CHARSUM;
  spec.set = {0, 1, 82};
  ParabolaFunction ch = generate(spec, P);
  CHECK(ch.coeffs()[0] == cplx(1.0));
  CHECK(ch.coeffs()[1] == cplx(2.0));  // 82 = 1 mod 81
  spec.set.clear();
  try {
    generate(spec, P);
    FAIL("expected EMPTY_SET");
  } catch (const LabError& e) {
    CHECK(e.code() == Err::EMPTY_SET);
  }
}

TEST_CASE("generation is deterministic in the seed") {
  ModelParams P = ModelParams::make(RingKind::POLY_MOD, 3, 2);
  EnsembleSpec spec;
  spec.kind = EnsembleKind::SPARSE;
  spec.seed = 99;
  ParabolaFunction a = generate(spec, P);
  ParabolaFunction b = generate(spec, P);
  CHECK((a.coeffs() - b.coeffs()).norm() == 0.0);
  spec.seed = 100;
  ParabolaFunction c = generate(spec, P);
  CHECK((a.coeffs() - c.coeffs()).norm() > 0.0);
}

TEST_CASE("block functions attain the closed-form ratio") {
  ModelParams P = ModelParams::make(RingKind::INT_MOD, 3, 2);
  EnsembleSpec spec;
  spec.kind = EnsembleKind::BLOCK;
  spec.beta = 1.0;
  ParabolaFunction f = generate(spec, P);
  const double closed = block_ratio_closed_form(P, 1.0, 4.0, 4.0);
  CHECK(closed == doctest::Approx(81.0));
  CHECK(block_lower_bound(P, 1.0, 4.0, 4.0) == doctest::Approx(3.0));
  CHECK(decoupling_ratio(f, 1.0, 4.0, 4.0) == doctest::Approx(closed).epsilon(1e-9));
  CHECK(block_ratio_closed_form(P, 0.5, 4.0, 4.0) == doctest::Approx(1.0));
  CHECK(block_lower_bound(P, 0.5, 4.0, 4.0) == doctest::Approx(1.0));
  // q = inf drops the p/q term: exponent (M-N)(p-1) = 2*2
  CHECK(block_ratio_closed_form(P, 1.0, 3.0, std::numeric_limits<double>::infinity()) ==
        doctest::Approx(81.0));
}
