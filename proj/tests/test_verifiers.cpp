#include <doctest.h>

#include <cmath>

#include "declab/ensembles.hpp"
#include "declab/verifiers.hpp"
#include "oracles.hpp"

using namespace declab;

namespace {
ParabolaFunction random_function(const ModelParams& P, u64 seed) {
  EnsembleSpec spec;
  spec.kind = EnsembleKind::RANDOM_PHASE;
  spec.seed = seed;
  return generate(spec, P);
}

ParabolaFunction two_point(const ModelParams& P) {
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(P.q());
  c[0] = 1.0;
  c[3] = 1.0;
  return {P, c};
}

bool all_pass(const std::vector<VerificationReport>& rs) {
  if (rs.empty()) return false;
  for (const auto& r : rs)
    if (!r.pass) return false;
  return true;
}

double oracle_ratio(const ParabolaFunction& f, double beta, double pe, double qe) {
  const ModelParams& P = f.params();
  const unsigned M = P.M_of_beta(beta);
  const double num = oracle::naive_lp_pow(f.spatial(), pe);
  double den = 0.0, mx = 0.0;
  for (const Cap& gc : caps_at_level(P, M)) {
    ParabolaFunction fg = project_cap(f, gc);
    if (fg.is_zero()) continue;
    const double np = oracle::naive_lp_pow(fg.spatial(), pe);
    mx = std::max(mx, np);
    den += std::pow(np, qe / pe);
  }
  return std::isinf(qe) ? num / mx : num / std::pow(den, pe / qe);
}
}  // namespace

TEST_CASE("registry holds the stated checks in order") {
  const std::vector<std::string> want = {
      "low_lemma",       "high_lemma_a",     "high_lemma_b",
      "wave_env_high",   "bilinear_restriction", "cordoba_fefferman",
      "wave_env_expansion", "case_m0",       "wk_high_dom",
      "broad_high_dom",  "narrow_decoupling", "narrow_bound",
      "broad_bound",     "local_wave_envelope", "theorem_wave_envelope",
      "partial_prop",    "critical_superlevel", "d44_bound",
      "flat_decoupling", "smallcap_decoupling"};
  CHECK(check_names() == want);
  CHECK(check_exists("cordoba_fefferman"));
  CHECK_FALSE(check_exists("no_such_check"));
  ModelParams P = ModelParams::make(RingKind::INT_MOD, 3, 1);
  try {
    run_check("no_such_check", two_point(P));
    FAIL("expected UNKNOWN_CHECK");
  } catch (const LabError& e) {
    CHECK(e.code() == Err::UNKNOWN_CHECK);
  }
}

TEST_CASE("cordoba on the two point function") {
  ModelParams P = ModelParams::make(RingKind::INT_MOD, 3, 1);
  auto rs = run_check("cordoba_fefferman", two_point(P));
  REQUIRE(rs.size() == 1);
  const auto& r = rs[0];
  CHECK(r.pass);
  CHECK(r.lhs == doctest::Approx(486.0));
  CHECK(r.rhs == doctest::Approx(972.0));
  CHECK(r.paper_constant == doctest::Approx(2.0));
  CHECK(r.tightest_constant == doctest::Approx(1.0));
  CHECK(r.kind == "inequality");
  CHECK(r.p == 3);
  CHECK(r.N == 1);
  CHECK(r.wall_time >= 0.0);
}

TEST_CASE("exact lemmas pass on random input") {
  for (auto kind : {RingKind::INT_MOD, RingKind::POLY_MOD}) {
    ModelParams P = ModelParams::make(kind, 3, 2);
    ParabolaFunction f = random_function(P, 1234 + (kind == RingKind::POLY_MOD));
    CHECK(all_pass(run_check("low_lemma", f)));
    CHECK(all_pass(run_check("high_lemma_a", f)));
    CHECK(all_pass(run_check("high_lemma_b", f)));
    CHECK(all_pass(run_check("wave_env_high", f)));
    CHECK(all_pass(run_check("narrow_decoupling", f)));
    CHECK(all_pass(run_check("narrow_bound", f)));
    CHECK(all_pass(run_check("flat_decoupling", f)));
    CHECK(all_pass(run_check("d44_bound", f)));
  }
}

TEST_CASE("bilinear restriction holds over all ladders") {
  ModelParams P = ModelParams::make(RingKind::INT_MOD, 3, 2);
  ParabolaFunction f = random_function(P, 77);
  const auto rs = run_check("bilinear_restriction", f);
  CHECK(!rs.empty());
  for (const auto& r : rs) {
    CHECK(r.pass);
    CHECK(r.extra.at("pairs") > 0.0);
  }
}

TEST_CASE("high lemma (b) is sharp at l = 1 and empty at l = 0") {
  // annulus spectra of distinct level-k squares are disjoint when l = 1, so
  // the inequality collapses to an identity; at l = 0 the band is empty
  ModelParams P = ModelParams::make(RingKind::INT_MOD, 3, 2);
  for (u64 seed : {u64{21}, u64{22}}) {
    const auto rs = run_check("high_lemma_b", random_function(P, seed));
    bool saw_l1 = false;
    for (const auto& r : rs) {
      CHECK(r.pass);
      if (r.extra.at("l") == 0.0) CHECK(r.tightest_constant == 0.0);
      if (r.extra.at("l") == 1.0) {
        saw_l1 = true;
        CHECK(r.lhs > 1.0);
        CHECK(r.tightest_constant == doctest::Approx(1.0).epsilon(1e-9));
      }
    }
    CHECK(saw_l1);
  }
}

TEST_CASE("cordoba stays within its constant on random draws") {
  ModelParams P = ModelParams::make(RingKind::INT_MOD, 3, 2);
  for (u64 seed = 0; seed < 20; ++seed) {
    auto rs = run_check("cordoba_fefferman", random_function(P, 500 + seed));
    REQUIRE(rs.size() == 1);
    CHECK(rs[0].pass);
    CHECK(rs[0].tightest_constant <= 2.0);
  }
}

TEST_CASE("wave envelope expansion is an identity at the bottom") {
  ModelParams P = ModelParams::make(RingKind::INT_MOD, 3, 2);
  ParabolaFunction f = random_function(P, 88);
  const auto rs = run_check("wave_env_expansion", f);
  bool saw_a = false, saw_b = false;
  for (const auto& r : rs) {
    CHECK(r.pass);
    if (r.check_name == "wave_env_expansion.a") {
      saw_a = true;
      // bandpassed square mass equals the coset average expansion exactly
      if (r.lhs > 0.0) CHECK(r.lhs == doctest::Approx(1.0).epsilon(1e-8));
    }
    if (r.check_name == "wave_env_expansion.b") saw_b = true;
  }
  CHECK(saw_a);
  CHECK(saw_b);
}

TEST_CASE("empirical checks produce well formed reports") {
  ModelParams P = ModelParams::make(RingKind::INT_MOD, 3, 2);
  ParabolaFunction f = random_function(P, 909);

  auto m0 = run_check("case_m0", f);
  REQUIRE(m0.size() == 1);
  CHECK(std::isfinite(m0[0].lhs));
  CHECK(m0[0].rhs > 0.0);
  CHECK(m0[0].extra.count("superlevel_count") == 1);

  auto wk = run_check("wk_high_dom", f);
  bool wk_a = false, wk_b = false;
  for (const auto& r : wk) {
    if (r.check_name == "wk_high_dom.a") wk_a = true;
    if (r.check_name == "wk_high_dom.b") {
      wk_b = true;
      if (r.extra.at("points") == 0.0) CHECK(r.pass);  // vacuous instance
    }
    CHECK(std::isfinite(r.lhs));
  }
  CHECK(wk_a);
  CHECK(wk_b);

  auto bh = run_check("broad_high_dom", f);
  CHECK(!bh.empty());
  for (const auto& r : bh) {
    const double v = r.extra.at("proof_variant");
    CHECK((v == 0.0 || v == 1.0));
  }

  for (const char* name : {"broad_bound", "local_wave_envelope", "theorem_wave_envelope"}) {
    auto rs = run_check(name, f);
    REQUIRE(!rs.empty());
    for (const auto& r : rs) {
      CHECK(std::isfinite(r.lhs));
      CHECK(r.rhs >= 0.0);
      CHECK(r.wall_time >= 0.0);
    }
  }
  CHECK(run_check("theorem_wave_envelope", f)[0].extra.count("n10_reading_rhs") == 1);

  auto pp = run_check("partial_prop", f, {{"p_exp", 6.0}, {"beta", 0.75}});
  CHECK(!pp.empty());
  for (const auto& r : pp) CHECK(r.p_exp == doctest::Approx(6.0));
  try {
    run_check("partial_prop", f, {{"p_exp", 3.0}});
    FAIL("expected PARAM_MISSING");
  } catch (const LabError& e) {
    CHECK(e.code() == Err::PARAM_MISSING);
  }
  try {
    run_check("wk_high_dom", f, {{"C", 1.0}});
    FAIL("expected PARAM_MISSING");
  } catch (const LabError& e) {
    CHECK(e.code() == Err::PARAM_MISSING);
  }

  auto cs = run_check("critical_superlevel", f, {{"beta", 0.75}});
  REQUIRE(cs.size() == 1);
  CHECK(cs[0].p_exp == doctest::Approx(14.0 / 3.0));
  CHECK(cs[0].q_exp == doctest::Approx(14.0 / 5.0));
  CHECK(cs[0].extra.count("structural_rhs") == 1);
  CHECK(cs[0].extra.at("norm_factor") > 0.0);
}

TEST_CASE("smallcap decoupling ratio stays under the stated bound") {
  ModelParams P = ModelParams::make(RingKind::INT_MOD, 3, 2);
  for (double beta : {0.5, 1.0}) {
    auto rs = run_check("smallcap_decoupling", random_function(P, 321), {{"beta", beta}});
    REQUIRE(rs.size() == 1);
    CHECK(rs[0].pass);
    CHECK(rs[0].rhs == rs[0].paper_constant);
  }
  EnsembleSpec spec;
  spec.kind = EnsembleKind::BLOCK;
  spec.beta = 1.0;
  auto rs = run_check("smallcap_decoupling", generate(spec, P), {{"beta", 1.0}});
  CHECK(rs[0].pass);
}

TEST_CASE("decoupling ratio matches the grid oracle") {
  ModelParams P = ModelParams::make(RingKind::INT_MOD, 3, 2);
  ParabolaFunction f = random_function(P, 42);
  for (auto [pe, qe] : {std::pair{4.0, 4.0}, {4.0, 6.0}, {6.0, 2.0}}) {
    const double fast = decoupling_ratio(f, 0.75, pe, qe);
    const double slow = oracle_ratio(f, 0.75, pe, qe);
    CHECK(fast == doctest::Approx(slow).epsilon(1e-9));
  }
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(decoupling_ratio(f, 0.75, 3.0, inf) ==
        doctest::Approx(oracle_ratio(f, 0.75, 3.0, inf)).epsilon(1e-9));
  try {
    decoupling_ratio(ParabolaFunction(P, Eigen::VectorXcd::Zero(81)), 1.0, 4.0, 4.0);
    FAIL("expected ZERO_FUNCTION");
  } catch (const LabError& e) {
    CHECK(e.code() == Err::ZERO_FUNCTION);
  }
}

TEST_CASE("theorem bound against a literal recomputation") {
  const double R = std::pow(3.0, 32.0);
  const double got = theorem_bound(6.0, 2.0, 0.5, 3.0, R);
  const double growth = std::pow(R, 0.5 * (6.0 - 3.0 - 1.0) - 1.0) +
                        std::pow(R, 6.0 * 0.5 * (0.5 - 0.5));
  CHECK(growth == doctest::Approx(2.0));
  const double want = 1e6 * std::pow(std::log(3.0), -16.0) * std::pow(3.0, 12.0) *
                      std::pow(std::log(R), 16.0 + 12.0) * growth;
  CHECK(got == doctest::Approx(want).epsilon(1e-12));
  try {
    theorem_bound(4.0, 4.0, 0.3, 3.0, R);
    FAIL("expected BETA_NOT_REPRESENTABLE");
  } catch (const LabError& e) {
    CHECK(e.code() == Err::BETA_NOT_REPRESENTABLE);
  }
  try {
    theorem_bound(0.0, 4.0, 1.0, 3.0, R);
    FAIL("expected PARAM_MISSING");
  } catch (const LabError& e) {
    CHECK(e.code() == Err::PARAM_MISSING);
  }
}

TEST_CASE("critical exponent pairs") {
  CHECK(critical_p(0.5) == doctest::Approx(6.0));
  CHECK(critical_q(0.5) == doctest::Approx(2.0));
  CHECK(critical_p(0.75) == doctest::Approx(14.0 / 3.0));
  CHECK(critical_q(0.75) == doctest::Approx(14.0 / 5.0));
  CHECK(critical_p(1.0) == doctest::Approx(4.0));
  CHECK(critical_q(1.0) == doctest::Approx(4.0));
}

TEST_CASE("index parameters pin or enumerate") {
  ModelParams P = ModelParams::make(RingKind::INT_MOD, 3, 2);
  ParabolaFunction f = random_function(P, 55);
  auto one = run_check("low_lemma", f, {{"m", 1.0}, {"k", 1.0}, {"s", 0.0}});
  CHECK(one.size() == 1);
  CHECK(one[0].extra.at("m") == 1.0);
  auto none = run_check("low_lemma", f, {{"m", 2.0}, {"k", 1.0}});
  CHECK(none.empty());  // k < m is skipped, not an error
  try {
    run_check("low_lemma", f, {{"k", 5.0}});
    FAIL("expected LEVEL_RANGE");
  } catch (const LabError& e) {
    CHECK(e.code() == Err::LEVEL_RANGE);
  }
  try {
    run_check("low_lemma", f, {{"alpha", -2.0}});
    FAIL("expected ALPHA_NONPOSITIVE");
  } catch (const LabError& e) {
    CHECK(e.code() == Err::ALPHA_NONPOSITIVE);
  }
}

TEST_CASE("rhs carries the displayed constant") {
  ModelParams P = ModelParams::make(RingKind::INT_MOD, 3, 2);
  ParabolaFunction f = random_function(P, 61);
  auto rs = run_check("d44_bound", f, {{"beta", 1.0}});
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].rhs == doctest::Approx(rs[0].paper_constant * 81.0));
  CHECK(rs[0].tightest_constant ==
        doctest::Approx(rs[0].lhs / (rs[0].rhs / rs[0].paper_constant)));
}
