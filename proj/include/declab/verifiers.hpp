#pragma once

#include <limits>
#include <map>
#include <string>
#include <vector>

#include "declab/highlow.hpp"

namespace declab {

// One verified instance of a stated inequality or identity. rhs includes the
// displayed constant; tightest_constant = lhs / (rhs / paper_constant) is the
// smallest constant that would still pass this instance.
struct VerificationReport {
  std::string check_name;
  std::string kind;  // "inequality" or "identity"
  u64 p = 0;
  unsigned N = 0;
  double beta = std::numeric_limits<double>::quiet_NaN();
  double p_exp = std::numeric_limits<double>::quiet_NaN();
  double q_exp = std::numeric_limits<double>::quiet_NaN();
  std::string ensemble;
  u64 seed = 0;
  double alpha = std::numeric_limits<double>::quiet_NaN();
  double lhs = 0.0;
  double rhs = 0.0;
  double paper_constant = 1.0;
  double tightest_constant = 0.0;
  bool pass = false;
  double tol = 0.0;
  double wall_time = 0.0;
  std::map<std::string, double> extra;
};

using CheckParams = std::map<std::string, double>;

// Registered check names, in registry order.
std::vector<std::string> check_names();
bool check_exists(const std::string& name);

// Run one named check. Index parameters absent from `params` are enumerated
// over their full valid ranges; one report per instance.
std::vector<VerificationReport> run_check(const std::string& name, const ParabolaFunction& f,
                                          const CheckParams& params = {});

// ||f||_p^p / (sum_gamma ||f_gamma||_p^q)^{p/q}; q_exp = inf takes the max
// over gamma instead of the sum.
double decoupling_ratio(const ParabolaFunction& f, double beta, double p_exp, double q_exp);

// Stated small cap bound at resolution R (a power of bold_p):
// 10^6 (log bp)^{-16} bp^12 (log R)^{16+6/beta} (R^{beta(p-p/q-1)-1} + R^{p beta(1/2-1/q)}).
double theorem_bound(double p_exp, double q_exp, double beta, double bold_p, double R);

// critical exponent pair for the strip exponent beta
double critical_p(double beta);
double critical_q(double beta);

inline constexpr double kIneqTol = 1e-9;
inline constexpr double kIdentityTol = 1e-8;

}  // namespace declab
