#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "declab/errors.hpp"
#include "declab/optimize.hpp"
#include "declab/sweep.hpp"

namespace {

using namespace declab;

double parse_fraction(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) return std::stod(s);
  const double num = std::stod(s.substr(0, slash));
  const double den = std::stod(s.substr(slash + 1));
  require(den != 0.0, Err::PARAM_MISSING, "fraction with zero denominator");
  return num / den;
}

double parse_power(const std::string& s) {
  const auto caret = s.find('^');
  if (caret == std::string::npos) return std::stod(s);
  const double base = std::stod(s.substr(0, caret));
  const double exp = std::stod(s.substr(caret + 1));
  return std::pow(base, exp);
}

double parse_qexp(const std::string& s) {
  if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  return parse_fraction(s);
}

std::vector<u64> parse_set(const std::string& s) {
  std::vector<u64> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const auto comma = s.find(',', pos);
    const std::string tok = s.substr(pos, comma == std::string::npos ? comma : comma - pos);
    if (!tok.empty()) out.push_back(std::stoull(tok));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

RingKind parse_field(const std::string& s) {
  if (s == "padic") return RingKind::INT_MOD;
  if (s == "laurent") return RingKind::POLY_MOD;
  fail(Err::PARAM_MISSING, "field must be padic or laurent");
}

unsigned env_threads() {
  const char* v = std::getenv("DECOUPLING_LAB_THREADS");
  if (v == nullptr) return 1;
  const long n = std::strtol(v, nullptr, 10);
  return n >= 1 ? static_cast<unsigned>(n) : 1;
}

// shared flags feeding a SweepConfig
struct CommonOpts {
  std::string field = "padic";
  u64 p = 3;
  unsigned N = 2;
  std::string beta = "1";
  std::string ensemble = "random_phase";
  unsigned trials = 1;
  u64 seed = 1;
  double density = 0.1;
  std::string pexp, qexp;
  std::string set_csv;
  unsigned threads = env_threads();
};

void add_model_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--field", o.field, "coefficient field model: padic | laurent");
  cmd->add_option("--p", o.p, "residue characteristic");
  cmd->add_option("--N", o.N, "cap scale; the grid has side p^{2N}");
}

void add_ensemble_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--ensemble", o.ensemble, "random_phase | sparse | block | charsum");
  cmd->add_option("--trials", o.trials, "independent draws");
  cmd->add_option("--seed", o.seed, "global seed");
  cmd->add_option("--density", o.density, "sparse ensemble support fraction");
  cmd->add_option("--set", o.set_csv, "comma separated integers for the charsum ensemble");
}

void print_summary(const SweepResult& res) {
  std::map<std::string, std::array<double, 3>> rows;  // runs, fails, worst tightest
  for (const auto& r : res.reports) {
    auto& row = rows[r.check_name];
    row[0] += 1.0;
    if (!r.pass) row[1] += 1.0;
    row[2] = std::max(row[2], r.tightest_constant);
  }
  std::printf("%-26s %6s %6s %16s\n", "check", "runs", "fail", "max_tightest");
  for (const auto& [name, row] : rows)
    std::printf("%-26s %6.0f %6.0f %16.6g\n", name.c_str(), row[0], row[1], row[2]);
  if (res.failures == 0)
    std::printf("PASS (%zu reports)\n", res.reports.size());
  else
    std::printf("FAIL (%u of %zu reports)\n", res.failures, res.reports.size());
}

int cmd_verify(const CommonOpts& o, const std::string& check, const std::string& alpha_grid,
               const std::string& beta, double tol, const std::string& out,
               const std::string& mode, const std::vector<std::string>& params) {
  SweepConfig cfg;
  cfg.check = check;
  cfg.kind = parse_field(o.field);
  cfg.p = o.p;
  cfg.N = o.N;
  cfg.ensemble = o.ensemble;
  cfg.trials = o.trials;
  cfg.seed = o.seed;
  cfg.density = o.density;
  cfg.beta = parse_fraction(beta);
  if (!o.pexp.empty()) cfg.p_exp = parse_fraction(o.pexp);
  if (!o.qexp.empty()) cfg.q_exp = parse_qexp(o.qexp);
  cfg.alpha_grid = alpha_grid;
  cfg.tol_override = tol;
  cfg.threads = o.threads;
  cfg.set = parse_set(o.set_csv);
  if (!mode.empty()) {
    require(mode == "pruning" || mode == "theorem", Err::PARAM_MISSING,
            "mode must be pruning or theorem");
    cfg.extra["mode"] = mode == "theorem" ? 1.0 : 0.0;
  }
  for (const std::string& kv : params) {
    const auto eq = kv.find('=');
    require(eq != std::string::npos, Err::PARAM_MISSING, "--param expects key=value");
    cfg.extra[kv.substr(0, eq)] = parse_fraction(kv.substr(eq + 1));
  }
  if (cfg.ensemble == "charsum" && cfg.set.empty())
    fail(Err::EMPTY_SET, "charsum ensemble needs --set");

  SweepResult res = run_sweep(cfg);
  if (!out.empty()) {
    std::ofstream os(out);
    require(os.good(), Err::PARAM_MISSING, "cannot open output file " + out);
    write_ndjson(os, cfg, res.reports);
    std::printf("wrote %zu records to %s\n", res.reports.size() + 1, out.c_str());
  }
  print_summary(res);
  return res.failures == 0 ? 0 : 1;
}

int cmd_bound(u64 p, const std::string& R, const std::string& beta, const std::string& pexp,
              const std::string& qexp) {
  require(!pexp.empty() && !qexp.empty(), Err::PARAM_MISSING, "bound needs --pexp and --qexp");
  const double b = parse_fraction(beta);
  const double v = theorem_bound(parse_fraction(pexp), parse_qexp(qexp), b,
                                 static_cast<double>(p), parse_power(R));
  std::printf("%.12g\n", v);
  return 0;
}

int cmd_ratio(const CommonOpts& o, const std::string& beta) {
  require(!o.pexp.empty() && !o.qexp.empty(), Err::PARAM_MISSING, "ratio needs --pexp and --qexp");
  const double b = parse_fraction(beta);
  const double pe = parse_fraction(o.pexp), qe = parse_qexp(o.qexp);
  const ModelParams P = ModelParams::make(parse_field(o.field), o.p, o.N);
  EnsembleSpec spec;
  spec.kind = ensemble_from_name(o.ensemble);
  spec.seed = o.seed;
  spec.density = o.density;
  spec.beta = b;
  spec.set = parse_set(o.set_csv);
  const ParabolaFunction f = generate(spec, P);
  const double ratio = decoupling_ratio(f, b, pe, qe);
  const double bound = theorem_bound(pe, qe, b, P.bold_p(), double(P.q()));
  std::printf("ratio = %.12g\n", ratio);
  std::printf("bound = %.12g\n", bound);
  const bool ok = ratio <= bound * (1.0 + kIneqTol);
  std::printf("ratio <= bound: %s\n", ok ? "yes" : "NO");
  return ok ? 0 : 1;
}

int cmd_block(const CommonOpts& o, const std::string& beta) {
  require(!o.pexp.empty() && !o.qexp.empty(), Err::PARAM_MISSING, "block needs --pexp and --qexp");
  const double b = parse_fraction(beta);
  const double pe = parse_fraction(o.pexp), qe = parse_qexp(o.qexp);
  const ModelParams P = ModelParams::make(parse_field(o.field), o.p, o.N);
  EnsembleSpec spec;
  spec.kind = EnsembleKind::BLOCK;
  spec.beta = b;
  const ParabolaFunction f = generate(spec, P);
  const double ratio = decoupling_ratio(f, b, pe, qe);
  const double closed = block_ratio_closed_form(P, b, pe, qe);
  const double lower = block_lower_bound(P, b, pe, qe);
  std::printf("ratio       = %.12g\n", ratio);
  std::printf("closed_form = %.12g\n", closed);
  std::printf("lower_bound = %.12g\n", lower);
  const bool ok = std::abs(ratio - closed) <= 1e-9 * closed && ratio >= lower * (1.0 - 1e-9);
  std::printf("consistent: %s\n", ok ? "yes" : "NO");
  return ok ? 0 : 1;
}

int cmd_energy(const CommonOpts& o, const std::string& set_csv) {
  std::vector<u64> A = parse_set(set_csv);
  require(!A.empty(), Err::EMPTY_SET, "energy needs a nonempty --set");
  const RingPtr ring = make_ring(parse_field(o.field), o.p, 2 * o.N);
  for (u64& a : A) a %= ring->q();
  std::printf("%llu\n", static_cast<unsigned long long>(parabola_energy(A, ring)));
  return 0;
}

int cmd_optimize(const CommonOpts& o, const std::string& beta, unsigned restarts, u64 budget,
                 unsigned support_size, bool magnitude, const std::string& out) {
  require(!o.pexp.empty() && !o.qexp.empty(), Err::PARAM_MISSING,
          "optimize needs --pexp and --qexp");
  const ModelParams P = ModelParams::make(parse_field(o.field), o.p, o.N);
  SearchConfig cfg;
  cfg.beta = parse_fraction(beta);
  cfg.p_exp = parse_fraction(o.pexp);
  cfg.q_exp = parse_qexp(o.qexp);
  cfg.restarts = restarts;
  cfg.budget = budget;
  cfg.seed = o.seed;
  cfg.threads = o.threads;
  cfg.support_size = support_size;
  cfg.magnitude_moves = magnitude;
  const SearchResult res = maximize_ratio(P, cfg);
  const double bound = theorem_bound(cfg.p_exp, cfg.q_exp, cfg.beta, P.bold_p(), double(P.q()));
  std::printf("best_ratio    = %.12g (restart %u, %llu probes)\n", res.ratio, res.best_restart,
              static_cast<unsigned long long>(res.probes));
  std::printf("search_ratio  = %.12g\n", res.ratio_search);
  std::printf("theorem_bound = %.12g\n", bound);
  const bool ok = res.ratio <= bound * (1.0 + kIneqTol);
  std::printf("ratio <= bound: %s\n", ok ? "yes" : "NO");
  if (!out.empty()) {
    std::ofstream os(out);
    require(os.good(), Err::PARAM_MISSING, "cannot open output file " + out);
    os << "{\"record\":\"optimum\",\"ratio\":" << res.ratio
       << ",\"restart\":" << res.best_restart << ",\"probes\":" << res.probes << "}\n";
    for (std::size_t r = 0; r < res.restart_ratios.size(); ++r)
      os << "{\"record\":\"restart\",\"index\":" << r << ",\"ratio\":" << res.restart_ratios[r]
         << "}\n";
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact decoupling laboratory for the parabola over finite local rings"};
  app.require_subcommand(1);

  CommonOpts o;
  std::string check = "all", alpha_grid, beta = "1", out, mode, R = "729";
  std::string energy_set;
  double tol = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::string> params;
  unsigned restarts = 8, support_size = 0;
  u64 budget = 2000;
  bool magnitude = false;

  CLI::App* verify = app.add_subcommand("verify", "run registered checks over ensembles");
  add_model_flags(verify, o);
  add_ensemble_flags(verify, o);
  verify->add_option("--check", check, "check name or 'all'");
  verify->add_option("--beta", beta, "strip exponent, fraction or decimal");
  verify->add_option("--pexp", o.pexp, "Lebesgue exponent p");
  verify->add_option("--qexp", o.qexp, "sum exponent q, or 'inf'");
  verify->add_option("--alpha-grid", alpha_grid, "auto[:n] or lo:hi:n, geometric");
  verify->add_option("--tol", tol, "override the per-check tolerance");
  verify->add_option("--out", out, "write NDJSON records here");
  verify->add_option("--threads", o.threads, "worker threads over trials");
  verify->add_option("--mode", mode, "pruning thresholds: pruning | theorem");
  verify->add_option("--param", params, "extra check parameter key=value")->take_all();

  CLI::App* bound = app.add_subcommand("bound", "print the small cap theorem bound");
  bound->add_option("--p", o.p, "residue characteristic");
  bound->add_option("--R", R, "resolution, e.g. 3^32");
  bound->add_option("--beta", beta, "strip exponent");
  bound->add_option("--pexp", o.pexp, "Lebesgue exponent p");
  bound->add_option("--qexp", o.qexp, "sum exponent q, or 'inf'");

  CLI::App* ratio = app.add_subcommand("ratio", "decoupling ratio of one ensemble draw");
  add_model_flags(ratio, o);
  add_ensemble_flags(ratio, o);
  ratio->add_option("--beta", beta, "strip exponent");
  ratio->add_option("--pexp", o.pexp, "Lebesgue exponent p");
  ratio->add_option("--qexp", o.qexp, "sum exponent q, or 'inf'");

  CLI::App* block = app.add_subcommand("block", "block example against its closed form");
  add_model_flags(block, o);
  block->add_option("--beta", beta, "strip exponent");
  block->add_option("--pexp", o.pexp, "Lebesgue exponent p");
  block->add_option("--qexp", o.qexp, "sum exponent q, or 'inf'");

  CLI::App* energy = app.add_subcommand("energy", "parabola energy of an integer set");
  add_model_flags(energy, o);
  energy->add_option("--set", energy_set, "comma separated integers");

  CLI::App* optimize = app.add_subcommand("optimize", "search for large decoupling ratios");
  add_model_flags(optimize, o);
  optimize->add_option("--beta", beta, "strip exponent");
  optimize->add_option("--pexp", o.pexp, "Lebesgue exponent p");
  optimize->add_option("--qexp", o.qexp, "sum exponent q, or 'inf'");
  optimize->add_option("--restarts", restarts, "independent restarts");
  optimize->add_option("--budget", budget, "probe evaluations per restart");
  optimize->add_option("--seed", o.seed, "global seed");
  optimize->add_option("--threads", o.threads, "worker threads over restarts");
  optimize->add_option("--support-size", support_size, "restrict random restarts to this many frequencies");
  optimize->add_flag("--magnitude", magnitude, "allow magnitude moves");
  optimize->add_option("--out", out, "write restart summaries here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (verify->parsed())
      return cmd_verify(o, check, alpha_grid, beta, tol, out, mode, params);
    if (bound->parsed()) return cmd_bound(o.p, R, beta, o.pexp, o.qexp);
    if (ratio->parsed()) return cmd_ratio(o, beta);
    if (block->parsed()) return cmd_block(o, beta);
    if (energy->parsed()) return cmd_energy(o, energy_set);
    if (optimize->parsed())
      return cmd_optimize(o, beta, restarts, budget, support_size, magnitude, out);
  } catch (const declab::LabError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
