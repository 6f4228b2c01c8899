#pragma once

// Command-line front end. `run` takes the arguments after the program name
// and returns the process exit code:
//   0 success, 1 usage or input error, 2 campaign violations, 3 flagged only.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mixnorm/mixnorm.hpp"

namespace mixnorm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitViolations = 2;
inline constexpr int kExitFlagged = 3;

struct Options {
  std::uint64_t seed = kDefaultSeed;
  std::size_t trials = 1000;
  double tolerance = 1e-10;
  std::optional<unsigned> threads;
  std::string format;  // empty: per-subcommand default
  std::uint64_t budget = kDefaultExactBudget;
};

namespace detail {

using io::Format;
using io::Json;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Json read_json_file(const std::string& path) { return io::parse_json(read_file(path), path); }

inline Field parse_field(const std::string& s) {
  if (s == "real") return Field::real;
  if (s == "complex") return Field::complex;
  throw DomainError("unknown field '" + s + "' (real, complex)");
}

inline unsigned resolve_threads(const Options& o) {
  if (o.threads) return std::max(1U, *o.threads);
  if (const char* env = std::getenv("MIXNORM_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<unsigned>(v);
  }
  return 1;
}

inline Format format_or(const Options& o, Format fallback) {
  return o.format.empty() ? fallback : io::parse_format(o.format);
}

inline std::string csv_cell(double x) { return x == 0.0 ? "" : io::format_double(x); }

inline void write_constants(const std::vector<ConstantValue>& rows, Format format, std::ostream& out) {
  switch (format) {
    case Format::csv:
      out << "name,field,m,p,strategy,value\n";
      for (const auto& r : rows)
        out << r.name << "," << r.field << "," << (r.m ? std::to_string(r.m) : "") << "," << csv_cell(r.p) << ","
            << r.strategy << "," << io::format_double(r.value) << "\n";
      break;
    case Format::json: {
      Json a = Json::array();
      for (const auto& r : rows) {
        Json j;
        j["name"] = r.name;
        j["field"] = r.field;
        j["m"] = r.m;
        j["p"] = r.p;
        j["strategy"] = r.strategy;
        j["provenance"] = to_string(r.provenance);
        j["value"] = r.value;
        a.push_back(std::move(j));
      }
      out << a.dump(2) << "\n";
      break;
    }
    case Format::text:
      if (rows.size() == 1) {
        out << io::format_double(rows[0].value) << "\n";
      } else {
        for (const auto& r : rows) out << r.name << " " << io::format_double(r.value) << "\n";
      }
      break;
  }
}

struct ConstantsArgs {
  std::string family;
  std::string field = "real";
  int m = 2;
  double p = 0.0;
  std::string strategy;
  long long n = 0;
  int m_lo = 256;
  int m_hi = 16384;
};

inline BhStrategy parse_bh_strategy(const std::string& s) {
  if (s.empty() || s == "best") return BhStrategy::best();
  if (s == "davie") return BhStrategy::davie();
  if (s == "ps2012") return BhStrategy::ps2012();
  if (s.rfind("recursion:", 0) == 0) return BhStrategy::recursion(std::stoi(s.substr(10)));
  throw DomainError("unknown strategy '" + s + "' (best, davie, ps2012, recursion:K)");
}

inline std::vector<ConstantValue> compute_constants(const ConstantsArgs& a) {
  const auto field = parse_field(a.field);
  const std::string fs = to_string(field);
  std::vector<ConstantValue> rows;
  if (a.family == "khinchine") {
    rows.push_back({"khinchine", khinchine_constant(field, a.p), Provenance::formula, fs, 0, a.p, ""});
  } else if (a.family == "p0") {
    rows.push_back({"khinchine_p0", khinchine_p0(), Provenance::formula, "", 0, 0.0, "bisection"});
  } else if (a.family == "bh") {
    const auto s = parse_bh_strategy(a.strategy);
    const auto prov = s.kind == BhStrategy::Kind::recursion ? Provenance::recursion : Provenance::formula;
    rows.push_back({"bh_mult_upper", bh_mult_upper(field, a.m, s), prov, fs, a.m, 0.0, s.to_string()});
  } else if (a.family == "bh_growth") {
    const auto s = parse_bh_strategy(a.strategy);
    rows.push_back({"bh_growth_slope", bh_growth_fit(field, a.m_lo, a.m_hi, s), Provenance::formula, fs, 0, 0.0,
                    s.to_string()});
  } else if (a.family == "polynomial_bh") {
    const bool pol = a.strategy == "polarization";
    if (!a.strategy.empty() && !pol && a.strategy != "original")
      throw DomainError("unknown strategy '" + a.strategy + "' (original, polarization)");
    const auto s = pol ? PolynomialBhStrategy::polarization : PolynomialBhStrategy::original;
    rows.push_back({"polynomial_bh_upper", polynomial_bh_upper(a.m, s, field), Provenance::formula,
                    pol ? fs : "complex", a.m, 0.0, pol ? "polarization" : "original"});
  } else if (a.family == "hl") {
    rows.push_back({"hl_constant_upper", hl_constant_upper(field, a.m, a.p), Provenance::formula, fs, a.m, a.p, ""});
  } else if (a.family == "bohr") {
    if (a.n == 1) {
      rows.push_back({"bohr_radius", bohr_radius_one(), Provenance::literature, "complex", 1, 0.0, ""});
    } else {
      const auto b = bohr_radius_bounds(a.n);
      const int n = static_cast<int>(std::min<long long>(a.n, std::numeric_limits<int>::max()));
      rows.push_back({"bohr_lower", b.lower, Provenance::formula, "complex", n, 0.0,
                      b.lower_is_asymptotic ? "asymptotic" : "rigorous"});
      rows.push_back({"bohr_upper", b.upper, Provenance::formula, "complex", n, 0.0,
                      b.upper_clamped ? "clamped" : ""});
    }
  } else if (a.family == "gamma") {
    rows.push_back({"euler_gamma", euler_gamma(), Provenance::literature, "", 0, 0.0, ""});
  } else {
    throw DomainError("unknown family '" + a.family + "' (khinchine, p0, bh, bh_growth, polynomial_bh, hl, bohr, gamma)");
  }
  return rows;
}

struct VerifyArgs {
  std::string campaign;
  int m = 2;
  int n = 4;
  std::string field = "real";
  double p = 4.0;
  int k = 1;
  double s = 1.0;
  double q = 2.0;
  double s1 = 1.0;
  double s2 = 1.0;
  std::size_t restarts = 50;
};

inline VerificationReport run_verify(const VerifyArgs& a, const Options& o) {
  TrialConfig cfg;
  cfg.seed = o.seed;
  cfg.trials = o.trials;
  cfg.m = a.m;
  cfg.n = a.n;
  cfg.field = parse_field(a.field);
  cfg.tolerance = o.tolerance;
  cfg.threads = resolve_threads(o);
  cfg.budget = o.budget;
  const auto& c = a.campaign;
  if (c == "mixed_holder") return verify_mixed_holder(cfg);
  if (c == "interpolative_holder") return verify_interpolative_holder(cfg);
  if (c == "corollary_rho") return verify_corollary_rho(cfg, a.k, a.s, a.q);
  if (c == "blei") return verify_blei(cfg, a.q, a.s1, a.s2);
  if (c == "blei_random") return verify_blei_random(cfg);
  if (c == "minkowski") return verify_minkowski(cfg);
  if (c == "littlewood") return littlewood_campaign(cfg);
  if (c == "bh") return bh_campaign(cfg);
  if (c == "hl") return hl_campaign(cfg, a.p, a.restarts);
  if (c == "polarization") return verify_polarization(cfg).norm_check;
  throw DomainError("unknown campaign '" + c +
                    "' (mixed_holder, interpolative_holder, corollary_rho, blei, blei_random, minkowski, "
                    "littlewood, bh, hl, polarization)");
}

inline int report_exit_code(const VerificationReport& r) {
  if (!r.violations.empty()) return kExitViolations;
  if (!r.flagged.empty()) return kExitFlagged;
  return kExitOk;
}

struct NormArgs {
  std::string tensor_path;
  std::string exponents;
  std::string kind = "mixed";
  std::size_t restarts = 50;
};

template <Scalar S>
Json norm_of(const Tensor<S>& t, const NormArgs& a, const Options& o) {
  Json j;
  j["kind"] = a.kind;
  auto exps = [&] {
    if (a.exponents.empty()) throw DomainError("--exponents is required for kind '" + a.kind + "'");
    return io::exponents_from_json(io::parse_json(a.exponents, "--exponents"), "--exponents");
  };
  if (a.kind == "mixed") {
    const auto q = exps();
    j["exponents"] = io::exponents_to_json(q);
    j["value"] = mixed_norm(t, q);
  } else if (a.kind == "entry") {
    const auto q = exps();
    if (q.size() != 1) throw DomainError("kind 'entry' takes a single exponent");
    j["exponents"] = io::exponents_to_json(q);
    j["value"] = entry_norm(t, q[0]);
  } else if (a.kind == "linf") {
    const auto r = sup_norm_linf_exact_argmax(MultilinearForm<S>(t), o.budget);
    j["value"] = r.value;
    j["arguments"] = r.arguments;
  } else if (a.kind == "ball") {
    const auto q = exps();
    EstimatorOptions opts;
    opts.restarts = a.restarts;
    opts.seed = o.seed;
    const auto r = sup_norm_ball_estimate(MultilinearForm<S>(t), q, opts);
    j["exponents"] = io::exponents_to_json(q);
    j["value"] = r.value;
    j["lower_bound"] = true;
  } else {
    throw DomainError("unknown kind '" + a.kind + "' (mixed, entry, linf, ball)");
  }
  return j;
}

inline std::vector<int> parse_int_list(const std::string& text, const std::string& what) {
  const auto j = io::parse_json(text, what);
  if (!j.is_array()) throw SchemaError(what + ": expected an array of integers");
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number_integer() || j[i].get<long long>() < 1)
      throw SchemaError(what + "[" + std::to_string(i) + "]: expected a positive integer");
    out.push_back(j[i].get<int>());
  }
  return out;
}

inline Json witness_json(const KszWitness& w) {
  Json j;
  j["trial"] = w.trial;
  j["norm"] = w.norm;
  j["accepted"] = w.accepted();
  j["signs"] = io::tensor_to_json(w.signs);
  return j;
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using detail::Format;
  using detail::Json;

  CLI::App app{"Mixed-norm inequalities and constants", "mixnorm"};
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  std::optional<unsigned> threads;
  app.add_option("--seed", o.seed, "Master seed (default 1889)");
  app.add_option("--trials", o.trials, "Number of random trials")->check(CLI::PositiveNumber);
  app.add_option("--tol", o.tolerance, "Relative tolerance for campaign checks")->check(CLI::PositiveNumber);
  app.add_option("--threads", threads, "Worker threads (falls back to MIXNORM_THREADS, then 1)");
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--budget", o.budget, "Maximum sign patterns for exact norms (default 2^24)");

  detail::NormArgs norm;
  auto* norm_cmd = app.add_subcommand("norm", "Mixed, entry, exact l_inf or l_p-ball norm of a tensor");
  norm_cmd->add_option("--tensor", norm.tensor_path, "Tensor JSON file")->required();
  norm_cmd->add_option("--exponents", norm.exponents, "Exponent tuple, e.g. \"[2,1]\" or \"[\\\"inf\\\",2]\"");
  norm_cmd->add_option("--kind", norm.kind, "mixed (default), entry, linf or ball");
  norm_cmd->add_option("--restarts", norm.restarts, "Restarts for kind=ball");

  std::string target, candidates;
  auto* interp_cmd = app.add_subcommand("interpolate", "Weights θ with 1/q = Σ θ_k/q(k)");
  interp_cmd->add_option("--target", target, "Target exponent tuple (JSON array)")->required();
  interp_cmd->add_option("--candidates", candidates, "Array of candidate tuples (JSON)")->required();

  detail::ConstantsArgs consts;
  auto* const_cmd = app.add_subcommand("constants", "Closed-form and recursive constants");
  const_cmd->add_option("--family", consts.family, "khinchine, p0, bh, bh_growth, polynomial_bh, hl, bohr, gamma")
      ->required();
  const_cmd->add_option("--field", consts.field, "real or complex");
  const_cmd->add_option("--m", consts.m, "Degree / number of arguments");
  const_cmd->add_option("--p", consts.p, "Exponent p");
  const_cmd->add_option("--strategy", consts.strategy, "Bound strategy");
  const_cmd->add_option("--n", consts.n, "Dimension (bohr)");
  const_cmd->add_option("--m-lo", consts.m_lo, "Smallest m for bh_growth");
  const_cmd->add_option("--m-hi", consts.m_hi, "Largest m for bh_growth");

  detail::VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Seeded random verification campaign");
  verify_cmd->add_option("--campaign", verify.campaign, "Campaign name")->required();
  verify_cmd->add_option("--m", verify.m, "Order (maximum or fixed, by campaign)");
  verify_cmd->add_option("--n", verify.n, "Maximum extent");
  verify_cmd->add_option("--field", verify.field, "real or complex");
  verify_cmd->add_option("--p", verify.p, "Domain exponent (hl)");
  verify_cmd->add_option("--k", verify.k, "Subset size (corollary_rho)");
  verify_cmd->add_option("--s", verify.s, "Outer exponent (corollary_rho)");
  verify_cmd->add_option("--q", verify.q, "Inner exponent (corollary_rho, blei)");
  verify_cmd->add_option("--s1", verify.s1, "Row exponent (blei)");
  verify_cmd->add_option("--s2", verify.s2, "Column exponent (blei)");
  verify_cmd->add_option("--restarts", verify.restarts, "Estimator restarts (hl)");

  int ksz_m = 2, ksz_n = 4;
  auto* ksz_cmd = app.add_subcommand("ksz", "Search for random ±1 forms below the KSZ bound");
  ksz_cmd->add_option("--m", ksz_m, "Order")->check(CLI::PositiveNumber);
  ksz_cmd->add_option("--n", ksz_n, "Side length")->check(CLI::PositiveNumber);

  int scan_m = 2;
  double scan_q = 4.0 / 3.0;
  std::string n_list = "[4,5,6,7,8,9,10]";
  auto* scan_cmd = app.add_subcommand("scan", "Exponent optimality scan over n");
  scan_cmd->add_option("--m", scan_m, "Order")->check(CLI::PositiveNumber);
  scan_cmd->add_option("--q", scan_q, "Exponent q >= 1");
  scan_cmd->add_option("--n-list", n_list, "JSON array of side lengths");

  std::string game_path;
  bool game_random = false;
  int game_m = 2, game_n = 2;
  auto* game_cmd = app.add_subcommand("game", "Classical bias of an XOR game and the Montanaro chain");
  game_cmd->add_option("--input", game_path, "XorGame JSON file");
  game_cmd->add_flag("--random", game_random, "Draw a random game from --seed instead");
  game_cmd->add_option("--m", game_m, "Players (with --random)")->check(CLI::PositiveNumber);
  game_cmd->add_option("--n", game_n, "Questions per player (with --random)")->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  o.threads = threads;

  try {
    const auto t0 = std::chrono::steady_clock::now();
    if (*norm_cmd) {
      const auto tensor = io::tensor_from_json(detail::read_json_file(norm.tensor_path));
      const auto j = std::visit([&](const auto& t) { return detail::norm_of(t, norm, o); }, tensor);
      switch (detail::format_or(o, Format::text)) {
        case Format::text: out << io::format_double(j["value"].get<double>()) << "\n"; break;
        case Format::json: out << j.dump(2) << "\n"; break;
        case Format::csv: out << "kind,value\n" << norm.kind << "," << io::format_double(j["value"].get<double>()) << "\n"; break;
      }
      return kExitOk;
    }
    if (*interp_cmd) {
      const auto tq = io::exponents_from_json(io::parse_json(target, "--target"), "--target");
      const auto cj = io::parse_json(candidates, "--candidates");
      if (!cj.is_array()) throw SchemaError("--candidates: expected an array of exponent tuples");
      std::vector<ExponentTuple> cs;
      for (std::size_t i = 0; i < cj.size(); ++i)
        cs.push_back(io::exponents_from_json(cj[i], "--candidates[" + std::to_string(i) + "]"));
      const auto theta = interpolation_weights(tq, cs);
      Json j;
      j["feasible"] = theta.has_value();
      if (theta) {
        j["theta"] = std::vector<double>(theta->values().begin(), theta->values().end());
        j["residual"] = interpolation_residual(tq, cs, theta->values());
      }
      switch (detail::format_or(o, Format::json)) {
        case Format::json: out << j.dump() << "\n"; break;
        case Format::csv:
          out << "k,theta\n";
          if (theta)
            for (std::size_t k = 0; k < theta->size(); ++k) out << k << "," << io::format_double((*theta)[k]) << "\n";
          break;
        case Format::text:
          if (!theta) {
            out << "INFEASIBLE\n";
          } else {
            for (std::size_t k = 0; k < theta->size(); ++k) out << (k ? " " : "") << io::format_double((*theta)[k]);
            out << "\n";
          }
          break;
      }
      return kExitOk;
    }
    if (*const_cmd) {
      detail::write_constants(detail::compute_constants(consts), detail::format_or(o, Format::csv), out);
      return kExitOk;
    }
    if (*verify_cmd) {
      const auto report = detail::run_verify(verify, o);
      out << io::emit_report(report, detail::format_or(o, Format::text));
      return detail::report_exit_code(report);
    }
    if (*ksz_cmd) {
      const auto r = ksz_search(ksz_m, ksz_n, o.trials, o.seed, o.budget);
      const auto bound = ksz_bound(ksz_m, ksz_n);
      switch (detail::format_or(o, Format::json)) {
        case Format::json: {
          Json j;
          j["m"] = ksz_m;
          j["n"] = ksz_n;
          j["seed"] = o.seed;
          j["trials"] = r.trials;
          j["bound"] = bound;
          j["bound_factorial"] = "m";
          j["accepted"] = r.accepted;
          j["acceptance_rate"] = r.acceptance_rate();
          j["max_norm"] = r.max_norm;
          j["first"] = r.first ? detail::witness_json(*r.first) : Json(nullptr);
          j["best"] = detail::witness_json(*r.best);
          out << j.dump(2) << "\n";
          break;
        }
        case Format::csv:
          out << "m,n,seed,trials,bound,accepted,acceptance_rate,max_norm,best_norm\n"
              << ksz_m << "," << ksz_n << "," << o.seed << "," << r.trials << "," << io::format_double(bound) << ","
              << r.accepted << "," << io::format_double(r.acceptance_rate()) << "," << io::format_double(r.max_norm)
              << "," << io::format_double(r.best->norm) << "\n";
          break;
        case Format::text:
          out << "m=" << ksz_m << " n=" << ksz_n << " seed=" << o.seed << "\n"
              << "bound (sqrt(m!) form): " << io::format_double(bound) << "\n"
              << "accepted: " << r.accepted << "/" << r.trials << "\n"
              << "max norm: " << io::format_double(r.max_norm) << "\n"
              << "best norm: " << io::format_double(r.best->norm) << " (trial " << r.best->trial << ")\n";
          break;
      }
      out << io::elapsed_line(detail::seconds_since(t0));
      return kExitOk;
    }
    if (*scan_cmd) {
      const auto ns = detail::parse_int_list(n_list, "--n-list");
      const auto rows = exponent_optimality_scan(scan_m, scan_q, ns, o.seed);
      const double slope = rows.size() >= 2 ? scan_slope(rows) : 0.0;
      switch (detail::format_or(o, Format::csv)) {
        case Format::csv:
          out << "n,lhs,bound,witness_norm,lhs_over_bound,lhs_over_norm\n";
          for (const auto& r : rows)
            out << r.n << "," << io::format_double(r.lhs) << "," << io::format_double(r.bound) << ","
                << io::format_double(r.witness_norm) << "," << io::format_double(r.lhs_over_bound) << ","
                << io::format_double(r.lhs_over_norm) << "\n";
          out << "slope,,,,," << io::format_double(slope) << "\n";
          break;
        case Format::json: {
          Json j;
          j["m"] = scan_m;
          j["q"] = scan_q;
          j["seed"] = o.seed;
          Json a = Json::array();
          for (const auto& r : rows)
            a.push_back(Json{{"n", r.n},
                             {"lhs", r.lhs},
                             {"bound", r.bound},
                             {"witness_norm", r.witness_norm},
                             {"lhs_over_bound", r.lhs_over_bound},
                             {"lhs_over_norm", r.lhs_over_norm}});
          j["rows"] = std::move(a);
          j["slope"] = slope;
          out << j.dump(2) << "\n";
          break;
        }
        case Format::text:
          for (const auto& r : rows)
            out << "n=" << r.n << " lhs/bound=" << io::format_double(r.lhs_over_bound) << "\n";
          out << "log-log slope: " << io::format_double(slope) << "\n";
          break;
      }
      out << io::elapsed_line(detail::seconds_since(t0));
      return kExitOk;
    }
    if (*game_cmd) {
      if (game_path.empty() == !game_random) throw DomainError("game: give exactly one of --input or --random");
      std::optional<XorGame> game;
      if (game_random) {
        auto rng = CounterRng::stream(o.seed, 0);
        game = random_xor_game(game_m, game_n, rng);
      } else {
        game = io::game_from_json(detail::read_json_file(game_path));
      }
      const auto c = montanaro_check(*game, o.budget);
      Json j;
      j["beta"] = c.beta;
      j["chain_ok"] = c.ok;
      j["chain_lhs"] = c.chain_lhs;
      j["chain_rhs"] = c.chain_rhs;
      j["bh_constant"] = bh_mult_upper(Field::real, game->players());
      j["m"] = game->players();
      j["n"] = game->questions();
      if (game_random) j["game"] = io::game_to_json(*game);
      switch (detail::format_or(o, Format::json)) {
        case Format::json: out << j.dump() << "\n"; break;
        case Format::csv:
          out << "m,n,beta,chain_lhs,chain_rhs,chain_ok\n"
              << game->players() << "," << game->questions() << "," << io::format_double(c.beta) << ","
              << io::format_double(c.chain_lhs) << "," << io::format_double(c.chain_rhs) << ","
              << (c.ok ? "true" : "false") << "\n";
          break;
        case Format::text:
          out << "beta: " << io::format_double(c.beta) << "\n"
              << "chain: " << io::format_double(c.chain_lhs) << " <= " << io::format_double(c.chain_rhs)
              << (c.ok ? " ok" : " FAILED") << "\n";
          break;
      }
      return c.ok ? kExitOk : kExitViolations;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace mixnorm::cli
