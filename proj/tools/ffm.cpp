#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ffm/bounds.hpp"
#include "ffm/characters.hpp"
#include "ffm/errors.hpp"
#include "ffm/eulerprod.hpp"
#include "ffm/ffpoly.hpp"
#include "ffm/lfun.hpp"
#include "ffm/moments.hpp"
#include "ffm/verify.hpp"

#ifndef FFM_VERSION
#define FFM_VERSION "0.0.0"
#endif

namespace {

using nlohmann::ordered_json;
namespace ep = ffm::eulerprod;

struct RunConfig {
  std::uint32_t q = 5;
  unsigned g = 1;
  unsigned cutoff = 20;
  unsigned precision = ep::kDefaultPrecisionBits;
  unsigned shards = 1;
  unsigned workers = 1;
  std::string cache_dir;
  std::string out;
  std::uint64_t budget = 0;
};

class VerificationFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string fixed(long double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17Le", x);
  return buf;
}

std::string real_string(const ep::Real& x) { return x.str(40, std::ios_base::scientific); }

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ordered_json meta(const RunConfig& c) {
  return {{"q", c.q}, {"g", c.g}, {"N", c.cutoff}, {"precision", c.precision}, {"version", FFM_VERSION}};
}

void emit(const RunConfig& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + c.out);
  f << text;
}

void emit_json(const RunConfig& c, ordered_json body) {
  auto m = meta(c);
  m["content_hash"] = hex(fnv1a(body.dump()));
  ordered_json doc;
  doc["meta"] = std::move(m);
  for (auto& [k, v] : body.items()) doc[k] = std::move(v);
  emit(c, doc.dump(2) + "\n");
}

std::string csv_line(const std::vector<std::string>& cells) {
  std::string s;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) s += ',';
    s += cells[i];
  }
  return s + "\n";
}

void emit_csv(const RunConfig& c, const std::vector<std::string>& columns,
              const std::vector<std::vector<std::string>>& rows) {
  std::string body = csv_line(columns);
  for (const auto& r : rows) body += csv_line(r);
  const auto m = meta(c);
  std::string head;
  for (const auto& [k, v] : m.items()) head += "# " + k + "=" + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
  head += "# content_hash=" + hex(fnv1a(body)) + "\n";
  emit(c, head + body);
}

void validate(const RunConfig& c) {
  if (!ffm::ffpoly::is_prime(c.q) || c.q % 4 != 1)
    throw ffm::InvalidArgument("q must be a prime congruent to 1 mod 4, got " + std::to_string(c.q));
  if (c.g < 1) throw ffm::InvalidArgument("g must be at least 1");
  if (c.precision < 64) throw ffm::InvalidArgument("precision must be at least 64 bits");
  if (c.budget) ffm::ffpoly::set_enumeration_budget(c.budget);
}

ffm::moments::SweepOptions sweep_options(const RunConfig& c) {
  ffm::moments::SweepOptions o;
  o.cache_dir = c.cache_dir;
  o.shards = std::max(1u, c.shards);
  o.workers = std::max(1u, c.workers);
  return o;
}

ordered_json suite_json(const ffm::verify::SuiteResult& s) {
  return {{"suite", s.name},       {"cases", s.cases},   {"failures", s.failures},
          {"failing_inputs", s.failing_inputs}, {"worst", fixed(s.worst)}, {"detail", s.detail}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quadratic L-functions over F_q[x]: ensembles, moments, constants and checks"};
  app.set_version_flag("--version", FFM_VERSION);
  app.set_config("--config", "", "key = value configuration file; flags override it");
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  if (const char* env = std::getenv("FFM_CACHE_DIR")) cfg.cache_dir = env;
  app.add_option("--q", cfg.q, "field size, prime and 1 mod 4")->capture_default_str();
  app.add_option("--g", cfg.g, "genus")->capture_default_str();
  app.add_option("--cutoff", cfg.cutoff, "Euler product cutoff degree N")->capture_default_str();
  app.add_option("--precision", cfg.precision, "working precision in bits")->capture_default_str();
  app.add_option("--shards", cfg.shards, "ensemble shards")->capture_default_str();
  app.add_option("--workers", cfg.workers, "worker threads")->capture_default_str();
  app.add_option("--cache-dir", cfg.cache_dir, "shard cache directory (default: $FFM_CACHE_DIR)");
  app.add_option("--out", cfg.out, "output file (default: stdout)");
  app.add_option("--budget", cfg.budget, "enumeration budget in items");

  // moment
  auto* moment = app.add_subcommand("moment", "sum of L(1/2)^k over H_{2g+1}, exact in Q(sqrt q); JSON");
  unsigned k = 4;
  std::optional<double> theta;
  unsigned nodes = 32;
  moment->add_option("--k", k, "even power")->capture_default_str();
  moment->add_option("--theta", theta, "also report the shifted moment at u = q^{-1/2} e^{i theta}");
  moment->add_option("--nodes", nodes, "quadrature nodes for the conjectured value (k = 4)")->capture_default_str();

  // lpoly
  auto* lpoly = app.add_subcommand("lpoly", "L-polynomial, central value and zeros of one D; JSON");
  std::string D_digits;
  std::optional<std::uint64_t> D_code;
  auto* dopt = lpoly->add_option("--D", D_digits, "D as base-q digits, constant term first");
  lpoly->add_option("--code", D_code, "D as integer code")->excludes(dopt);

  // coeffs
  auto* coeffs = app.add_subcommand("coeffs", "Euler product constants, a and b coefficients; JSON");

  // conjecture
  auto* conj = app.add_subcommand("conjecture", "the 11 coefficients of Q; JSON");
  double radius = 0.05;
  conj->add_option("--nodes", nodes, "quadrature nodes per circle")->capture_default_str();
  conj->add_option("--radius", radius, "contour radius")->capture_default_str();

  // compare
  auto* compare = app.add_subcommand("compare", "exact fourth moment against the three-term polynomial and Q");
  unsigned g_max = 3;
  compare->add_option("--g-max", g_max, "largest genus")->capture_default_str();
  compare->add_option("--nodes", nodes, "quadrature nodes for Q")->capture_default_str();
  compare->footer("CSV columns: g,exact,theory,conjecture_scaled,conjecture_sum,exact_over_theory,"
                  "exact_over_scaled,exact_over_sum");

  // verify
  auto* ver = app.add_subcommand("verify", "run one verification suite; exit 1 on any failure");
  std::string suite;
  unsigned max_deg = 5, max_m = 5, grid = 10000, samples = 50;
  std::vector<unsigned> Ns = {5, 10, 20};
  std::vector<double> alphas = {0.5, 0.75, 1.0};
  std::string trig_suite;
  double tol = 1e-8;
  ver->add_option("check", suite, "afe fe poisson gauss sumd pv explicit logmod minorant f1 euler coeffs conjecture trig")
      ->required()
      ->check(CLI::IsMember({"afe", "fe", "poisson", "gauss", "sumd", "pv", "explicit", "logmod", "minorant", "f1",
                             "euler", "coeffs", "conjecture", "trig"}));
  ver->add_option("--max-deg", max_deg, "degree bound (poisson, gauss: 2 for P, sumd, pv)");
  ver->add_option("--max-m", max_m, "largest m (poisson)");
  ver->add_option("--N", Ns, "minorant degrees");
  ver->add_option("--alpha", alphas, "minorant alphas");
  ver->add_option("--grid", grid, "minorant grid size");
  ver->add_option("--samples", samples, "sampled D in H_5 (explicit)");
  ver->add_option("--nodes", nodes, "quadrature nodes (conjecture)");
  ver->add_option("--radius", radius, "contour radius (conjecture)");
  ver->add_option("--tol", tol, "node-doubling tolerance (conjecture)");
  ver->add_option("--suite", trig_suite, "trig suite")->check(CLI::IsMember(ffm::verify::trig_suites()));
  ver->footer("Without --out a summary is printed. With --out the suite's rows are written as CSV "
              "(trig: parameters,direct,closed,remainder; minorant: N,alpha,max_violation,argmax,rhat0).");

  // export
  auto* exp = app.add_subcommand("export", "per-D central values over H_{2g+1}");
  exp->footer("CSV columns: D_code,g,a,b with L(1/2) = a + b sqrt(q), exact fractions");

  // bounds-report
  auto* br = app.add_subcommand("bounds-report", "log|L(alpha)| against the minorant bound over H_{2g+1}");
  br->add_option("--alpha", alphas, "alphas")->capture_default_str();
  br->footer("CSV columns: D_code,alpha,N,lhs,explicit_rhs,gap,at_zero,preset_bound");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    validate(cfg);
    if (*moment) {
      if (k % 2) throw ffm::InvalidArgument("k must be even");
      const auto ens = ffm::moments::ensemble_sweep(cfg.q, cfg.g, sweep_options(cfg));
      auto rep = ffm::moments::kth_moment(ens, cfg.q, cfg.g, k);
      ordered_json j;
      j["k"] = k;
      j["ensemble_size"] = rep.ensemble_size;
      j["exact_sum"] = {{"a", rep.exact_sum.a_string()}, {"b", rep.exact_sum.b_string()}};
      j["value"] = fixed(rep.float_value);
      if (k == 4) {
        ep::PrecisionGuard guard(cfg.precision);
        const auto cs = ep::coefficients(cfg.q, cfg.cutoff);
        const auto Q = ep::conjecture_Q(cfg.q, cfg.cutoff, nodes, 0.05, cfg.workers);
        rep.theory_polynomial = static_cast<long double>(ep::theory_fourth_moment(cs, cfg.g));
        rep.theory_conjecture = ep::conjectured_fourth_moment(Q, cfg.g);
        j["theory_polynomial"] = fixed(*rep.theory_polynomial);
        j["theory_conjecture"] = fixed(*rep.theory_conjecture);
      }
      if (theta) {
        const auto p = ffm::moments::shifted_moment(ens, cfg.g, *theta, k);
        j["shifted"] = {{"theta", fixed(p.theta)}, {"value", fixed(p.value)}, {"M", fixed(p.M)}, {"V", fixed(p.V)}};
      }
      std::cerr << "elapsed " << rep.elapsed_seconds << " s\n";
      emit_json(cfg, j);
    } else if (*lpoly) {
      if (D_digits.empty() && !D_code) throw ffm::InvalidArgument("give --D or --code");
      const auto D = D_code ? ffm::ffpoly::Polynomial::from_code(cfg.q, *D_code)
                            : ffm::ffpoly::Polynomial::from_digits(cfg.q, D_digits);
      const auto L = ffm::lfun::compute_L(D);
      cfg.g = static_cast<unsigned>(L.g());
      const auto v = ffm::lfun::value_at_half(L);
      const auto zs = ffm::lfun::zeros(L);
      std::vector<std::string> thetas;
      for (double t : zs.thetas) thetas.push_back(fixed(t));
      emit_json(cfg, {{"D", D.digits()},
                      {"D_code", D.code()},
                      {"coefficients", L.coeffs()},
                      {"symmetric", L.symmetric()},
                      {"value_at_half", {{"a", v.a_string()}, {"b", v.b_string()}}},
                      {"zero_angles", thetas},
                      {"max_modulus_deviation", fixed(zs.max_modulus_deviation)}});
    } else if (*coeffs) {
      ep::PrecisionGuard guard(cfg.precision);
      const auto cs = ep::coefficients(cfg.q, cfg.cutoff);
      ordered_json c;
      for (const auto& [name, val] : std::vector<std::pair<std::string, const ep::Real*>>{
               {"zeta2", &cs.zeta2}, {"A", &cs.A},     {"a", &cs.a},     {"h", &cs.h},     {"b", &cs.b},
               {"e", &cs.e},         {"r", &cs.r},     {"f", &cs.f},     {"H", &cs.H},     {"Hw", &cs.Hw},
               {"Hww", &cs.Hww},     {"C", &cs.C},     {"Cw", &cs.Cw},   {"Cx", &cs.Cx},   {"Cww", &cs.Cww},
               {"Cxx", &cs.Cxx},     {"Cxw", &cs.Cxw}, {"a10", &cs.a10}, {"a9", &cs.a9},   {"a8", &cs.a8},
               {"b10", &cs.b10},     {"b9", &cs.b9},   {"b8", &cs.b8}})
        c[name] = real_string(*val);
      ordered_json ids;
      for (const auto& [name, val] : std::vector<std::pair<std::string, const ep::Real*>>{
               {"Hw", &cs.id_Hw},     {"Hww", &cs.id_Hww}, {"Cw", &cs.id_Cw}, {"Cw_literal", &cs.id_Cw_literal},
               {"Cx", &cs.id_Cx},     {"Cww", &cs.id_Cww}, {"Cxx", &cs.id_Cxx}, {"Cxw", &cs.id_Cxw},
               {"combination", &cs.id_combination}, {"zeta1", &cs.id_zeta1}, {"zeta2", &cs.id_zeta2}})
        ids[name] = real_string(*val);
      const ep::Real tol = 1e-8;
      emit_json(cfg, {{"constants", c},
                      {"tail_bound", real_string(cs.tail_bound)},
                      {"identity_residuals", ids},
                      {"a_equals_b", {{"10", cs.rel_diff_10() <= tol}, {"9", cs.rel_diff_9() <= tol},
                                      {"8", cs.rel_diff_8() <= tol}}},
                      {"relative_differences", {{"10", real_string(cs.rel_diff_10())},
                                                {"9", real_string(cs.rel_diff_9())},
                                                {"8", real_string(cs.rel_diff_8())}}}});
    } else if (*conj) {
      const auto Q = ep::conjecture_Q(cfg.q, cfg.cutoff, nodes, radius, cfg.workers);
      std::vector<std::string> xs, gs, be;
      for (double v : Q.x_coeffs) xs.push_back(fixed(v));
      for (double v : Q.g_coeffs) gs.push_back(fixed(v));
      for (double v : Q.b_rel_error) be.push_back(fixed(v));
      emit_json(cfg, {{"nodes", nodes},
                      {"radius", fixed(radius)},
                      {"x_coefficients", xs},
                      {"g_coefficients_over_zeta2", gs},
                      {"b_rel_error", be},
                      {"self_consistent", Q.self_consistent}});
    } else if (*compare) {
      const auto rows = ffm::verify::compare_table(cfg.q, g_max, cfg.cutoff, nodes, cfg.workers);
      std::vector<std::vector<std::string>> out;
      for (const auto& r : rows)
        out.push_back({std::to_string(r.g), fixed(r.exact), fixed(r.theory), fixed(r.conjecture_scaled),
                       fixed(r.conjecture_sum), fixed(r.exact / r.theory), fixed(r.exact / r.conjecture_scaled),
                       fixed(r.exact / r.conjecture_sum)});
      cfg.g = g_max;
      emit_csv(cfg,
               {"g", "exact", "theory", "conjecture_scaled", "conjecture_sum", "exact_over_theory", "exact_over_scaled",
                "exact_over_sum"},
               out);
    } else if (*ver) {
      namespace v = ffm::verify;
      v::SuiteResult r;
      std::vector<long double> la(alphas.begin(), alphas.end());
      if (suite == "afe") r = v::afe(cfg.q, cfg.g);
      else if (suite == "fe") r = v::fe_rh(cfg.q, cfg.g);
      else if (suite == "poisson") r = v::poisson(cfg.q, max_deg, max_m);
      else if (suite == "gauss") r = v::gauss(cfg.q, std::min(max_deg, 2u), 4);
      else if (suite == "sumd") r = v::sumd(cfg.q, cfg.g, std::min(max_deg, 4u));
      else if (suite == "pv") r = v::polya_vinogradov(cfg.q, max_deg);
      else if (suite == "explicit") r = v::explicit_formula(cfg.q, samples);
      else if (suite == "logmod") r = v::log_modulus(cfg.q);
      else if (suite == "minorant") r = v::minorant(cfg.q, Ns, la, grid);
      else if (suite == "f1") r = v::f1_dual_path(cfg.q);
      else if (suite == "euler") r = v::euler_chain(cfg.q, cfg.cutoff, cfg.precision);
      else if (suite == "coeffs") r = v::coefficients({cfg.q}, cfg.cutoff);
      else if (suite == "conjecture") r = v::conjecture(cfg.q, cfg.cutoff, nodes, radius, tol, cfg.workers);
      else {
        if (trig_suite.empty()) throw ffm::InvalidArgument("verify trig needs --suite");
        r = v::trig(trig_suite);
      }
      if (!cfg.out.empty() && !r.columns.empty()) emit_csv(cfg, r.columns, r.rows);
      auto j = suite_json(r);
      std::cout << j.dump(2) << "\n";
      std::cerr << "elapsed " << r.elapsed_seconds << " s\n";
      if (!r.passed()) throw VerificationFailed(r.name + ": " + std::to_string(r.failures) + " failures");
    } else if (*exp) {
      const auto ens = ffm::moments::ensemble_sweep(cfg.q, cfg.g, sweep_options(cfg));
      std::vector<std::vector<std::string>> rows;
      rows.reserve(ens.size());
      for (const auto& L : ens) {
        const auto val = ffm::lfun::value_at_half(L);
        rows.push_back({std::to_string(L.D().code()), std::to_string(L.g()), val.a_string(), val.b_string()});
      }
      emit_csv(cfg, {"D_code", "g", "a", "b"}, rows);
    } else if (*br) {
      std::vector<std::vector<std::string>> rows;
      const auto ens = ffm::moments::ensemble_sweep(cfg.q, cfg.g, sweep_options(cfg));
      for (double a : alphas) {
        const auto preset = ffm::bounds::ubalfa_preset(cfg.q, cfg.g, a);
        for (const auto& L : ens) {
          const auto rep = ffm::bounds::lalfa_report(L, a, 0, preset.N);
          rows.push_back({std::to_string(L.D().code()), fixed(a), std::to_string(preset.N), fixed(rep.lhs),
                          fixed(rep.explicit_rhs), fixed(rep.gap), rep.at_zero ? "1" : "0", fixed(preset.bound)});
        }
      }
      emit_csv(cfg, {"D_code", "alpha", "N", "lhs", "explicit_rhs", "gap", "at_zero", "preset_bound"}, rows);
    }
  } catch (const VerificationFailed& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return 1;
  } catch (const ffm::BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 3;
  } catch (const ffm::InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return 2;
  } catch (const ffm::DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const ffm::CacheError& e) {
    std::cerr << "cache error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
