#include "ffm/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "ffm/bounds.hpp"
#include "ffm/characters.hpp"
#include "ffm/errors.hpp"
#include "ffm/eulerprod.hpp"
#include "ffm/moments.hpp"
#include "ffm/trigsums.hpp"

namespace ffm::verify {

namespace {

using ffpoly::Polynomial;
using ffpoly::SetKind;
using Clock = std::chrono::steady_clock;
constexpr long double kPi = std::numbers::pi_v<long double>;
constexpr std::size_t kMaxReported = 20;
constexpr std::uint64_t kDirectGaussLimit = 625;

std::string num(long double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17Lg", x);
  return buf;
}

SuiteResult named(std::string name) {
  SuiteResult r;
  r.name = std::move(name);
  return r;
}

class Timer {
 public:
  explicit Timer(SuiteResult& r) : r_(r), start_(Clock::now()) {}
  ~Timer() { r_.elapsed_seconds = std::chrono::duration<double>(Clock::now() - start_).count(); }

 private:
  SuiteResult& r_;
  Clock::time_point start_;
};

void track(SuiteResult& r, long double value) {
  if (std::isnan(value) || value > r.worst) r.worst = static_cast<double>(value);
}

void check(SuiteResult& r, bool ok, const std::string& input) {
  ++r.cases;
  if (!ok) r.fail(input);
}

std::vector<Polynomial> sample(const std::vector<Polynomial>& all, std::size_t count, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
  std::vector<Polynomial> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(all[pick(rng)]);
  return out;
}

}  // namespace

void SuiteResult::fail(std::string input) {
  ++failures;
  if (failing_inputs.size() < kMaxReported) failing_inputs.push_back(std::move(input));
}

SuiteResult afe(std::uint32_t q, unsigned g) {
  SuiteResult r = named("afe");
  Timer t(r);
  const auto s = moments::afe_sweep(q, g);
  r.cases = s.cases;
  for (auto code : s.failing_codes) r.fail(Polynomial::from_code(q, code).digits());
  r.failures = s.failures;
  if (s.layer_mismatches > 0) {
    r.fail("layer mismatches: " + std::to_string(s.layer_mismatches));
  }
  r.detail = "q=" + std::to_string(q) + " g=" + std::to_string(g) + " exact equalities " +
             std::to_string(s.cases - s.failures) + "/" + std::to_string(s.cases);
  return r;
}

SuiteResult fe_rh(std::uint32_t q, unsigned g) {
  SuiteResult r = named("fe");
  Timer t(r);
  const lfun::PrimeCharacterCache cache(q, 2 * g, 2 * g + 1);
  for (const auto& D : ffpoly::enumerate(SetKind::Squarefree, q, 2 * g + 1)) {
    const lfun::LPolynomial L(D, cache.euler_coefficients(D, 2 * g));
    const auto zs = lfun::zeros(L);
    track(r, zs.max_modulus_deviation);
    check(r, L.symmetric() && zs.max_modulus_deviation <= 1e-8L, D.digits());
  }
  return r;
}

SuiteResult poisson(std::uint32_t q, unsigned max_degree, unsigned max_m) {
  SuiteResult r = named("poisson");
  Timer t(r);
  ffpoly::for_each(SetKind::MonicUpTo, q, max_degree, [&](const Polynomial& f) {
    if (f.deg() < 1) return;
    const characters::GaussTable table(f);
    const long double scale = std::sqrt(static_cast<long double>(f.norm()));
    for (unsigned m = 1; m <= max_m; ++m) {
      const auto p = characters::poisson_check(table, m);
      track(r, p.abs_error / scale);
      check(r, p.abs_error <= 1e-9L * scale, f.digits() + " m=" + std::to_string(m));
    }
  });
  return r;
}

SuiteResult gauss(std::uint32_t q, unsigned max_prime_degree, unsigned max_power) {
  SuiteResult r = named("gauss");
  Timer t(r);
  std::uint64_t direct = 0;
  for (unsigned d = 1; d <= max_prime_degree; ++d)
    for (const auto& P : ffpoly::irreducibles(q, d))
      for (unsigned i = 1; i <= max_power; ++i) {
        const characters::GaussTable table(P.pow(i));
        for (std::uint64_t v = 0; v < table.character().size(); ++v) {
          const Polynomial V = Polynomial::from_code(q, v);
          const auto closed = characters::gauss_sum_closed(V, P, i).value;
          long double err = std::abs(table[v] - closed);
          if (table.character().size() <= kDirectGaussLimit) {
            err = std::max(err, std::abs(characters::gauss_sum(V, P.pow(i)).value - closed));
            ++direct;
          }
          track(r, err);
          check(r, err <= 1e-9L, "P=" + P.digits() + " i=" + std::to_string(i) + " V=" + V.digits());
        }
      }
  r.detail = "direct summation on " + std::to_string(direct) + " cases, transform table on all";
  return r;
}

SuiteResult sumd(std::uint32_t q, unsigned g, unsigned max_degree) {
  SuiteResult r = named("sumd");
  Timer t(r);
  ffpoly::for_each(SetKind::MonicUpTo, q, max_degree,
                   [&](const Polynomial& f) { check(r, characters::sumd_check(f, g).equal(), f.digits()); });
  return r;
}

SuiteResult polya_vinogradov(std::uint32_t q, unsigned max_degree) {
  SuiteResult r = named("pv");
  Timer t(r);
  ffpoly::for_each(SetKind::MonicUpTo, q, max_degree, [&](const Polynomial& f) {
    if (f.deg() < 1 || !ffpoly::is_squarefree(f)) return;
    const characters::ResidueCharacter chi(f);
    const long double root = std::sqrt(static_cast<long double>(f.norm()));
    for (unsigned m = 0; m < static_cast<unsigned>(f.deg()); ++m) {
      const long double s = std::abs(static_cast<long double>(characters::char_sum(chi, m)));
      track(r, s / root);
      check(r, s <= root, f.digits() + " m=" + std::to_string(m));
    }
  });
  return r;
}

SuiteResult explicit_formula(std::uint32_t q, unsigned samples) {
  SuiteResult r = named("explicit");
  Timer t(r);
  const std::vector<std::vector<long double>> tests = {
      {0.5L, 1.0L, 0.5L}, {1.0L, 0.0L, 0.0L, 0.0L, 1.0L}, {0.25L, 0.5L, 0.75L, 1.0L, 0.75L, 0.5L, 0.25L}};
  auto run = [&](const lfun::LPolynomial& L) {
    const auto zs = lfun::zeros(L);
    for (std::size_t i = 0; i < tests.size(); ++i) {
      const auto e = lfun::explicit_formula_check(L, zs, tests[i]);
      track(r, e.error);
      check(r, e.error <= 1e-7L, L.D().digits() + " h=" + std::to_string(i + 1));
    }
  };
  for (const auto& D : ffpoly::enumerate(SetKind::Squarefree, q, 3)) run(lfun::compute_L(D));
  const lfun::PrimeCharacterCache cache(q, 4, 5);
  for (const auto& D : sample(ffpoly::enumerate(SetKind::Squarefree, q, 5), samples, 29))
    run(lfun::LPolynomial(D, cache.euler_coefficients(D, 4)));
  return r;
}

SuiteResult minorant(std::uint32_t q, const std::vector<unsigned>& Ns, const std::vector<long double>& alphas,
                     unsigned grid) {
  SuiteResult r = named("minorant");
  Timer t(r);
  r.columns = {"N", "alpha", "max_violation", "argmax", "rhat0"};
  for (unsigned N : Ns)
    for (long double a : alphas) {
      const auto c = bounds::minorant_check(N, a, q, grid);
      track(r, c.max_violation);
      check(r, c.max_violation <= 1e-10L, "N=" + std::to_string(N) + " alpha=" + num(a));
      r.rows.push_back({std::to_string(N), num(a), num(c.max_violation), num(c.argmax), num(bounds::rhat0_closed(N, a, q))});
    }
  return r;
}

SuiteResult f1_dual_path(std::uint32_t q) {
  SuiteResult r = named("f1");
  Timer t(r);
  for (long double a : {0.6L, 0.75L, 0.9L, 1.0L})
    for (int i = 0; i <= 100; ++i) {
      const long double x = i / 100.0L - 0.5L;
      const long double e = std::abs(bounds::f1_fourier(x, a, q, 400) - bounds::f1_closed(x, a, q));
      track(r, e);
      check(r, e <= 1e-10L, "alpha=" + num(a) + " x=" + num(x));
    }
  return r;
}

SuiteResult log_modulus(std::uint32_t q) {
  SuiteResult r = named("logmod");
  Timer t(r);
  std::uint64_t skipped = 0;
  for (const auto& D : ffpoly::enumerate(SetKind::Squarefree, q, 3)) {
    const auto L = lfun::compute_L(D);
    const auto zs = lfun::zeros(L);
    for (const auto& [a, tt] : {std::pair{0.5L, 0.0L}, std::pair{0.5L, 0.7L}, std::pair{0.75L, 0.3L}, std::pair{1.0L, 0.0L}}) {
      const auto m = lfun::log_modulus_identity(L, zs, a, tt);
      if (m.at_zero) {
        ++skipped;
        continue;
      }
      track(r, m.error);
      check(r, m.error <= 1e-7L, D.digits() + " alpha=" + num(a) + " t=" + num(tt));
    }
  }
  r.detail = "skipped at zeros: " + std::to_string(skipped);
  return r;
}

SuiteResult euler_chain(std::uint32_t q, unsigned N, unsigned bits) {
  using namespace eulerprod;
  SuiteResult r = named("euler");
  Timer t(r);
  PrecisionGuard guard(bits);
  const Real w = Real(1) / q, u = w * w;
  const auto A = closed_A(q, N);
  const auto H = compute_H(w, u, q, N);
  const auto C = compute_C(Real(1), w, q, N);
  const long double eh = static_cast<long double>(abs(H.value - A.value));
  const long double ec = static_cast<long double>(abs(C.value - A.value));
  track(r, eh);
  track(r, ec);
  check(r, eh <= 1e-12L, "H(1/q,1/q^2)");
  check(r, ec <= 1e-12L, "C(1,1/q)");
  r.detail = "A=" + A.value.str(30) + " |H-A|=" + num(eh) + " |C-A|=" + num(ec);
  return r;
}

SuiteResult coefficients(const std::vector<std::uint32_t>& qs, unsigned N) {
  using namespace eulerprod;
  SuiteResult r = named("coeffs");
  Timer t(r);
  PrecisionGuard guard(kDefaultPrecisionBits);
  for (auto q : qs) {
    const auto cs = eulerprod::coefficients(q, N);
    const std::string tag = "q=" + std::to_string(q) + " ";
    auto rel = [&](const std::string& name, const Real& v, double tol) {
      const long double x = static_cast<long double>(v);
      track(r, x);
      check(r, x <= tol, tag + name + "=" + num(x));
    };
    rel("a10/b10", cs.rel_diff_10(), 1e-8);
    rel("a9/b9", cs.rel_diff_9(), 1e-8);
    rel("a8/b8", cs.rel_diff_8(), 1e-8);
    rel("Hw", cs.id_Hw, 1e-8);
    rel("Hww", cs.id_Hww, 1e-8);
    rel("Cw", cs.id_Cw, 1e-8);
    rel("Cx", cs.id_Cx, 1e-8);
    rel("Cww", cs.id_Cww, 1e-8);
    rel("Cxx", cs.id_Cxx, 1e-8);
    rel("Cxw", cs.id_Cxw, 1e-8);
    rel("zeta1", cs.id_zeta1, 1e-10);
    rel("zeta2", cs.id_zeta2, 1e-10);
    rel("combination", cs.id_combination, 1e-10);
  }
  return r;
}

SuiteResult conjecture(std::uint32_t q, unsigned N, unsigned nodes, double radius, double tol, unsigned workers) {
  SuiteResult r = named("conjecture");
  Timer t(r);
  try {
    const auto d = eulerprod::conjecture_Q_doubling(q, N, nodes, radius, tol, workers);
    r.worst = d.worst_rel_change;
    check(r, true, "");
    for (std::size_t i = 0; i < 3; ++i)
      check(r, d.fine.b_rel_error[i] <= 1e-6 && d.coarse.b_rel_error[i] <= 1e-6,
            "b" + std::to_string(10 - i) + " rel " + num(d.fine.b_rel_error[i]));
    r.detail = "node doubling " + std::to_string(nodes) + "->" + std::to_string(2 * nodes) + " worst change " +
               num(d.worst_rel_change) + "; b rel errors " + num(d.fine.b_rel_error[0]) + " " +
               num(d.fine.b_rel_error[1]) + " " + num(d.fine.b_rel_error[2]);
  } catch (const ConvergenceError& e) {
    check(r, false, e.what());
  }
  return r;
}

const std::vector<std::string>& trig_suites() {
  static const std::vector<std::string> s = {"geometric", "power", "truncated", "harmonic", "master", "ubvar"};
  return s;
}

SuiteResult trig(const std::string& suite) {
  using namespace trigsums;
  SuiteResult r = named("trig-" + suite);
  Timer t(r);
  auto ladder = [&](const std::string& label, const std::vector<long double>& ratios) {
    const auto l = summarize_ladder(ratios);
    track(r, l.spread);
    check(r, l.stable, label + " spread=" + num(l.spread));
  };
  if (suite == "geometric") {
    r.columns = {"g", "theta", "direct_sin", "closed_sin", "direct_cos", "closed_cos"};
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::uint64_t> G(1, 2000);
    std::uniform_real_distribution<long double> T(1e-3L, 2 * kPi - 1e-3L);
    for (int i = 0; i < 1000; ++i) {
      const auto g = G(rng);
      const long double th = T(rng);
      const auto c = geometric_trig(g, th), d = geometric_trig_direct(g, th);
      const long double e = std::max(std::abs(c.sin_sum - d.sin_sum) / std::max(1.0L, std::abs(d.sin_sum)),
                                     std::abs(c.cos_sum - d.cos_sum) / std::max(1.0L, std::abs(d.cos_sum)));
      track(r, e);
      check(r, e <= 1e-9L, "g=" + std::to_string(g) + " theta=" + num(th));
      r.rows.push_back({std::to_string(g), num(th), num(d.sin_sum), num(c.sin_sum), num(d.cos_sum), num(c.cos_sum)});
    }
  } else if (suite == "power") {
    r.columns = {"k", "g", "theta", "sine", "direct", "closed", "remainder"};
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::uint64_t> G(1, 400);
    std::uniform_int_distribution<unsigned> K(1, 9);
    std::uniform_real_distribution<long double> T(0, 2 * kPi);
    long double worst = 0;
    for (int cases = 0; cases < 1000;) {
      const auto g = G(rng);
      const long double th = T(rng);
      if (g * std::min(th, 2 * kPi - th) < 1) continue;
      const unsigned k = K(rng);
      const bool sine = cases++ % 2 == 0;
      const auto p = power_trig(k, g, th, sine);
      long double scale = 0;
      for (std::uint64_t m = 1; m <= 2 * g; ++m) scale += std::pow(static_cast<long double>(m), k);
      const long double e = std::abs(p.direct - p.closed) / scale;
      worst = std::max(worst, e);
      check(r, e <= 1e-9L, "k=" + std::to_string(k) + " g=" + std::to_string(g) + " theta=" + num(th));
      r.rows.push_back({std::to_string(k), std::to_string(g), num(th), sine ? "1" : "0", num(p.direct), num(p.closed),
                        num(p.remainder)});
    }
    for (unsigned k = 1; k <= 9; ++k)
      for (bool sine : {true, false}) {
        std::vector<long double> v;
        for (int e = 6; e <= 12; ++e) v.push_back(power_trig_envelope(k, std::uint64_t{1} << e, sine));
        ladder("ladder k=" + std::to_string(k) + (sine ? " sin" : " cos"), v);
      }
    r.detail = "identity worst " + num(worst);
  } else if (suite == "truncated") {
    r.columns = {"a", "theta", "direct", "closed", "remainder"};
    std::vector<long double> v;
    for (int e = 6; e <= 13; ++e) {
      const std::uint64_t a = std::uint64_t{1} << e;
      v.push_back(truncated_envelope(a));
      const auto s = truncated_sin_series(a, 1 / std::sqrt(static_cast<long double>(a)));
      r.rows.push_back({std::to_string(a), num(1 / std::sqrt(static_cast<long double>(a))), num(s.direct), num(s.closed),
                        num(s.remainder)});
    }
    ladder("ladder theta=a^-1/2", v);
    for (std::uint64_t a : {100u, 1000u, 10000u}) {
      const auto s = truncated_sin_series(a, 1.0L);
      check(r, std::abs(s.direct - *s.alternative) <= s.order, "fixed theta=1 a=" + std::to_string(a));
    }
  } else if (suite == "harmonic") {
    r.columns = {"m", "alpha", "A_direct", "A", "B_direct", "B"};
    for (std::uint64_t alpha : {1u, 2u, 5u, 10u, 17u, 60u})
      for (std::uint64_t m = alpha / 2 + 1; m < alpha / 2 + 400; m += 7) {
        const auto h = harmonic_block(m, alpha);
        const long double e = std::max(std::abs(h.A - h.A_direct), std::abs(h.B - h.B_direct));
        const long double tol = std::max(1e-9L, std::max(h.A_bound, h.B_bound) + 1e-15L);
        track(r, e);
        check(r, e <= tol, "m=" + std::to_string(m) + " alpha=" + std::to_string(alpha));
        r.rows.push_back({std::to_string(m), std::to_string(alpha), num(h.A_direct), num(h.A), num(h.B_direct), num(h.B)});
      }
    for (std::uint64_t alpha : {3u, 10u, 40u}) {
      std::vector<long double> a, b;
      for (std::uint64_t m = 4 * alpha; m <= 256 * alpha; m *= 2) {
        const auto h = harmonic_block(m, alpha);
        a.push_back(std::abs(h.A) * m * m / alpha);
        b.push_back(std::abs(h.B) * m * m / alpha);
      }
      ladder("A(m) m^2/alpha alpha=" + std::to_string(alpha), a);
      ladder("B(m) m^2/alpha alpha=" + std::to_string(alpha), b);
    }
  } else if (suite == "master") {
    r.columns = {"k", "g", "alpha", "theta", "direct", "closed", "remainder", "order"};
    for (unsigned k = 0; k <= 9; ++k) {
      std::vector<long double> v;
      for (int e = 8; e <= 13; ++e) {
        const std::uint64_t g = std::uint64_t{1} << e;
        v.push_back(master_ratio(k, g));
        const std::uint64_t alpha = 100 * static_cast<std::uint64_t>(std::floor(std::log(static_cast<long double>(g))));
        const long double th = 1 / std::sqrt(static_cast<long double>(g));
        const auto m = master_A(k, th, alpha, g);
        r.rows.push_back({std::to_string(k), std::to_string(g), std::to_string(alpha), num(th), num(m.direct),
                          num(m.closed), num(m.remainder), num(m.order)});
      }
      ladder("k=" + std::to_string(k), v);
    }
  } else if (suite == "ubvar") {
    r.columns = {"g", "theta", "sum", "bound", "slack"};
    long double worst = -1e9;
    for (int i = 0; i < 1000; ++i) {
      const long double th = kPi * i / 1000, folded = std::min(th, kPi - th);
      long double s = 0;
      for (std::uint64_t n = 1; n <= 10000; ++n) {
        s += std::cos(2 * n * th) / n;
        const long double G = static_cast<long double>(n);
        const long double slack = s - std::log(folded > 0 ? std::min(G, 1 / (2 * folded)) : G);
        worst = std::max(worst, slack);
      }
      if (i % 50 == 0) {
        const auto u = ubvar_check(10000, th);
        r.rows.push_back({"10000", num(th), num(u.sum), num(u.bound), num(u.slack)});
      }
    }
    r.worst = static_cast<double>(worst);
    check(r, worst <= kUbvarConstant + 1e-15L, "max slack " + num(worst));
  } else {
    throw InvalidArgument("unknown trig suite: " + suite);
  }
  return r;
}

std::vector<CompareRow> compare_table(std::uint32_t q, unsigned g_max, unsigned N, unsigned nodes, unsigned workers) {
  using namespace eulerprod;
  PrecisionGuard guard(kDefaultPrecisionBits);
  const auto cs = eulerprod::coefficients(q, N);
  const auto Q = conjecture_Q(q, N, nodes, 0.05, workers);
  std::vector<CompareRow> rows;
  for (unsigned g = 1; g <= g_max; ++g) {
    moments::SweepOptions opt;
    opt.workers = std::max(1u, workers);
    const auto rep = moments::kth_moment(q, g, 4, opt);
    const long double scaled = std::pow(static_cast<long double>(q), 2 * g + 1) * Q.evaluate(2.0 * g + 1);
    rows.push_back({g, rep.float_value, static_cast<long double>(theory_fourth_moment(cs, g)), scaled,
                    conjectured_fourth_moment(Q, g)});
  }
  return rows;
}

}  // namespace ffm::verify
