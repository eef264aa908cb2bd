#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <vector>

#include "ffm/verify.hpp"

namespace {

using ffm::verify::SuiteResult;

struct Criterion {
  int id;
  std::string title;
  std::function<std::vector<SuiteResult>()> run;
};

void print_suite(const SuiteResult& s) {
  std::printf("    %-16s cases=%llu failures=%llu worst=%.3g time=%.1fs", s.name.c_str(),
              static_cast<unsigned long long>(s.cases), static_cast<unsigned long long>(s.failures), s.worst,
              s.elapsed_seconds);
  if (!s.detail.empty()) std::printf("  [%s]", s.detail.c_str());
  std::printf("\n");
  for (const auto& in : s.failing_inputs) std::printf("      failing: %s\n", in.c_str());
}

}  // namespace

int main() {
  namespace v = ffm::verify;
  constexpr std::uint32_t q = 5;

  const std::vector<Criterion> criteria = {
      {1, "AFE exactness, q=5, g=1,2", [] { return std::vector{v::afe(q, 1), v::afe(q, 2)}; }},
      {2, "functional equation and |alpha_j| = 1", [] { return std::vector{v::fe_rh(q, 1), v::fe_rh(q, 2)}; }},
      {3, "Poisson summation, d(f) <= 5, m <= 5", [] { return std::vector{v::poisson(q, 5, 5)}; }},
      {4, "Gauss sum closed forms, d(P) <= 2, i <= 4", [] { return std::vector{v::gauss(q, 2, 4)}; }},
      {5, "divisor-sum identity, d(f) <= 4, g=1", [] { return std::vector{v::sumd(q, 1, 4)}; }},
      {6, "character sums below sqrt|f|, d(f) <= 5", [] { return std::vector{v::polya_vinogradov(q, 5)}; }},
      {7, "Euler identity chain, N=20, 192 bits", [] { return std::vector{v::euler_chain(q, 20, 192)}; }},
      {8, "coefficient agreement, q=5,13", [] { return std::vector{v::coefficients({5, 13}, 20)}; }},
      {9, "conjectured Q self-consistency", [] { return std::vector{v::conjecture(q, 20, 32, 0.05, 1e-8)}; }},
      {10, "explicit formula, H_3 and 50 from H_5", [] { return std::vector{v::explicit_formula(q, 50)}; }},
      {11, "minorant, f1 dual path, log-modulus",
       [] {
         return std::vector{v::minorant(q, {5, 10, 20}, {0.5L, 0.75L, 1.0L}, 10000), v::f1_dual_path(q),
                            v::log_modulus(q)};
       }},
      {12, "trigonometric identities and ladders",
       [] {
         std::vector<SuiteResult> out;
         for (const auto& s : v::trig_suites()) out.push_back(v::trig(s));
         return out;
       }},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    bool ok = true;
    std::vector<SuiteResult> results;
    std::string error;
    try {
      results = c.run();
      for (const auto& s : results) ok = ok && s.passed();
    } catch (const std::exception& e) {
      ok = false;
      error = e.what();
    }
    std::printf("[%s] %2d %s\n", ok ? "PASS" : "FAIL", c.id, c.title.c_str());
    for (const auto& s : results) print_suite(s);
    if (!error.empty()) std::printf("    error: %s\n", error.c_str());
    std::fflush(stdout);
    if (!ok) ++failed;
  }

  try {
    const auto rows = v::compare_table(q, 3, 20, 32);
    std::printf("[PASS] 13 fourth moment table, q=5, g=1..3 (reported)\n");
    std::printf("    %2s %22s %22s %22s %22s %10s %10s %10s\n", "g", "exact", "theory", "q^(2g+1)Q", "|H|Q",
                "ex/theory", "ex/qQ", "ex/|H|Q");
    for (const auto& r : rows)
      std::printf("    %2u %22.10Le %22.10Le %22.10Le %22.10Le %10.5Lf %10.5Lf %10.5Lf\n", r.g, r.exact, r.theory,
                  r.conjecture_scaled, r.conjecture_sum, r.exact / r.theory, r.exact / r.conjecture_scaled,
                  r.exact / r.conjecture_sum);
  } catch (const std::exception& e) {
    std::printf("[FAIL] 13 fourth moment table: %s\n", e.what());
    ++failed;
  }

  std::printf("%d of 13 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
