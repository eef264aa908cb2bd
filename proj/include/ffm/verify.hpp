#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ffm::verify {

struct SuiteResult {
  std::string name;
  std::uint64_t cases = 0;
  std::uint64_t failures = 0;
  std::vector<std::string> failing_inputs;  // first few, serialized
  double worst = 0;                         // largest error or ratio seen, suite-specific
  std::string detail;
  double elapsed_seconds = 0;
  std::vector<std::vector<std::string>> rows;  // optional CSV rows
  std::vector<std::string> columns;

  bool passed() const { return failures == 0 && cases > 0; }
  void fail(std::string input);
};

// L(1/2)^4 against the approximate functional equation for every D in H_{2g+1}.
SuiteResult afe(std::uint32_t q, unsigned g);
// Coefficient symmetry (exact) and |alpha_j| = 1 to 1e-8, Euler product to degree 2g.
SuiteResult fe_rh(std::uint32_t q, unsigned g);
// Every monic f with 1 <= d(f) <= max_degree, 1 <= m <= max_m; error <= 1e-9 sqrt|f|.
SuiteResult poisson(std::uint32_t q, unsigned max_degree, unsigned max_m);
// Closed forms against the tabulated sums for all P with d(P) <= max_prime_degree, i <= max_power.
SuiteResult gauss(std::uint32_t q, unsigned max_prime_degree, unsigned max_power);
SuiteResult sumd(std::uint32_t q, unsigned g, unsigned max_degree);
// |sum_{M_m} chi_f| <= sqrt|f| for square-free f, d(f) <= max_degree, m < d(f).
SuiteResult polya_vinogradov(std::uint32_t q, unsigned max_degree);
// All D in H_3 and `samples` D in H_5, test functions of Fourier degree 1..3.
SuiteResult explicit_formula(std::uint32_t q, unsigned samples);
// Minorant grids, f1 dual path, log-modulus identity across H_3.
SuiteResult minorant(std::uint32_t q, const std::vector<unsigned>& Ns, const std::vector<long double>& alphas,
                     unsigned grid);
SuiteResult f1_dual_path(std::uint32_t q);
SuiteResult log_modulus(std::uint32_t q);
// H(1/q, 1/q^2) and C(1, 1/q) against A.
SuiteResult euler_chain(std::uint32_t q, unsigned N, unsigned bits);
// a = b to 1e-8, derivative identities to 1e-8, prime-sum identities to 1e-10.
SuiteResult coefficients(const std::vector<std::uint32_t>& qs, unsigned N);
// Leading coefficients against b10, b9, b8 to 1e-6 and node-doubling stability.
SuiteResult conjecture(std::uint32_t q, unsigned N, unsigned nodes, double radius, double tol, unsigned workers = 0);

// Trigonometric suites: geometric, power, truncated, harmonic, master, ubvar. Rows hold
// (parameters, direct, closed, remainder).
SuiteResult trig(const std::string& suite);
const std::vector<std::string>& trig_suites();

struct CompareRow {
  unsigned g;
  long double exact;
  long double theory;             // q^{2g+1}(a10 g^10 + a9 g^9 + a8 g^8)
  long double conjecture_scaled;  // q^{2g+1} Q(2g+1)
  long double conjecture_sum;     // |H_{2g+1}| Q(2g+1)
};

std::vector<CompareRow> compare_table(std::uint32_t q, unsigned g_max, unsigned N, unsigned nodes, unsigned workers = 0);

}  // namespace ffm::verify
