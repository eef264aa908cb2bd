#include "ffm/lfun.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <unsupported/Eigen/Polynomials>

namespace ffm::lfun {

using ffpoly::ipow;

namespace {

constexpr long double kPi = std::numbers::pi_v<long double>;

Rational q_power(std::uint32_t q, unsigned e) { return Rational(BigInt(ipow(q, e))); }

}  // namespace

std::string rational_string(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

// ---------------------------------------------------------------- QuadraticAlgebraic

QuadraticAlgebraic::QuadraticAlgebraic(std::uint32_t q, Rational a, Rational b)
    : q_(q), a_(std::move(a)), b_(std::move(b)) {}

QuadraticAlgebraic QuadraticAlgebraic::operator+(const QuadraticAlgebraic& o) const {
  if (o.q_ != q_) throw InvalidArgument("mixed quadratic fields");
  return QuadraticAlgebraic(q_, a_ + o.a_, b_ + o.b_);
}

QuadraticAlgebraic QuadraticAlgebraic::operator-(const QuadraticAlgebraic& o) const {
  if (o.q_ != q_) throw InvalidArgument("mixed quadratic fields");
  return QuadraticAlgebraic(q_, a_ - o.a_, b_ - o.b_);
}

QuadraticAlgebraic QuadraticAlgebraic::operator*(const QuadraticAlgebraic& o) const {
  if (o.q_ != q_) throw InvalidArgument("mixed quadratic fields");
  return QuadraticAlgebraic(q_, a_ * o.a_ + Rational(q_) * b_ * o.b_, a_ * o.b_ + b_ * o.a_);
}

QuadraticAlgebraic& QuadraticAlgebraic::operator+=(const QuadraticAlgebraic& o) {
  *this = *this + o;
  return *this;
}

QuadraticAlgebraic QuadraticAlgebraic::pow(unsigned e) const {
  QuadraticAlgebraic result(q_, 1, 0), base = *this;
  while (e) {
    if (e & 1) result = result * base;
    base = base * base;
    e >>= 1;
  }
  return result;
}

bool QuadraticAlgebraic::operator==(const QuadraticAlgebraic& o) const {
  return q_ == o.q_ && a_ == o.a_ && b_ == o.b_;
}

long double QuadraticAlgebraic::to_long_double() const {
  return a_.convert_to<long double>() + b_.convert_to<long double>() * std::sqrt(static_cast<long double>(q_));
}

std::string QuadraticAlgebraic::a_string() const { return rational_string(a_); }
std::string QuadraticAlgebraic::b_string() const { return rational_string(b_); }

// ---------------------------------------------------------------- LPolynomial

LPolynomial::LPolynomial(Polynomial D, std::vector<std::int64_t> coeffs) : D_(std::move(D)), g_(0), c_(std::move(coeffs)) {
  if (D_.deg() < 1 || D_.deg() % 2 == 0) throw InvalidArgument("LPolynomial needs D of odd degree");
  g_ = (D_.deg() - 1) / 2;
  if (c_.size() != static_cast<std::size_t>(2 * g_ + 1)) throw InvalidArgument("LPolynomial needs 2g+1 coefficients");
}

Complex LPolynomial::evaluate(Complex u) const {
  Complex acc{0, 0};
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * u + static_cast<long double>(*it);
  return acc;
}

Complex LPolynomial::derivative(Complex u) const {
  Complex acc{0, 0};
  for (std::size_t n = c_.size() - 1; n >= 1; --n) acc = acc * u + static_cast<long double>(n) * c_[n];
  return acc;
}

Complex LPolynomial::at_s(Complex s) const {
  return evaluate(std::exp(-s * std::log(static_cast<long double>(q()))));
}

bool LPolynomial::symmetric() const {
  const std::int64_t q = this->q();
  for (int n = 0; n <= g_; ++n) {
    const std::int64_t expect = static_cast<std::int64_t>(ipow(static_cast<std::uint64_t>(q), static_cast<unsigned>(g_ - n))) * c_[n];
    if (c_[2 * g_ - n] != expect) return false;
  }
  return true;
}

void validate_discriminant(const Polynomial& D) {
  characters::require_q_1_mod_4(D.modulus());
  if (!D.is_monic()) throw InvalidArgument("D must be monic");
  if (D.deg() < 1 || D.deg() % 2 == 0) throw InvalidArgument("D must have odd degree 2g+1");
  if (!ffpoly::is_squarefree(D)) throw InvalidArgument("D must be square-free");
}

LPolynomial compute_L(const Polynomial& D) {
  validate_discriminant(D);
  const std::uint32_t q = D.modulus();
  const unsigned d = static_cast<unsigned>(D.deg());
  // chi_D(f) = (D/f) = (f/D) for monic f.
  characters::ResidueCharacter chi(D);
  std::vector<std::int64_t> c(d, 0);
  for (unsigned n = 0; n < d; ++n) {
    const std::uint64_t first = ipow(q, n);
    std::int64_t s = 0;
    for (std::uint64_t f = first; f < 2 * first; ++f) s += chi[f];
    c[n] = s;
  }
  const auto& map = chi.residue_map();
  const std::uint64_t top = map.reduce(ipow(q, d));
  std::int64_t sanity = 0;
  for (std::uint64_t lo = 0; lo < chi.size(); ++lo) sanity += chi[map.add(lo, top)];
  if (sanity != 0) throw std::logic_error("character sum over M_{2g+1} is nonzero for D = " + D.digits());
  return LPolynomial(D, std::move(c));
}

PrimeCharacterCache::PrimeCharacterCache(std::uint32_t q, unsigned max_degree, unsigned d_degree)
    : q_(q), max_degree_(max_degree) {
  for (unsigned d = 1; d <= max_degree; ++d)
    for (const auto& P : ffpoly::irreducibles(q, d))
      primes_.push_back(Entry{d, characters::ResidueMap(P, d_degree), characters::ResidueCharacter(P)});
}

std::vector<std::int64_t> PrimeCharacterCache::euler_coefficients(const Polynomial& D, unsigned max) const {
  if (max > max_degree_) throw InvalidArgument("Euler product cache built for lower degree");
  std::vector<std::int64_t> s(max + 1, 0);
  s[0] = 1;
  const std::uint64_t code = D.code();
  for (const auto& e : primes_) {
    if (e.degree > max) continue;
    const int x = e.chi[e.map.reduce(code)];
    if (!x) continue;
    for (unsigned n = e.degree; n <= max; ++n) s[n] += x * s[n - e.degree];
  }
  return s;
}

LPolynomial PrimeCharacterCache::via_functional_equation(const Polynomial& D) const {
  const int g = (D.deg() - 1) / 2;
  auto half = euler_coefficients(D, static_cast<unsigned>(g));
  std::vector<std::int64_t> c(2 * g + 1);
  for (int n = 0; n <= g; ++n) {
    c[n] = half[n];
    c[2 * g - n] = static_cast<std::int64_t>(ipow(q_, static_cast<unsigned>(g - n))) * half[n];
  }
  return LPolynomial(D, std::move(c));
}

std::vector<std::int64_t> euler_coefficients(const Polynomial& D, unsigned max) {
  validate_discriminant(D);
  PrimeCharacterCache cache(D.modulus(), max, static_cast<unsigned>(D.deg()));
  return cache.euler_coefficients(D, max);
}

QuadraticAlgebraic value_at_half(const LPolynomial& L) {
  const std::uint32_t q = L.q();
  Rational a = 0, b = 0;
  const auto& c = L.coeffs();
  for (std::size_t n = 0; n < c.size(); ++n) {
    if (n % 2 == 0)
      a += Rational(c[n]) / q_power(q, static_cast<unsigned>(n / 2));
    else
      b += Rational(c[n]) / q_power(q, static_cast<unsigned>((n + 1) / 2));
  }
  return QuadraticAlgebraic(q, a, b);
}

std::pair<std::int64_t, std::int64_t> scaled_value_at_half(const LPolynomial& L) {
  const std::uint64_t q = L.q();
  const int g = L.g();
  std::int64_t A = 0, B = 0;
  const auto& c = L.coeffs();
  for (int n = 0; n <= 2 * g; ++n) {
    if (n % 2 == 0)
      A += c[n] * static_cast<std::int64_t>(ipow(q, static_cast<unsigned>(g - n / 2)));
    else
      B += c[n] * static_cast<std::int64_t>(ipow(q, static_cast<unsigned>(g - (n + 1) / 2)));
  }
  return {A, B};
}

// ---------------------------------------------------------------- zeros

ZeroSet zeros(const LPolynomial& L) {
  const auto& c = L.coeffs();
  const int deg = static_cast<int>(c.size()) - 1;
  ZeroSet zs;
  if (deg == 0) return zs;
  Eigen::Matrix<long double, Eigen::Dynamic, 1> poly(deg + 1);
  for (int i = 0; i <= deg; ++i) poly[i] = static_cast<long double>(c[i]);
  Eigen::PolynomialSolver<long double, Eigen::Dynamic> solver;
  solver.compute(poly);
  const long double sq = std::sqrt(static_cast<long double>(L.q()));
  for (Complex u : solver.roots()) {
    for (int it = 0; it < 8; ++it) {
      const Complex p = L.evaluate(u), dp = L.derivative(u);
      if (std::abs(dp) == 0) break;
      const Complex step = p / dp;
      u -= step;
      if (std::abs(step) < 1e-18L * std::abs(u)) break;
    }
    long double scale = 0;
    for (int n = 0; n <= deg; ++n) scale += std::abs(static_cast<long double>(c[n])) * std::pow(std::abs(u), static_cast<long double>(n));
    zs.residual = std::max(zs.residual, std::abs(L.evaluate(u)) / scale);
    const Complex alpha = 1.0L / (u * sq);
    zs.alphas.push_back(alpha);
    zs.max_modulus_deviation = std::max(zs.max_modulus_deviation, std::abs(std::abs(alpha) - 1.0L));
    long double theta = std::arg(alpha) / (2 * kPi);
    if (theta < 0) theta += 1;
    if (theta >= 1 - 1e-15L) theta = 0;
    zs.thetas.push_back(static_cast<double>(theta));
  }
  if (!(zs.residual < 1e-6L)) throw ConvergenceError("root finder residual " + std::to_string(static_cast<double>(zs.residual)));
  std::sort(zs.thetas.begin(), zs.thetas.end());
  return zs;
}

// ---------------------------------------------------------------- functional equation

FeCheck completed_fe_check(const LPolynomial& L, Complex s) {
  const long double logq = std::log(static_cast<long double>(L.q()));
  const long double d = L.D().deg();
  auto x_d = [&](Complex z) { return std::exp(((0.5L - z) * d + (z - 0.5L)) * logq); };
  auto lambda = [&](Complex z) { return L.at_s(z) * std::exp(-0.5L * std::log(x_d(z))); };
  FeCheck r{};
  r.lhs = lambda(s);
  r.rhs = lambda(1.0L - s);
  const long double scale = std::max(std::abs(r.lhs), 1.0L);
  r.error = std::abs(r.lhs - r.rhs) / scale;
  const long double flipped = std::abs(r.lhs + r.rhs) / scale;
  if (flipped < r.error) {
    r.branch_flipped = true;
    r.error = flipped;
    r.rhs = -r.rhs;
  }
  return r;
}

// ---------------------------------------------------------------- explicit formula

std::int64_t prime_power_sum(const Polynomial& D, unsigned k) {
  std::int64_t total = 0;
  for (unsigned d = 1; d <= k; ++d) {
    if (k % d) continue;
    const unsigned e = k / d;
    for (const auto& P : ffpoly::irreducibles(D.modulus(), d)) {
      const int x = characters::jacobi_symbol(D, P);
      const int v = (e % 2 == 0) ? x * x : x;
      total += static_cast<std::int64_t>(d) * v;
    }
  }
  return total;
}

std::vector<std::int64_t> prime_power_sums(const LPolynomial& L, unsigned N) {
  const auto& c = L.coeffs();
  auto coeff = [&](unsigned k) { return k < c.size() ? c[k] : 0; };
  std::vector<std::int64_t> S(N + 1, 0);
  for (unsigned k = 1; k <= N; ++k) {
    std::int64_t s = static_cast<std::int64_t>(k) * coeff(k);
    for (unsigned j = 1; j < k; ++j) s -= S[j] * coeff(k - j);
    S[k] = s;
  }
  return S;
}

ExplicitFormulaCheck explicit_formula_check(const LPolynomial& L, const ZeroSet& zs, const std::vector<long double>& hhat) {
  if (hhat.size() % 2 == 0) throw InvalidArgument("hhat must have 2N+1 entries");
  const int N = static_cast<int>(hhat.size() / 2);
  for (int k = 1; k <= N; ++k)
    if (std::abs(hhat[N + k] - hhat[N - k]) > 1e-15L * (1 + std::abs(hhat[N + k])))
      throw InvalidArgument("hhat is not even");
  ExplicitFormulaCheck r{};
  for (double th : zs.thetas) {
    long double h = hhat[N];
    for (int k = 1; k <= N; ++k) h += 2 * hhat[N + k] * std::cos(2 * kPi * k * th);
    r.zero_side += h;
  }
  const long double q = L.q();
  r.prime_side = 2.0L * L.g() * hhat[N];
  for (int k = 1; k <= N; ++k) {
    if (hhat[N + k] == 0) continue;
    r.prime_side -= 2 * hhat[N + k] * static_cast<long double>(prime_power_sum(L.D(), static_cast<unsigned>(k))) / std::pow(q, k / 2.0L);
  }
  r.error = std::abs(r.zero_side - r.prime_side);
  return r;
}

ExplicitFormulaCheck explicit_formula_check(const LPolynomial& L, const std::vector<long double>& hhat) {
  return explicit_formula_check(L, zeros(L), hhat);
}

// ---------------------------------------------------------------- log-modulus identity

LogModulusCheck log_modulus_identity(const LPolynomial& L, const ZeroSet& zs, long double alpha, long double t) {
  if (alpha < 0.5L || alpha > 1.0L) throw InvalidArgument("log_modulus_identity needs 1/2 <= alpha <= 1");
  const long double q = L.q();
  const long double logq = std::log(q);
  LogModulusCheck r{};
  const long double mod = std::abs(L.at_s(Complex(alpha, t)));
  r.lhs = std::log(mod);
  const long double a = (q * q - 1) / (2 * q);
  const long double b = (std::pow(q, alpha - 0.5L) - 1) / (2 * std::pow(q, alpha / 2 - 0.25L));
  long double sum = 0;
  for (double th : zs.thetas) {
    const long double s = std::sin(kPi * th - t * logq / 2);
    sum += std::log((b * b + s * s) / (a * a + s * s));
  }
  r.rhs = L.g() * (2.5L - alpha) * logq + std::log(std::abs(L.at_s(Complex(2.5L, t)))) + sum / 2;
  r.at_zero = !(mod > 1e-12L);
  r.error = r.at_zero ? 0 : std::abs(r.lhs - r.rhs);
  return r;
}

LogModulusCheck log_modulus_identity(const LPolynomial& L, long double alpha, long double t) {
  return log_modulus_identity(L, zeros(L), alpha, t);
}

}  // namespace ffm::lfun
