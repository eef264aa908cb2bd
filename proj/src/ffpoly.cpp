#include "ffm/ffpoly.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>

namespace ffm::ffpoly {

namespace {

constexpr std::uint32_t kMaxModulus = 1u << 16;
std::atomic<std::uint64_t> g_budget{100'000'000ULL};

void validate_modulus(std::uint32_t q) {
  if (q < 2 || q >= kMaxModulus || !is_prime(q))
    throw InvalidArgument("modulus must be a prime below 65536, got " + std::to_string(q));
}

inline Coeff reduce(std::int64_t v, std::uint32_t q) {
  std::int64_t r = v % static_cast<std::int64_t>(q);
  return static_cast<Coeff>(r < 0 ? r + q : r);
}

inline Coeff mulmod(Coeff a, Coeff b, std::uint32_t q) {
  return static_cast<Coeff>((static_cast<std::uint64_t>(a) * b) % q);
}

Coeff inverse_mod(Coeff a, std::uint32_t q) {
  if (a == 0) throw DomainError("inverse of zero in F_q");
  std::uint64_t result = 1, base = a, e = q - 2;
  while (e) {
    if (e & 1) result = result * base % q;
    base = base * base % q;
    e >>= 1;
  }
  return static_cast<Coeff>(result);
}

char digit_char(Coeff c) { return c < 10 ? static_cast<char>('0' + c) : static_cast<char>('a' + c - 10); }

Coeff char_digit(char ch) {
  if (ch >= '0' && ch <= '9') return static_cast<Coeff>(ch - '0');
  if (ch >= 'a' && ch <= 'z') return static_cast<Coeff>(ch - 'a' + 10);
  throw InvalidArgument(std::string("bad digit character '") + ch + "'");
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::uint64_t ipow(std::uint64_t base, unsigned exp) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < exp; ++i) r *= base;
  return r;
}

// ---------------------------------------------------------------- FieldElement

FieldElement::FieldElement(std::int64_t value, std::uint32_t q) : value_(0), q_(q) {
  validate_modulus(q);
  value_ = reduce(value, q);
}

FieldElement FieldElement::operator+(FieldElement o) const {
  if (o.q_ != q_) throw InvalidArgument("field moduli differ");
  return FieldElement(static_cast<std::int64_t>(value_) + o.value_, q_);
}
FieldElement FieldElement::operator-(FieldElement o) const {
  if (o.q_ != q_) throw InvalidArgument("field moduli differ");
  return FieldElement(static_cast<std::int64_t>(value_) - o.value_, q_);
}
FieldElement FieldElement::operator*(FieldElement o) const {
  if (o.q_ != q_) throw InvalidArgument("field moduli differ");
  return FieldElement(mulmod(value_, o.value_, q_), q_);
}
FieldElement FieldElement::operator/(FieldElement o) const { return *this * o.inverse(); }
FieldElement FieldElement::operator-() const { return FieldElement(-static_cast<std::int64_t>(value_), q_); }
FieldElement FieldElement::inverse() const { return FieldElement(inverse_mod(value_, q_), q_); }

FieldElement FieldElement::pow(std::uint64_t e) const {
  std::uint64_t result = 1, base = value_;
  while (e) {
    if (e & 1) result = result * base % q_;
    base = base * base % q_;
    e >>= 1;
  }
  return FieldElement(static_cast<std::int64_t>(result), q_);
}

int FieldElement::legendre() const {
  if (value_ == 0) return 0;
  if (q_ == 2) return 1;
  return pow((q_ - 1) / 2).value() == 1 ? 1 : -1;
}

int Degree::value() const {
  if (!finite_) throw DomainError("degree of the zero polynomial is minus infinity");
  return value_;
}

// ---------------------------------------------------------------- Polynomial

Polynomial::Polynomial(std::uint32_t q) : q_(q) { validate_modulus(q); }

Polynomial::Polynomial(std::uint32_t q, std::vector<Coeff> coeffs) : q_(q), c_(std::move(coeffs)) {
  validate_modulus(q);
  for (auto& c : c_) c %= q_;
  trim();
}

Polynomial Polynomial::constant(std::uint32_t q, std::int64_t c) {
  validate_modulus(q);
  return Polynomial(q, {reduce(c, q)});
}

Polynomial Polynomial::x(std::uint32_t q) { return monomial(q, 1); }

Polynomial Polynomial::monomial(std::uint32_t q, unsigned n, std::int64_t c) {
  validate_modulus(q);
  std::vector<Coeff> v(n + 1, 0);
  v[n] = reduce(c, q);
  return Polynomial(q, std::move(v));
}

Polynomial Polynomial::from_code(std::uint32_t q, std::uint64_t code) {
  validate_modulus(q);
  std::vector<Coeff> v;
  while (code) {
    v.push_back(static_cast<Coeff>(code % q));
    code /= q;
  }
  return Polynomial(q, std::move(v));
}

Polynomial Polynomial::from_digits(std::uint32_t q, const std::string& digits) {
  std::vector<Coeff> v;
  v.reserve(digits.size());
  for (char ch : digits) {
    Coeff c = char_digit(ch);
    if (c >= q) throw InvalidArgument("digit out of range for modulus");
    v.push_back(c);
  }
  return Polynomial(q, std::move(v));
}

void Polynomial::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

void Polynomial::require_same(const Polynomial& o) const {
  if (o.q_ != q_) throw InvalidArgument("polynomials over different fields");
}

Degree Polynomial::degree() const noexcept {
  return c_.empty() ? Degree::minus_infinity() : Degree(static_cast<int>(c_.size()) - 1);
}

std::uint64_t Polynomial::norm() const {
  if (c_.empty()) throw DomainError("norm of the zero polynomial");
  return ipow(q_, static_cast<unsigned>(c_.size() - 1));
}

std::uint64_t Polynomial::code() const {
  std::uint64_t code = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) code = code * q_ + *it;
  return code;
}

std::string Polynomial::digits() const {
  if (c_.empty()) return "0";
  std::string s;
  s.reserve(c_.size());
  for (Coeff c : c_) s.push_back(digit_char(c));
  return s;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  require_same(o);
  std::vector<Coeff> v(std::max(c_.size(), o.c_.size()), 0);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = (coeff(i) + o.coeff(i)) % q_;
  return Polynomial(q_, std::move(v));
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  require_same(o);
  std::vector<Coeff> v(std::max(c_.size(), o.c_.size()), 0);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = (coeff(i) + q_ - o.coeff(i)) % q_;
  return Polynomial(q_, std::move(v));
}

Polynomial Polynomial::operator-() const { return Polynomial(q_) - *this; }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  require_same(o);
  if (c_.empty() || o.c_.empty()) return Polynomial(q_);
  std::vector<std::uint64_t> acc(c_.size() + o.c_.size() - 1, 0);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (!c_[i]) continue;
    for (std::size_t j = 0; j < o.c_.size(); ++j) acc[i + j] += static_cast<std::uint64_t>(c_[i]) * o.c_[j];
  }
  std::vector<Coeff> v(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) v[i] = static_cast<Coeff>(acc[i] % q_);
  return Polynomial(q_, std::move(v));
}

Polynomial Polynomial::scaled(std::int64_t c) const {
  Coeff cc = reduce(c, q_);
  std::vector<Coeff> v(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) v[i] = mulmod(c_[i], cc, q_);
  return Polynomial(q_, std::move(v));
}

std::pair<Polynomial, Polynomial> Polynomial::div_rem(const Polynomial& divisor) const {
  require_same(divisor);
  if (divisor.is_zero()) throw DomainError("division by the zero polynomial");
  if (c_.size() < divisor.c_.size()) return {Polynomial(q_), *this};
  std::vector<Coeff> r = c_;
  const std::size_t db = divisor.c_.size() - 1;
  const Coeff inv = inverse_mod(divisor.c_.back(), q_);
  std::vector<Coeff> quot(c_.size() - db, 0);
  for (std::size_t i = c_.size(); i-- > db;) {
    Coeff t = mulmod(r[i], inv, q_);
    if (!t) continue;
    quot[i - db] = t;
    for (std::size_t j = 0; j <= db; ++j) {
      Coeff s = mulmod(t, divisor.c_[j], q_);
      r[i - db + j] = (r[i - db + j] + q_ - s) % q_;
    }
  }
  r.resize(db);
  return {Polynomial(q_, std::move(quot)), Polynomial(q_, std::move(r))};
}

Polynomial Polynomial::derivative() const {
  if (c_.size() <= 1) return Polynomial(q_);
  std::vector<Coeff> v(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) v[i - 1] = mulmod(c_[i], static_cast<Coeff>(i % q_), q_);
  return Polynomial(q_, std::move(v));
}

Polynomial Polynomial::monic() const {
  if (c_.empty()) throw DomainError("zero polynomial has no monic associate");
  return scaled(inverse_mod(c_.back(), q_));
}

Coeff Polynomial::eval(Coeff x) const {
  std::uint64_t acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = (acc * x + *it) % q_;
  return static_cast<Coeff>(acc);
}

Polynomial Polynomial::pow(unsigned e) const {
  Polynomial result = constant(q_, 1), base = *this;
  while (e) {
    if (e & 1) result = result * base;
    base = base * base;
    e >>= 1;
  }
  return result;
}

Polynomial Polynomial::pow_mod(std::uint64_t e, const Polynomial& m) const {
  Polynomial result = constant(q_, 1) % m;
  Polynomial base = *this % m;
  while (e) {
    if (e & 1) result = (result * base) % m;
    base = (base * base) % m;
    e >>= 1;
  }
  return result;
}

std::strong_ordering operator<=>(const Polynomial& a, const Polynomial& b) {
  if (a.c_.size() != b.c_.size()) return a.c_.size() <=> b.c_.size();
  for (std::size_t i = a.c_.size(); i-- > 0;)
    if (a.c_[i] != b.c_[i]) return a.c_[i] <=> b.c_[i];
  return std::strong_ordering::equal;
}

std::ostream& operator<<(std::ostream& os, const Polynomial& f) {
  return os << f.digits() << " (mod " << f.modulus() << ")";
}

Polynomial gcd(Polynomial a, Polynomial b) {
  while (!b.is_zero()) {
    Polynomial r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.is_zero() ? a : a.monic();
}

bool is_irreducible(const Polynomial& f) {
  if (!f.is_monic()) throw InvalidArgument("is_irreducible expects a monic polynomial");
  const int n = f.deg();
  if (n < 1) throw InvalidArgument("is_irreducible expects positive degree");
  if (n == 1) return true;
  const std::uint32_t q = f.modulus();
  const Polynomial x = Polynomial::x(q) % f;
  Polynomial h = x;
  for (int i = 1; i <= n; ++i) {
    h = h.pow_mod(q, f);
    if (2 * i <= n && !gcd(f, h - x).is_one()) return false;
  }
  return h == x;
}

bool is_squarefree(const Polynomial& f) {
  if (f.is_zero()) throw DomainError("square-freeness of zero");
  if (f.deg() < 1) return true;
  Polynomial d = f.derivative();
  if (d.is_zero()) return false;
  return gcd(f, d).is_one();
}

// ---------------------------------------------------------------- factorization

Polynomial Factorization::reconstruct(std::uint32_t q) const {
  Polynomial p = Polynomial::constant(q, unit);
  for (const auto& fac : factors) p = p * fac.prime.pow(fac.exponent);
  return p;
}

Factorization factor(const Polynomial& f) {
  if (f.is_zero()) throw DomainError("cannot factor the zero polynomial");
  Factorization out;
  out.unit = f.lead();
  Polynomial rem = f.monic();
  const std::uint32_t q = f.modulus();
  for (unsigned d = 1; 2 * d <= static_cast<unsigned>(std::max(rem.deg(), 0)); ++d) {
    for (const auto& p : irreducibles(q, d)) {
      if (2 * d > static_cast<unsigned>(rem.deg())) break;
      unsigned e = 0;
      for (;;) {
        auto [quo, r] = rem.div_rem(p);
        if (!r.is_zero()) break;
        rem = std::move(quo);
        ++e;
      }
      if (e) out.factors.push_back({p, e});
    }
  }
  if (rem.deg() >= 1) out.factors.push_back({rem, 1});
  std::sort(out.factors.begin(), out.factors.end(),
            [](const Factor& a, const Factor& b) { return a.prime < b.prime; });
  return out;
}

ArithmeticData arithmetic_functions(const Polynomial& f) {
  if (!f.is_monic()) throw InvalidArgument("arithmetic functions expect a monic polynomial");
  const std::uint32_t q = f.modulus();
  Factorization fac = factor(f);
  ArithmeticData a{1, 0, 1, Polynomial::constant(q, 1), 1, true};
  for (const auto& [p, e] : fac.factors) {
    const std::uint64_t np = p.norm();
    a.moebius = (e > 1) ? 0 : -a.moebius;
    if (e > 1) a.is_squarefree = false;
    a.d4 *= static_cast<std::uint64_t>(e + 3) * (e + 2) * (e + 1) / 6;
    a.radical = a.radical * p;
    a.euler_phi *= ipow(np, e) - ipow(np, e - 1);
  }
  if (!a.is_squarefree) a.moebius = 0;
  if (fac.factors.size() == 1) a.von_mangoldt = static_cast<unsigned>(fac.factors[0].prime.deg());
  return a;
}

// ---------------------------------------------------------------- enumeration

std::uint64_t enumeration_budget() { return g_budget.load(); }
void set_enumeration_budget(std::uint64_t items) { g_budget.store(items); }

void check_budget(std::uint32_t q, unsigned n) {
  double items = std::pow(static_cast<double>(q), static_cast<double>(n));
  if (items > static_cast<double>(enumeration_budget()))
    throw BudgetExceeded("enumeration of " + std::to_string(q) + "^" + std::to_string(n) +
                         " items exceeds the budget of " + std::to_string(enumeration_budget()));
}

std::uint64_t multiply_codes(std::uint32_t q, std::uint64_t a, std::uint64_t b) {
  std::array<std::uint32_t, 64> da{}, db{};
  std::array<std::uint64_t, 128> acc{};
  int na = 0, nb = 0;
  for (; a; a /= q) da[na++] = static_cast<std::uint32_t>(a % q);
  for (; b; b /= q) db[nb++] = static_cast<std::uint32_t>(b % q);
  if (!na || !nb) return 0;
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j) acc[i + j] += static_cast<std::uint64_t>(da[i]) * db[j];
  std::uint64_t code = 0;
  for (int i = na + nb - 2; i >= 0; --i) code = code * q + acc[i] % q;
  return code;
}

void for_each(SetKind kind, std::uint32_t q, unsigned n, const std::function<void(const Polynomial&)>& fn) {
  validate_modulus(q);
  switch (kind) {
    case SetKind::Monic: {
      check_budget(q, n);
      const std::uint64_t lo = ipow(q, n);
      for (std::uint64_t c = lo; c < 2 * lo; ++c) fn(Polynomial::from_code(q, c));
      break;
    }
    case SetKind::MonicUpTo:
      for (unsigned d = 0; d <= n; ++d) for_each(SetKind::Monic, q, d, fn);
      break;
    case SetKind::Squarefree: {
      if (n < 1) throw InvalidArgument("H_n requires n >= 1");
      for_each(SetKind::Monic, q, n, [&](const Polynomial& f) {
        if (is_squarefree(f)) fn(f);
      });
      break;
    }
    case SetKind::Irreducible:
      for (const auto& p : irreducibles(q, n)) fn(p);
      break;
  }
}

std::vector<Polynomial> enumerate(SetKind kind, std::uint32_t q, unsigned n) {
  std::vector<Polynomial> out;
  for_each(kind, q, n, [&](const Polynomial& f) { out.push_back(f); });
  return out;
}

const std::vector<Polynomial>& irreducibles(std::uint32_t q, unsigned n) {
  static std::mutex mu;
  static std::map<std::pair<std::uint32_t, unsigned>, std::vector<Polynomial>> cache;
  validate_modulus(q);
  if (n < 1) throw InvalidArgument("irreducibles need degree >= 1");
  {
    std::lock_guard lock(mu);
    auto it = cache.find({q, n});
    if (it != cache.end()) return it->second;
  }
  check_budget(q, n);
  // Lower-degree tables first, outside the lock (recursive construction).
  std::vector<const std::vector<Polynomial>*> lower;
  for (unsigned d = 1; 2 * d <= n; ++d) lower.push_back(&irreducibles(q, d));

  const std::uint64_t base = ipow(q, n);
  std::vector<bool> composite(base, false);
  for (unsigned d = 1; 2 * d <= n; ++d) {
    const std::uint64_t cofirst = ipow(q, n - d);
    for (const auto& p : *lower[d - 1]) {
      const std::uint64_t pc = p.code();
      for (std::uint64_t h = cofirst; h < 2 * cofirst; ++h) composite[multiply_codes(q, pc, h) - base] = true;
    }
  }
  std::vector<Polynomial> primes;
  for (std::uint64_t i = 0; i < base; ++i)
    if (!composite[i]) primes.push_back(Polynomial::from_code(q, base + i));

  std::lock_guard lock(mu);
  return cache.emplace(std::pair{q, n}, std::move(primes)).first->second;
}

PptReport ppt_check(std::uint32_t q, unsigned n) {
  if (n < 1) throw InvalidArgument("ppt_check needs n >= 1");
  PptReport r{};
  r.count = irreducibles(q, n).size();
  r.main_term = std::pow(static_cast<double>(q), n) / n;
  r.deviation = std::abs(static_cast<double>(r.count) - r.main_term);
  r.within_bound = r.deviation <= 2.0 * std::pow(static_cast<double>(q), n / 2.0) / n + 1e-9;
  return r;
}

}  // namespace ffm::ffpoly
