#include "ffm/characters.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ffm::characters {

using ffpoly::Coeff;
using ffpoly::ipow;

namespace {

Complex root_of_unity(std::uint32_t q, std::uint64_t k) {
  const long double angle = 2.0L * std::numbers::pi_v<long double> * static_cast<long double>(k % q) / q;
  return {std::cos(angle), std::sin(angle)};
}

std::vector<Complex> roots_table(std::uint32_t q) {
  std::vector<Complex> w(q);
  for (std::uint32_t k = 0; k < q; ++k) w[k] = root_of_unity(q, k);
  return w;
}

void require_monic(const Polynomial& f, const char* what) {
  if (!f.is_monic()) throw InvalidArgument(std::string(what) + ": modulus must be monic");
}

}  // namespace

void require_q_1_mod_4(std::uint32_t q) {
  if (q % 4 != 1) throw DomainError("quadratic characters require q = 1 mod 4, got q = " + std::to_string(q));
}

SymbolValue residue_symbol(const Polynomial& f, const Polynomial& P) {
  require_monic(P, "residue_symbol");
  if (P.deg() < 1 || !ffpoly::is_irreducible(P)) throw InvalidArgument("residue_symbol: P must be irreducible");
  const std::uint32_t q = P.modulus();
  if (q == 2) throw DomainError("residue symbols need odd q");
  Polynomial r = f % P;
  if (r.is_zero()) return 0;
  Polynomial v = r.pow_mod((P.norm() - 1) / 2, P);
  if (v.is_one()) return 1;
  if (v.deg() == 0 && v.coeff(0) == q - 1) return -1;
  throw std::logic_error("Euler criterion produced a non-unit value");
}

SymbolValue jacobi_symbol(const Polynomial& A, const Polynomial& B) {
  require_monic(B, "jacobi_symbol");
  require_q_1_mod_4(B.modulus());
  SymbolValue result = 1;
  Polynomial a = A, b = B;
  for (;;) {
    if (b.is_one()) return result;
    a = a % b;
    if (a.is_zero()) return 0;
    const int lc = ffpoly::FieldElement(a.lead(), a.modulus()).legendre();
    if (lc == -1 && (b.deg() % 2 == 1)) result = -result;
    a = a.monic();
    std::swap(a, b);
  }
}

SymbolValue chi(const Polynomial& D, const Polynomial& f) { return jacobi_symbol(D, f); }

Coeff laurent_a1(const Polynomial& u, const Polynomial& f) {
  if (f.is_zero()) throw DomainError("e(u/f) with f = 0");
  const std::uint32_t q = f.modulus();
  const int n = f.deg();
  // Divide u*x^2 by f; the x^1 quotient coefficient is the 1/x coefficient of u/f.
  std::vector<std::int64_t> r(u.coeffs().size() + 2, 0);
  for (std::size_t i = 0; i < u.coeffs().size(); ++i) r[i + 2] = u.coeffs()[i];
  const std::int64_t inv = ffpoly::FieldElement(f.lead(), q).inverse().value();
  Coeff a1 = 0;
  for (int top = static_cast<int>(r.size()) - 1; top >= n; --top) {
    const std::int64_t t = ((r[top] % q + q) % q) * inv % q;
    if (top - n == 1) a1 = static_cast<Coeff>(t);
    if (!t) continue;
    for (int j = 0; j <= n; ++j) r[top - n + j] = (r[top - n + j] - t * f.coeff(j)) % q;
  }
  return a1;
}

Complex exponential(const Polynomial& u, const Polynomial& f) {
  return root_of_unity(f.modulus(), laurent_a1(u, f));
}

// ---------------------------------------------------------------- ResidueMap

ResidueMap::ResidueMap(const Polynomial& f, unsigned max_input_degree)
    : q_(f.modulus()), n_(0), size_(1) {
  require_monic(f, "ResidueMap");
  n_ = static_cast<unsigned>(f.deg());
  size_ = ipow(q_, n_);
  Polynomial xi = Polynomial::constant(q_, 1) % f;
  const Polynomial x = Polynomial::x(q_);
  for (unsigned i = 0; i <= std::max(max_input_degree, n_); ++i) {
    images_.push_back(xi.code());
    xi = (xi * x) % f;
  }
}

std::uint64_t ResidueMap::add(std::uint64_t a, std::uint64_t b) const {
  std::uint64_t out = 0, place = 1;
  for (unsigned j = 0; j < n_; ++j) {
    out += ((a % q_ + b % q_) % q_) * place;
    a /= q_;
    b /= q_;
    place *= q_;
  }
  return out;
}

std::uint64_t ResidueMap::reduce(std::uint64_t code) const {
  if (code < size_) return code;
  std::uint64_t acc[64] = {};
  for (unsigned i = 0; code; ++i, code /= q_) {
    const std::uint32_t c = static_cast<std::uint32_t>(code % q_);
    if (!c) continue;
    if (i >= images_.size()) throw InvalidArgument("ResidueMap: input degree above the configured maximum");
    std::uint64_t img = images_[i];
    for (unsigned j = 0; j < n_ && img; ++j, img /= q_) acc[j] += static_cast<std::uint64_t>(c) * (img % q_);
  }
  std::uint64_t out = 0;
  for (unsigned j = n_; j-- > 0;) out = out * q_ + acc[j] % q_;
  return out;
}

// ---------------------------------------------------------------- ResidueCharacter

ResidueCharacter::ResidueCharacter(const Polynomial& f) : f_(f), map_(f, 2 * std::max(f.deg(), 0)) {
  require_monic(f, "ResidueCharacter");
  require_q_1_mod_4(f.modulus());
  const std::uint32_t q = f.modulus();
  const unsigned n = static_cast<unsigned>(f.deg());
  ffpoly::check_budget(q, n);
  const std::uint64_t size = ipow(q, n);
  table_.assign(size, 1);
  if (n == 0) return;
  for (const auto& [P, e] : ffpoly::factor(f).factors) {
    const unsigned dp = static_cast<unsigned>(P.deg());
    const std::uint64_t np = ipow(q, dp);
    ResidueMap pmap(P, std::max(2 * dp, n));
    std::vector<std::int8_t> sym(np, -1);
    sym[0] = 0;
    if (e % 2 == 1) {
      for (std::uint64_t r = 1; r < np; ++r) sym[pmap.reduce(ffpoly::multiply_codes(q, r, r))] = 1;
    } else {
      for (std::uint64_t r = 1; r < np; ++r) sym[r] = 1;
    }
    for (std::uint64_t w = 0; w < size; ++w) table_[w] = static_cast<std::int8_t>(table_[w] * sym[pmap.reduce(w)]);
  }
}

SymbolValue ResidueCharacter::of(const Polynomial& w) const { return table_[(w % f_).code()]; }

// ---------------------------------------------------------------- Gauss sums

GaussSum gauss_sum(const Polynomial& V, const Polynomial& f) {
  ResidueCharacter chi(f);
  const std::uint32_t q = f.modulus();
  const auto w = roots_table(q);
  const Polynomial v = V % f;
  Complex total{0, 0};
  for (std::uint64_t code = 0; code < chi.size(); ++code) {
    const SymbolValue s = chi[code];
    if (!s) continue;
    const Polynomial W = Polynomial::from_code(q, code);
    total += static_cast<long double>(s) * w[laurent_a1(v * W, f)];
  }
  return {total, f, V};
}

GaussSum gauss_sum_closed(const Polynomial& V, const Polynomial& P, unsigned i) {
  if (i < 1) throw InvalidArgument("gauss_sum_closed needs i >= 1");
  require_monic(P, "gauss_sum_closed");
  if (!ffpoly::is_irreducible(P)) throw InvalidArgument("gauss_sum_closed: P must be irreducible");
  const long double np = static_cast<long double>(P.norm());
  // alpha = multiplicity of P in V, infinite for V = 0.
  unsigned alpha = 0;
  bool infinite = V.is_zero();
  Polynomial v1 = V;
  if (!infinite) {
    for (;;) {
      auto [quo, rem] = v1.div_rem(P);
      if (!rem.is_zero()) break;
      v1 = std::move(quo);
      ++alpha;
    }
  }
  Complex value{0, 0};
  const bool even = (i % 2 == 0);
  if (infinite || i <= alpha) {
    if (even) value = std::pow(np, static_cast<long double>(i)) - std::pow(np, static_cast<long double>(i - 1));
  } else if (i == alpha + 1) {
    const long double base = std::pow(np, static_cast<long double>(i - 1));
    value = even ? -base : static_cast<long double>(residue_symbol(v1, P)) * base * std::sqrt(np);
  }
  return {value, P.pow(i), V};
}

GaussTable::GaussTable(const Polynomial& f) : chi_(f) {
  const std::uint32_t q = f.modulus();
  const unsigned n = static_cast<unsigned>(f.deg());
  const std::uint64_t size = chi_.size();
  std::vector<Complex> hat(size);
  for (std::uint64_t c = 0; c < size; ++c) hat[c] = static_cast<long double>(chi_[c]);
  const auto w = roots_table(q);
  // Transform along each digit: hat(y) = sum_W chi(W) w^{y.W}.
  std::vector<Complex> line(q), out(q);
  std::uint64_t stride = 1;
  for (unsigned axis = 0; axis < n; ++axis, stride *= q) {
    for (std::uint64_t base = 0; base < size; ++base) {
      if ((base / stride) % q != 0) continue;
      for (std::uint32_t t = 0; t < q; ++t) line[t] = hat[base + t * stride];
      for (std::uint32_t y = 0; y < q; ++y) {
        Complex s{0, 0};
        for (std::uint32_t t = 0; t < q; ++t) s += line[t] * w[(static_cast<std::uint64_t>(y) * t) % q];
        out[y] = s;
      }
      for (std::uint32_t y = 0; y < q; ++y) hat[base + y * stride] = out[y];
    }
  }
  // top[s] = coefficient of x^{n-1} in x^s mod f; the pairing (V, W) -> a1(VW/f) is sum V_j W_k top[j+k].
  std::vector<std::uint32_t> top(2 * n + 1, 0);
  const auto& map = chi_.residue_map();
  for (unsigned s = 0; n > 0 && s + 1 < 2 * n; ++s) top[s] = static_cast<std::uint32_t>(map.power_image(s) / ipow(q, n - 1));
  values_.resize(size);
  std::vector<std::uint32_t> vd(n);
  for (std::uint64_t v = 0; v < size; ++v) {
    std::uint64_t t = v;
    for (unsigned j = 0; j < n; ++j, t /= q) vd[j] = static_cast<std::uint32_t>(t % q);
    std::uint64_t y = 0;
    for (unsigned k = n; k-- > 0;) {
      std::uint64_t yk = 0;
      for (unsigned j = 0; j < n; ++j) yk += static_cast<std::uint64_t>(vd[j]) * top[j + k];
      y = y * q + yk % q;
    }
    values_[v] = hat[y];
  }
}

const Complex& GaussTable::at(const Polynomial& V) const { return values_[(V % chi_.modulus()).code()]; }

// ---------------------------------------------------------------- character sums

std::int64_t char_sum(const ResidueCharacter& chi, unsigned m) {
  const std::uint32_t q = chi.modulus().modulus();
  ffpoly::check_budget(q, m);
  const std::uint64_t first = ipow(q, m);
  std::int64_t total = 0;
  if (first < chi.size()) {
    for (std::uint64_t h = first; h < 2 * first; ++h) total += chi[h];
    return total;
  }
  ResidueMap map(chi.modulus(), m);
  const std::uint64_t n = chi.size();
  // h = lo + x^n * hi with lo of degree < n.
  for (std::uint64_t hi = first / n; hi < 2 * first / n; ++hi) {
    const std::uint64_t off = map.reduce(hi * n);
    for (std::uint64_t lo = 0; lo < n; ++lo) total += chi[map.add(lo, off)];
  }
  return total;
}

std::int64_t char_sum(const Polynomial& f, unsigned m) { return char_sum(ResidueCharacter(f), m); }

PoissonResult poisson_check(const GaussTable& table, unsigned m) {
  if (m < 1) throw InvalidArgument("poisson_check needs m >= 1");
  const Polynomial& f = table.character().modulus();
  if (f.deg() < 1) throw InvalidArgument("poisson_check needs d(f) >= 1");
  const std::uint32_t q = f.modulus();
  const int n = f.deg();
  PoissonResult r{};
  r.lhs = static_cast<long double>(char_sum(table.character(), m));
  auto layer = [&](int k) {
    Complex s{0, 0};
    if (k < 0) return s;
    const std::uint64_t first = ipow(q, static_cast<unsigned>(k));
    for (std::uint64_t v = first; v < 2 * first; ++v) s += table[v];
    return s;
  };
  const long double scale = std::pow(static_cast<long double>(q), static_cast<long double>(m) - n);
  const int top = n - static_cast<int>(m) - 1;
  if (n % 2 == 0) {
    Complex low{0, 0};
    for (int k = 0; k <= top - 1; ++k) low += layer(k);
    r.rhs = scale * (table[0] + static_cast<long double>(q - 1) * low - layer(top));
  } else {
    r.rhs = scale * std::sqrt(static_cast<long double>(q)) * layer(top);
  }
  r.abs_error = std::abs(r.rhs - r.lhs);
  return r;
}

PoissonResult poisson_check(const Polynomial& f, unsigned m) { return poisson_check(GaussTable(f), m); }

std::vector<Polynomial> divisors_of_power(const Polynomial& f, unsigned max_degree) {
  const std::uint32_t q = f.modulus();
  std::vector<Polynomial> primes;
  if (f.deg() >= 1)
    for (const auto& fac : ffpoly::factor(f).factors) primes.push_back(fac.prime);
  std::vector<Polynomial> out;
  auto rec = [&](auto&& self, std::size_t idx, const Polynomial& acc) -> void {
    if (idx == primes.size()) {
      out.push_back(acc);
      return;
    }
    Polynomial cur = acc;
    while (cur.deg() <= static_cast<int>(max_degree)) {
      self(self, idx + 1, cur);
      cur = cur * primes[idx];
    }
  };
  rec(rec, 0, Polynomial::constant(q, 1));
  std::sort(out.begin(), out.end());
  return out;
}

SumdResult sumd_check(const Polynomial& f, unsigned g) {
  if (!f.is_monic()) throw InvalidArgument("sumd_check expects monic f");
  const std::uint32_t q = f.modulus();
  ResidueCharacter chi(f);
  SumdResult r{0, 0};
  const unsigned n = 2 * g + 1;
  ResidueMap map(f, n);
  ffpoly::for_each(ffpoly::SetKind::Squarefree, q, n, [&](const Polynomial& D) { r.lhs += chi[map.reduce(D.code())]; });
  for (const auto& C : divisors_of_power(f, n / 2)) {
    const int dc = C.deg();
    const int k1 = static_cast<int>(n) - 2 * dc;
    const int k2 = static_cast<int>(n) - 2 - 2 * dc;
    if (k1 >= 0) r.rhs += char_sum(chi, static_cast<unsigned>(k1));
    if (k2 >= 0) r.rhs -= static_cast<std::int64_t>(q) * char_sum(chi, static_cast<unsigned>(k2));
  }
  return r;
}

}  // namespace ffm::characters
