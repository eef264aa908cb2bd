#pragma once

#include <array>
#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/mpfr.hpp>
#include <cstdint>
#include <vector>

#include "ffm/errors.hpp"

namespace ffm::eulerprod {

using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>, boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::cpp_int;

inline constexpr unsigned kDefaultPrecisionBits = 192;

// Sets the working precision of newly created Real values for its lifetime.
class PrecisionGuard {
 public:
  explicit PrecisionGuard(unsigned bits);
  ~PrecisionGuard();
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  unsigned saved_;
};

// Value and partial derivatives to total order 2 in two variables.
template <class T>
struct Jet2 {
  T v{0}, x{0}, y{0}, xx{0}, xy{0}, yy{0};

  Jet2() = default;
  Jet2(const T& c) : v(c) {}  // NOLINT: constants promote implicitly
  Jet2(int c) : v(c) {}       // NOLINT

  static Jet2 var_x(const T& at) {
    Jet2 j(at);
    j.x = 1;
    return j;
  }
  static Jet2 var_y(const T& at) {
    Jet2 j(at);
    j.y = 1;
    return j;
  }

  friend Jet2 operator+(Jet2 a, const Jet2& b) {
    a.v += b.v, a.x += b.x, a.y += b.y, a.xx += b.xx, a.xy += b.xy, a.yy += b.yy;
    return a;
  }
  friend Jet2 operator-(Jet2 a, const Jet2& b) {
    a.v -= b.v, a.x -= b.x, a.y -= b.y, a.xx -= b.xx, a.xy -= b.xy, a.yy -= b.yy;
    return a;
  }
  Jet2 operator-() const { return Jet2(0) - *this; }
  friend Jet2 operator*(const Jet2& a, const Jet2& b) {
    Jet2 r;
    r.v = a.v * b.v;
    r.x = a.x * b.v + a.v * b.x;
    r.y = a.y * b.v + a.v * b.y;
    r.xx = a.xx * b.v + 2 * a.x * b.x + a.v * b.xx;
    r.yy = a.yy * b.v + 2 * a.y * b.y + a.v * b.yy;
    r.xy = a.xy * b.v + a.x * b.y + a.y * b.x + a.v * b.xy;
    return r;
  }
  // phi(f) given phi(f.v), phi'(f.v), phi''(f.v).
  Jet2 compose(const T& p0, const T& p1, const T& p2) const {
    Jet2 r;
    r.v = p0;
    r.x = p1 * x;
    r.y = p1 * y;
    r.xx = p2 * x * x + p1 * xx;
    r.yy = p2 * y * y + p1 * yy;
    r.xy = p2 * x * y + p1 * xy;
    return r;
  }
  friend Jet2 operator/(const Jet2& a, const Jet2& b) {
    const T inv = 1 / b.v;
    return a * b.compose(inv, -inv * inv, 2 * inv * inv * inv);
  }
  Jet2& operator+=(const Jet2& o) { return *this = *this + o; }
  Jet2& operator*=(const Jet2& o) { return *this = *this * o; }
};

template <class T>
Jet2<T> log(const Jet2<T>& f) {
  using std::log;
  using boost::multiprecision::log;
  const T inv = 1 / f.v;
  return f.compose(log(f.v), inv, -inv * inv);
}

template <class T>
Jet2<T> exp(const Jet2<T>& f) {
  using std::exp;
  using boost::multiprecision::exp;
  const T e = exp(f.v);
  return f.compose(e, e, e);
}

template <class T>
T ipow(const T& b, unsigned e) {
  T r(1);
  for (unsigned i = 0; i < e; ++i) r = r * b;
  return r;
}

// Euler factors, written for any ring-like T (Real, Jet2, truncated series).
template <class T>
T A_factor(const T& P) {
  const T one(1);
  return ipow(P - one, 6) * (ipow(P, 5) + T(7) * ipow(P, 4) - T(3) * ipow(P, 3) + T(6) * P * P - T(4) * P + one) /
         (ipow(P, 10) * (P + one));
}

// X = |P|, W = w^{d(P)}, U = u^{d(P)}.
template <class T>
T H_factor(const T& X, const T& W, const T& U) {
  const T one(1);
  const T bracket = T(10) - T(5) * W + T(4) * W * W - W * W * W;
  return ipow(one - W, 10) * (one + (X - one) * W * bracket / (X * (one - U) * ipow(one - W, 4)));
}

// X = |P|, W = w^{d(P)}, Y = x^{d(P)}, U = u^{d(P)}.
template <class T>
T B_factor(const T& X, const T& W, const T& Y, const T& U) {
  const T one(1);
  const T W2 = W * W, W3 = W2 * W, W4 = W2 * W2, W6 = W4 * W2, W8 = W4 * W4;
  const T Y2 = Y * Y, Y3 = Y2 * Y, Y4 = Y2 * Y2;
  const T X2 = X * X, X3 = X2 * X, X4 = X2 * X2;
  const T inner = T(4) * W - T(4) * W * Y + T(6) * X * W2 * Y + T(4) * X * W2 * Y * U - T(10) * W2 * Y +
                  T(4) * X * W3 * Y - T(4) * X * W3 * Y2 + T(5) * X * W4 * Y2 + X2 * W4 * Y2 -
                  T(6) * X2 * W4 * Y2 * U - T(4) * X2 * W6 * Y3 + T(4) * X3 * W6 * Y3 * U + X3 * W8 * Y4 -
                  X4 * W8 * Y4 * U;
  return ipow(one - W, 4) * ipow(one - X * W2 * Y, 6) / ipow(one - W * Y, 4) * (one + inner / (one - U));
}

// Number of monic irreducibles of degree n over F_q, n = 0..N (entry 0 unused).
std::vector<BigInt> prime_counts(std::uint32_t q, unsigned N);

struct ProductValue {
  Real value;
  Real tail_bound;
  unsigned cutoff_degree;
};

struct JetProduct {
  Jet2<Real> value;
  Real tail_bound;  // for the value component
  unsigned cutoff_degree;
};

ProductValue closed_A(std::uint32_t q, unsigned N);
ProductValue compute_H(const Real& w, const Real& u, std::uint32_t q, unsigned N);
// Jet in w (x-slot of the jet).
JetProduct compute_H_jet(const Real& w, const Real& u, std::uint32_t q, unsigned N);
ProductValue compute_B(const Real& x, const Real& w, const Real& u, std::uint32_t q, unsigned N);
// C(x, w) = B(x, w, 1/(q^2 x)); jet in (x, w).
JetProduct compute_C_jet(const Real& x, const Real& w, std::uint32_t q, unsigned N);
ProductValue compute_C(const Real& x, const Real& w, std::uint32_t q, unsigned N);

struct PrimeSums {
  Real a, h, b, e, r, f;
  Real zeta_id1;  // sum d(P)/(|P|^2-1), equals 1/(q-1)
  Real zeta_id2;  // sum d(P)^2|P|^2/(|P|^2-1)^2, equals q/(q-1)^2
  Real tail_bound;
};

PrimeSums prime_sums(std::uint32_t q, unsigned N);

struct CoefficientSet {
  std::uint32_t q;
  unsigned N;
  Real zeta2;
  Real A, a, h, b, e, r, f;
  Real H, Hw, Hww;                 // H(w, 1/q^2) and w-derivatives at w = 1/q
  Real C, Cw, Cx, Cww, Cxx, Cxw;   // C(x, w) and partials at (1, 1/q)
  Real a10, a9, a8, b10, b9, b8;
  Real tail_bound;
  // Relative residuals of the closed-form derivative identities.
  Real id_Hw, id_Hww, id_Cw, id_Cw_literal, id_Cx, id_Cww, id_Cxx, id_Cxw;
  Real id_combination;  // 7e/2 + 27f - r - 24h - 32b vs zeta_id2
  Real id_zeta1, id_zeta2;

  Real rel_diff_10() const;
  Real rel_diff_9() const;
  Real rel_diff_8() const;
};

// Throws InvalidArgument when the tail bound cannot support 1e-8 relative agreement.
CoefficientSet coefficients(std::uint32_t q, unsigned N, bool require_tail = true);

struct QRValues {
  Real Q0, Q1, Q2, R0, R1, R2, c9, c8, f9, f8;
  // alpha^2 g^8 parts of (2g)^8 Q2 and -g^8 R2.
  Real alpha2_cancellation;
};

QRValues qr_polynomials(const CoefficientSet& cs, const Real& alpha);

struct ConjectureQ {
  std::uint32_t q;
  unsigned N;
  unsigned nodes;
  double radius;
  std::array<double, 11> x_coeffs;  // Q(x) = sum x_coeffs[i] x^i
  std::array<double, 11> g_coeffs;  // Q(2g+1) / zeta_q(2) = sum g_coeffs[i] g^i
  std::array<double, 3> b_rel_error;  // g^10, g^9, g^8 coefficients against b10, b9, b8
  bool self_consistent;               // all three within 1e-6

  double evaluate(double x) const;
};

// Requires nodes >= 32. workers = 0 uses the hardware concurrency.
ConjectureQ conjecture_Q(std::uint32_t q, unsigned N, unsigned nodes, double radius = 0.05, unsigned workers = 0);

struct ConjectureDoubling {
  ConjectureQ coarse, fine;
  double worst_rel_change;
};

// Runs nodes and 2*nodes; throws ConvergenceError quoting both estimates when any
// coefficient moves by more than tol (relative).
ConjectureDoubling conjecture_Q_doubling(std::uint32_t q, unsigned N, unsigned nodes, double radius = 0.05,
                                         double tol = 1e-8, unsigned workers = 0);

// q^{2g+1} (a10 g^10 + a9 g^9 + a8 g^8)
Real theory_fourth_moment(const CoefficientSet& cs, unsigned g);
// sum over H_{2g+1} of Q(2g+1), i.e. q^{2g}(q-1) Q(2g+1)
double conjectured_fourth_moment(const ConjectureQ& Q, unsigned g);

}  // namespace ffm::eulerprod
