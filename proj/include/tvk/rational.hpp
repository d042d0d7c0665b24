#ifndef TVK_RATIONAL_HPP
#define TVK_RATIONAL_HPP

// Exact Q[i] arithmetic used by the symbolic engine, plus the polynomial
// binomial coefficient C(s+j-1, j) evaluated at integer arguments.

#include <boost/multiprecision/gmp.hpp>

#include <stdexcept>
#include <string>

namespace tvk {

using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

/// binom(n, j) via the falling factorial n(n-1)...(n-j+1)/j!, so it is the
/// polynomial extension valid for any integer n (binom(1,2) = 0,
/// binom(-2,2) = 3, ...).
inline Rational binomial_rational(long n, int j) {
  if (j < 0) throw std::invalid_argument("binomial_rational: j < 0");
  BigInt num = 1;
  BigInt den = 1;
  for (int i = 0; i < j; ++i) {
    num *= BigInt(n - i);
    den *= BigInt(i + 1);
  }
  return Rational(num) / Rational(den);
}

/// the expansion-series binomial C(s+j-1, j) at integer s
inline Rational lambda_binomial(long s, int j) { return binomial_rational(s + j - 1, j); }

/// Exact a+bi with rational a, b.
struct GaussianRational {
  Rational re{0};
  Rational im{0};

  GaussianRational() = default;
  GaussianRational(Rational r, Rational i = 0) : re(std::move(r)), im(std::move(i)) {}
  static GaussianRational unit() { return GaussianRational(1); }

  /// i^e, e taken mod 4
  static GaussianRational i_power(long e) {
    switch (((e % 4) + 4) % 4) {
      case 0: return GaussianRational(1, 0);
      case 1: return GaussianRational(0, 1);
      case 2: return GaussianRational(-1, 0);
      default: return GaussianRational(0, -1);
    }
  }

  bool is_zero() const { return re == 0 && im == 0; }

  GaussianRational operator-() const { return {-re, -im}; }

  GaussianRational& operator+=(const GaussianRational& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  GaussianRational& operator-=(const GaussianRational& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  GaussianRational& operator*=(const GaussianRational& o) {
    Rational r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }

  bool operator==(const GaussianRational& o) const { return re == o.re && im == o.im; }

  std::string str() const {
    auto rat = [](const Rational& q) { return q.str(); };
    if (im == 0) return rat(re);
    std::string imag = (im == 1) ? "i" : (im == -1 ? "-i" : rat(im) + "*i");
    if (re == 0) return imag;
    if (im > 0) return rat(re) + "+" + imag;
    return rat(re) + imag;  // sign carried by imag
  }
};

}  // namespace tvk

#endif  // TVK_RATIONAL_HPP
