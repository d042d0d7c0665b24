#ifndef TVK_BIGFLOAT_HPP
#define TVK_BIGFLOAT_HPP

// Arbitrary-precision real/complex values with attached error estimates,
// precision policy, and decimal rendering.

#include <tvk/rational.hpp>

#include <boost/multiprecision/mpfr.hpp>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <set>
#include <stdexcept>
#include <string>

namespace tvk {

using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>>;

struct PrecisionPolicy {
  int target_digits = 30;
  int guard_extra = 10;        // guard = target + guard_extra + guard_per_weight * weight
  int guard_per_weight = 5;
  long max_outer_terms = 200000;
  int acceleration_order = 0;  // 0 = adaptive
  int oracle_digits = 12;      // accuracy target of path-ODE evaluations
  bool trace = false;          // per-step diagnostics on stderr

  int guard_digits(int weight) const { return target_digits + guard_extra + guard_per_weight * weight; }
  double tolerance() const { return std::pow(10.0, -target_digits); }
  double oracle_tolerance() const { return std::pow(10.0, -oracle_digits); }
};

/// Sets the working decimal precision for Reals constructed in this scope.
///
/// The library default precision is process-global, so concurrent scopes
/// requesting different precisions would race.  Precision is a correctness
/// minimum (extra digits are harmless), so the active precision is kept at
/// the maximum over all live scopes, tracked under a mutex.
class ScopedPrecision {
 public:
  explicit ScopedPrecision(int digits10) : digits_(std::max(digits10, 20)) {
    std::lock_guard<std::mutex> lock(mutex());
    active().insert(digits_);
    Real::default_precision(static_cast<unsigned>(*active().rbegin()));
  }
  ~ScopedPrecision() {
    std::lock_guard<std::mutex> lock(mutex());
    active().erase(active().find(digits_));
    Real::default_precision(active().empty() ? 30u
                                             : static_cast<unsigned>(*active().rbegin()));
  }
  ScopedPrecision(const ScopedPrecision&) = delete;
  ScopedPrecision& operator=(const ScopedPrecision&) = delete;

 private:
  static std::mutex& mutex() {
    static std::mutex m;
    return m;
  }
  static std::multiset<int>& active() {
    static std::multiset<int> s;
    return s;
  }
  int digits_;
};

inline Real real_pi() {
  Real x;
  mpfr_const_pi(x.backend().data(), MPFR_RNDN);
  return x;
}

inline Real real_catalan() {
  Real x;
  mpfr_const_catalan(x.backend().data(), MPFR_RNDN);
  return x;
}

inline Real to_real(const Rational& q) { return static_cast<Real>(q); }

struct Complex {
  Real re{0};
  Real im{0};

  Complex() = default;
  Complex(Real r) : re(std::move(r)) {}
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
  static Complex i_unit() { return Complex(Real(0), Real(1)); }

  Complex& operator+=(const Complex& o) { re += o.re; im += o.im; return *this; }
  Complex& operator-=(const Complex& o) { re -= o.re; im -= o.im; return *this; }
  Complex& operator*=(const Complex& o) {
    Real r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }
  Complex& operator/=(const Complex& o) {
    Real d = o.re * o.re + o.im * o.im;
    Real r = (re * o.re + im * o.im) / d;
    im = (im * o.re - re * o.im) / d;
    re = std::move(r);
    return *this;
  }
  friend Complex operator+(Complex a, const Complex& b) { return a += b; }
  friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
  friend Complex operator*(Complex a, const Complex& b) { return a *= b; }
  friend Complex operator/(Complex a, const Complex& b) { return a /= b; }
  Complex operator-() const { return Complex(-re, -im); }

  friend Complex operator*(const Real& a, Complex b) { b.re *= a; b.im *= a; return b; }
  friend Complex operator*(Complex b, const Real& a) { b.re *= a; b.im *= a; return b; }

  Real abs() const { return boost::multiprecision::sqrt(re * re + im * im); }
  double abs_double() const { return static_cast<double>(abs()); }
};

inline Complex to_complex(const GaussianRational& g) { return Complex(to_real(g.re), to_real(g.im)); }

/// value + heuristic error bound (absolute)
struct RealValue {
  Real value{0};
  double error = 0.0;
};

struct ComplexValue {
  Complex value;
  double error = 0.0;
};

/// number of significant digits actually supported by the error estimate
inline int supported_digits(const Real& v, double error, int requested) {
  if (error <= 0) return requested;
  double av = std::abs(static_cast<double>(v));
  if (av == 0.0) {
    int d = static_cast<int>(std::floor(-std::log10(error)));
    return std::clamp(d, 1, requested);
  }
  int d = static_cast<int>(std::floor(std::log10(av / error)));
  return std::clamp(d, 1, requested);
}

/// Decimal rendering, never showing more digits than the error supports.
inline std::string render(const Real& v, double error, int digits) {
  return v.str(supported_digits(v, error, digits));
}

inline std::string render(const RealValue& v, int digits) { return render(v.value, v.error, digits); }

inline std::string render(const ComplexValue& v, int digits) {
  std::string re = render(v.value.re, v.error, digits);
  std::string im = render(v.value.im, v.error, digits);
  if (v.value.im == 0) return re;
  if (v.value.re == 0) return im + "*i";
  return re + (v.value.im > 0 ? " + " : " - ") +
         (v.value.im > 0 ? im : render(-v.value.im, v.error, digits)) + "*i";
}

}  // namespace tvk

#endif  // TVK_BIGFLOAT_HPP
