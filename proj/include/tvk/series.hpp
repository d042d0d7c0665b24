#ifndef TVK_SERIES_HPP
#define TVK_SERIES_HPP

// Accelerated evaluation of the nested alternating series defining multiple
// T~-values, and the depth-one Dirichlet beta fast path.

#include <tvk/bigfloat.hpp>
#include <tvk/index.hpp>

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tvk {

/// Thrown when a series fails to converge within the term budget; carries
/// the best estimate so far.
struct convergence_error : std::runtime_error {
  Real best_estimate;
  double error;
  convergence_error(const std::string& what, Real best, double err)
      : std::runtime_error(what), best_estimate(std::move(best)), error(err) {}
};

struct AltSeriesResult {
  Real value{0};
  double error = 0.0;
  long terms_used = 0;
};

/// Sum_{n>=0} (-1)^n a_n for slowly decaying positive a_n, by direct summation
/// of the head plus the iterated-averaging (Euler transform) of the tail.
/// The error estimate combines the last two acceleration orders with two
/// truncation depths.  `order` = 0 means adaptive (as many averaging passes
/// as terms allow, stopping when the diagonal stabilizes).
template <class TermFn>
AltSeriesResult euler_alternating_sum(TermFn&& term, double tol, long max_terms, int order = 0) {
  std::vector<Real> a;
  a.reserve(256);
  auto ensure_terms = [&](long n) {
    while (static_cast<long>(a.size()) < n) a.push_back(term(static_cast<long>(a.size())));
  };

  auto estimate = [&](long total, double* step_diff) -> Real {
    // head of N direct terms, tail triangle on the next m+1 terms
    const long N = total / 2;
    const long m = order > 0 ? std::min<long>(order, total - N - 1) : total - N - 1;
    ensure_terms(N + m + 1);
    Real head = 0;
    for (long n = 0; n < N; ++n) {
      if (n % 2 == 0)
        head += a[static_cast<size_t>(n)];
      else
        head -= a[static_cast<size_t>(n)];
    }
    std::vector<Real> t(static_cast<size_t>(m) + 1);
    Real acc = 0;
    for (long i = 0; i <= m; ++i) {
      if (i % 2 == 0)
        acc += a[static_cast<size_t>(N + i)];
      else
        acc -= a[static_cast<size_t>(N + i)];
      t[static_cast<size_t>(i)] = acc;
    }
    Real prev_top = t[0];
    double last_step = 0;
    size_t len = t.size();
    while (len > 1) {
      for (size_t i = 0; i + 1 < len; ++i) t[i] = (t[i] + t[i + 1]) / 2;
      --len;
      last_step = std::abs(static_cast<double>(t[0] - prev_top));
      prev_top = t[0];
      if (order == 0 && last_step < tol / 16 && len < t.size() - 4) break;
    }
    if (step_diff) *step_diff = last_step;
    const Real& tail = t[0];
    return (N % 2 == 0) ? Real(head + tail) : Real(head - tail);
  };

  long total = 48;
  Real prev;
  bool have_prev = false;
  double prev_step = 0;
  while (true) {
    double step_diff = 0;
    Real cur = estimate(total, &step_diff);
    if (have_prev) {
      double depth_diff = std::abs(static_cast<double>(cur - prev));
      double err = std::max(depth_diff, step_diff);
      if (err < tol)
        return AltSeriesResult{cur, std::max(err, 1e-307), static_cast<long>(a.size())};
      if (2 * total > max_terms)
        throw convergence_error("alternating series did not reach tolerance within term budget",
                                cur, err);
    }
    prev = cur;
    prev_step = step_diff;
    have_prev = true;
    total = total + total / 2;
    if (total > max_terms) total = max_terms;
  }
}

struct TtildeResult {
  RealValue val;
  bool conditionally_convergent = false;  // last entry 1: alternating outer sum only
  long terms_used = 0;
};

/// T~(k_1,...,k_r) = 2^r Sum_{0<m_1<...<m_r, m_j == j mod 2}
///                   (-1)^{(m_r - r)/2} / (m_1^{k_1} ... m_r^{k_r})
/// computed as the alternating outer sum over m_r = r+2n with the inner
/// partial sums maintained by
///   F_j(M) = F_j(M-1) + [M == j mod 2] * 2 * F_{j-1}(M-1) / M^{k_j}.
inline TtildeResult ttilde(const Index& k, const PrecisionPolicy& policy = {}) {
  if (k.empty()) throw std::domain_error("ttilde of empty index");
  ScopedPrecision prec(policy.guard_digits(k.weight()));
  const int r = k.depth();
  const int kr = k.last();
  const auto& e = k.entries();

  std::vector<Real> F(static_cast<size_t>(r));
  F[0] = 1;  // F_0 == 1 for all M
  long M = 0;
  auto advance_to = [&](long target) {
    while (M < target) {
      ++M;
      for (int j = r - 1; j >= 1; --j) {
        if (M % 2 == j % 2)
          F[static_cast<size_t>(j)] +=
              2 * F[static_cast<size_t>(j - 1)] / pow(Real(M), e[static_cast<size_t>(j - 1)]);
      }
    }
  };

  auto term = [&](long n) -> Real {
    const long mr = r + 2 * n;
    advance_to(mr - 1);
    return 2 * F[static_cast<size_t>(r - 1)] / pow(Real(mr), kr);
  };

  const double tol = policy.tolerance() / 100;
  AltSeriesResult s = euler_alternating_sum(term, tol, policy.max_outer_terms,
                                            policy.acceleration_order);
  TtildeResult out;
  out.val.value = s.value;
  out.val.error = std::min(s.error * 4, policy.tolerance() / 20);
  out.conditionally_convergent = (kr == 1);
  out.terms_used = s.terms_used;
  return out;
}

/// beta(k) = Sum_{n>=0} (-1)^n / (2n+1)^k; T~(k) = 2 beta(k) at depth one.
inline RealValue dirichlet_beta(int k, const PrecisionPolicy& policy = {}) {
  if (k < 1) throw std::invalid_argument("dirichlet_beta requires k >= 1");
  ScopedPrecision prec(policy.guard_digits(k));
  auto term = [&](long n) -> Real { return 1 / pow(Real(2 * n + 1), k); };
  const double tol = policy.tolerance() / 100;
  AltSeriesResult s = euler_alternating_sum(term, tol, policy.max_outer_terms,
                                            policy.acceleration_order);
  return RealValue{s.value, std::min(s.error * 4, policy.tolerance() / 20)};
}

}  // namespace tvk

#endif  // TVK_SERIES_HPP
