#ifndef TVK_EVAL_HPP
#define TVK_EVAL_HPP

// Numeric evaluation of FormalCombinations: exact rational/Gaussian
// arithmetic until the final multiplications by T~ numerics, with a shared
// value cache.

#include <tvk/bigfloat.hpp>
#include <tvk/formal.hpp>
#include <tvk/series.hpp>

#include <map>
#include <mutex>
#include <optional>

namespace tvk {

/// Anything that can produce T~ values at a policy's precision.
struct TtildeSource {
  virtual ~TtildeSource() = default;
  virtual TtildeResult get(const Index& k, const PrecisionPolicy& policy) = 0;
};

/// Thread-safe in-memory cache of T~ evaluations; a cached value is reused
/// only when it was computed at >= the requested target digits.
class ValueCache : public TtildeSource {
 public:
  std::optional<TtildeResult> probe(const Index& k, int min_digits) const {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = map_.find(k);
    if (it != map_.end() && it->second.digits >= min_digits) return it->second.result;
    return std::nullopt;
  }

  void store(const Index& k, int digits, const TtildeResult& r) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = map_.find(k);
    if (it == map_.end() || it->second.digits < digits) map_[k] = Entry{digits, r};
  }

  TtildeResult get(const Index& k, const PrecisionPolicy& policy) override {
    if (auto r = probe(k, policy.target_digits)) return *r;
    TtildeResult r = ttilde(k, policy);
    store(k, policy.target_digits, r);
    return r;
  }

  size_t size() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return map_.size();
  }

  void clear() {
    std::lock_guard<std::mutex> lock(mutex_);
    map_.clear();
  }

 private:
  struct Entry {
    int digits = 0;
    TtildeResult result;
  };
  mutable std::mutex mutex_;
  std::map<Index, Entry> map_;
};

inline ValueCache& global_value_cache() {
  static ValueCache cache;
  return cache;
}

/// Evaluate a combination numerically.  If it mentions the formal variable s,
/// an integer s >= 2 must be supplied.  Coefficients and binomials stay
/// exact; T~ symbols are evaluated by the series engine.  Monomials made of
/// T~ factors are real by definition, so all imaginary content comes from
/// the exact Gaussian coefficients.
inline ComplexValue eval_combination(const FormalCombination& f, std::optional<int> s,
                                     const PrecisionPolicy& policy = {},
                                     TtildeSource* source = nullptr) {
  FormalCombination cf;
  const FormalCombination* work = &f;
  if (f.uses_s()) {
    if (!s) throw std::invalid_argument("eval_combination: combination uses s but no value supplied");
    if (*s < 2) throw std::invalid_argument("eval_combination: s must be an integer >= 2");
    cf = f.substitute(*s);
    work = &cf;
  }

  int max_weight = 1;
  for (const auto& [m, c] : work->terms())
    max_weight = std::max(max_weight, m.constant_weight());

  ScopedPrecision prec(policy.guard_digits(max_weight));
  TtildeSource& src = source ? *source : global_value_cache();

  Complex total;
  double err = 0.0;
  for (const auto& [m, c] : work->terms()) {
    Real prod = 1;
    double prod_err = 0.0;
    for (const Index& k : m.constants) {
      TtildeResult tv = src.get(k, policy);
      double av = std::abs(static_cast<double>(tv.val.value));
      double ap = std::abs(static_cast<double>(prod));
      prod_err = prod_err * av + tv.val.error * ap + prod_err * tv.val.error;
      prod *= tv.val.value;
    }
    Complex coeff = to_complex(c);
    total += coeff * prod;
    err += prod_err * coeff.abs_double();
  }
  return ComplexValue{total, err};
}

}  // namespace tvk

#endif  // TVK_EVAL_HPP
