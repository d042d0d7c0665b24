#ifndef TVK_FORMAL_HPP
#define TVK_FORMAL_HPP

// FormalCombination: exact Q[i]-linear combination of monomials built from
//   - constant T~ symbols,
//   - s-dependent symbols T~(prefix, s+shift),
//   - binomial factors C(s+offset, order).
// This is the symbolic output currency of every relation generator.

#include <tvk/index.hpp>
#include <tvk/rational.hpp>

#include <nlohmann/json.hpp>

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace tvk {

using json = nlohmann::json;

/// T~(prefix, s+shift); empty prefix means the depth-one T~(s+shift)
struct STerm {
  Index prefix;
  int shift = 0;
  bool operator==(const STerm& o) const { return shift == o.shift && prefix == o.prefix; }
  bool operator<(const STerm& o) const {
    if (!(prefix == o.prefix)) return prefix < o.prefix;
    return shift < o.shift;
  }
  std::string str() const {
    std::string arg = shift == 0 ? "s" : "s+" + std::to_string(shift);
    if (prefix.empty()) return "T~(" + arg + ")";
    return "T~(" + prefix.str() + "," + arg + ")";
  }
};

/// C(s+offset, order); order 0 factors are identically 1 and dropped on
/// normalization
struct BinomFactor {
  int order = 0;
  int offset = 0;
  bool operator==(const BinomFactor& o) const { return order == o.order && offset == o.offset; }
  bool operator<(const BinomFactor& o) const {
    return std::tie(order, offset) < std::tie(o.order, o.offset);
  }
  std::string str() const {
    std::string arg = "s";
    if (offset > 0) arg += "+" + std::to_string(offset);
    if (offset < 0) arg += std::to_string(offset);
    return "C(" + arg + "," + std::to_string(order) + ")";
  }
};

struct Monomial {
  std::vector<Index> constants;     // constant T~ factors (multiset)
  std::vector<STerm> s_terms;       // s-dependent T~ factors
  std::vector<BinomFactor> binomials;

  void normalize() {
    std::sort(constants.begin(), constants.end());
    std::sort(s_terms.begin(), s_terms.end());
    std::erase_if(binomials, [](const BinomFactor& b) { return b.order == 0; });
    std::sort(binomials.begin(), binomials.end());
  }

  bool is_constant() const { return s_terms.empty() && binomials.empty(); }

  int constant_weight() const {
    int w = 0;
    for (const Index& k : constants) w += k.weight();
    return w;
  }

  bool operator==(const Monomial& o) const {
    return constants == o.constants && s_terms == o.s_terms && binomials == o.binomials;
  }
  bool operator<(const Monomial& o) const {
    if (!(constants == o.constants)) return constants < o.constants;
    if (!(s_terms == o.s_terms)) return s_terms < o.s_terms;
    return binomials < o.binomials;
  }

  std::string str() const {
    std::vector<std::string> parts;
    for (const auto& b : binomials) parts.push_back(b.str());
    for (const auto& k : constants) parts.push_back("T~(" + k.str() + ")");
    for (const auto& s : s_terms) parts.push_back(s.str());
    if (parts.empty()) return "1";
    std::string out = parts[0];
    for (size_t i = 1; i < parts.size(); ++i) out += "*" + parts[i];
    return out;
  }

  Monomial merged(const Monomial& o) const {
    Monomial m = *this;
    m.constants.insert(m.constants.end(), o.constants.begin(), o.constants.end());
    m.s_terms.insert(m.s_terms.end(), o.s_terms.begin(), o.s_terms.end());
    m.binomials.insert(m.binomials.end(), o.binomials.begin(), o.binomials.end());
    m.normalize();
    return m;
  }
};

class FormalCombination {
 public:
  using TermMap = std::map<Monomial, GaussianRational>;

  FormalCombination() = default;

  static FormalCombination single(Monomial m, GaussianRational c) {
    FormalCombination f;
    f.add(std::move(m), std::move(c));
    return f;
  }

  void add(Monomial m, const GaussianRational& c) {
    if (c.is_zero()) return;
    m.normalize();
    auto [it, inserted] = terms_.emplace(std::move(m), c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  const TermMap& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  size_t size() const { return terms_.size(); }

  FormalCombination& operator+=(const FormalCombination& o) {
    for (const auto& [m, c] : o.terms_) add(m, c);
    return *this;
  }
  FormalCombination& operator-=(const FormalCombination& o) {
    for (const auto& [m, c] : o.terms_) add(m, -c);
    return *this;
  }
  friend FormalCombination operator+(FormalCombination a, const FormalCombination& b) { return a += b; }
  friend FormalCombination operator-(FormalCombination a, const FormalCombination& b) { return a -= b; }

  FormalCombination scaled(const GaussianRational& c) const {
    FormalCombination out;
    if (c.is_zero()) return out;
    for (const auto& [m, coeff] : terms_) out.terms_.emplace(m, coeff * c);
    return out;
  }

  /// product of combinations (merging factor lists)
  friend FormalCombination operator*(const FormalCombination& a, const FormalCombination& b) {
    FormalCombination out;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) out.add(ma.merged(mb), ca * cb);
    return out;
  }

  bool operator==(const FormalCombination& o) const { return terms_ == o.terms_; }

  bool is_constant() const {
    for (const auto& [m, c] : terms_)
      if (!m.is_constant()) return false;
    return true;
  }

  bool uses_s() const { return !is_constant(); }

  /// Substitute an integer for s: binomials become exact rationals, each
  /// s-symbol T~(prefix, s+shift) becomes the constant index
  /// (prefix, s+shift).
  FormalCombination substitute(int s) const {
    FormalCombination out;
    for (const auto& [m, c] : terms_) {
      GaussianRational coeff = c;
      Monomial cm;
      cm.constants = m.constants;
      for (const auto& st : m.s_terms) {
        int arg = s + st.shift;
        if (arg < 1)
          throw std::domain_error("substitute: T~ argument s+" + std::to_string(st.shift) +
                                  " not positive at s=" + std::to_string(s));
        cm.constants.push_back(st.prefix.appended(arg));
      }
      for (const auto& b : m.binomials)
        coeff *= GaussianRational(binomial_rational(s + b.offset, b.order));
      out.add(std::move(cm), coeff);
    }
    return out;
  }

  /// deterministic canonical rendering
  std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      std::string cs = c.str();
      bool neg = !cs.empty() && cs[0] == '-';
      if (!first) out += neg ? " - " : " + ";
      else if (neg) out += "-";
      if (neg) cs = cs.substr(1);
      std::string ms = m.str();
      if (cs == "1" && ms != "1") out += ms;
      else if (ms == "1") out += cs;
      else out += (cs.find_first_of("+-*") != std::string::npos && cs != "i" ? "(" + cs + ")" : cs) + "*" + ms;
      first = false;
    }
    return out;
  }

  /// Deterministic JSON: coefficients split into (positive rational "p/q",
  /// i-exponent 0..3) pairs; indices as arrays of ints; the s-slot of an
  /// s-symbol rendered as the string "s" / "s+j".
  json to_json() const {
    json arr = json::array();
    for (const auto& [m, c] : terms_) {
      auto emit = [&](const Rational& mag, int iexp) {
        if (mag == 0) return;
        json t;
        t["coeff"] = mag.str();
        t["i"] = iexp;
        json syms = json::array();
        for (const auto& k : m.constants) {
          json idx = json::array();
          for (int e : k.entries()) idx.push_back(e);
          syms.push_back(idx);
        }
        for (const auto& st : m.s_terms) {
          json idx = json::array();
          for (int e : st.prefix.entries()) idx.push_back(e);
          idx.push_back(st.shift == 0 ? "s" : "s+" + std::to_string(st.shift));
          syms.push_back(idx);
        }
        t["monomial"] = syms;
        json bn = json::array();
        for (const auto& b : m.binomials) bn.push_back({b.order, b.offset});
        t["binom"] = bn;
        arr.push_back(std::move(t));
      };
      if (c.re > 0) emit(c.re, 0);
      if (c.re < 0) emit(-c.re, 2);
      if (c.im > 0) emit(c.im, 1);
      if (c.im < 0) emit(-c.im, 3);
    }
    return arr;
  }

 private:
  TermMap terms_;
};

}  // namespace tvk

#endif  // TVK_FORMAL_HPP
