#ifndef TVK_EXPANSION_HPP
#define TVK_EXPANSION_HPP

// Symbolic engine: expansion of the level-four polylogarithm into
// A({1}_j) * A(k'; .) pieces with T~ constants, and every lambda identity
// derived from it (closed forms, sum relations, duality, shuffle at 1).

#include <tvk/formal.hpp>
#include <tvk/index.hpp>
#include <tvk/rational.hpp>

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

namespace tvk {

/// One term c * i^e * prod T~(constants) * A({1}_ones_power; V(z)) * A(residual; z)
/// of the expansion of A(k; V(z)), V(z) = (1+z)/(1-z).
struct ExpansionTerm {
  Rational coeff;
  int i_exp = 0;                  // exponent of i, mod 4
  std::vector<Index> constants;   // constant T~ factors (sorted)
  int ones_power = 0;             // j in A({1}_j)
  Index residual;                 // k' in A(k'; z); may be empty
};

namespace detail {

using TermKey = std::tuple<std::vector<Index>, int, int, Index>;  // (P, e, j, k')

struct TermMapBuilder {
  std::map<TermKey, Rational> acc;

  void add(std::vector<Index> P, int e, int j, Index kp, const Rational& c) {
    if (c == 0) return;
    std::sort(P.begin(), P.end());
    TermKey key{std::move(P), ((e % 4) + 4) % 4, j, std::move(kp)};
    auto [it, inserted] = acc.emplace(std::move(key), c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) acc.erase(it);
    }
  }

  std::vector<ExpansionTerm> build() const {
    std::vector<ExpansionTerm> out;
    out.reserve(acc.size());
    for (const auto& [key, c] : acc) {
      ExpansionTerm t;
      t.constants = std::get<0>(key);
      t.i_exp = std::get<1>(key);
      t.ones_power = std::get<2>(key);
      t.residual = std::get<3>(key);
      t.coeff = c;
      out.push_back(std::move(t));
    }
    return out;
  }
};

inline bool index_key_less(const Index& a, const Index& b) { return a < b; }

}  // namespace detail

/// Expansion of A(k; (1+z)/(1-z)), memoized.
///
/// Base case (1) -> {(1, i^0, {}, j=1, phi)}.  For admissible k each term of
/// expand_A(k_) (last entry decremented) telescopes into Sum_{l=0..j}
/// (c, e, P, j-l, (k',l+1)) minus the boundary (c, e+dep(k')+1, P+{(k',j+1)}, 0, phi).
/// For a trailing 1, k = (X,1), the product A(X)A(1) = (j+1)-rescaling minus
/// the non-terminal b-insertions into X; insertions equal to (X,1) itself are
/// moved to the left-hand side, which divides the result by
/// trailing_ones(X)+1.  Recursion is well-founded under the
/// (weight, trailing-ones) order.
inline const std::vector<ExpansionTerm>& expand_A(const Index& k) {
  static std::map<Index, std::unique_ptr<const std::vector<ExpansionTerm>>> memo;
  static std::mutex memo_mutex;

  if (k.empty()) throw std::domain_error("expand_A on empty index");

  {
    std::lock_guard<std::mutex> lock(memo_mutex);
    auto it = memo.find(k);
    if (it != memo.end()) return *it->second;
  }

  detail::TermMapBuilder acc;
  if (k.depth() == 1 && k.last() == 1) {
    acc.add({}, 0, 1, Index{}, 1);
  } else if (k.admissible()) {
    const Index km = minus_last(k);
    for (const ExpansionTerm& t : expand_A(km)) {
      for (int l = 0; l <= t.ones_power; ++l)
        acc.add(t.constants, t.i_exp, t.ones_power - l, t.residual.appended(l + 1), t.coeff);
      std::vector<Index> P = t.constants;
      P.push_back(t.residual.appended(t.ones_power + 1));
      acc.add(std::move(P), t.i_exp + t.residual.depth() + 1, 0, Index{}, -t.coeff);
    }
  } else {
    // k = (X, 1)
    const Index X = head_slice(k, k.depth() - 1);
    const int extra = X.trailing_ones();
    for (const ExpansionTerm& t : expand_A(X))
      acc.add(t.constants, t.i_exp, t.ones_power + 1, t.residual, t.coeff * (t.ones_power + 1));
    for (const auto& [ins, mult] : b_insertion_product(X).terms) {
      if (ins == k) continue;  // multiplicity handled by the division below
      for (const ExpansionTerm& t : expand_A(ins))
        acc.add(t.constants, t.i_exp, t.ones_power, t.residual, -t.coeff * mult);
    }
    if (extra > 0) {
      const Rational div(1, extra + 1);
      for (auto& [key, c] : acc.acc) c *= div;
    }
  }

  auto built = std::make_unique<const std::vector<ExpansionTerm>>(acc.build());
  std::lock_guard<std::mutex> lock(memo_mutex);
  auto [it, inserted] = memo.emplace(k, std::move(built));
  return *it->second;
}

/// lambda(k; s+shift) as a combination in s.  Each expansion term
/// (c, e, P, j, k') contributes
///   c * i^{e+dep(k')} * prod T~(P) * C(s+shift+j-1, j) * T~(k', s+shift+j).
inline FormalCombination lambda_expansion(const Index& k, int shift = 0) {
  FormalCombination out;
  for (const ExpansionTerm& t : expand_A(k)) {
    GaussianRational c = GaussianRational(t.coeff) *
                         GaussianRational::i_power(t.i_exp + t.residual.depth());
    Monomial m;
    m.constants = t.constants;
    m.s_terms.push_back(STerm{t.residual, t.ones_power + shift});
    m.binomials.push_back(BinomFactor{t.ones_power, t.ones_power - 1 + shift});
    out.add(std::move(m), c);
  }
  return out;
}

/// lambda({1}_{j-1}, 2, {1}_{r-j}; s) for r > j >= 1:
///   i(-1)^{r-j} Sum_{m=r-j..r} C(m,r-j) C(s+r-m-1, r-m) T~(m+1, s+r-m)
///   - i Sum_{l=0..r-j} (-1)^l C(j+l,l) C(s+r-j-l-1, r-j-l) T~(s+r-j-l) T~(j+l+1)
inline FormalCombination closed_form_one_two(int r, int j) {
  if (!(r > j && j >= 1)) throw std::invalid_argument("closed_form_one_two requires r > j >= 1");
  FormalCombination out;
  const GaussianRational i1 = GaussianRational::i_power(1);
  for (int m = r - j; m <= r; ++m) {
    Rational c = binomial_rational(m, r - j);
    if ((r - j) % 2) c = -c;
    Monomial mono;
    mono.s_terms.push_back(STerm{Index{m + 1}, r - m});
    mono.binomials.push_back(BinomFactor{r - m, r - m - 1});
    out.add(std::move(mono), GaussianRational(c) * i1);
  }
  for (int l = 0; l <= r - j; ++l) {
    Rational c = binomial_rational(j + l, l);
    if (l % 2 == 0) c = -c;  // overall -i Sum (-1)^l ...
    Monomial mono;
    mono.constants.push_back(Index{j + l + 1});
    mono.s_terms.push_back(STerm{Index{}, r - j - l});
    mono.binomials.push_back(BinomFactor{r - j - l, r - j - l - 1});
    out.add(std::move(mono), GaussianRational(c) * i1);
  }
  return out;
}

enum class BinomVariant { printed, corrected };

inline const char* to_string(BinomVariant v) {
  return v == BinomVariant::printed ? "printed" : "corrected";
}

/// lambda({1}_{r-1}, 2; s) = i C(s+r-1, r) T~(1, s+r)
///   + i Sum_{l=0..r-1} C(s+r-l-2, <lower>) T~(l+2, s+r-l-1) - i T~(r+1) T~(s)
/// with <lower> = r+l-1 as printed, r-l-1 as corrected; identical at r=1.
inline FormalCombination closed_form_ones_two(int r, BinomVariant variant) {
  if (r < 1) throw std::invalid_argument("closed_form_ones_two requires r >= 1");
  FormalCombination out;
  const GaussianRational i1 = GaussianRational::i_power(1);
  {
    Monomial mono;
    mono.s_terms.push_back(STerm{Index{1}, r});
    mono.binomials.push_back(BinomFactor{r, r - 1});
    out.add(std::move(mono), i1);
  }
  for (int l = 0; l <= r - 1; ++l) {
    const int lower = variant == BinomVariant::printed ? r + l - 1 : r - l - 1;
    Monomial mono;
    mono.s_terms.push_back(STerm{Index{l + 2}, r - l - 1});
    mono.binomials.push_back(BinomFactor{lower, r - l - 2});
    out.add(std::move(mono), i1);
  }
  {
    Monomial mono;
    mono.constants.push_back(Index{r + 1});
    mono.s_terms.push_back(STerm{Index{}, 0});
    out.add(std::move(mono), -i1);
  }
  return out;
}

/// Two sides of one verifiable identity.
struct LambdaIdentity {
  FormalCombination lhs;
  FormalCombination rhs;
  std::string label;
  int min_s = 2;  // both sides valid for integer s >= min_s
};

enum class SumRelationKind { me1, me2 };

inline const char* to_string(SumRelationKind k) { return k == SumRelationKind::me1 ? "me1" : "me2"; }

/// me1: Sum_{wt=k+r-1, dep=r} lambda(K; s)
///        = Sum_{j=0..r-1} (-1)^j C(s+r-j-2, r-j-1) lambda({1}_j, k; s+r-j-1)
/// me2: lambda({1}_{r-1}, k; s)
///        = Sum_{j=0..r-1} Sum_{wt=k+j, dep=j+1} (-1)^j C(s+r-j-2, r-j-1) lambda(K; s+r-j-1)
inline LambdaIdentity sum_relation(SumRelationKind kind, int r, int k) {
  if (r < 1 || k < 1) throw std::invalid_argument("sum_relation requires r, k >= 1");
  LambdaIdentity id;
  id.label = std::string(to_string(kind)) + "(r=" + std::to_string(r) + ",k=" + std::to_string(k) + ")";

  auto shifted_scaled = [&](const Index& K, int j) {
    // (-1)^j C(s+r-j-2, r-j-1) lambda(K; s+r-j-1)
    FormalCombination lam = lambda_expansion(K, r - j - 1);
    FormalCombination out;
    const GaussianRational sign(j % 2 ? -1 : 1);
    for (const auto& [m, c] : lam.terms()) {
      Monomial mm = m;
      mm.binomials.push_back(BinomFactor{r - j - 1, r - j - 2});
      out.add(std::move(mm), c * sign);
    }
    return out;
  };

  if (kind == SumRelationKind::me1) {
    for (const Index& K : compositions(k + r - 1, r)) id.lhs += lambda_expansion(K);
    for (int j = 0; j <= r - 1; ++j) id.rhs += shifted_scaled(ones_prefix(j, Index{k}), j);
  } else {
    id.lhs = lambda_expansion(ones_prefix(r - 1, Index{k}));
    for (int j = 0; j <= r - 1; ++j)
      for (const Index& K : compositions(k + j, j + 1)) id.rhs += shifted_scaled(K, j);
  }
  return id;
}

enum class StarSemantics { insertion, split_literal, split_per_block };

inline const char* to_string(StarSemantics s) {
  switch (s) {
    case StarSemantics::insertion: return "insertion";
    case StarSemantics::split_literal: return "split_literal";
    default: return "split_per_block";
  }
}

namespace detail {

/// Termwise-dualized combination Sum coeff * T~(dual(term)) as a constant
/// FormalCombination, folding in i^{dep-wt} per term.
inline FormalCombination dualized_eval_at_one(const IndexCombination& comb) {
  FormalCombination out;
  for (const auto& [idx, c] : comb.terms) {
    Monomial m;
    m.constants.push_back(dual_index(idx));
    out.add(std::move(m),
            GaussianRational(Rational(c)) * GaussianRational::i_power(idx.depth() - idx.weight()));
  }
  return out;
}

/// The correction object behind the circled product notation: for an index X
/// it is A(X)A(1) - A(X,1), i.e. the non-terminal b-insertions, dualized
/// termwise; the printed split-sum variants are kept for adjudication.
inline FormalCombination star_object_dualized(const Index& X, StarSemantics sem) {
  IndexCombination comb;
  switch (sem) {
    case StarSemantics::insertion: comb = b_insertion_product(X); break;
    case StarSemantics::split_literal: comb = split_sum_product(X, SplitConstraint::literal); break;
    case StarSemantics::split_per_block: comb = split_sum_product(X, SplitConstraint::per_block); break;
  }
  FormalCombination out;
  for (const auto& [idx, c] : comb.terms) {
    Monomial m;
    m.constants.push_back(dual_index(idx));
    out.add(std::move(m), GaussianRational(Rational(c)));
  }
  return out;
}

}  // namespace detail

/// Duality identity for k with all entries >= 2, p, q >= 1.  Both sides are
/// constant combinations (s already substituted):
///   LHS = lambda({1}_{q-1}, head(k)_-; p+1) - (-1)^wt lambda({1}_{p-1}, rev(k)_-; q+1)
///   RHS = i^{dep-wt+1} [ double sum of dualized T~ pairs
///         + correction bracket with the chosen star semantics ].
inline LambdaIdentity duality_relation(const Index& k, int p, int q,
                                       StarSemantics sem = StarSemantics::insertion) {
  if (k.empty()) throw std::invalid_argument("duality_relation: empty index");
  for (int e : k.entries())
    if (e < 2)
      throw std::invalid_argument(
          "duality_relation requires every entry >= 2 (hypothesis of the identity), got (" +
          k.str() + ")");
  if (p < 1 || q < 1) throw std::invalid_argument("duality_relation requires p, q >= 1");

  const int r = k.depth();
  const int w = k.weight();
  const Index rev = k.reversed();
  LambdaIdentity id;
  id.label = "duality(" + k.str() + ";p=" + std::to_string(p) + ",q=" + std::to_string(q) + ")";

  // LHS
  const Index left1 = ones_prefix(q - 1, minus_last(k));
  const Index left2 = ones_prefix(p - 1, minus_last(rev));
  id.lhs = lambda_expansion(left1).substitute(p + 1);
  id.lhs -= lambda_expansion(left2).substitute(q + 1).scaled(GaussianRational(w % 2 ? -1 : 1));

  // RHS
  FormalCombination rhs;
  for (int j = 0; j <= r - 1; ++j) {
    const int sign_j = tail_slice(k, j).weight() % 2 ? -1 : 1;
    const int krj = k.entries()[static_cast<size_t>(r - j - 1)];  // k_{r-j}
    for (int l = 1; l <= krj - 2; ++l) {
      const Index i1 = ones_prefix(p - 1, tail_slice(k, j)).appended(l + 1);
      const Index i2 = ones_prefix(q - 1, head_slice(k, r - j - 1)).appended(krj - l);
      Monomial m;
      m.constants.push_back(dual_index(i1));
      m.constants.push_back(dual_index(i2));
      const int sgn = sign_j * ((l - 1) % 2 ? -1 : 1);
      rhs.add(std::move(m), GaussianRational(Rational(sgn)));
    }
  }
  for (int j = 0; j <= r - 2; ++j) {
    const int sign_j = tail_slice(k, j + 1).weight() % 2 ? -1 : 1;
    const Index A = ones_prefix(q - 1, head_slice(k, r - j - 1));
    const Index B = ones_prefix(p - 1, tail_slice(k, j + 1));
    FormalCombination tA = FormalCombination::single(
        Monomial{{dual_index(A)}, {}, {}}, GaussianRational(1));
    FormalCombination tB = FormalCombination::single(
        Monomial{{dual_index(B)}, {}, {}}, GaussianRational(1));
    FormalCombination bracket = tA * detail::star_object_dualized(B, sem)
                              - tB * detail::star_object_dualized(A, sem);
    rhs += bracket.scaled(GaussianRational(Rational(sign_j)));
  }
  id.rhs = rhs.scaled(GaussianRational::i_power(r - w + 1));
  return id;
}

/// Shuffle identity evaluated at 1: with f(k) = i^{dep-wt} T~(dual(k)),
///   f(u) f(v) = Sum_{w in u sh v} coeff * f(w).
inline LambdaIdentity shuffle_relation_at_one(const Index& u, const Index& v) {
  if (!u.empty() && !u.admissible()) throw std::domain_error("shuffle_relation_at_one: u not admissible");
  if (!v.empty() && !v.admissible()) throw std::domain_error("shuffle_relation_at_one: v not admissible");
  LambdaIdentity id;
  id.label = "shuffle(" + u.str() + " x " + v.str() + ")";
  Monomial lhs_m;
  GaussianRational lhs_c = GaussianRational::unit();
  if (!u.empty()) {
    lhs_m.constants.push_back(dual_index(u));
    lhs_c *= GaussianRational::i_power(u.depth() - u.weight());
  }
  if (!v.empty()) {
    lhs_m.constants.push_back(dual_index(v));
    lhs_c *= GaussianRational::i_power(v.depth() - v.weight());
  }
  id.lhs.add(std::move(lhs_m), lhs_c);
  id.rhs = detail::dualized_eval_at_one(shuffle_product(u, v));
  return id;
}

}  // namespace tvk

#endif  // TVK_EXPANSION_HPP
