#include <tvk/formal.hpp>

#include <catch2/catch_amalgamated.hpp>

using namespace tvk;

TEST_CASE("gaussian rational arithmetic") {
  GaussianRational i = GaussianRational::i_power(1);
  CHECK(i * i == GaussianRational(-1));
  CHECK(GaussianRational::i_power(4) == GaussianRational(1));
  CHECK(GaussianRational::i_power(-1) == GaussianRational::i_power(3));
  GaussianRational z(Rational(1, 2), Rational(3));
  CHECK((z * GaussianRational(2)).re == 1);
  CHECK(z.str() == "1/2+3*i");
  CHECK(GaussianRational(0, -1).str() == "-i");
}

TEST_CASE("binomial by falling factorial") {
  CHECK(binomial_rational(4, 2) == 6);
  CHECK(binomial_rational(1, 2) == 0);   // polynomial extension
  CHECK(binomial_rational(-2, 2) == 3);
  CHECK(binomial_rational(7, 0) == 1);
  // the lambda-expansion binomial C(s+j-1, j) at integer arguments
  CHECK(lambda_binomial(3, 1) == 3);
  CHECK(lambda_binomial(2, 0) == 1);
  CHECK(lambda_binomial(2, 3) == 4);  // C(4,3)
}

TEST_CASE("monomial normalization") {
  Monomial m;
  m.binomials.push_back(BinomFactor{0, -1});  // identically 1, dropped
  m.binomials.push_back(BinomFactor{2, 1});
  m.constants.push_back(Index{3});
  m.constants.push_back(Index{1, 2});
  m.normalize();
  CHECK(m.binomials.size() == 1);
  CHECK(m.constants.front() == Index{3});  // canonical (weight, depth, entries) order
  CHECK(m.str() == "C(s+1,2)*T~(3)*T~(1,2)");
}

TEST_CASE("combination add and cancel") {
  FormalCombination f;
  Monomial m;
  m.constants.push_back(Index{2});
  f.add(m, GaussianRational(1));
  f.add(m, GaussianRational(-1));
  CHECK(f.empty());
  CHECK(f.str() == "0");
}

TEST_CASE("substitution") {
  // i * C(s,1) * T~(1, s+1)  at s=3  ->  3i * T~(1,4)
  FormalCombination f;
  Monomial m;
  m.s_terms.push_back(STerm{Index{1}, 1});
  m.binomials.push_back(BinomFactor{1, 0});
  f.add(m, GaussianRational::i_power(1));
  FormalCombination c = f.substitute(3);
  REQUIRE(c.size() == 1);
  const auto& [mono, coeff] = *c.terms().begin();
  CHECK(mono.is_constant());
  CHECK(mono.constants == std::vector<Index>{Index{1, 4}});
  CHECK(coeff == GaussianRational(0, 3));
  CHECK(c.is_constant());
  CHECK(f.uses_s());
}

TEST_CASE("product merges factor lists") {
  FormalCombination a = FormalCombination::single(Monomial{{Index{2}}, {}, {}},
                                                  GaussianRational(2));
  FormalCombination b = FormalCombination::single(Monomial{{Index{3}}, {}, {}},
                                                  GaussianRational(0, 1));
  FormalCombination p = a * b;
  REQUIRE(p.size() == 1);
  const auto& [mono, coeff] = *p.terms().begin();
  CHECK(mono.constants == std::vector<Index>{Index{2}, Index{3}});
  CHECK(coeff == GaussianRational(0, 2));
}

TEST_CASE("json serialization is deterministic") {
  FormalCombination f;
  Monomial m;
  m.s_terms.push_back(STerm{Index{1}, 1});
  m.binomials.push_back(BinomFactor{1, 0});
  f.add(m, GaussianRational::i_power(1));
  Monomial m2;
  m2.constants.push_back(Index{2});
  f.add(m2, GaussianRational(Rational(-3, 2)));
  const auto j = f.to_json();
  CHECK(j.dump() == f.to_json().dump());
  // negative rational rendered with positive magnitude and i-exponent 2
  bool found = false;
  for (const auto& t : j)
    if (t["i"] == 2 && t["coeff"] == "3/2") found = true;
  CHECK(found);
}
