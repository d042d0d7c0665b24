#include <tvk/eval.hpp>
#include <tvk/expansion.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace tvk;

TEST_CASE("lambda(2;3) equals its printed value") {
  PrecisionPolicy policy;
  ValueCache cache;
  // 3i T~(1,4) + i T~(2,3) - i T~(2) T~(3)
  FormalCombination expect;
  {
    Monomial m;
    m.constants = {Index{1, 4}};
    expect.add(m, GaussianRational(0, 3));
  }
  {
    Monomial m;
    m.constants = {Index{2, 3}};
    expect.add(m, GaussianRational(0, 1));
  }
  {
    Monomial m;
    m.constants = {Index{2}, Index{3}};
    expect.add(m, GaussianRational(0, -1));
  }
  auto a = eval_combination(lambda_expansion(Index{2}), 3, policy, &cache);
  auto b = eval_combination(expect, std::nullopt, policy, &cache);
  CHECK((a.value - b.value).abs_double() < 1e-25);
  CHECK(a.value.re == 0);  // pure imaginary by the i-power bookkeeping
}

TEST_CASE("empty combination evaluates to zero") {
  auto v = eval_combination(FormalCombination{}, std::nullopt);
  CHECK(v.value.abs_double() == 0.0);
  CHECK(v.error == 0.0);
}

TEST_CASE("shuffle identity value vanishes") {
  PrecisionPolicy policy;
  ValueCache cache;
  // T~(2)^2 - 4 T~(1,3) - 2 T~(2,2)
  FormalCombination f;
  {
    Monomial m;
    m.constants = {Index{2}, Index{2}};
    f.add(m, GaussianRational(1));
  }
  {
    Monomial m;
    m.constants = {Index{1, 3}};
    f.add(m, GaussianRational(-4));
  }
  {
    Monomial m;
    m.constants = {Index{2, 2}};
    f.add(m, GaussianRational(-2));
  }
  auto v = eval_combination(f, std::nullopt, policy, &cache);
  CHECK(v.value.abs_double() < 1e-20);
  CHECK(v.error < 1e-21);
}

TEST_CASE("s handling") {
  CHECK_THROWS_AS(eval_combination(lambda_expansion(Index{2}), std::nullopt),
                  std::invalid_argument);
  CHECK_THROWS_AS(eval_combination(lambda_expansion(Index{2}), 1), std::invalid_argument);
  // constant combinations ignore s
  FormalCombination c = lambda_expansion(Index{2}).substitute(2);
  CHECK_NOTHROW(eval_combination(c, std::nullopt));
}

TEST_CASE("shuffle homomorphism holds numerically for random pairs") {
  PrecisionPolicy policy;
  ValueCache cache;
  std::mt19937 rng(424242);
  auto random_admissible = [&](int maxw) {
    std::uniform_int_distribution<int> d(2, maxw);
    for (;;) {
      int w = d(rng);
      std::vector<int> e;
      while (w > 0) {
        std::uniform_int_distribution<int> p(1, w);
        int x = p(rng);
        e.push_back(x);
        w -= x;
      }
      if (e.back() >= 2) return Index(e);
    }
  };
  for (int trial = 0; trial < 12; ++trial) {
    const Index u = random_admissible(5);
    const Index v = random_admissible(5);
    LambdaIdentity id = shuffle_relation_at_one(u, v);
    auto lhs = eval_combination(id.lhs, std::nullopt, policy, &cache);
    auto rhs = eval_combination(id.rhs, std::nullopt, policy, &cache);
    INFO("u=(" << u.str() << ") v=(" << v.str() << ")");
    CHECK((lhs.value - rhs.value).abs_double() <=
          std::max(lhs.error + rhs.error, 1e-25));
  }
}

TEST_CASE("value cache digit policy") {
  ValueCache cache;
  PrecisionPolicy p30;
  p30.target_digits = 30;
  auto r30 = cache.get(Index{1, 3}, p30);
  CHECK(cache.probe(Index{1, 3}, 30).has_value());
  CHECK_FALSE(cache.probe(Index{1, 3}, 40).has_value());  // insufficient digits = miss
  PrecisionPolicy p40;
  p40.target_digits = 40;
  auto r40 = cache.get(Index{1, 3}, p40);
  CHECK(cache.probe(Index{1, 3}, 40).has_value());
  // higher-digit record wins for lower requests too
  auto again = cache.probe(Index{1, 3}, 30);
  REQUIRE(again.has_value());
  CHECK(again->val.value.str(35) == r40.val.value.str(35));
  CHECK(cache.size() == 1);
}
