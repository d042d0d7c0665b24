#include <tvk/eval.hpp>
#include <tvk/path_ode.hpp>

#include <catch2/catch_amalgamated.hpp>

using namespace tvk;

namespace {
PrecisionPolicy oracle_policy() {
  PrecisionPolicy p;
  p.target_digits = 30;
  p.oracle_digits = 12;
  return p;
}
}  // namespace

TEST_CASE("level-two polylog series") {
  PrecisionPolicy policy = oracle_policy();
  CHECK(a_level2(Index{}, Real(1), policy).value.abs_double() == 1.0);

  // A((1); i e^{-1}) = 2 atanh(i e^{-1}) = 2i atan(e^{-1})
  {
    ScopedPrecision prec(45);
    auto v = a_level2(Index{1}, Real(1), policy);
    const Real expect = 2 * atan(exp(Real(-1)));
    CHECK((v.value - Complex(Real(0), expect)).abs_double() < 1e-28);
  }

  // A((2); i e^{-t}) -> i T~(2) as t -> 0+
  {
    ValueCache cache;
    auto t2 = cache.get(Index{2}, policy);
    double prev = 1.0;
    for (double t : {0.2, 0.1, 0.05}) {
      ScopedPrecision prec(45);
      auto v = a_level2(Index{2}, Real(t), policy);
      const double d = (v.value - Complex(Real(0), t2.val.value)).abs_double();
      CHECK(d < prev);
      prev = d;
    }
    CHECK(prev < 0.15);
  }

  CHECK_THROWS_AS(a_level2(Index{2}, Real(1e-9), oracle_policy()), convergence_error);
  CHECK_THROWS_AS(a_level2(Index{2}, Real(0), oracle_policy()), std::domain_error);
}

TEST_CASE("expansion identity along the path ties the modules together") {
  // A(k; tanh(t/2 + pi i/4)) from the propagator equals
  // sum c i^e prod T~(P) t^j/j! A(res; i e^{-t}) from the symbolic engine.
  PrecisionPolicy policy = oracle_policy();
  const Index k{2, 1};
  ScopedPrecision prec(45);
  const Real t_end(1);

  PrefixPropagator prop(to_word(k), PathSpec{PathKind::lambda_curve, 0.0, 1.0});
  PrefixState y = prop.start_state();
  prop.cross(Real(0), t_end, y);

  ValueCache cache;
  Complex expect;
  for (const auto& term : expand_A(k)) {
    Complex c = to_complex(GaussianRational(term.coeff) * GaussianRational::i_power(term.i_exp));
    for (const auto& p : term.constants) c *= Complex(cache.get(p, policy).val.value);
    Real tj = 1;
    for (int i = 1; i <= term.ones_power; ++i) tj *= t_end / i;
    c *= Complex(tj);
    if (!term.residual.empty()) c *= a_level2(term.residual, t_end, policy).value;
    expect += c;
  }
  CHECK((y.back() - expect).abs_double() < 1e-24);
}

TEST_CASE("polylog values at one") {
  PrecisionPolicy policy = oracle_policy();
  ValueCache cache;

  // (2) -> i^{-1} T~(2)
  {
    auto v = apoly_at_one(Index{2}, policy);
    auto t2 = cache.get(Index{2}, policy);
    CHECK((v.value - Complex(Real(0), -t2.val.value)).abs_double() < 1e-12);
  }
  // (1,2) -> i^{-1} T~(3)
  {
    auto v = apoly_at_one(Index{1, 2}, policy);
    auto t3 = cache.get(Index{3}, policy);
    CHECK((v.value - Complex(Real(0), -t3.val.value)).abs_double() < 1e-12);
  }
  // (2,2) -> -T~(2,2)
  {
    auto v = apoly_at_one(Index{2, 2}, policy);
    auto t22 = cache.get(Index{2, 2}, policy);
    CHECK((v.value - Complex(-t22.val.value)).abs_double() < 1e-12);
  }
  CHECK_THROWS_AS(apoly_at_one(Index{2, 1}, policy), std::domain_error);
}

TEST_CASE("path parametrization independence") {
  PrecisionPolicy policy = oracle_policy();
  auto a = apoly_at_one(Index{2}, policy, ApolyMethod::arc_extrapolation);
  auto b = apoly_at_one(Index{2}, policy, ApolyMethod::endpoint_limit);
  CHECK((a.value - b.value).abs_double() < 1e-10);
  auto c = apoly_at_one(Index{1, 2, 2}, policy, ApolyMethod::arc_extrapolation);
  auto d = apoly_at_one(Index{1, 2, 2}, policy, ApolyMethod::endpoint_limit);
  CHECK((c.value - d.value).abs_double() < 1e-10);
}

TEST_CASE("lambda quadrature") {
  PrecisionPolicy policy = oracle_policy();
  ValueCache cache;

  // lambda(1;2) = 2 T~(3) = pi^3/8
  {
    auto v = lambda_quadrature(Index{1}, 2, policy);
    ScopedPrecision prec(45);
    const Real pi = real_pi();
    CHECK((v.value - Complex(pi * pi * pi / 8)).abs_double() < 1e-10);
  }
  // lambda(2;2) equals the expansion evaluation
  {
    auto v = lambda_quadrature(Index{2}, 2, policy);
    auto e = eval_combination(lambda_expansion(Index{2}), 2, policy, &cache);
    CHECK((v.value - e.value).abs_double() < 1e-8);
  }
  // lambda(2,1;3) equals the closed form
  {
    auto v = lambda_quadrature(Index{2, 1}, 3, policy);
    auto e = eval_combination(closed_form_one_two(2, 1), 3, policy, &cache);
    CHECK((v.value - e.value).abs_double() < 1e-8);
  }
  CHECK_THROWS_AS(lambda_quadrature(Index{2}, 1, policy), std::invalid_argument);
  CHECK_THROWS_AS(lambda_quadrature(Index{}, 2, policy), std::domain_error);
}
