#include <cmath>
#include <random>

#include "doctest.h"
#include "qes/model.hpp"

using namespace qes;

TEST_CASE("potential coefficients map to ansatz exponents") {
  OscillatorSpec spec;
  spec.lambda2 = -2.0;
  spec.lambda4 = 2.0;
  AnsatzParams p = params_from_potential(spec);
  CHECK(p.alpha == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(p.beta == doctest::Approx(2.0).epsilon(1e-15));

  spec.lambda2 = -1.0;
  spec.lambda4 = 0.5;
  p = params_from_potential(spec);
  CHECK(p.alpha == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(p.beta == doctest::Approx(1.0).epsilon(1e-15));

  spec.lambda4 = -1.0;
  CHECK_THROWS_AS(params_from_potential(spec), std::invalid_argument);

  spec.lambda4 = 1.0;
  spec.lambda2 = 0.0;
  CHECK_THROWS_AS(params_from_potential(spec), DegenerateAnsatzError);
}

TEST_CASE("inverse map pins lambda1 by the truncation condition") {
  OscillatorSpec spec = potential_from_params({-1.0, 2.0}, 3, 0, 1);
  CHECK(spec.lambda1 == doctest::Approx(-6.0).epsilon(1e-15));
  CHECK(spec.lambda2 == doctest::Approx(-2.0).epsilon(1e-15));
  CHECK(spec.lambda4 == doctest::Approx(2.0).epsilon(1e-15));

  spec = potential_from_params({-1.0, 1.0}, 1, 0, 0);
  CHECK(spec.lambda1 == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(spec.lambda2 == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(spec.lambda4 == doctest::Approx(0.5).epsilon(1e-15));

  CHECK_THROWS_AS(potential_from_params({-1.0, -1.0}, 3, 0, 1), std::invalid_argument);
}

TEST_CASE("round trip params <-> potential is exact") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ua(-3.0, 3.0), ub(0.1, 4.0);
  for (int i = 0; i < 200; ++i) {
    AnsatzParams p{ua(rng), ub(rng)};
    if (p.alpha == 0.0) continue;
    const OscillatorSpec spec = potential_from_params(p, 3, 1, 2);
    const AnsatzParams back = params_from_potential(spec);
    CHECK(back.alpha == doctest::Approx(p.alpha).epsilon(1e-14));
    CHECK(back.beta == doctest::Approx(p.beta).epsilon(1e-14));
  }
}

TEST_CASE("lambda1 satisfies the truncation condition across the parameter box") {
  for (int n = 1; n <= 10; ++n) {
    for (int l = 0; l <= 5; ++l) {
      for (int m = 0; m <= 8; ++m) {
        const AnsatzParams p{-1.3, 0.7};
        const OscillatorSpec spec = potential_from_params(p, n, l, m);
        CHECK(spec.lambda1 == -0.5 * (n + 2 * l + 2 * m + 1) * p.beta);
      }
    }
  }
}

TEST_CASE("potential evaluation") {
  OscillatorSpec spec;
  spec.dim = 3;
  spec.lambda1 = -6.0;
  spec.lambda2 = -2.0;
  spec.lambda4 = 2.0;
  CHECK(evaluate_potential(spec, 1.0) == doctest::Approx(-6.0));
  CHECK(evaluate_potential(spec, 0.0) == 0.0);
  CHECK_THROWS_AS(evaluate_potential(spec, -1.0), std::domain_error);

  OscillatorSpec line;
  line.dim = 1;
  line.lambda1 = -1.0;
  line.lambda2 = -1.0;
  line.lambda4 = 0.5;
  // even extension: V(-1) = V(1) = -1 - 1 + 0.5
  CHECK(evaluate_potential(line, -1.0) == doctest::Approx(-1.5));
  CHECK(evaluate_potential(line, -1.0) == doctest::Approx(evaluate_potential(line, 1.0)));
}

TEST_CASE("full-line N=1 potential is even") {
  OscillatorSpec line;
  line.dim = 1;
  line.lambda1 = -3.0;
  line.lambda2 = 1.5;
  line.lambda4 = 0.25;
  for (double r : {0.1, 0.7, 1.9, 3.3}) {
    CHECK(evaluate_potential(line, r) == doctest::Approx(evaluate_potential(line, -r)).epsilon(1e-15));
  }
}

TEST_CASE("ansatz evaluation at simple points") {
  QesSolution s0;
  s0.coeffs = {1.0};
  CHECK(evaluate_ansatz({-1.0, 1.0}, s0, 0, 0.0).value == doctest::Approx(1.0));

  QesSolution s1;
  s1.coeffs = {1.0, -1.0};
  CHECK(evaluate_ansatz({-1.0, 2.0}, s1, 0, 1.0).value == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("analytic derivatives match central differences at O(h^2)") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ur(0.2, 2.5);
  QesSolution sol;
  sol.coeffs = {1.0, -0.8, 0.3};
  const AnsatzParams p{-1.1, 0.9};
  const int ell = 1;
  for (int i = 0; i < 12; ++i) {
    const double r = ur(rng);
    double prev_err1 = 0.0, prev_err2 = 0.0;
    for (int halving = 0; halving < 3; ++halving) {
      const double h = 1e-2 / (1 << halving);
      const double fp = evaluate_ansatz(p, sol, ell, r + h).value;
      const double fm = evaluate_ansatz(p, sol, ell, r - h).value;
      const double f0 = evaluate_ansatz(p, sol, ell, r).value;
      const WavefunctionSample w = evaluate_ansatz(p, sol, ell, r);
      const double err1 = std::abs((fp - fm) / (2 * h) - w.d1);
      const double err2 = std::abs((fp - 2 * f0 + fm) / (h * h) - w.d2);
      if (halving > 0) {
        // second-order scheme: error should drop ~4x per halving
        CHECK(err1 < 0.35 * prev_err1 + 1e-11);
        CHECK(err2 < 0.35 * prev_err2 + 1e-7);
      }
      prev_err1 = err1;
      prev_err2 = err2;
    }
  }
}

TEST_CASE("physicality filter") {
  CHECK(validate_physicality({-1.0, 1.0}, {0.5, 0.0}));
  CHECK_FALSE(validate_physicality({-1.0, 1.0}, {0.5, 0.3}));
  CHECK_FALSE(validate_physicality({-1.0, -3.3028}, {-2.8028, 0.0}));
  CHECK_FALSE(validate_physicality({0.0, 1.0}, {0.5, 0.0}));
}
