#include <doctest.h>

#include <cmath>
#include <numbers>

#include "casimir/quadrature.hpp"

using namespace casimir;

TEST_SUITE("quadrature") {
  TEST_CASE("polynomials up to degree 22 are exact on one panel") {
    const auto r = quadrature::integrate_scalar([](double x) { return std::pow(x, 22); }, 0.0, 1.0, 1e-14, 0.0, 0);
    CHECK(r.value(0) == doctest::Approx(1.0 / 23.0).epsilon(1e-14));
    CHECK(r.evaluations == 15);
  }

  TEST_CASE("integrable endpoint singularity is never evaluated") {
    // int_0^1 x^{-1/2} = 2; f(0) would be inf.
    auto f = [](double x) {
      REQUIRE(x > 0.0);
      return 1.0 / std::sqrt(x);
    };
    const auto r = quadrature::integrate_scalar(f, 0.0, 1.0, 1e-10, 0.0, 200);
    CHECK(r.converged);
    CHECK(r.value(0) == doctest::Approx(2.0).epsilon(1e-9));
  }

  TEST_CASE("error estimate bounds the true error") {
    const double exact = 1.0 - std::cos(10.0);
    for (double tol : {1e-3, 1e-6, 1e-9}) {
      const auto r = quadrature::integrate_scalar([](double x) { return std::sin(x); }, 0.0, 10.0, tol, 0.0);
      CHECK(r.converged);
      CHECK(std::abs(r.value(0) - exact) <= r.error_norm);
      CHECK(r.error_norm <= tol * std::abs(r.value(0)));
    }
  }

  TEST_CASE("subdivision budget exhausted reports non-convergence") {
    const auto r = quadrature::integrate_scalar([](double x) { return std::sin(50.0 * x); }, 0.0, 10.0, 1e-12, 0.0, 3);
    CHECK_FALSE(r.converged);
    CHECK(r.subdivisions == 3);
  }

  TEST_CASE("vector integrand with leading-norm refinement") {
    using V = Eigen::Array3d;
    const std::array<double, 3> breaks{0.0, 1.0, 3.0};
    auto f = [](double x) { return V(std::exp(-x), x * x, 1e9 * std::sin(1e3 * x)); };
    auto budget = [](const V& v) { return 1e-12 * (std::abs(v(0)) + std::abs(v(1))); };
    const auto r = quadrature::integrate<V>(f, std::span<const double>(breaks), budget, 200,
                                            quadrature::LeadingL1Norm<2>{});
    CHECK(r.converged);
    CHECK(r.value(0) == doctest::Approx(1.0 - std::exp(-3.0)).epsilon(1e-12));
    CHECK(r.value(1) == doctest::Approx(9.0).epsilon(1e-12));
  }
}
