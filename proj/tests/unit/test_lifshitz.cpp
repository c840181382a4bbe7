#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "casimir/lifshitz.hpp"
#include "oracle/brute_force.hpp"

using namespace casimir;

namespace {

constexpr double kPi = std::numbers::pi;

Slab pc() { return Slab(Material::perfect_conductor()); }
Slab pm() { return Slab(Material::infinitely_permeable()); }
Slab vac() { return Slab(Material::vacuum()); }
Slab dielectric(double eps, double mu = 1.0) { return Slab(Material::constant(eps, mu)); }

Material random_drude_lorentz(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> f(0.1, 3.0);
  const double te = f(rng), tm = f(rng);
  return Material::drude_lorentz({f(rng), te, 0.01 * te}, {f(rng), tm, 0.01 * tm});
}

}  // namespace

TEST_SUITE("lifshitz") {
  TEST_CASE("ideal interface coefficients are exact") {
    for (double xi : {0.0, 0.3, 5.0}) {
      for (double kappa : {5.0, 7.5, 100.0}) {
        CHECK(interface_reflection(Material::perfect_conductor(), xi, kappa, Polarization::TE) == -1.0);
        CHECK(interface_reflection(Material::perfect_conductor(), xi, kappa, Polarization::TM) == 1.0);
        CHECK(interface_reflection(Material::infinitely_permeable(), xi, kappa, Polarization::TE) == 1.0);
        CHECK(interface_reflection(Material::infinitely_permeable(), xi, kappa, Polarization::TM) == -1.0);
        CHECK(interface_reflection(Material::vacuum(), xi, kappa, Polarization::TE) == 0.0);
        CHECK(interface_reflection(Material::vacuum(), xi, kappa, Polarization::TM) == 0.0);
      }
    }
  }

  TEST_CASE("Fresnel coefficients at normal incidence") {
    const auto m = Material::constant(5.0, 2.0);
    const double s = std::sqrt(10.0);
    const double te = interface_reflection(m, 1.0, 1.0, Polarization::TE);
    const double tm = interface_reflection(m, 1.0, 1.0, Polarization::TM);
    CHECK(te == doctest::Approx((2.0 - s) / (2.0 + s)).epsilon(1e-15));
    CHECK(tm == doctest::Approx((5.0 - s) / (5.0 + s)).epsilon(1e-15));
    CHECK(te == doctest::Approx(-0.2251482).epsilon(1e-6));
    CHECK(te == doctest::Approx(-tm).epsilon(1e-14));
  }

  TEST_CASE("wavevector domain errors") {
    CHECK_THROWS_AS(interface_reflection(Material::vacuum(), 2.0, 1.0, Polarization::TE), DomainError);
    CHECK_THROWS_AS(interface_reflection(Material::vacuum(), 0.0, 0.0, Polarization::TE), DomainError);
    CHECK_THROWS_AS(interface_reflection(Material::vacuum(), -1.0, 1.0, Polarization::TM), DomainError);
  }

  TEST_CASE("finite slabs") {
    const auto thick = Slab(Material::constant(5.0), Thickness::finite(1e3));
    const auto half = dielectric(5.0);
    CHECK(slab_reflection(thick, 1.0, 1.5, Polarization::TE) == slab_reflection(half, 1.0, 1.5, Polarization::TE));
    CHECK(slab_reflection(thick, 1.0, 1.5, Polarization::TM) == slab_reflection(half, 1.0, 1.5, Polarization::TM));

    CHECK(slab_reflection(Slab(Material::vacuum(), Thickness::finite(0.3)), 0.5, 0.7, Polarization::TM) == 0.0);

    // Two-interface sum with k1 = sqrt(5), d = 0.1.
    const auto thin = Slab(Material::constant(5.0), Thickness::finite(0.1));
    const double tm_thin = slab_reflection(thin, 1.0, 1.0, Polarization::TM);
    const double tm_half = slab_reflection(half, 1.0, 1.0, Polarization::TM);
    CHECK(tm_thin == doctest::Approx(0.151905113306086).epsilon(1e-13));
    CHECK(tm_thin > 0.0);
    CHECK(tm_thin < tm_half);

    CHECK_THROWS_AS(Slab(Material::perfect_conductor(), Thickness::finite(1.0)), InvalidArgument);
    CHECK_THROWS_AS(Thickness::finite(0.0), InvalidArgument);
    CHECK_THROWS_AS(Thickness::finite(-2.0), InvalidArgument);
  }

  TEST_CASE("property: finite-slab coefficient grows monotonically toward the half-space value") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
      const auto m = random_drude_lorentz(rng);
      const double xi = std::uniform_real_distribution<double>(0.0, 2.0)(rng);
      const double kappa = xi + std::uniform_real_distribution<double>(0.01, 3.0)(rng);
      const auto semi = interface_reflection_pair(m, xi, kappa);
      Eigen::Array2d prev = Eigen::Array2d::Zero();
      for (double d = 0.01; d < 100.0; d *= 1.7) {
        const auto r = slab_reflection_pair(Slab(m, Thickness::finite(d)), xi, kappa);
        for (int p = 0; p < 2; ++p) {
          if (semi(p) > 0.0) {
            REQUIRE(r(p) >= prev(p));
            REQUIRE(r(p) <= semi(p) + 1e-15);
          }
        }
        prev = r;
      }
    }
  }

  TEST_CASE("integrand examples") {
    const Scene ideal(pc(), pc(), 1.0);
    const auto v = integrand(ideal, 0.0, 1.0);
    const double e = std::exp(-2.0);
    CHECK(v(0) == doctest::Approx(e / (1.0 - e)).epsilon(1e-15));
    CHECK(v(1) == doctest::Approx(0.15651764274966568).epsilon(1e-15));

    const Scene with_vacuum(vac(), dielectric(4.0, 2.0), 0.7);
    const Scene boyer(pc(), pm(), 0.7);
    for (double xi : {0.0, 0.1, 2.0}) {
      for (double dk : {1e-3, 0.5, 4.0}) {
        CHECK((integrand(with_vacuum, xi, xi + dk) == 0.0).all());
        CHECK((integrand(boyer, xi, xi + dk) < 0.0).all());
      }
    }
  }

  TEST_CASE("property: |r| <= 1 and the denominator stays in (0, 2)") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
      const auto ma = random_drude_lorentz(rng), mb = random_drude_lorentz(rng);
      const double xi = 10.0 * u(rng) * u(rng);
      const double kappa = xi + 1e-6 + 10.0 * u(rng);
      const auto ra = interface_reflection_pair(ma, xi, kappa);
      const auto rb = interface_reflection_pair(mb, xi, kappa);
      REQUIRE((ra.abs() <= 1.0).all());
      REQUIRE((rb.abs() < 1.0).all());
      const double gap = 0.01 + 5.0 * u(rng);
      const Eigen::Array2d denom = 1.0 - ra * rb * std::exp(-2.0 * gap * kappa);
      REQUIRE((denom > 0.0).all());
      REQUIRE((denom < 2.0).all());
    }
  }

  TEST_CASE("f0") {
    CHECK(f0(1.0) == doctest::Approx(0.041123351671205656).epsilon(1e-15));
    CHECK(f0(2.0) == doctest::Approx(f0(1.0) / 16.0).epsilon(1e-15));
    CHECK(f0(1e-3) > 1e10);
    CHECK_THROWS_AS(f0(0.0), DomainError);
    CHECK_THROWS_AS(f0(-1.0), DomainError);
  }

  TEST_CASE("ideal-metal and Boyer limits") {
    for (double gap : {0.1, kPi / 2.0, 5.0}) {
      const auto r = casimir_force(Scene(pc(), pc(), gap));
      CHECK(r.relative == doctest::Approx(1.0).epsilon(1e-8));
      CHECK(r.force == doctest::Approx(kPi * kPi / (240.0 * std::pow(gap, 4))).epsilon(1e-8));
      CHECK(r.force_te == doctest::Approx(r.force_tm).epsilon(1e-12));
      const auto b = casimir_force(Scene(pc(), pm(), gap));
      CHECK(b.relative == doctest::Approx(-7.0 / 8.0).epsilon(1e-8));
    }
    CHECK(casimir_force(Scene(pc(), pc(), kPi / 2.0)).force == doctest::Approx(6.7545e-3).epsilon(1e-4));
  }

  TEST_CASE("result invariants") {
    const auto r = casimir_force(Scene(dielectric(5.0), dielectric(0.5), 1.3));
    CHECK(std::abs(r.force - (r.force_te + r.force_tm)) <= r.error_estimate);
    CHECK(r.relative == doctest::Approx(r.force / f0(1.3)).epsilon(1e-15));
    CHECK(r.error_estimate >= 0.0);
    CHECK(r.evaluations > 0);
    CHECK(r.converged);
  }

  TEST_CASE("dielectric pairs: attraction between like, repulsion between unlike") {
    for (double gap : {0.2, 1.0, 4.0}) {
      CHECK(casimir_force(Scene(dielectric(3.0), dielectric(3.0), gap)).force > 0.0);
      CHECK(casimir_force(Scene(dielectric(5.0), dielectric(0.5), gap)).force < 0.0);
    }
  }

  TEST_CASE("unlike dielectrics agree with the brute-force oracle") {
    const Scene s(dielectric(5.0), dielectric(0.5), kPi / 2.0);
    const auto ref = oracle::brute_force_force(s);
    const auto r = casimir_force(s);
    CHECK(r.relative < 0.0);
    CHECK(r.force == doctest::Approx(ref.force).epsilon(1e-6));
    CHECK(r.force_te == doctest::Approx(ref.force_te).epsilon(1e-6));
    CHECK(r.force_tm == doctest::Approx(ref.force_tm).epsilon(1e-6));
  }

  TEST_CASE("swap symmetry is exact") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 5; ++trial) {
      const Scene s(Slab(random_drude_lorentz(rng)), Slab(random_drude_lorentz(rng), Thickness::finite(0.4)), 0.8);
      const auto ab = casimir_force(s);
      const auto ba = casimir_force(s.swapped());
      CHECK(ab.force == ba.force);
      CHECK(ab.force_te == ba.force_te);
    }
  }

  TEST_CASE("property: identical slabs attract") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
      const auto m = random_drude_lorentz(rng);
      for (double gap : {0.1, 1.0}) {
        const Scene s{Slab(m), Slab(m), gap};
        REQUIRE(casimir_force(s).force > 0.0);
        for (double xi : {1e-3, 0.5, 3.0}) REQUIRE((integrand(s, xi, xi * 1.5 + 0.1) >= 0.0).all());
      }
    }
  }

  TEST_CASE("finite identical slabs attract less than half-spaces") {
    const double gap = 1.0;
    const auto half = casimir_force(Scene(dielectric(4.0), dielectric(4.0), gap));
    const auto thin =
        casimir_force(Scene(Slab(Material::constant(4.0), Thickness::finite(0.2)),
                            Slab(Material::constant(4.0), Thickness::finite(0.2)), gap));
    CHECK(thin.force > 0.0);
    CHECK(thin.force < half.force);
  }

  TEST_CASE("ideal a^-4 scaling") {
    const double ref = casimir_force(Scene(pc(), pc(), 1.0)).force;
    for (double gap = 0.1; gap <= 10.0; gap *= 1.8) {
      const double scaled = casimir_force(Scene(pc(), pc(), gap)).force * std::pow(gap, 4);
      CHECK(scaled == doctest::Approx(ref).epsilon(1e-7));
    }
  }

  TEST_CASE("quadrature honesty: tightening rel_tol moves the result by less than the prior error") {
    const auto dl = [](double p, double t) { return OscillatorParams{p, t, 0.01 * t}; };
    const Material b9 = Material::drude_lorentz(dl(0.5, 1e-3), dl(3.0, 0.7));
    const Material a8 = Material::drude_lorentz(dl(1.0, 0.5), dl(1.0, 1.0));
    const Material b8 = Material::drude_lorentz(dl(0.2, 0.7), dl(1.5, 0.5));
    const Scene scenes[] = {Scene(pc(), Slab(b9), 0.05), Scene(pc(), Slab(b9), 6.0), Scene(Slab(a8), Slab(b8), 3.0),
                            Scene(dielectric(5.0), dielectric(0.5), 0.3)};
    for (const auto& s : scenes) {
      for (double tol : {1e-3, 1e-5, 1e-7}) {
        QuadratureSpec q;
        q.rel_tol = tol;
        const auto coarse = casimir_force(s, q);
        q.rel_tol = tol / 2.0;
        const auto fine = casimir_force(s, q);
        CHECK(std::abs(fine.force - coarse.force) <= coarse.error_estimate);
      }
    }
  }

  TEST_CASE("lossless plasma slab: open xi = 0 endpoint") {
    const Material plasma = Material::drude_lorentz({1.0, 0.0, 0.0}, {});
    const Scene s(Slab(plasma), pc(), kPi / 2.0);
    const auto r = casimir_force(s);
    CHECK(r.converged);
    CHECK(r.relative > 0.0);
    CHECK(r.relative < 1.0);
    CHECK(r.force == doctest::Approx(oracle::brute_force_force(s).force).epsilon(1e-6));
  }

  TEST_CASE("truncation bound is negligible at the default cutoff") {
    for (double gap : {0.01, 1.0, 100.0}) CHECK(truncation_bound(gap, 1e-16) < 1e-12 * f0(gap));
    CHECK(truncation_bound(1.0, 1e-4) > truncation_bound(1.0, 1e-8));
  }

  TEST_CASE("invalid scenes and specs") {
    CHECK_THROWS_AS(Scene(pc(), pc(), 0.0), InvalidArgument);
    CHECK_THROWS_AS(Scene(pc(), pc(), -1.0), InvalidArgument);
    QuadratureSpec q;
    q.rel_tol = 0.0;
    CHECK_THROWS_AS(casimir_force(Scene(pc(), pc(), 1.0), q), InvalidArgument);
    q = {};
    q.tail_cutoff = 1.0;
    CHECK_THROWS_AS(casimir_force(Scene(pc(), pc(), 1.0), q), InvalidArgument);
    q = {};
    q.max_subdivisions = 0;
    CHECK_THROWS_AS(casimir_force(Scene(pc(), pc(), 1.0), q), InvalidArgument);
  }

  TEST_CASE("convergence failure carries the best estimate") {
    QuadratureSpec q;
    q.rel_tol = 1e-15;
    q.abs_tol = 0.0;
    q.max_subdivisions = 1;
    const Scene s(dielectric(5.0), dielectric(0.5), 1.0);
    try {
      (void)casimir_force(s, q);
      FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
      CHECK_FALSE(e.best().converged);
      CHECK(e.best().error_estimate > 0.0);
      CHECK(e.best().force == doctest::Approx(casimir_force(s).force).epsilon(1e-6));
    }
    CHECK_FALSE(try_casimir_force(s, q).converged);
  }
}
