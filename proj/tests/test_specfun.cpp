#include <cmath>
#include <random>

#include "doctest.h"
#include "psiec/specfun.hpp"
#include "psiec/windows.hpp"

using namespace psiec;

namespace {

// ∫_{S²} y1 y2 y3* by Gauss-Legendre in cos θ and trapezoid in φ.
double gaunt_quadrature(int l1, int m1, int l2, int m2, int l, int m) {
  std::vector<double> x, w;
  gauss_legendre(40, x, w);
  const int nphi = 64;
  cplx s = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    double th = std::acos(x[i]);
    for (int k = 0; k < nphi; ++k) {
      double ph = 2.0 * kPi * k / nphi;
      s += w[i] * (2.0 * kPi / nphi) * sph_harm({l1, m1}, th, ph) * sph_harm({l2, m2}, th, ph) *
           std::conj(sph_harm({l, m}, th, ph));
    }
  }
  return s.real();
}

}  // namespace

TEST_SUITE("specfun") {
  TEST_CASE("gaunt anchor values") {
    CHECK(gaunt(0, 0, 0, 0, 0, 0) == doctest::Approx(1.0 / std::sqrt(4.0 * kPi)).epsilon(1e-13));
    CHECK(gaunt(2, 0, 1, 0, 4, 0) == 0.0);
    CHECK(gaunt(2, 1, 1, 0, 3, 0) == 0.0);
  }

  TEST_CASE("gaunt matches sphere quadrature") {
    GauntTable tab(4);
    const int cases[][6] = {{1, 0, 1, 0, 2, 0}, {1, 1, 1, -1, 2, 0}, {2, 1, 2, -1, 2, 0},
                            {2, 2, 1, -1, 3, 1}, {3, -2, 1, 1, 2, -1}, {2, 0, 2, 0, 4, 0}};
    for (auto& c : cases) {
      double q = gaunt_quadrature(c[0], c[1], c[2], c[3], c[4], c[5]);
      CHECK(gaunt(c[0], c[1], c[2], c[3], c[4], c[5]) == doctest::Approx(q).epsilon(1e-10));
      CHECK(tab(c[0], c[1], c[2], c[3], c[4], c[5]) == doctest::Approx(q).epsilon(1e-10));
    }
  }

  TEST_CASE("gaunt selection rules on random tuples") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> L(0, 5);
    GauntTable tab(5);
    int checked = 0;
    for (int it = 0; it < 1000; ++it) {
      int l1 = L(rng), l2 = L(rng), l = L(rng);
      int m1 = std::uniform_int_distribution<int>(-l1, l1)(rng);
      int m2 = std::uniform_int_distribution<int>(-l2, l2)(rng);
      int m = std::uniform_int_distribution<int>(-l, l)(rng);
      bool violates = m != m1 + m2 || l > l1 + l2 || l < std::abs(l1 - l2) || (l1 + l2 + l) % 2;
      if (!violates) continue;
      ++checked;
      REQUIRE(gaunt(l1, m1, l2, m2, l, m) == 0.0);
      REQUIRE(tab(l1, m1, l2, m2, l, m) == 0.0);
    }
    CHECK(checked > 500);
  }

  TEST_CASE("addition theorem") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int it = 0; it < 20; ++it) {
      double t1 = std::acos(2 * u(rng) - 1), p1 = 2 * kPi * u(rng);
      double t2 = std::acos(2 * u(rng) - 1), p2 = 2 * kPi * u(rng);
      double c = std::sin(t1) * std::sin(t2) * std::cos(p1 - p2) + std::cos(t1) * std::cos(t2);
      for (int l = 0; l <= 8; ++l) {
        cplx s = 0.0;
        for (int m = -l; m <= l; ++m) s += sph_harm({l, m}, t1, p1) * std::conj(sph_harm({l, m}, t2, p2));
        double ref = (2 * l + 1) / (4 * kPi) * std::legendre(l, c);
        worst = std::max(worst, std::abs(s - ref));
      }
    }
    CHECK(worst < 1e-10);
  }

  TEST_CASE("sph_harm_all agrees with single evaluation") {
    std::vector<cplx> all(lm_count(6));
    sph_harm_all(6, 0.7, 2.1, all.data());
    for (int l = 0; l <= 6; ++l)
      for (int m = -l; m <= l; ++m)
        CHECK(std::abs(all[lm_index(l, m)] - sph_harm({l, m}, 0.7, 2.1)) < 1e-14);
  }

  TEST_CASE("wigner zonal rotation") {
    const double north[3] = {0, 0, 1};
    for (int l = 0; l <= 5; ++l)
      for (int m = -l; m <= l; ++m)
        if (m != 0) CHECK(std::abs(wigner_zonal(l, m, north)) < 1e-15);
    double lam[3] = {0.48, -0.6, 0.64};
    double th, ph;
    to_spherical(lam, th, ph);
    for (int l = 0; l <= 6; ++l) {
      cplx v = 0.0;
      for (int m = -l; m <= l; ++m) v += wigner_zonal(l, m, lam) * sph_harm({l, m}, th, ph);
      CHECK(std::abs(v - sph_harm({l, 0}, 0.0, 0.0)) < 1e-12);
    }
  }

  TEST_CASE("bessel functions") {
    for (double x : {0.0, 0.3, 2.5, 11.0}) {
      CHECK(bessel_j(0, x) == doctest::Approx(std::cyl_bessel_j(0.0, x)).epsilon(1e-13));
      CHECK(bessel_j(3, x) == doctest::Approx(std::cyl_bessel_j(3.0, x)).epsilon(1e-12));
      CHECK(spherical_bessel_j(2, x) == doctest::Approx(std::sph_bessel(2, x)).epsilon(1e-12));
    }
    CHECK(bessel_j(-3, 1.7) == doctest::Approx(-bessel_j(3, 1.7)));
  }

  TEST_CASE("hankel table values") {
    RadialProfile p;
    auto hf = p.h_function();
    HankelCache c2(hf, 2, 0, 4, 20.0);
    CHECK(c2.value(2, 0.0) == 0.0);
    std::vector<double> x, w;
    gauss_legendre(200, x, w);
    double h00 = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
      double r = hf.lo + 0.5 * (hf.hi - hf.lo) * (x[i] + 1);
      h00 += 0.5 * (hf.hi - hf.lo) * w[i] * hf.f(r) * r;
    }
    CHECK(c2.value(0, 0.0) == doctest::Approx(h00).epsilon(1e-10));

    HankelCache c3(hf, 3, 1, 3, 20.0);
    double ref[4], dref[4], unused[4];
    HankelCache::integrate(hf, 3, 1, 3, 1.0, 10.0, ref, dref, unused);
    CHECK(std::abs(c3.value(1, 1.0) - ref[1]) < 1e-9);
  }

  TEST_CASE("hankel derivative matches finite differences") {
    RadialProfile p;
    HankelCache c(p.h_function(), 2, 0, 3, 20.0);
    const double e = 1e-4;
    for (double r : {0.7, 3.3, 9.1})
      for (int m = 0; m <= 3; ++m) {
        double fd = (c.value(m, r + e) - c.value(m, r - e)) / (2 * e);
        double an = c.derivative(m, r);
        CHECK(std::abs(fd - an) <= 1e-6 * std::max(1.0, std::abs(an)));
      }
  }

  TEST_CASE("scaling window rejects singular weights") {
    RadialProfile p;
    CHECK_THROWS(HankelCache(p.g_function(), 3, 3, 2, 10.0));
    CHECK_NOTHROW(HankelCache(p.g_function(), 3, 1, 2, 10.0));
  }
}
