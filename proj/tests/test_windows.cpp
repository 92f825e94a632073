#include <cmath>

#include "doctest.h"
#include "psiec/windows.hpp"

using namespace psiec;

#ifndef PSIEC_SOURCE_DIR
#define PSIEC_SOURCE_DIR "."
#endif

static std::string config(const char* name) {
  return std::string(PSIEC_SOURCE_DIR) + "/configs/" + name;
}

TEST_SUITE("windows") {
  TEST_CASE("steerable window anchors") {
    RadialProfile p = make_steerable_radial();
    CHECK(p.h(kPi / 2) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p.h(kPi / 4) == doctest::Approx(0.0));
    CHECK(p.h(kPi) == doctest::Approx(0.0));
  }

  TEST_CASE("windows vanish outside their support") {
    for (auto k : {RadialKind::Steerable, RadialKind::Smooth, RadialKind::Box}) {
      RadialProfile p(k);
      for (double r : {0.0, 0.1, p.h_lo() * 0.999, kPi * 1.0001, 10.0}) CHECK(p.h(r) == 0.0);
      CHECK(p.g(p.g_hi() * 1.0001) == 0.0);
      CHECK(p.h(0.5 * (p.h_lo() + kPi)) > 0.0);
    }
  }

  TEST_CASE("calderon residuals") {
    auto radii = calderon_grid(6);
    CHECK(calderon_check(make_steerable_radial(), 6, radii) < 1e-10);
    CHECK(calderon_check(RadialProfile(RadialKind::Smooth), 6, radii) < 1e-10);
    CHECK(calderon_check(RadialProfile(RadialKind::Box), 6, radii) < 1e-14);
    double scaled = calderon_check(RadialProfile(RadialKind::Box, 0.5), 6, radii);
    CHECK(scaled == doctest::Approx(0.75).epsilon(1e-12));
  }

  TEST_CASE("2D admissibility") {
    CHECK(admissibility_2d(AngularWindow2D::isotropic()).pass);
    auto good = AngularWindow2D::cos_power(1, 5);
    CHECK(good.N() == 2);
    CHECK(admissibility_2d(good).pass);
    auto bad = admissibility_2d(AngularWindow2D::cos_power(1, 2));
    CHECK_FALSE(bad.pass);
    CHECK(bad.max_offdiag > 1e-3);
    CHECK(bad.message.find("not diagonal") != std::string::npos);
    CHECK_FALSE(admissibility_2d(AngularWindow2D::cos_power(1, 5, false)).pass);
  }

  TEST_CASE("2D admissibility survives rotation") {
    auto w = AngularWindow2D::cos_power(2, 9);
    REQUIRE(admissibility_2d(w).pass);
    CHECK(admissibility_2d(w.rotated(0.37)).pass);
  }

  TEST_CASE("2D windows are real and steered") {
    auto w = AngularWindow2D::cos_power(1, 5);
    double worst = 0.0;
    for (int t = 0; t < w.T(); ++t)
      for (int k = 0; k < 360; ++k) worst = std::max(worst, std::abs(w.gamma(t, k * kPi / 180).imag()));
    CHECK(worst < 1e-12);
    // orientation t is orientation 0 rotated by 2π t / T
    for (int t = 0; t < w.T(); ++t)
      for (double th : {0.1, 1.3, 4.0})
        CHECK(std::abs(w.gamma(t, th) - w.gamma(0, th - 2 * kPi * t / w.T())) < 1e-13);
  }

  TEST_CASE("3D admissibility") {
    GauntTable g(8);
    CHECK(admissibility_3d(AngularWindow3D::isotropic(), g).pass);
    auto dir = AngularWindow3D::directional(2);
    CHECK(dir.L() == 4);
    CHECK(admissibility_3d(dir, g).pass);
    auto bad = admissibility_3d(AngularWindow3D::directional(2, false), g);
    CHECK_FALSE(bad.pass);
    CHECK(bad.fail_l == 0);
    CHECK(bad.fail_m == 0);
  }

  TEST_CASE("3D windows are real") {
    auto w = AngularWindow3D::directional(2);
    double worst = 0.0;
    for (int t = 0; t < w.T(); ++t)
      for (int a = 1; a < 12; ++a)
        for (int b = 0; b < 24; ++b) {
          double th = kPi * a / 12, ph = 2 * kPi * b / 24;
          double om[3] = {std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
          worst = std::max(worst, std::abs(w.gamma(t, om).imag()));
        }
    CHECK(worst < 1e-12);
  }

  TEST_CASE("shipped configs") {
    GauntTable g(8);
    for (const char* name : {"isotropic.json", "directional.json"}) {
      auto w = load_windows_file(config(name));
      CHECK(calderon_check(w.radial, 6, calderon_grid(6)) < 1e-10);
      CHECK(admissibility_2d(w.angular2d).pass);
      CHECK(admissibility_3d(w.angular3d, g).pass);
    }
    auto b = load_windows_file(config("broken.json"));
    CHECK_FALSE(admissibility_2d(b.angular2d).pass);
    CHECK_FALSE(admissibility_3d(b.angular3d, g).pass);
  }

  TEST_CASE("config parsing") {
    auto a = load_windows_file(config("directional.json"));
    auto b = load_windows_file(config("directional.json"));
    auto c = load_windows_file(config("isotropic.json"));
    CHECK(windows_to_json(a) == windows_to_json(b));
    CHECK(windows_to_json(a) != windows_to_json(c));
    CHECK(a.angular2d.T() == 5);
    CHECK(a.angular3d.T() == 25);
    CHECK_THROWS(load_windows("{\"radial\": {\"kind\": \"nope\"}}"));
    CHECK_THROWS(load_windows("not json"));
    CHECK_THROWS(load_windows_file(config("missing.json")));
  }
}
