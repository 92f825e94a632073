#include <cmath>
#include <random>

#include "doctest.h"
#include "psiec/exterior.hpp"
#include "psiec/form_wavelets.hpp"
#include "psiec/frame.hpp"
#include "psiec/grid.hpp"

using namespace psiec;

namespace {

SymbolicForm mono(int n, SpaceTag tag, unsigned m) { return SymbolicForm::monomial(n, tag, m); }

SignedMonomial sm(int sign, unsigned mask) { return {sign, mask}; }

bool same(SignedMonomial a, SignedMonomial b) { return a.sign == b.sign && a.mask == b.mask; }

// max |coefficient(ξ)| over all terms
double max_abs(const SymbolicForm& f, const double xi[3]) {
  double m = 0.0;
  for (const auto& [mask, c] : f.terms()) m = std::max(m, std::abs(c.eval(xi)));
  return m;
}

}  // namespace

TEST_SUITE("exterior_ft") {
  TEST_CASE("FT basis tables, plane") {
    CHECK(same(ft_basis(2, 0b00), sm(-1, 0b11)));
    CHECK(same(ft_basis(2, 0b01), sm(+1, 0b10)));
    CHECK(same(ft_basis(2, 0b10), sm(-1, 0b01)));
    CHECK(same(ft_basis(2, 0b11), sm(+1, 0b00)));
  }

  TEST_CASE("FT basis tables, space") {
    CHECK(same(ft_basis(3, 0b000), sm(-1, 0b111)));
    CHECK(same(ft_basis(3, 0b001), sm(-1, 0b110)));
    CHECK(same(ft_basis(3, 0b010), sm(+1, 0b101)));
    CHECK(same(ft_basis(3, 0b100), sm(-1, 0b011)));
    CHECK(same(ft_basis(3, 0b011), sm(+1, 0b100)));
    CHECK(same(ft_basis(3, 0b101), sm(-1, 0b010)));
    CHECK(same(ft_basis(3, 0b110), sm(+1, 0b001)));
    CHECK(same(ft_basis(3, 0b111), sm(+1, 0b000)));
  }

  TEST_CASE("closed-form index rule against the expansion") {
    for (unsigned m = 0; m < 8; ++m) CHECK(same(ft_basis(3, m), ft_basis_general_rule(3, m)));
    // in the plane the rule holds for r = 0, 2 and flips sign on 1-forms
    for (unsigned m = 0; m < 4; ++m) {
      auto e = ft_basis(2, m), g = ft_basis_general_rule(2, m);
      CHECK(e.mask == g.mask);
      CHECK(e.sign == (popcount(m) == 1 ? -g.sign : g.sign));
    }
  }

  TEST_CASE("inverse transform undoes the transform") {
    for (int n = 2; n <= 3; ++n)
      for (unsigned m = 0; m < (1u << n); ++m) {
        auto f = mono(n, SpaceTag::SpatialX, m) * Poly(cplx(2.0, -1.0));
        auto F = fourier_transform(f);
        CHECK(F.tag() == SpaceTag::FreqCartesian);
        CHECK(inverse_fourier_transform(F) == f);
        auto g = mono(n, SpaceTag::FreqCartesian, m);
        CHECK(fourier_transform(inverse_fourier_transform(g)) == g);
      }
  }

  TEST_CASE("form-basis exponential") {
    TensorForm X = basis_pairing(2);
    TensorForm sq = tensor_product(X, X);
    TensorForm expect(2);
    expect.add(0b11, 0b11, Poly(-2.0));
    CHECK(sq == expect);
    // X³ = 0 in the plane, so exp truncates after the quadratic term
    CHECK(tensor_product(sq, X).terms().empty());
    TensorForm e = tensor_exp(X);
    TensorForm ref = TensorForm::unit(2) + X + expect * 0.5;
    CHECK(e == ref);
    // in space the exponential has terms of every degree 0..3
    TensorForm e3 = tensor_exp(basis_pairing(3));
    int degrees = 0;
    for (const auto& [k, c] : e3.terms()) degrees |= 1 << popcount(k.first);
    CHECK(degrees == 0b1111);
  }

  TEST_CASE("wedge antisymmetry") {
    auto dx1 = mono(3, SpaceTag::SpatialX, 1);
    CHECK(graded_wedge(dx1, dx1).is_zero());
    auto a = mono(3, SpaceTag::SpatialX, 1) * Poly(2.0) + mono(3, SpaceTag::SpatialX, 4) * Poly(-1.0);
    CHECK(graded_wedge(a, a).is_zero());
    CHECK(wedge_sign(0b001, 0b010) == 1);
    CHECK(wedge_sign(0b010, 0b001) == -1);
    CHECK(wedge_sign(0b011, 0b001) == 0);
  }

  TEST_CASE("interior product squares to zero") {
    for (int n = 2; n <= 3; ++n)
      for (auto tag : {SpaceTag::FreqCartesian, SpaceTag::FreqSpherical})
        for (unsigned m = 0; m < (1u << n); ++m) {
          auto f = mono(n, tag, m) * (Poly::xi(1) + Poly::rho(-1));
          CHECK(interior_xi(interior_xi(f)).is_zero());
        }
    // no radial leg
    CHECK(interior_xi(mono(3, SpaceTag::FreqSpherical, 0b011)).is_zero());
  }

  TEST_CASE("Hodge involution") {
    for (int n = 2; n <= 3; ++n)
      for (unsigned m = 0; m < (1u << n); ++m) {
        int r = popcount(m);
        int s = (r * (n - r)) % 2 ? -1 : 1;
        for (auto tag : {SpaceTag::SpatialX, SpaceTag::FreqCartesian}) {
          auto f = mono(n, tag, m);
          CHECK(hodge(hodge(f)) == f * Poly(double(s)));
        }
      }
    CHECK(hodge(mono(3, SpaceTag::SpatialX, 0)) == mono(3, SpaceTag::SpatialX, 0b111));
    CHECK(hodge(hodge(mono(3, SpaceTag::FreqCartesian, 1))) == mono(3, SpaceTag::FreqCartesian, 1));
  }

  TEST_CASE("transform commutes with Hodge up to the tabulated sign") {
    for (int n = 2; n <= 3; ++n)
      for (unsigned m = 0; m < (1u << n); ++m) {
        auto f = mono(n, SpaceTag::SpatialX, m);
        int s = hodge_ft_sign(n, popcount(m));
        CHECK(fourier_transform(hodge(f)) == hodge(fourier_transform(f)) * Poly(double(s)));
      }
  }

  TEST_CASE("exterior derivative becomes an interior product") {
    for (int n = 2; n <= 3; ++n) {
      int eps = exterior_derivative_sign(n);
      CHECK(std::abs(eps) == 1);
      for (unsigned m = 0; m < (1u << n); ++m) {
        auto f = mono(n, SpaceTag::SpatialX, m);
        CHECK(fourier_transform(exterior_derivative_planewave(f)) ==
              exterior_derivative_freq(fourier_transform(f)));
        CHECK(exterior_derivative_freq(fourier_transform(f)) ==
              interior_xi(fourier_transform(f)) * Poly(double(eps)));
      }
    }
  }

  TEST_CASE("codifferential symbol") {
    for (int n = 2; n <= 3; ++n)
      for (unsigned m = 0; m < (1u << n); ++m) {
        auto f = mono(n, SpaceTag::SpatialX, m);
        CHECK(fourier_transform(codifferential_planewave(f)) ==
              codifferential_symbol(fourier_transform(f)));
        auto F = mono(n, SpaceTag::FreqCartesian, m);
        CHECK(codifferential_symbol(codifferential_symbol(F)).is_zero());
      }
  }

  TEST_CASE("Laplace-de Rham symbol is +|xi|^2") {
    const double xi[3] = {0.7, -1.3, 0.4};
    for (int n = 2; n <= 3; ++n)
      for (unsigned m = 0; m < (1u << n); ++m) {
        auto F = mono(n, SpaceTag::FreqCartesian, m);
        auto lap = exterior_derivative_freq(codifferential_symbol(F)) +
                   codifferential_symbol(exterior_derivative_freq(F));
        double r2 = 0.0;
        for (int a = 0; a < n; ++a) r2 += xi[a] * xi[a];
        CHECK(max_abs(lap - F * Poly(r2), xi) < 1e-14);
      }
  }

  TEST_CASE("curl of a 1-form") {
    const double a[3] = {0.3, -1.1, 2.0};
    auto alpha = mono(3, SpaceTag::SpatialX, 1) * Poly(a[0]) + mono(3, SpaceTag::SpatialX, 2) * Poly(a[1]) +
                 mono(3, SpaceTag::SpatialX, 4) * Poly(a[2]);
    auto d = exterior_derivative_planewave(alpha);
    const double xi[3] = {0.5, 1.5, -0.8};
    cplx I(0, 1);
    cplx c1 = I * (xi[1] * a[2] - xi[2] * a[1]);
    cplx c2 = I * (xi[2] * a[0] - xi[0] * a[2]);
    cplx c3 = I * (xi[0] * a[1] - xi[1] * a[0]);
    CHECK(std::abs(d.coeff(0b110).eval(xi) - c1) < 1e-14);
    CHECK(std::abs(d.coeff(0b101).eval(xi) + c2) < 1e-14);
    CHECK(std::abs(d.coeff(0b011).eval(xi) - c3) < 1e-14);
  }

  TEST_CASE("Plancherel for forms") {
    Grid g{3, 24, 8.0};
    auto a = random_bandlimited(g, 1, 0.0, 2.5 * kPi, 1);
    auto b = random_bandlimited(g, 1, 0.0, 2.5 * kPi, 2);
    SUBCASE("single dx3 component") {
      auto a3 = SampledFormField::zeros(g, 1), b3 = SampledFormField::zeros(g, 1);
      a3.at(4) = a.at(4);
      b3.at(4) = b.at(4);
      double s = plancherel_spatial(a3, b3);
      cplx f = plancherel_frequency(to_frequency(a3), to_frequency(b3));
      CHECK(std::abs(f - s) < 1e-10 * std::abs(s));
    }
    SUBCASE("orthogonal components") {
      auto a1 = SampledFormField::zeros(g, 1), b2 = SampledFormField::zeros(g, 1);
      a1.at(1) = a.at(1);
      b2.at(2) = b.at(2);
      CHECK(plancherel_spatial(a1, b2) == 0.0);
      CHECK(std::abs(plancherel_frequency(to_frequency(a1), to_frequency(b2))) < 1e-14);
    }
    SUBCASE("full 1-forms, both dimensions") {
      double s = plancherel_spatial(a, b);
      cplx f = plancherel_frequency(to_frequency(a), to_frequency(b));
      CHECK(std::abs(f - s) < 1e-6 * std::abs(s));
      Grid g2{2, 64, 8.0};
      auto p = random_bandlimited(g2, 1, 0.0, 6.0, 3), q = random_bandlimited(g2, 1, 0.0, 6.0, 4);
      double s2 = plancherel_spatial(p, q);
      CHECK(std::abs(plancherel_frequency(to_frequency(p), to_frequency(q)) - s2) < 1e-6 * std::abs(s2));
    }
  }

  TEST_CASE("wedge product is a convolution in frequency") {
    // a dx1 ∧ b dx2 = ab dx1∧dx2, whose transform is (2π)^{-1} â * b̂
    Grid g{2, 32, 8.0};
    auto a = random_bandlimited(g, 1, 0.0, 1.9 * kPi, 7);
    auto b = random_bandlimited(g, 1, 0.0, 1.9 * kPi, 8);
    auto A = SampledFormField::zeros(g, 1), B = SampledFormField::zeros(g, 1);
    A.at(1) = a.at(1);
    B.at(2) = b.at(2);
    auto W = to_frequency(wedge_sampled(A, B));
    auto fa = A.at(1), fb = B.at(2);
    std::vector<cplx> ha(fa.begin(), fa.end()), hb(fb.begin(), fb.end());
    forward_spectrum(g, ha);
    forward_spectrum(g, hb);
    const int N = g.N;
    const double dxi = 2 * kPi / g.L;
    double num = 0, den = 0;
    auto wrap = [&](int k) { return ((k % N) + N) % N; };
    auto sm = ft_basis(2, 0b11);
    for (int i1 = 0; i1 < N; ++i1)
      for (int i2 = 0; i2 < N; ++i2) {
        cplx c = 0.0;
        for (int k1 = 0; k1 < N; ++k1)
          for (int k2 = 0; k2 < N; ++k2)
            c += ha[k1 * N + k2] * hb[wrap(i1 - k1) * N + wrap(i2 - k2)];
        c *= dxi * dxi / (2 * kPi) * double(sm.sign);
        cplx w = W.at(sm.mask)[i1 * N + i2];
        num += std::norm(c - w);
        den += std::norm(w);
      }
    CHECK(std::sqrt(num / den) < 1e-6);
    // odd forms wedge to zero
    auto aa = wedge_sampled(a, a);
    CHECK(aa.l2_norm() < 1e-12 * a.l2_norm() * a.l2_norm() + 1e-300);
  }
}
