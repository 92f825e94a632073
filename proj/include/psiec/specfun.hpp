#pragma once
// Bessel functions, spherical harmonics, Gaunt coefficients and the cached
// (modified) Hankel transforms used by the polar wavelets.

#include <complex>
#include <functional>
#include <memory>
#include <vector>

namespace psiec {

using cplx = std::complex<double>;
constexpr double kPi = 3.14159265358979323846;

struct SphericalHarmonicIndex {
  int l = 0;
  int m = 0;
};

// Flat index l*l + l + m for harmonics up to a given degree.
inline int lm_index(int l, int m) { return l * l + l + m; }
inline int lm_count(int L) { return (L + 1) * (L + 1); }

double bessel_j(int m, double x);
// J_0..J_M at x.
void bessel_j_range(int M, double x, double* out);

double spherical_bessel_j(int l, double x);
// j_0..j_L at x.
void spherical_bessel_j_range(int L, double x, double* out);

// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

// Orthonormal y_lm with the Condon-Shortley phase.
cplx sph_harm(SphericalHarmonicIndex idx, double theta, double phi);
// All y_lm, l <= L, stored at lm_index(l, m).
void sph_harm_all(int L, double theta, double phi, cplx* out);
// Normalized associated Legendre values P̄_l^m(cos theta), m >= 0, such that
// y_lm = P̄_l^m e^{i m phi}; stored at lm_index(l, m).
void legendre_normalized_all(int L, double ct, double* out);

double gaunt(int l1, int m1, int l2, int m2, int l, int m);

class GauntTable {
 public:
  explicit GauntTable(int max_degree);
  int max_degree() const { return L_; }
  // ∫ y_{l1m1} y_{l2m2} y*_{lm}
  double operator()(int l1, int m1, int l2, int m2, int l, int m) const;

 private:
  int L_;
  int nlm_;
  std::vector<double> data_;  // [lm1][lm2][l]
};

std::complex<double> wigner_zonal(int l, int m, const double lambda[3]);

// Direction -> (theta, phi)
void to_spherical(const double v[3], double& theta, double& phi);

// Smooth compactly supported radial window.
struct RadialFunction {
  std::function<double(double)> f;
  double lo = 0.0;  // support [lo, hi]
  double hi = 0.0;
};

// Cached h_m(r) = ∫ f(ρ) ρ^{-q} J_m(ρ r) ρ dρ (dim 2) or
// h_l^{(q)}(r) = ∫ f(ρ) ρ^{-q} j_l(ρ r) ρ² dρ (dim 3) on a uniform radius grid,
// quintic Hermite interpolation between nodes.
class HankelCache {
 public:
  HankelCache(const RadialFunction& w, int dim, int q, int max_order, double r_max,
              double dr = 0.05);
  int dim() const { return dim_; }
  int q() const { return q_; }
  int max_order() const { return M_; }
  double r_max() const { return r_max_; }
  // Negative orders follow J_{-m} = (-1)^m J_m (dim 2 only).
  double value(int order, double r) const;
  double derivative(int order, double r) const;

  // Direct quadrature, bypasses the table. density scales the node count.
  static void integrate(const RadialFunction& w, int dim, int q, int max_order, double r,
                        double density, double* val, double* d1, double* d2);

 private:
  const double* row(int order) const;
  int dim_, q_, M_;
  double r_max_, dr_;
  int nr_;
  std::vector<double> v_, d1_, d2_;  // [order][node]
};

}  // namespace psiec
