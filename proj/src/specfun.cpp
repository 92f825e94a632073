#include "psiec/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace psiec {

double bessel_j(int m, double x) {
  if (m < 0) return (m % 2 ? -1.0 : 1.0) * bessel_j(-m, x);
  if (x == 0.0) return m == 0 ? 1.0 : 0.0;
  return std::cyl_bessel_j(static_cast<double>(m), x);
}

void bessel_j_range(int M, double x, double* out) {
  if (x == 0.0) {
    out[0] = 1.0;
    for (int m = 1; m <= M; ++m) out[m] = 0.0;
    return;
  }
  if (x > M && x >= 2.0) {
    out[0] = std::cyl_bessel_j(0.0, x);
    if (M == 0) return;
    out[1] = std::cyl_bessel_j(1.0, x);
    for (int m = 1; m < M; ++m) out[m + 1] = 2.0 * m / x * out[m] - out[m - 1];
    return;
  }
  // Miller downward recurrence, normalized by J0 + 2 sum J_2k = 1.
  int N = M + static_cast<int>(x) + 30 + static_cast<int>(std::sqrt(40.0 * (M + x + 1)));
  if (N % 2) ++N;
  double fp = 0.0, f = 1e-30, sum = 0.0;
  std::vector<double> tmp(M + 1, 0.0);
  for (int m = N; m >= 1; --m) {
    double fm = 2.0 * m / x * f - fp;
    fp = f;
    f = fm;  // f = J_{m-1}
    int idx = m - 1;
    if (idx <= M) tmp[idx] = f;
    if (idx > 0 && idx % 2 == 0) sum += 2.0 * f;
    if (std::abs(f) > 1e200) {
      f *= 1e-200;
      fp *= 1e-200;
      sum *= 1e-200;
      for (auto& t : tmp) t *= 1e-200;
    }
  }
  sum += f;  // J0
  for (int m = 0; m <= M; ++m) out[m] = tmp[m] / sum;
}

void spherical_bessel_j_range(int L, double x, double* out) {
  if (x == 0.0) {
    out[0] = 1.0;
    for (int l = 1; l <= L; ++l) out[l] = 0.0;
    return;
  }
  if (x > L && x >= 1.0) {
    double s = std::sin(x), c = std::cos(x);
    out[0] = s / x;
    if (L == 0) return;
    out[1] = s / (x * x) - c / x;
    for (int l = 1; l < L; ++l) out[l + 1] = (2.0 * l + 1.0) / x * out[l] - out[l - 1];
    return;
  }
  int N = L + static_cast<int>(x) + 30 + static_cast<int>(std::sqrt(40.0 * (L + x + 1)));
  double fp = 0.0, f = 1e-30;
  std::vector<double> tmp(std::max(L, 1) + 1, 0.0);
  for (int l = N; l >= 1; --l) {
    double fm = (2.0 * l + 1.0) / x * f - fp;
    fp = f;
    f = fm;  // j_{l-1}
    if (l - 1 < static_cast<int>(tmp.size())) tmp[l - 1] = f;
    if (std::abs(f) > 1e200) {
      f *= 1e-200;
      fp *= 1e-200;
      for (auto& t : tmp) t *= 1e-200;
    }
  }
  double scale;
  if (x < 1e-4) {
    scale = (1.0 - x * x / 6.0) / tmp[0];
  } else {
    double j0 = std::sin(x) / x;
    double j1 = std::sin(x) / (x * x) - std::cos(x) / x;
    scale = std::abs(j0) > std::abs(j1) ? j0 / tmp[0] : j1 / tmp[1];
  }
  for (int l = 0; l <= L; ++l) out[l] = tmp[l] * scale;
}

double spherical_bessel_j(int l, double x) {
  std::vector<double> v(l + 1);
  spherical_bessel_j_range(l, x, v.data());
  return v[l];
}

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int k = 1; k <= n; ++k) {
        double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * k - 1.0) * z * p2 - (k - 1.0) * p3) / k;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    {
      double p1 = 1.0, p2 = 0.0;
      for (int k = 1; k <= n; ++k) {
        double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * k - 1.0) * z * p2 - (k - 1.0) * p3) / k;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
}

void legendre_normalized_all(int L, double ct, double* out) {
  double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
  double pmm = 1.0 / std::sqrt(4.0 * kPi);
  for (int m = 0; m <= L; ++m) {
    if (m > 0) pmm *= -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * st;
    out[lm_index(m, m)] = pmm;
    if (m == L) break;
    double p1 = std::sqrt(2.0 * m + 3.0) * ct * pmm;
    out[lm_index(m + 1, m)] = p1;
    double p2 = pmm;
    for (int l = m + 2; l <= L; ++l) {
      double a = std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(m) * m));
      double b = std::sqrt((double(l - 1) * (l - 1) - double(m) * m) /
                           (4.0 * (l - 1) * (l - 1) - 1.0));
      double p = a * (ct * p1 - b * p2);
      out[lm_index(l, m)] = p;
      p2 = p1;
      p1 = p;
    }
  }
}

void sph_harm_all(int L, double theta, double phi, cplx* out) {
  std::vector<double> P(lm_count(L));
  legendre_normalized_all(L, std::cos(theta), P.data());
  for (int m = 0; m <= L; ++m) {
    cplx e = std::polar(1.0, m * phi);
    double sgn = (m % 2) ? -1.0 : 1.0;
    for (int l = m; l <= L; ++l) {
      cplx y = P[lm_index(l, m)] * e;
      out[lm_index(l, m)] = y;
      if (m > 0) out[lm_index(l, -m)] = sgn * std::conj(y);
    }
  }
}

cplx sph_harm(SphericalHarmonicIndex idx, double theta, double phi) {
  if (idx.l < 0 || std::abs(idx.m) > idx.l) throw std::invalid_argument("sph_harm: |m| > l");
  std::vector<cplx> y(lm_count(idx.l));
  sph_harm_all(idx.l, theta, phi, y.data());
  return y[lm_index(idx.l, idx.m)];
}

namespace {
bool gaunt_rules(int l1, int m1, int l2, int m2, int l, int m) {
  if (l1 < 0 || l2 < 0 || l < 0) return false;
  if (std::abs(m1) > l1 || std::abs(m2) > l2 || std::abs(m) > l) return false;
  if (m != m1 + m2) return false;
  if (l > l1 + l2 || l < std::abs(l1 - l2)) return false;
  if ((l1 + l2 + l) % 2) return false;
  return true;
}

double signed_plm(const std::vector<double>& P, int l, int m) {
  double v = P[lm_index(l, std::abs(m))];
  return (m < 0 && (m % 2)) ? -v : v;
}
}  // namespace

double gaunt(int l1, int m1, int l2, int m2, int l, int m) {
  if (!gaunt_rules(l1, m1, l2, m2, l, m)) return 0.0;
  int L = std::max({l1, l2, l});
  int n = (l1 + l2 + l) / 2 + 2;
  std::vector<double> x, w, P(lm_count(L));
  gauss_legendre(n, x, w);
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    legendre_normalized_all(L, x[i], P.data());
    s += w[i] * signed_plm(P, l1, m1) * signed_plm(P, l2, m2) * signed_plm(P, l, m);
  }
  return 2.0 * kPi * s;
}

GauntTable::GauntTable(int max_degree) : L_(max_degree), nlm_(lm_count(max_degree)) {
  data_.assign(static_cast<size_t>(nlm_) * nlm_ * (L_ + 1), 0.0);
  int n = (3 * L_) / 2 + 2;
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  std::vector<std::vector<double>> P(n, std::vector<double>(nlm_));
  for (int i = 0; i < n; ++i) legendre_normalized_all(L_, x[i], P[i].data());
  for (int l1 = 0; l1 <= L_; ++l1)
    for (int m1 = -l1; m1 <= l1; ++m1)
      for (int l2 = 0; l2 <= L_; ++l2)
        for (int m2 = -l2; m2 <= l2; ++m2)
          for (int l = 0; l <= L_; ++l) {
            int m = m1 + m2;
            if (!gaunt_rules(l1, m1, l2, m2, l, m)) continue;
            double s = 0.0;
            for (int i = 0; i < n; ++i)
              s += w[i] * signed_plm(P[i], l1, m1) * signed_plm(P[i], l2, m2) *
                   signed_plm(P[i], l, m);
            data_[(static_cast<size_t>(lm_index(l1, m1)) * nlm_ + lm_index(l2, m2)) * (L_ + 1) +
                  l] = 2.0 * kPi * s;
          }
}

double GauntTable::operator()(int l1, int m1, int l2, int m2, int l, int m) const {
  if (!gaunt_rules(l1, m1, l2, m2, l, m)) return 0.0;
  if (l1 > L_ || l2 > L_ || l > L_) throw std::out_of_range("GauntTable: degree above table");
  return data_[(static_cast<size_t>(lm_index(l1, m1)) * nlm_ + lm_index(l2, m2)) * (L_ + 1) + l];
}

void to_spherical(const double v[3], double& theta, double& phi) {
  double r = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  if (r == 0.0) {
    theta = 0.0;
    phi = 0.0;
    return;
  }
  theta = std::acos(std::clamp(v[2] / r, -1.0, 1.0));
  phi = std::atan2(v[1], v[0]);
}

cplx wigner_zonal(int l, int m, const double lambda[3]) {
  double th, ph;
  to_spherical(lambda, th, ph);
  return std::sqrt(4.0 * kPi / (2.0 * l + 1.0)) * std::conj(sph_harm({l, m}, th, ph));
}

// ---------------------------------------------------------------------------

void HankelCache::integrate(const RadialFunction& w, int dim, int q, int M, double r,
                            double density, double* val, double* d1, double* d2) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("HankelCache: dim must be 2 or 3");
  if (w.lo <= 0.0 && q > dim - 1)
    throw std::invalid_argument("hankel: rho^{dim-1-q} not integrable at rho = 0");
  const int nodes = 20;
  static thread_local std::vector<double> gx, gw;
  if (static_cast<int>(gx.size()) != nodes) gauss_legendre(nodes, gx, gw);
  double width = w.hi - w.lo;
  int panels = static_cast<int>(std::ceil(density * (8.0 + r * width / (2.0 * kPi))));
  panels = 6 * ((panels + 5) / 6);  // window breakpoints at 1/2 and 1/3 of the support
  std::fill(val, val + M + 1, 0.0);
  if (d1) std::fill(d1, d1 + M + 1, 0.0);
  if (d2) std::fill(d2, d2 + M + 1, 0.0);
  std::vector<double> J(M + 3), Jp(M + 2);
  double h = width / panels;
  for (int p = 0; p < panels; ++p) {
    double a = w.lo + p * h;
    for (int i = 0; i < nodes; ++i) {
      double rho = a + 0.5 * h * (gx[i] + 1.0);
      double fv = w.f(rho);
      if (fv == 0.0) continue;
      double W = 0.5 * h * gw[i] * fv * std::pow(rho, dim - 1 - q);
      double x = rho * r;
      if (dim == 2) {
        bessel_j_range(M + 2, x, J.data());
        auto Jn = [&](int m) { return m >= 0 ? J[m] : ((-m) % 2 ? -J[-m] : J[-m]); };
        for (int m = 0; m <= M; ++m) {
          val[m] += W * J[m];
          if (d1) d1[m] += W * rho * 0.5 * (Jn(m - 1) - Jn(m + 1));
          if (d2) d2[m] += W * rho * rho * 0.25 * (Jn(m - 2) - 2.0 * J[m] + Jn(m + 2));
        }
      } else {
        spherical_bessel_j_range(M + 2, x, J.data());
        Jp[0] = -J[1];
        for (int l = 1; l <= M + 1; ++l) Jp[l] = (l * J[l - 1] - (l + 1.0) * J[l + 1]) / (2.0 * l + 1.0);
        for (int l = 0; l <= M; ++l) {
          val[l] += W * J[l];
          if (d1) d1[l] += W * rho * Jp[l];
          if (d2) {
            double jpp = l == 0 ? -Jp[1] : (l * Jp[l - 1] - (l + 1.0) * Jp[l + 1]) / (2.0 * l + 1.0);
            d2[l] += W * rho * rho * jpp;
          }
        }
      }
    }
  }
}

HankelCache::HankelCache(const RadialFunction& w, int dim, int q, int max_order, double r_max,
                         double dr)
    : dim_(dim), q_(q), M_(max_order), r_max_(r_max), dr_(dr) {
  nr_ = static_cast<int>(std::ceil(r_max / dr)) + 2;
  v_.assign(static_cast<size_t>(M_ + 1) * nr_, 0.0);
  d1_ = v_;
  d2_ = v_;
  std::vector<double> a(M_ + 1), b(M_ + 1), c(M_ + 1);
  for (int i = 0; i < nr_; ++i) {
    integrate(w, dim, q, M_, i * dr_, 1.0, a.data(), b.data(), c.data());
    for (int m = 0; m <= M_; ++m) {
      v_[static_cast<size_t>(m) * nr_ + i] = a[m];
      d1_[static_cast<size_t>(m) * nr_ + i] = b[m];
      d2_[static_cast<size_t>(m) * nr_ + i] = c[m];
    }
  }
}

namespace {
struct Hermite5 {
  double h[6], dh[6];
  explicit Hermite5(double t) {
    double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    h[0] = 1 - 10 * t3 + 15 * t4 - 6 * t5;
    h[1] = t - 6 * t3 + 8 * t4 - 3 * t5;
    h[2] = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
    h[3] = 0.5 * t3 - t4 + 0.5 * t5;
    h[4] = -4 * t3 + 7 * t4 - 3 * t5;
    h[5] = 10 * t3 - 15 * t4 + 6 * t5;
    dh[0] = -30 * t2 + 60 * t3 - 30 * t4;
    dh[1] = 1 - 18 * t2 + 32 * t3 - 15 * t4;
    dh[2] = t - 4.5 * t2 + 6 * t3 - 2.5 * t4;
    dh[3] = 1.5 * t2 - 4 * t3 + 2.5 * t4;
    dh[4] = -12 * t2 + 28 * t3 - 15 * t4;
    dh[5] = 30 * t2 - 60 * t3 + 30 * t4;
  }
};
}  // namespace

double HankelCache::value(int order, double r) const {
  double sgn = 1.0;
  if (order < 0) {
    if (dim_ != 2) throw std::invalid_argument("HankelCache: negative order in 3D");
    order = -order;
    if (order % 2) sgn = -1.0;
  }
  if (order > M_) throw std::out_of_range("HankelCache: order above cache");
  if (r < 0 || r > r_max_) throw std::out_of_range("HankelCache: radius beyond cache extent");
  double s = r / dr_;
  int i = std::min(static_cast<int>(s), nr_ - 2);
  double t = s - i;
  size_t o = static_cast<size_t>(order) * nr_ + i;
  Hermite5 H(t);
  return sgn * (H.h[0] * v_[o] + H.h[1] * dr_ * d1_[o] + H.h[2] * dr_ * dr_ * d2_[o] +
                H.h[3] * dr_ * dr_ * d2_[o + 1] + H.h[4] * dr_ * d1_[o + 1] + H.h[5] * v_[o + 1]);
}

double HankelCache::derivative(int order, double r) const {
  double sgn = 1.0;
  if (order < 0) {
    order = -order;
    if (order % 2) sgn = -1.0;
  }
  if (order > M_) throw std::out_of_range("HankelCache: order above cache");
  if (r < 0 || r > r_max_) throw std::out_of_range("HankelCache: radius beyond cache extent");
  double s = r / dr_;
  int i = std::min(static_cast<int>(s), nr_ - 2);
  double t = s - i;
  size_t o = static_cast<size_t>(order) * nr_ + i;
  Hermite5 H(t);
  return sgn *
         (H.dh[0] * v_[o] + H.dh[1] * dr_ * d1_[o] + H.dh[2] * dr_ * dr_ * d2_[o] +
          H.dh[3] * dr_ * dr_ * d2_[o + 1] + H.dh[4] * dr_ * d1_[o + 1] + H.dh[5] * v_[o + 1]) /
         dr_;
}

}  // namespace psiec
