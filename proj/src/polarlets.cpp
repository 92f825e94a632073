#include "psiec/polarlets.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace psiec {

double level_norm(int n, int j) {
  int s = level_scale(j);
  return std::pow(2.0, -0.5 * n * s) * std::pow(2.0 * kPi, -0.5 * n);
}

void atom_center(int n, int j, const std::array<int, 3>& k, double x[3]) {
  double h = std::ldexp(1.0, -level_scale(j));
  for (int a = 0; a < 3; ++a) x[a] = a < n ? h * k[a] : 0.0;
}

RadialFunction band_function(const RadialProfile& p, int j) {
  return j < 0 ? p.g_function() : p.h_function();
}

int orientation_count(const WindowSet& w, int n) {
  return n == 2 ? w.angular2d.T() : w.angular3d.T();
}

cplx angular_window(const WindowSet& w, int n, int t, const double xi[3]) {
  if (t < 0) return 1.0;  // isotropic scaling band
  if (n == 2) return w.angular2d.gamma(t, std::atan2(xi[1], xi[0]));
  double r = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
  double om[3] = {0.0, 0.0, 1.0};
  if (r > 0) {
    for (int a = 0; a < 3; ++a) om[a] = xi[a] / r;
  }
  return w.angular3d.gamma(t, om);
}

cplx eval_freq_scalar(const ScalarAtomIndex& idx, const WindowSet& w, const double xi[3]) {
  int n = idx.n;
  double rho = 0.0;
  for (int a = 0; a < n; ++a) rho += xi[a] * xi[a];
  rho = std::sqrt(rho);
  double win = w.radial.level_window(idx.j, rho);
  if (win == 0.0) return 0.0;
  double xk[3];
  atom_center(n, idx.j, idx.k, xk);
  double ph = 0.0;
  for (int a = 0; a < n; ++a) ph += xi[a] * xk[a];
  return level_norm(n, idx.j) * win * angular_window(w, n, idx.j < 0 ? -1 : idx.t, xi) * std::polar(1.0, -ph);
}

namespace {
AngularSeries scalar_series(const WindowSet& w, int n, int j, int t) {
  AngularSeries a;
  a.dim = n;
  if (j < 0) {
    a.c = {n == 2 ? 1.0 : std::sqrt(4.0 * kPi)};
    return a;
  }
  if (n == 2) {
    const auto& aw = w.angular2d;
    a.lo = -aw.N();
    a.L = aw.N();
    for (int m = -aw.N(); m <= aw.N(); ++m) a.c.push_back(aw.beta_t(m, t));
  } else {
    a.L = w.angular3d.L();
    a.c = w.angular3d.kappa(t);
  }
  return a;
}
}  // namespace

double eval_space_scalar(const ScalarAtomIndex& idx, const WindowSet& w, const double x[3],
                         double* imag) {
  double xk[3], y[3] = {0, 0, 0};
  atom_center(idx.n, idx.j, idx.k, xk);
  double r = 0.0;
  for (int a = 0; a < idx.n; ++a) {
    y[a] = x[a] - xk[a];
    r += y[a] * y[a];
  }
  RadialAngularKernel K(w.radial, idx.n, idx.j, 0, scalar_series(w, idx.n, idx.j, idx.t),
                        std::sqrt(r) + 1.0);
  cplx v = K.eval(y);
  if (imag) *imag = v.imag();
  return v.real();
}

// ---------------------------------------------------------------------------

int AngularSeries::max_order() const { return dim == 2 ? std::max(-lo, L) : L; }

AngularSeries AngularSeries::fourier(const std::function<cplx(double)>& f, int max_order,
                                     double drop_tol) {
  int P = 1;
  while (P < 4 * (max_order + 1)) P *= 2;
  std::vector<cplx> d(P);
  for (int p = 0; p < P; ++p) d[p] = f(2.0 * kPi * p / P);
  dft(1, P, d, true);
  double mx = 0.0;
  for (auto& v : d) {
    v /= double(P);
    mx = std::max(mx, std::abs(v));
  }
  auto coef = [&](int m) { return d[(m % P + P) % P]; };
  int lo = max_order, hi = -max_order;
  for (int m = -max_order; m <= max_order; ++m)
    if (std::abs(coef(m)) > drop_tol * std::max(mx, 1e-300)) {
      lo = std::min(lo, m);
      hi = std::max(hi, m);
    }
  AngularSeries a;
  a.dim = 2;
  if (lo > hi) {
    a.lo = 0;
    a.L = 0;
    a.c = {0.0};
    return a;
  }
  a.lo = lo;
  a.L = hi;
  for (int m = lo; m <= hi; ++m) a.c.push_back(std::abs(coef(m)) > drop_tol * mx ? coef(m) : 0.0);
  return a;
}

AngularSeries AngularSeries::spherical(const std::function<cplx(const double*)>& f, int L) {
  AngularSeries a;
  a.dim = 3;
  a.L = L;
  a.c.assign(lm_count(L), 0.0);
  int nt = 2 * L + 2;
  int np = 1;
  while (np < 4 * L + 4) np *= 2;
  std::vector<double> gx, gw, P(lm_count(L));
  gauss_legendre(nt, gx, gw);
  std::vector<cplx> row(np);
  for (int i = 0; i < nt; ++i) {
    double ct = gx[i], st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    for (int p = 0; p < np; ++p) {
      double ph = 2.0 * kPi * p / np;
      double om[3] = {st * std::cos(ph), st * std::sin(ph), ct};
      row[p] = f(om);
    }
    dft(1, np, row, true);  // Σ f e^{-imφ}
    legendre_normalized_all(L, ct, P.data());
    double wq = gw[i] * 2.0 * kPi / np;
    for (int l = 0; l <= L; ++l)
      for (int m = -l; m <= l; ++m) {
        // y*_lm = P̄_l^{|m|}-based with (-1)^m for negative m
        int am = std::abs(m);
        double pl = P[lm_index(l, am)] * ((m < 0 && am % 2) ? -1.0 : 1.0);
        a.c[lm_index(l, m)] += wq * pl * row[(m % np + np) % np];
      }
  }
  return a;
}

cplx AngularSeries::eval(const double dir[3]) const {
  cplx s = 0.0;
  if (dim == 2) {
    double th = std::atan2(dir[1], dir[0]);
    for (size_t i = 0; i < c.size(); ++i) s += c[i] * std::polar(1.0, (lo + int(i)) * th);
    return s;
  }
  double th, ph;
  to_spherical(dir, th, ph);
  std::vector<cplx> y(lm_count(L));
  sph_harm_all(L, th, ph, y.data());
  for (size_t i = 0; i < c.size(); ++i) s += c[i] * y[i];
  return s;
}

double AngularSeries::tail(int above) const {
  double s = 0.0;
  if (dim == 2) {
    for (size_t i = 0; i < c.size(); ++i)
      if (std::abs(lo + int(i)) > above) s += std::norm(c[i]);
  } else {
    for (int l = above + 1; l <= L; ++l)
      for (int m = -l; m <= l; ++m) s += std::norm(c[lm_index(l, m)]);
  }
  return std::sqrt(s);
}

// ---------------------------------------------------------------------------

std::shared_ptr<const HankelCache> hankel_cache(const RadialProfile& p, int j, int dim, int q,
                                                int max_order, double r_max) {
  static std::mutex mu;
  static std::map<std::tuple<std::string, double, bool, int, int>,
                  std::shared_ptr<const HankelCache>>
      caches;
  auto key = std::make_tuple(p.name(), p.h(kPi / 2), j < 0, dim, q);
  std::lock_guard<std::mutex> lk(mu);
  auto it = caches.find(key);
  if (it != caches.end() && it->second->max_order() >= max_order && it->second->r_max() >= r_max)
    return it->second;
  int order = max_order;
  double rm = std::ceil(r_max / 16.0) * 16.0;
  if (it != caches.end()) {
    order = std::max(order, it->second->max_order());
    rm = std::max(rm, it->second->r_max());
  }
  auto c = std::make_shared<const HankelCache>(band_function(p, j), dim, q, order, rm);
  caches[key] = c;
  return c;
}

RadialAngularKernel::RadialAngularKernel(const RadialProfile& p, int n, int j, int q,
                                         AngularSeries a, double y_max)
    : n_(n), j_(j), s_(level_scale(j)), q_(q), a_(std::move(a)) {
  double kn = n == 2 ? 1.0 : 4.0 * kPi * std::pow(2.0 * kPi, -1.5);
  pref_ = level_norm(n, j) * std::pow(2.0, (n - q) * s_) * kn;
  cache_ = hankel_cache(p, j, n, q, a_.max_order(), std::ldexp(y_max, s_) * 1.001 + 0.1);
  static const cplx ipow[4] = {1.0, cplx(0, 1), -1.0, cplx(0, -1)};
  phase_.resize(a_.c.size());
  if (n == 2) {
    for (size_t i = 0; i < a_.c.size(); ++i) {
      int m = a_.lo + int(i);
      phase_[i] = pref_ * ipow[((m % 4) + 4) % 4] * a_.c[i];
    }
  } else {
    for (int l = 0; l <= a_.L; ++l)
      for (int m = -l; m <= l; ++m) phase_[lm_index(l, m)] = pref_ * ipow[l % 4] * a_.c[lm_index(l, m)];
  }
}

cplx RadialAngularKernel::eval(const double y[3]) const {
  double r2 = y[0] * y[0] + y[1] * y[1] + (n_ == 3 ? y[2] * y[2] : 0.0);
  double r = std::sqrt(r2);
  double rs = std::ldexp(r, s_);
  cplx s = 0.0;
  if (n_ == 2) {
    double th = std::atan2(y[1], y[0]);
    for (size_t i = 0; i < phase_.size(); ++i) {
      if (phase_[i] == cplx(0.0)) continue;
      int m = a_.lo + int(i);
      s += phase_[i] * std::polar(1.0, m * th) * cache_->value(m, rs);
    }
    return s;
  }
  double th, ph;
  to_spherical(y, th, ph);
  static thread_local std::vector<double> P;
  static thread_local std::vector<double> H;
  int L = a_.L;
  P.resize(lm_count(L));
  H.resize(L + 1);
  legendre_normalized_all(L, std::cos(th), P.data());
  for (int l = 0; l <= L; ++l) H[l] = cache_->value(l, rs);
  cplx e1 = std::polar(1.0, ph), em = 1.0;
  for (int m = 0; m <= L; ++m) {
    double sg = (m % 2) ? -1.0 : 1.0;
    for (int l = m; l <= L; ++l) {
      double v = P[lm_index(l, m)] * H[l];
      s += phase_[lm_index(l, m)] * v * em;
      if (m > 0) s += phase_[lm_index(l, -m)] * (sg * v) * std::conj(em);
    }
    em *= e1;
  }
  return s;
}

// ---------------------------------------------------------------------------

int lattice_size(const Grid& g, int j) {
  double M = std::ldexp(g.L, level_scale(j));
  int Mi = static_cast<int>(std::lround(M));
  if (std::abs(M - Mi) > 1e-9 || Mi < 2 || Mi % 2)
    throw std::invalid_argument("lattice_size: extent times 2^s must be an even integer");
  return Mi;
}

namespace {
// Flat index (mod-M layout) of each centred lattice slot.
std::vector<size_t> centred_to_mod(int n, int M) {
  size_t total = 1;
  for (int a = 0; a < n; ++a) total *= M;
  std::vector<size_t> out(total);
  for (size_t i = 0; i < total; ++i) {
    size_t r = i, f = 0, stride = 1;
    for (int a = 0; a < n; ++a) {
      int c = static_cast<int>(r % M);
      r /= M;
      int k = c - M / 2;
      f += static_cast<size_t>(((k % M) + M) % M) * stride;
      stride *= M;
    }
    out[i] = f;
  }
  return out;
}

// Flat mod-M index of each grid frequency.
std::vector<size_t> grid_to_mod(const Grid& g, int M) {
  std::vector<size_t> out(g.size());
  for (size_t i = 0; i < g.size(); ++i) {
    size_t r = i, f = 0, stride = 1;
    for (int a = 0; a < g.n; ++a) {
      int m = g.freq_index(static_cast<int>(r % g.N));
      r /= g.N;
      f += static_cast<size_t>(((m % M) + M) % M) * stride;
      stride *= M;
    }
    out[i] = f;
  }
  return out;
}

// Both layouts keep the last spatial axis fastest, like the grid itself.
}  // namespace

void lattice_analyze(const Grid& g, int j, const std::vector<cplx>& G, std::vector<cplx>& alpha) {
  int M = lattice_size(g, j);
  auto gm = grid_to_mod(g, M);
  auto cm = centred_to_mod(g.n, M);
  std::vector<cplx> B(cm.size(), 0.0);
  for (size_t i = 0; i < G.size(); ++i) B[gm[i]] += G[i];
  dft(g.n, M, B, false);
  double s = std::pow(2.0 * kPi / g.L, g.n);
  alpha.resize(cm.size());
  for (size_t i = 0; i < cm.size(); ++i) alpha[i] = s * B[cm[i]];
}

void lattice_synthesize(const Grid& g, int j, const std::vector<cplx>& alpha,
                        const std::vector<cplx>& D, std::vector<cplx>& G) {
  int M = lattice_size(g, j);
  auto gm = grid_to_mod(g, M);
  auto cm = centred_to_mod(g.n, M);
  std::vector<cplx> A(cm.size(), 0.0);
  for (size_t i = 0; i < cm.size(); ++i) A[cm[i]] = alpha[i];
  dft(g.n, M, A, true);
  for (size_t i = 0; i < G.size(); ++i)
    if (D[i] != cplx(0.0)) G[i] += D[i] * A[gm[i]];
}

ScalarRoundtrip scalar_roundtrip(const Grid& g, const std::vector<double>& field, int J,
                                 const WindowSet& w) {
  ScalarRoundtrip out;
  std::vector<cplx> F(field.begin(), field.end());
  forward_spectrum(g, F);
  std::vector<cplx> R(g.size(), 0.0), D(g.size()), G(g.size());
  std::vector<double> cover(g.size(), 0.0);
  int T = orientation_count(w, g.n);
  double energy = 0.0;
  for (int j = -1; j < J; ++j)
    for (int t = 0; t < (j < 0 ? 1 : T); ++t) {
      ScalarAtomIndex idx{g.n, j, {0, 0, 0}, t};
      double c2 = std::pow(2.0 * kPi, g.n) * std::pow(2.0, g.n * level_scale(j));
      for (size_t i = 0; i < g.size(); ++i) {
        double xi[3];
        g.wavevector(i, xi);
        D[i] = eval_freq_scalar(idx, w, xi);
        G[i] = F[i] * std::conj(D[i]);
        cover[i] += std::norm(D[i]) * c2;
      }
      ScalarBand b{j, t, {}};
      lattice_analyze(g, j, G, b.alpha);
      for (auto& a : b.alpha) {
        out.max_imag = std::max(out.max_imag, std::abs(a.imag()));
        energy += std::norm(a);
      }
      lattice_synthesize(g, j, b.alpha, D, R);
      out.bands.push_back(std::move(b));
    }
  double fn = 0.0, leak = 0.0;
  for (size_t i = 0; i < g.size(); ++i) {
    fn += std::norm(F[i]);
    leak += std::norm(F[i]) * std::abs(1.0 - cover[i]);
  }
  out.leakage = fn > 0 ? leak / fn : 0.0;
  inverse_spectrum(g, R);
  out.reconstruction.resize(g.size());
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < g.size(); ++i) {
    out.reconstruction[i] = R[i].real();
    num += std::pow(R[i].real() - field[i], 2);
    den += field[i] * field[i];
  }
  out.rel_error = den > 0 ? std::sqrt(num / den) : std::sqrt(num);
  double fl2 = den * std::pow(g.h(), g.n);
  out.parseval_ratio = fl2 > 0 ? energy / fl2 : (energy == 0 ? 1.0 : 0.0);
  return out;
}

}  // namespace psiec
