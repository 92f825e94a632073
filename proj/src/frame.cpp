#include "psiec/frame.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>

#include "psiec/exterior.hpp"
#include "psiec/parallel.hpp"

namespace psiec {

namespace {

double norm_xi(int n, const double xi[3]) {
  double s = 0.0;
  for (int a = 0; a < n; ++a) s += xi[a] * xi[a];
  return std::sqrt(s);
}

// (2π)^n 2^{ns}: turns Σ_k over a level lattice into a frequency integral.
double lattice_factor(int n, int j) {
  return std::pow(2.0 * kPi, n) * std::pow(2.0, n * level_scale(j));
}

std::vector<FrameBand> bands_for(const Grid& g, int r, Nu nu, int J, const WindowSet& w,
                                 int j_min) {
  std::vector<FrameBand> out;
  for (const auto& type : atom_types(g.n)) {
    if (type.r != r || type.nu != nu) continue;
    for (auto [j, t] : band_list(type, J, w)) {
      if (j < j_min) continue;
      FrameBand b;
      b.type = type;
      b.j = j;
      b.t = t;
      b.M = lattice_size(g, j);
      out.push_back(b);
    }
  }
  return out;
}

// α = lattice projection of Σ_K conj(D_K) X_K ρ^{2 weight}; also accumulates
// the frame-cover image of X into cover (when given).
void analyze_band(const FreqFormField& X, FrameBand& b, const WindowSet& w, int weight,
                  FreqFormField* cover, double* max_imag, const cplx* g0 = nullptr) {
  const Grid& g = X.grid;
  auto D = band_spectrum(g, b.type, b.j, b.t, w);
  auto cm = masks_of_degree(g.n, g.n - b.type.r);
  std::vector<cplx> G(g.size(), 0.0);
  for (size_t c = 0; c < cm.size(); ++c) {
    const auto& x = X.at(cm[c]);
    for (size_t i = 0; i < G.size(); ++i)
      if (D[c][i] != cplx(0.0)) G[i] += std::conj(D[c][i]) * x[i];
  }
  if (weight) {
    for (size_t i = 0; i < G.size(); ++i) {
      if (G[i] == cplx(0.0)) continue;
      double xi[3];
      g.wavevector(i, xi);
      double r2 = 0.0;
      for (int a = 0; a < g.n; ++a) r2 += xi[a] * xi[a];
      G[i] *= std::pow(r2, weight);
    }
  }
  if (g0) G[0] = *g0;
  lattice_analyze(g, b.j, G, b.alpha);
  if (max_imag)
    for (const auto& a : b.alpha) *max_imag = std::max(*max_imag, std::abs(a.imag()));
  if (cover) {
    double f = lattice_factor(g.n, b.j);
    for (size_t c = 0; c < cm.size(); ++c) {
      auto& dst = cover->at(cm[c]);
      for (size_t i = 0; i < G.size(); ++i)
        if (D[c][i] != cplx(0.0)) dst[i] += f * D[c][i] * G[i];
    }
  }
}

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

std::string window_hash(const WindowSet& w) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(windows_to_json(w))));
  return buf;
}

FormAtomIndex FrameBand::index(size_t slot) const {
  FormAtomIndex idx;
  idx.type = type;
  idx.j = j;
  idx.t = t;
  for (int a = type.n - 1; a >= 0; --a) {
    idx.k[a] = static_cast<int>(slot % M) - M / 2;
    slot /= M;
  }
  return idx;
}

size_t FrameCoefficients::count() const {
  size_t c = 0;
  for (const auto* v : {&exact, &coexact})
    for (const auto& b : *v) c += b.alpha.size();
  return c;
}

double FrameCoefficients::energy(Nu nu) const {
  double e = 0.0;
  for (const auto& b : nu == Nu::d ? exact : coexact)
    for (const auto& a : b.alpha) e += std::norm(a);
  return e;
}

std::vector<std::pair<FormAtomIndex, double>> FrameCoefficients::entries(double drop) const {
  std::vector<std::pair<FormAtomIndex, double>> out;
  for (const auto* v : {&exact, &coexact})
    for (const auto& b : *v)
      for (size_t i = 0; i < b.alpha.size(); ++i)
        if (std::abs(b.alpha[i].real()) > drop) out.emplace_back(b.index(i), b.alpha[i].real());
  return out;
}

FrameCoefficients FrameCoefficients::zeros_like() const {
  FrameCoefficients c = *this;
  for (auto* v : {&c.exact, &c.coexact})
    for (auto& b : *v) std::fill(b.alpha.begin(), b.alpha.end(), cplx(0.0));
  c.max_imag = 0.0;
  c.leakage = 0.0;
  return c;
}

FrameBand* FrameCoefficients::find(const AtomType& type, int j, int t) {
  for (auto* v : {&exact, &coexact})
    for (auto& b : *v)
      if (b.type == type && b.j == j && b.t == t) return &b;
  return nullptr;
}

std::vector<std::pair<int, int>> band_list(const AtomType& type, int J, const WindowSet& w) {
  std::vector<std::pair<int, int>> out;
  int T = orientation_count(w, type.n);
  for (int j = type.nu == Nu::d ? -1 : 0; j < J; ++j)
    for (int t = 0; t < (j < 0 ? 1 : T); ++t) out.emplace_back(j, t);
  return out;
}

std::vector<std::vector<cplx>> band_spectrum(const Grid& g, const AtomType& type, int j, int t,
                                             const WindowSet& w, int extra_weight) {
  auto cm = masks_of_degree(g.n, g.n - type.r);
  std::vector<std::vector<cplx>> D(cm.size(), std::vector<cplx>(g.size(), 0.0));
  double hi = j < 0 ? w.radial.g_hi() : std::ldexp(w.radial.h_hi(), j);
  double lo = j < 0 ? 0.0 : std::ldexp(w.radial.h_lo(), j);
  const long chunk = 4096, size = static_cast<long>(g.size());
  parallel_for((size + chunk - 1) / chunk, [&](long b) {
    std::vector<cplx> tmp(cm.size());
    for (long i = b * chunk; i < std::min(size, (b + 1) * chunk); ++i) {
      double xi[3];
      g.wavevector(i, xi);
      double rho = norm_xi(g.n, xi);
      if (rho > hi || (rho < lo && j >= 0)) continue;
      band_descriptor(type, j, t, w, xi, extra_weight, tmp.data());
      for (size_t c = 0; c < cm.size(); ++c) D[c][i] = tmp[c];
    }
  });
  return D;
}

SampledFormField sample_atom(const FormAtomIndex& idx, const Grid& g, const WindowSet& w,
                             double* max_imag, int extra_weight) {
  if (g.n != idx.type.n) throw std::invalid_argument("sample_atom: dimension mismatch");
  auto D = band_spectrum(g, idx.type, idx.j, idx.t, w, extra_weight);
  FreqFormField F = FreqFormField::zeros(g, idx.type.r);
  auto cm = masks_of_degree(g.n, g.n - idx.type.r);
  double xk[3];
  atom_center(g.n, idx.j, idx.k, xk);
  for (size_t c = 0; c < cm.size(); ++c) {
    auto& dst = F.at(cm[c]);
    for (size_t i = 0; i < g.size(); ++i) {
      if (D[c][i] == cplx(0.0)) continue;
      double xi[3];
      g.wavevector(i, xi);
      double ph = 0.0;
      for (int a = 0; a < g.n; ++a) ph += xi[a] * xk[a];
      dst[i] = D[c][i] * std::polar(1.0, -ph);
    }
  }
  return from_frequency(F, max_imag);
}

SampledFormField random_bandlimited(const Grid& g, int degree, double lo, double hi,
                                    unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  auto f = SampledFormField::zeros(g, degree);
  for (auto& c : f.comp) {
    std::vector<cplx> d(g.size());
    for (auto& v : d) v = nd(rng);
    forward_spectrum(g, d);
    for (size_t i = 0; i < d.size(); ++i) {
      double xi[3];
      g.wavevector(i, xi);
      double rho = norm_xi(g.n, xi);
      if (rho < lo || rho > hi) d[i] = 0.0;
    }
    inverse_spectrum(g, d);
    for (size_t i = 0; i < d.size(); ++i) c[i] = d[i].real();
  }
  return f;
}

FrameCoefficients analyze(const FreqFormField& F, int J, const WindowSet& w) {
  const Grid& g = F.grid;
  FrameCoefficients out;
  out.n = g.n;
  out.r = F.spatial_degree;
  out.J = J;
  out.grid = g;
  out.window_hash = window_hash(w);
  out.exact = bands_for(g, out.r, Nu::d, J, w, -1);
  out.coexact = bands_for(g, out.r, Nu::delta, J, w, 0);
  FreqFormField cover = FreqFormField::zeros(g, out.r);
  for (auto& b : out.exact) analyze_band(F, b, w, 0, &cover, &out.max_imag);
  for (auto& b : out.coexact) analyze_band(F, b, w, 1, &cover, &out.max_imag);
  double num = 0.0, den = 0.0;
  for (size_t c = 0; c < F.masks.size(); ++c) {
    const auto& x = F.comp[c];
    const auto& y = cover.at(F.masks[c]);
    for (size_t i = 0; i < x.size(); ++i) {
      num += std::norm(x[i] - y[i]);
      den += std::norm(x[i]);
    }
  }
  out.leakage = den > 0 ? num / den : 0.0;
  return out;
}

FrameCoefficients analyze(const SampledFormField& f, int J, const WindowSet& w) {
  return analyze(to_frequency(f), J, w);
}

FreqFormField synthesize_spectrum(const FrameCoefficients& c, const WindowSet& w) {
  FreqFormField out = FreqFormField::zeros(c.grid, c.r);
  auto cm = masks_of_degree(c.n, c.n - c.r);
  for (const auto* v : {&c.exact, &c.coexact})
    for (const auto& b : *v) {
      auto D = band_spectrum(c.grid, b.type, b.j, b.t, w);
      for (size_t k = 0; k < cm.size(); ++k)
        lattice_synthesize(c.grid, b.j, b.alpha, D[k], out.at(cm[k]));
    }
  return out;
}

SampledFormField synthesize(const FrameCoefficients& c, const WindowSet& w, double* max_imag) {
  return from_frequency(synthesize_spectrum(c, w), max_imag);
}

double ParsevalReport::rel_error() const {
  double f = field_energy_d + field_energy_delta;
  double a = coeff_energy_d + coeff_energy_delta;
  return f > 0 ? std::abs(a - f) / f : std::abs(a);
}

ParsevalReport parseval_report(const FreqFormField& F, const FrameCoefficients& c) {
  ParsevalReport rep;
  rep.coeff_energy_d = c.energy(Nu::d);
  rep.coeff_energy_delta = c.energy(Nu::delta);
  const Grid& g = F.grid;
  double dv = std::pow(2.0 * kPi / g.L, g.n);
  double total = 0.0;
  for (const auto& x : F.comp)
    for (const auto& v : x) total += std::norm(v);
  double coex_l2 = 0.0, coex_h1 = 0.0;
  if (F.spatial_degree < g.n) {
    auto dF = to_frequency(spectral_d(from_frequency(F)));
    for (const auto& x : dF.comp)
      for (size_t i = 0; i < x.size(); ++i) {
        double xi[3];
        g.wavevector(i, xi);
        double r2 = 0.0;
        for (int a = 0; a < g.n; ++a) r2 += xi[a] * xi[a];
        coex_h1 += std::norm(x[i]);
        if (r2 > 0) coex_l2 += std::norm(x[i]) / r2;
      }
  }
  rep.field_energy_delta = coex_h1 * dv;
  rep.field_energy_d = (total - coex_l2) * dv;
  return rep;
}

// ---------------------------------------------------------------------------

std::vector<cplx> fiber_beta_bar(const AngularWindow3D& w, int t) {
  int L = w.L();
  std::vector<cplx> y(lm_count(L));
  sph_harm_all(L, kPi / 2, 0.0, y.data());
  std::vector<cplx> b(2 * L + 1, 0.0);
  const auto& k = w.kappa(t);
  for (int l = 0; l <= L; ++l)
    for (int m = -l; m <= l; ++m) b[m + L] += k[lm_index(l, m)] * y[lm_index(l, m)];
  return b;
}

namespace {

// 3D spatial monomial carrying the fiber direction, and the sign of
// dx^J = sign dx^{J'} ∧ dx^axis.
void lift_mask(unsigned m2, int axis, unsigned& m3, int& sign) {
  int rest[2], c = 0;
  for (int a = 0; a < 3; ++a)
    if (a != axis) rest[c++] = a;
  m3 = 1u << axis;
  for (int b = 0; b < 2; ++b)
    if (m2 & (1u << b)) m3 |= 1u << rest[b];
  sign = (popcount(m3 >> (axis + 1)) % 2) ? -1 : 1;
}

double probe_radius(const RadialProfile& p, int j) {
  double best = 0.0, arg = 0.0;
  for (int i = 1; i < 200; ++i) {
    double r = (j < 0 ? p.g_hi() : std::ldexp(p.h_hi(), j)) * i / 200.0;
    double v = p.level_window(j, r);
    if (v > best) best = v, arg = r;
  }
  return arg;
}

}  // namespace

FiberAtom fiber_integrate(const FormAtomIndex& idx, int axis, const WindowSet& w) {
  const AtomType& ty = idx.type;
  if (ty.n != 3) throw std::invalid_argument("fiber_integrate: needs a 3D atom");
  if (ty.r < 1) throw std::invalid_argument("fiber_integrate: 0-forms have no fiber integral");
  if (axis < 0 || axis > 2) throw std::invalid_argument("fiber_integrate: axis must be 0, 1 or 2");
  FiberAtom f;
  f.source = ty;
  f.axis = axis;
  f.j = idx.j;
  f.t = idx.t;
  int rest[2], c = 0;
  for (int a = 0; a < 3; ++a)
    if (a != axis) rest[c++] = a;
  f.k2 = {idx.k[rest[0]], idx.k[rest[1]], 0};
  f.masks2 = masks_of_degree(2, ty.r - 1);
  f.weight_power = freq_table(3).at(ty).weight_power;
  const double rho0 = probe_radius(w.radial, idx.j);
  const double radial = level_norm(3, idx.j) * w.radial.level_window(idx.j, rho0) *
                        std::pow(rho0, -f.weight_power);
  auto cm3 = masks_of_degree(3, 3 - ty.r);
  // √(2π) from the restriction, c3 / c2 from the change of normalization.
  const double scale = std::sqrt(2.0 * kPi) * level_norm(3, idx.j) / level_norm(2, idx.j);
  int max_order = (idx.j < 0 ? 0 : w.angular3d.L()) + 32;
  double total = 0.0;
  std::vector<cplx> D(cm3.size());
  for (unsigned m2 : f.masks2) {
    unsigned m3;
    int sg;
    lift_mask(m2, axis, m3, sg);
    auto ft = ft_basis(3, m3);
    size_t slot = std::find(cm3.begin(), cm3.end(), ft.mask) - cm3.begin();
    auto fn = [&](double th) -> cplx {
      double xi[3] = {0.0, 0.0, 0.0};
      xi[rest[0]] = rho0 * std::cos(th);
      xi[rest[1]] = rho0 * std::sin(th);
      band_descriptor(ty, idx.j, idx.t, w, xi, 0, D.data());
      return D[slot] * double(sg * ft.sign) * scale / radial;
    };
    auto series = AngularSeries::fourier(fn, max_order, 1e-14);
    total += series.tail(-1);
    f.series.push_back(std::move(series));
  }
  f.zero = total < 1e-24;

  // Identify the 2D table atom (β̄ window) for fibers along x3.
  if (axis == 2 && !f.zero) {
    WindowSet w2 = w;
    std::vector<cplx> bb = idx.j < 0 ? std::vector<cplx>{1.0} : fiber_beta_bar(w.angular3d, idx.t);
    w2.angular2d = AngularWindow2D(bb, 1, "fiber");
    auto cm2 = masks_of_degree(2, 2 - (ty.r - 1));
    std::vector<cplx> D2(cm2.size());
    for (const auto& t2 : atom_types(2)) {
      if (t2.r != ty.r - 1) continue;
      if (freq_table(2).at(t2).weight_power != f.weight_power) continue;
      double ratio = 0.0;
      bool ok = true, any = false;
      for (int p = 0; p < 7 && ok; ++p) {
        double th = 0.37 + 0.9 * p;
        double xi[3] = {rho0 * std::cos(th), rho0 * std::sin(th), 0.0};
        band_descriptor(t2, idx.j, 0, w2, xi, 0, D2.data());
        for (size_t q = 0; q < f.masks2.size(); ++q) {
          auto ib = ift_basis(2, 0);
          size_t k2 = 0;
          for (; k2 < cm2.size(); ++k2) {
            ib = ift_basis(2, cm2[k2]);
            if (ib.mask == f.masks2[q]) break;
          }
          cplx theirs = double(ib.sign) * D2[k2] / (level_norm(2, idx.j) *
                        w.radial.level_window(idx.j, rho0) * std::pow(rho0, -f.weight_power));
          double dir[3] = {std::cos(th), std::sin(th), 0.0};
          cplx ours = f.series[q].eval(dir);
          if (std::abs(theirs) < 1e-9) {
            if (std::abs(ours) > 1e-7) ok = false;
            continue;
          }
          cplx r = ours / theirs;
          if (std::abs(r.imag()) > 1e-7 * std::abs(r)) ok = false;
          if (!any) ratio = r.real(), any = true;
          else if (std::abs(r.real() - ratio) > 1e-7 * std::abs(ratio)) ok = false;
        }
      }
      if (ok && any) {
        f.has_table_atom = true;
        f.type2 = t2;
        f.table_sign = ratio > 0 ? 1 : -1;
        f.beta_bar = bb;
        break;
      }
    }
  }
  return f;
}

FiberEvaluator::FiberEvaluator(const FiberAtom& f, const WindowSet& w, double y_max)
    : masks_(f.masks2) {
  for (const auto& s : f.series)
    kernels_.push_back(
        std::make_unique<RadialAngularKernel>(w.radial, 2, f.j, f.weight_power, s, y_max));
  double h = std::ldexp(1.0, -level_scale(f.j));
  center_[0] = f.k2[0] * h;
  center_[1] = f.k2[1] * h;
}

std::vector<double> FiberEvaluator::eval(const double x[2], double* imag) const {
  double y[3] = {x[0] - center_[0], x[1] - center_[1], 0.0};
  std::vector<double> out(masks_.size());
  double mi = 0.0;
  for (size_t c = 0; c < masks_.size(); ++c) {
    cplx v = kernels_[c]->eval(y);
    out[c] = v.real();
    mi = std::max(mi, std::abs(v.imag()));
  }
  if (imag) *imag = mi;
  return out;
}

SampledFormField fiber_integrate_sampled(const SampledFormField& f, int axis) {
  const Grid& g = f.grid;
  if (g.n != 3 || f.degree < 1) throw std::invalid_argument("fiber_integrate_sampled: 3D r >= 1");
  Grid g2{2, g.N, g.L};
  SampledFormField out = SampledFormField::zeros(g2, f.degree - 1);
  const size_t N = g.N;
  for (size_t c = 0; c < out.masks.size(); ++c) {
    unsigned m3;
    int sg;
    lift_mask(out.masks[c], axis, m3, sg);
    const auto& src = f.at(m3);
    auto& dst = out.comp[c];
    for (size_t i = 0; i < N; ++i)
      for (size_t k = 0; k < N; ++k) {
        double s = 0.0;
        for (size_t m = 0; m < N; ++m) {
          size_t id[3];
          int rest = 0;
          for (int a = 0; a < 3; ++a) id[a] = a == axis ? m : (rest++ == 0 ? i : k);
          s += src[(id[0] * N + id[1]) * N + id[2]];
        }
        dst[i * N + k] = sg * s * g.h();
      }
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string CharacteristicShape::str() const {
  char buf[96];
  const char* k = kind == ShapeKind::Disc ? "disc" : kind == ShapeKind::Square ? "square" : "halfspace";
  std::snprintf(buf, sizeof buf, "%s(%.3g,%.3g;%.3g)", k, center[0], center[1], size);
  return buf;
}

cplx disc_indicator_ft(const CharacteristicShape& s, const double xi[2]) {
  double rho = std::hypot(xi[0], xi[1]);
  double R = s.size;
  double a = rho * R < 1e-8 ? 0.5 * R * R : R * bessel_j(1, R * rho) / rho;
  return std::polar(a, -(xi[0] * s.center[0] + xi[1] * s.center[1]));
}

FreqFormField characteristic_spectrum(const CharacteristicShape& s, const Grid& g, bool boundary) {
  if (g.n != 2 || s.n != 2) throw std::invalid_argument("characteristic forms are 2D");
  std::vector<cplx> X(g.size(), 0.0);
  std::vector<cplx> T1(g.size(), 0.0), T2(g.size(), 0.0);
  switch (s.kind) {
    case ShapeKind::Disc:
      for (size_t i = 0; i < g.size(); ++i) {
        double xi[3];
        g.wavevector(i, xi);
        X[i] = disc_indicator_ft(s, xi);
      }
      break;
    case ShapeKind::Square:
      for (size_t i = 0; i < g.size(); ++i) {
        double x[3];
        g.point(i, x);
        double hw = 0.5 * s.size;
        bool in = std::abs(x[0] - s.center[0]) < hw && std::abs(x[1] - s.center[1]) < hw;
        X[i] = in ? 1.0 : 0.0;
      }
      forward_spectrum(g, X);
      break;
    case ShapeKind::Halfspace: {
      if (!boundary) throw std::invalid_argument("halfspace: only the boundary current is finite");
      // ∂M = {x1 = 0} traversed downward: T = -δ(x1) dx2.
      for (size_t i = 0; i < g.size(); ++i) {
        double x[3];
        g.point(i, x);
        if (std::abs(x[0]) < 0.5 * g.h()) T2[i] = -1.0 / g.h();
      }
      forward_spectrum(g, T2);
      break;
    }
  }
  FreqFormField out = FreqFormField::zeros(g, boundary ? 1 : 2);
  if (!boundary) {
    auto sm = ft_basis(2, 0b11u);
    auto& dst = out.at(sm.mask);
    for (size_t i = 0; i < X.size(); ++i) dst[i] = double(sm.sign) * X[i];
    return out;
  }
  if (s.kind != ShapeKind::Halfspace) {
    // ∫_∂M β = ∫ β1 ∂2χ - β2 ∂1χ
    for (size_t i = 0; i < X.size(); ++i) {
      double xi[3];
      g.wavevector(i, xi);
      T1[i] = cplx(0.0, xi[1]) * X[i];
      T2[i] = cplx(0.0, -xi[0]) * X[i];
    }
  }
  for (unsigned m : {0b01u, 0b10u}) {
    auto sm = ft_basis(2, m);
    auto& src = m == 0b01u ? T1 : T2;
    auto& dst = out.at(sm.mask);
    for (size_t i = 0; i < src.size(); ++i) dst[i] = double(sm.sign) * src[i];
  }
  return out;
}

FrameCoefficients characteristic_coefficients(const CharacteristicShape& s, bool boundary, int J,
                                              const Grid& g, const WindowSet& w) {
  FreqFormField X = characteristic_spectrum(s, g, boundary);
  FrameCoefficients out;
  out.n = 2;
  out.r = boundary ? 1 : 2;
  out.J = J;
  out.grid = g;
  out.window_hash = window_hash(w);
  AtomType ty{2, out.r, boundary ? Nu::delta : Nu::d, 1};
  auto& list = boundary ? out.coexact : out.exact;
  // The boundary scaling band pairs ρ^{-1} against O(ρ): its ξ = 0 cell takes
  // the limit, which the chain map gives as conj(ψ̂^{2,d}(0)) χ̂_M(0).
  cplx limit0 = 0.0;
  bool use_limit = boundary && s.kind != ShapeKind::Halfspace;
  if (use_limit) {
    auto Xi = characteristic_spectrum(s, g, false);
    double zero[3] = {0.0, 0.0, 0.0};
    cplx d0;
    band_descriptor({2, 2, Nu::d, 1}, -1, 0, w, zero, 0, &d0);
    limit0 = std::conj(d0) * Xi.comp[0][0];
  }
  int T = orientation_count(w, 2);
  for (int j = -1; j < J; ++j)
    for (int t = 0; t < (j < 0 ? 1 : T); ++t) {
      FrameBand b;
      b.type = ty;
      b.j = j;
      b.t = t;
      b.M = lattice_size(g, j);
      analyze_band(X, b, w, 0, nullptr, &out.max_imag, use_limit && j < 0 ? &limit0 : nullptr);
      list.push_back(std::move(b));
    }
  return out;
}

double atom_shape_integral(const FormAtomIndex& idx, const CharacteristicShape& s,
                           const WindowSet& w) {
  if (s.kind != ShapeKind::Disc) throw std::invalid_argument("atom_shape_integral: disc only");
  const AtomType& ty = idx.type;
  bool boundary;
  if (ty.n == 2 && ty.r == 2 && ty.nu == Nu::d) boundary = false;
  else if (ty.n == 2 && ty.r == 1 && ty.nu == Nu::delta) boundary = true;
  else throw std::invalid_argument("atom_shape_integral: needs (2,d) or (1,delta) in 2D");
  double lo = idx.j < 0 ? 0.0 : std::ldexp(w.radial.h_lo(), idx.j);
  double hi = idx.j < 0 ? w.radial.g_hi() : std::ldexp(w.radial.h_hi(), idx.j);
  double xk[3];
  atom_center(2, idx.j, idx.k, xk);
  double dist = std::hypot(xk[0] - s.center[0], xk[1] - s.center[1]);
  int nth = 64 + 8 * static_cast<int>(hi * (dist + s.size + 2.0));
  nth += nth % 2;
  int panels = 96;
  std::vector<double> gx, gw;
  gauss_legendre(16, gx, gw);
  auto cm = masks_of_degree(2, 2 - ty.r);
  std::vector<cplx> D(cm.size());
  std::vector<unsigned> spatial(cm.size());
  std::vector<int> sign(cm.size());
  for (size_t c = 0; c < cm.size(); ++c) {
    auto ib = ift_basis(2, cm[c]);
    spatial[c] = ib.mask;
    sign[c] = ib.sign;
  }
  cplx total = 0.0;
  for (int p = 0; p < panels; ++p) {
    double a = lo + (hi - lo) * p / panels, b = lo + (hi - lo) * (p + 1) / panels;
    for (size_t q = 0; q < gx.size(); ++q) {
      double rho = 0.5 * (a + b) + 0.5 * (b - a) * gx[q];
      double wr = 0.5 * (b - a) * gw[q] * rho;
      cplx ring = 0.0;
      for (int m = 0; m < nth; ++m) {
        double th = 2.0 * kPi * m / nth;
        double xi[3] = {rho * std::cos(th), rho * std::sin(th), 0.0};
        band_descriptor(ty, idx.j, idx.t, w, xi, 0, D.data());
        cplx chi = disc_indicator_ft(s, xi);
        cplx e = std::polar(1.0, -(xi[0] * xk[0] + xi[1] * xk[1]));
        cplx v = 0.0;
        for (size_t c = 0; c < cm.size(); ++c) {
          // spatial spectra: atom sign D, shape current
          cplx psi = double(sign[c]) * D[c] * e;
          cplx cur;
          if (!boundary) cur = chi;
          else cur = spatial[c] == 0b01u ? cplx(0.0, xi[1]) * chi : cplx(0.0, -xi[0]) * chi;
          v += psi * std::conj(cur);
        }
        ring += v;
      }
      total += wr * ring * (2.0 * kPi / nth);
    }
  }
  return total.real();
}

std::vector<StokesLevel> stokes_residual(const FrameCoefficients& alpha,
                                         const CharacteristicShape& s, const WindowSet& w,
                                         double reference) {
  if (alpha.n != 2 || alpha.r != 2)
    throw std::invalid_argument("stokes_residual: expects 2D 2-form (d-atom) coefficients");
  auto cb = characteristic_coefficients(s, true, alpha.J, alpha.grid, w);
  auto ci = characteristic_coefficients(s, false, alpha.J, alpha.grid, w);
  std::vector<StokesLevel> out;
  double sb = 0.0, si = 0.0;
  for (int J = 0; J <= alpha.J; ++J) {
    int j = J - 1;
    for (const auto& b : alpha.exact) {
      if (b.j != j) continue;
      const FrameBand* bb = nullptr;
      const FrameBand* bi = nullptr;
      for (const auto& x : cb.coexact)
        if (x.j == b.j && x.t == b.t) bb = &x;
      for (const auto& x : ci.exact)
        if (x.j == b.j && x.t == b.t) bi = &x;
      if (!bb || !bi) throw std::logic_error("stokes_residual: band mismatch");
      for (size_t k = 0; k < b.alpha.size(); ++k) {
        sb += b.alpha[k].real() * bb->alpha[k].real();
        si += b.alpha[k].real() * bi->alpha[k].real();
      }
    }
    if (J == 0) continue;
    StokesLevel L;
    L.J = J;
    L.boundary_sum = sb;
    L.interior_sum = si;
    L.route_gap = std::abs(sb - si);
    double ref = std::abs(reference);
    L.residual = ref > 0 ? std::abs(sb - reference) / ref : std::abs(sb);
    out.push_back(L);
  }
  return out;
}

}  // namespace psiec
