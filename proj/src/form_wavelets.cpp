#include "psiec/form_wavelets.hpp"

#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace psiec {

bool AtomType::operator<(const AtomType& o) const {
  return std::tie(n, r, nu, a) < std::tie(o.n, o.r, o.nu, o.a);
}
bool AtomType::operator==(const AtomType& o) const {
  return n == o.n && r == o.r && nu == o.nu && a == o.a;
}
std::string AtomType::str() const {
  std::ostringstream s;
  s << r << "," << nu_name(nu) << "," << a;
  return s.str();
}

std::string nu_name(Nu nu) { return nu == Nu::d ? "d" : "delta"; }
Nu parse_nu(const std::string& s) {
  if (s == "d") return Nu::d;
  if (s == "delta" || s == "δ") return Nu::delta;
  throw std::invalid_argument("type must be 'd' or 'delta': " + s);
}

namespace {
unsigned radial_bit(int n) { return 1u << (n - 1); }

// Tangential frequency monomials of a given degree, family order.
std::vector<unsigned> tangential_masks(int n, int degree) {
  std::vector<unsigned> out;
  for (unsigned m = 0; m < radial_bit(n); ++m)
    if (popcount(m) == degree) out.push_back(m);
  return out;
}

// Parity of a frame monomial under ξ -> -ξ.
bool odd_monomial(int n, unsigned mask) {
  // 2D: θ̂, r̂ odd. 3D: θ̂ even, φ̂ odd, r̂ odd.
  unsigned odd_bits = n == 2 ? 0b11u : 0b110u;
  return popcount(mask & odd_bits) % 2;
}

const cplx I(0.0, 1.0);
}  // namespace

std::vector<int> families(int n, int r, Nu nu) {
  int deg = nu == Nu::d ? n - r : n - r - 1;  // tangential part of the descriptor
  if (r < 0 || r > n) return {};
  if (nu == Nu::d && r == 0) return {};
  if (nu == Nu::delta && r == n) return {};
  int count = static_cast<int>(tangential_masks(n, deg).size());
  std::vector<int> out;
  for (int a = 1; a <= count; ++a) out.push_back(a);
  return out;
}

std::vector<AtomType> atom_types(int n) {
  std::vector<AtomType> out;
  for (int r = 0; r <= n; ++r)
    for (Nu nu : {Nu::d, Nu::delta})
      for (int a : families(n, r, nu)) out.push_back({n, r, nu, a});
  return out;
}

SymbolicForm FreqAtomDescriptor::symbolic(int n) const {
  return SymbolicForm::monomial(n, SpaceTag::FreqSpherical, mask,
                                Poly(phase) * Poly::rho(-weight_power));
}

namespace {
SymbolicForm descriptor_form(int n, const FreqAtomDescriptor& d) { return d.symbolic(n); }
}  // namespace

FreqTable build_freq_table(int n) {
  if (n != 2 && n != 3) throw std::invalid_argument("build_freq_table: n must be 2 or 3");
  FreqTable tab;
  const int eps = exterior_derivative_sign(n);
  for (int r = 1; r <= n; ++r) {
    auto masks = tangential_masks(n, n - r);
    for (size_t a = 0; a < masks.size(); ++a) {
      FreqAtomDescriptor d;
      d.mask = masks[a];
      d.weight_power = 0;
      d.phase = odd_monomial(n, d.mask) ? I : cplx(1.0);
      tab[{n, r, Nu::d, int(a) + 1}] = d;
    }
  }
  for (int r = 0; r < n; ++r) {
    for (int a : families(n, r, Nu::delta)) {
      const auto& dd = tab.at({n, r + 1, Nu::d, a});
      FreqAtomDescriptor d;
      d.mask = dd.mask | radial_bit(n);
      d.weight_power = 1;
      double sp = popcount(dd.mask) % 2 ? -1.0 : 1.0;
      d.phase = dd.phase / (double(eps) * sp * I);
      tab[{n, r, Nu::delta, a}] = d;
    }
  }
  // Validation against the symbolic calculus.
  for (auto& [t, d] : tab) {
    auto f = descriptor_form(n, d);
    bool radial = d.mask & radial_bit(n);
    if ((t.nu == Nu::delta) != radial)
      throw std::logic_error("freq table: tangential/radial split violated at " + t.str());
    auto df = exterior_derivative_freq(f);
    if (t.nu == Nu::d && !df.is_zero())
      throw std::logic_error("freq table: d-atom not closed at " + t.str());
    if (t.nu == Nu::delta) {
      auto target = descriptor_form(n, tab.at({n, t.r + 1, Nu::d, t.a}));
      if (!(df == target)) throw std::logic_error("freq table: chain map fails at " + t.str());
      if (!codifferential_symbol(f).is_zero())
        throw std::logic_error("freq table: δ-atom not co-closed at " + t.str());
    }
    auto lap = exterior_derivative_freq(codifferential_symbol(f)) +
               codifferential_symbol(exterior_derivative_freq(f));
    if (!(lap == f * Poly::rho(2)))
      throw std::logic_error("freq table: Laplacian symbol is not |ξ|² at " + t.str());
    // Spatial realness: an odd monomial needs an imaginary phase.
    bool odd = odd_monomial(n, d.mask);
    bool imag = std::abs(d.phase.imag()) > 0.5;
    if (odd != imag) throw std::logic_error("freq table: realness violated at " + t.str());
  }
  return tab;
}

const FreqTable& freq_table(int n) {
  static std::once_flag f2, f3;
  static FreqTable t2, t3;
  if (n == 2) {
    std::call_once(f2, [] { t2 = build_freq_table(2); });
    return t2;
  }
  if (n == 3) {
    std::call_once(f3, [] { t3 = build_freq_table(3); });
    return t3;
  }
  throw std::invalid_argument("freq_table: n must be 2 or 3");
}

// ---------------------------------------------------------------------------

FrameVectors spherical_frame(int n, const double omega[3], const double pole[3]) {
  FrameVectors f;
  f.n = n;
  if (n == 2) {
    double r = std::hypot(omega[0], omega[1]);
    double c = omega[0] / r, s = omega[1] / r;
    f.vec[0][0] = s;  // θ̂
    f.vec[0][1] = -c;
    f.vec[1][0] = c;  // r̂
    f.vec[1][1] = s;
    return f;
  }
  double r = std::sqrt(omega[0] * omega[0] + omega[1] * omega[1] + omega[2] * omega[2]);
  double w[3] = {omega[0] / r, omega[1] / r, omega[2] / r};
  double px[3] = {pole[1] * w[2] - pole[2] * w[1], pole[2] * w[0] - pole[0] * w[2],
                  pole[0] * w[1] - pole[1] * w[0]};
  double st = std::sqrt(px[0] * px[0] + px[1] * px[1] + px[2] * px[2]);
  double phi[3];
  if (st < 1e-13) {
    // On the pole line: north φ = 0, south φ = π.
    double ref[3] = {1, 0, 0};
    if (std::abs(pole[0]) > 0.9) ref[0] = 0, ref[1] = 1;
    double d = ref[0] * pole[0] + ref[1] * pole[1] + ref[2] * pole[2];
    double q1[3], nq = 0;
    for (int a = 0; a < 3; ++a) {
      q1[a] = ref[a] - d * pole[a];
      nq += q1[a] * q1[a];
    }
    nq = std::sqrt(nq);
    for (int a = 0; a < 3; ++a) q1[a] /= nq;
    double q2[3] = {pole[1] * q1[2] - pole[2] * q1[1], pole[2] * q1[0] - pole[0] * q1[2],
                    pole[0] * q1[1] - pole[1] * q1[0]};
    double north = (w[0] * pole[0] + w[1] * pole[1] + w[2] * pole[2]) > 0 ? 1.0 : -1.0;
    for (int a = 0; a < 3; ++a) phi[a] = north * q2[a];
    // θ̂ = φ̂ × r̂ gives q1 at both poles
  } else {
    for (int a = 0; a < 3; ++a) phi[a] = px[a] / st;
  }
  double th[3] = {phi[1] * w[2] - phi[2] * w[1], phi[2] * w[0] - phi[0] * w[2],
                  phi[0] * w[1] - phi[1] * w[0]};
  for (int a = 0; a < 3; ++a) {
    f.vec[0][a] = th[a];
    f.vec[1][a] = phi[a];
    f.vec[2][a] = w[a];
  }
  return f;
}

double frame_minor(const FrameVectors& f, unsigned S, unsigned K) {
  int rows[3], cols[3], p = 0, q = 0;
  for (int b = 0; b < f.n; ++b)
    if (S & (1u << b)) rows[p++] = b;
  for (int b = 0; b < f.n; ++b)
    if (K & (1u << b)) cols[q++] = b;
  if (p != q) return 0.0;
  if (p == 0) return 1.0;
  auto e = [&](int i, int k) { return f.vec[rows[i]][cols[k]]; };
  if (p == 1) return e(0, 0);
  if (p == 2) return e(0, 0) * e(1, 1) - e(0, 1) * e(1, 0);
  return e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) -
         e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0)) +
         e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0));
}

void frame_pole(const WindowSet& w, int n, int j, int t, double pole[3]) {
  pole[0] = pole[1] = 0.0;
  pole[2] = 1.0;
  if (n == 3 && j >= 0) {
    const auto& p = w.angular3d.frame_pole(t);
    for (int a = 0; a < 3; ++a) pole[a] = p[a];
  }
}

void band_descriptor(const AtomType& type, int j, int t, const WindowSet& w, const double xi[3],
                     int extra_weight, cplx* out) {
  const int n = type.n;
  const auto& d = freq_table(n).at(type);
  auto cm = masks_of_degree(n, n - type.r);
  for (size_t i = 0; i < cm.size(); ++i) out[i] = 0.0;
  double rho = 0.0;
  for (int a = 0; a < n; ++a) rho += xi[a] * xi[a];
  rho = std::sqrt(rho);
  double W = w.radial.level_window(j, rho);
  if (W == 0.0) return;
  int wp = d.weight_power - extra_weight;
  bool full = d.mask == (1u << n) - 1u;
  if (rho == 0.0) {
    if (wp != 0 || (d.mask != 0 && !full)) return;
    out[0] = level_norm(n, j) * W * d.phase;
    return;
  }
  cplx g = angular_window(w, n, j < 0 ? -1 : t, xi);
  if (g == cplx(0.0)) return;
  cplx base = level_norm(n, j) * W * std::pow(rho, -wp) * g * d.phase;
  double pole[3];
  frame_pole(w, n, j, t, pole);
  auto F = spherical_frame(n, xi, pole);
  for (size_t i = 0; i < cm.size(); ++i) out[i] = base * frame_minor(F, d.mask, cm[i]);
}

std::vector<cplx> eval_freq_form(const FormAtomIndex& idx, const WindowSet& w,
                                 const double xi[3], int extra_weight) {
  const int n = idx.type.n;
  std::vector<cplx> out(masks_of_degree(n, n - idx.type.r).size());
  band_descriptor(idx.type, idx.j, idx.t, w, xi, extra_weight, out.data());
  double xk[3];
  atom_center(n, idx.j, idx.k, xk);
  double ph = 0.0;
  for (int a = 0; a < n; ++a) ph += xi[a] * xk[a];
  cplx e = std::polar(1.0, -ph);
  for (auto& v : out) v *= e;
  return out;
}

// ---------------------------------------------------------------------------

FormAtomEvaluator::FormAtomEvaluator(const AtomType& type, int j, int t, const WindowSet& w,
                                     SpatialOptions opt, int extra_weight)
    : type_(type), j_(j) {
  const int n = type.n;
  const auto& d = freq_table(n).at(type);
  spatial_ = masks_of_degree(n, type.r);
  auto cm = masks_of_degree(n, n - type.r);
  double pole[3];
  frame_pole(w, n, j, t, pole);
  int tw = j < 0 ? -1 : t;
  bool pole_free = n == 2 || popcount(d.mask & 0b11u) != 1;
  int q = d.weight_power - extra_weight;
  for (unsigned K : cm) {
    auto f = [&](const double* om) -> cplx {
      double v = frame_minor(spherical_frame(n, om, pole), d.mask, K);
      return v == 0.0 ? cplx(0.0) : angular_window(w, n, tw, om) * d.phase * v;
    };
    AngularSeries s;
    if (n == 2) {
      int N = j < 0 ? 0 : w.angular2d.N();
      s = AngularSeries::fourier(
          [&](double th) {
            double om[3] = {std::cos(th), std::sin(th), 0.0};
            return f(om);
          },
          N + 2);
    } else {
      int L = (j < 0 ? 0 : w.angular3d.L()) + 1;
      int deg = pole_free ? L : std::max(L, opt.sphere_degree);
      s = AngularSeries::spherical(f, deg);
      if (!pole_free) {
        double tot = s.tail(-1);
        if (tot > 0) tail_ = std::max(tail_, s.tail(deg - 4) / tot);
      }
    }
    auto sm = ift_basis(n, K);
    int slot = -1;
    for (size_t i = 0; i < spatial_.size(); ++i)
      if (spatial_[i] == sm.mask) slot = static_cast<int>(i);
    if (slot < 0) throw std::logic_error("FormAtomEvaluator: basis mismatch");
    Component c{slot, sm.sign,
                std::make_unique<RadialAngularKernel>(w.radial, n, j, q, std::move(s), opt.y_max)};
    comps_.push_back(std::move(c));
  }
}

std::vector<double> FormAtomEvaluator::eval(const double y[3], double* imag) const {
  std::vector<double> out(spatial_.size(), 0.0);
  double mi = 0.0;
  for (auto& c : comps_) {
    cplx v = c.kernel->eval(y);
    out[c.spatial_slot] += c.sign * v.real();
    mi = std::max(mi, std::abs(v.imag()));
  }
  if (imag) *imag = mi;
  return out;
}

std::vector<double> eval_space_form(const FormAtomIndex& idx, const WindowSet& w,
                                    const double x[3], SpatialOptions opt, double* imag) {
  double xk[3], y[3] = {0, 0, 0}, r = 0.0;
  atom_center(idx.type.n, idx.j, idx.k, xk);
  for (int a = 0; a < idx.type.n; ++a) {
    y[a] = x[a] - xk[a];
    r += y[a] * y[a];
  }
  opt.y_max = std::max(opt.y_max, std::sqrt(r) + 1.0);
  FormAtomEvaluator ev(idx.type, idx.j, idx.t, w, opt);
  return ev.eval(y, imag);
}

// ---------------------------------------------------------------------------

bool exterior_derivative_atom(const AtomType& in, AtomType& out) {
  if (in.nu == Nu::d) return false;
  out = {in.n, in.r + 1, Nu::d, in.a};
  return true;
}

int hodge_ft_sign(int n, int r) {
  int sigma = 0;
  for (unsigned J : masks_of_degree(n, r)) {
    auto a = SymbolicForm::monomial(n, SpaceTag::SpatialX, J);
    auto lhs = fourier_transform(hodge(a));
    auto rhs = hodge(fourier_transform(a));
    int s = lhs == rhs ? 1 : (lhs == rhs * Poly(cplx(-1.0)) ? -1 : 0);
    if (!s || (sigma && s != sigma)) throw std::logic_error("hodge_ft_sign: no uniform sign");
    sigma = s;
  }
  return sigma;
}

HodgeImage hodge_atom(const AtomType& t) {
  const int n = t.n;
  const auto& tab = freq_table(n);
  const auto& d = tab.at(t);
  unsigned comp = ((1u << n) - 1u) & ~d.mask;
  for (auto& [tt, dd] : tab) {
    if (dd.mask != comp) continue;
    HodgeImage h;
    h.target = tt;
    h.weight_power = dd.weight_power - d.weight_power;
    cplx ratio = double(hodge_ft_sign(n, t.r) * wedge_sign(d.mask, comp)) * d.phase / dd.phase;
    if (std::abs(ratio.imag()) > 1e-12 || std::abs(std::abs(ratio.real()) - 1.0) > 1e-12)
      throw std::logic_error("hodge_atom: non-real ratio");
    h.sign = ratio.real() > 0 ? 1 : -1;
    return h;
  }
  throw std::logic_error("hodge_atom: no dual descriptor");
}

LaplacianImage laplacian_atom(const AtomType& t) { return {t, 2, 1}; }

// ---------------------------------------------------------------------------

namespace {
void band_support(const RadialProfile& p, int j, double& lo, double& hi) {
  if (j < 0) {
    lo = 0.0;
    hi = p.g_hi();
  } else {
    lo = std::ldexp(p.h_lo(), j);
    hi = std::ldexp(p.h_hi(), j);
  }
}

void breakpoints(int j, std::vector<double>& out) {
  if (j < 0) {
    out.push_back(kPi / 4);
  } else {
    out.push_back(std::ldexp(kPi / 2, j));
  }
}
}  // namespace

double galerkin_entry(const FormAtomIndex& q, const FormAtomIndex& p, const WindowSet& w,
                      double* imag) {
  if (!(q.type == p.type)) throw std::invalid_argument("galerkin: rows and columns differ in type");
  const int n = q.type.n;
  double lo1, hi1, lo2, hi2;
  band_support(w.radial, q.j, lo1, hi1);
  band_support(w.radial, p.j, lo2, hi2);
  double lo = std::max(lo1, lo2), hi = std::min(hi1, hi2);
  if (imag) *imag = 0.0;
  if (!(hi > lo)) return 0.0;
  const int wp = freq_table(n).at(q.type).weight_power;
  int tq = q.j < 0 ? -1 : q.t, tp = p.j < 0 ? -1 : p.t;
  double xq[3], xp[3], D[3] = {0, 0, 0};
  atom_center(n, q.j, q.k, xq);
  atom_center(n, p.j, p.k, xp);
  double dist = 0.0;
  for (int a = 0; a < n; ++a) {
    D[a] = xq[a] - xp[a];
    dist += D[a] * D[a];
  }
  dist = std::sqrt(dist);
  AngularSeries g;
  if (n == 2) {
    int N = w.angular2d.N();
    g = AngularSeries::fourier(
        [&](double th) {
          double om[3] = {std::cos(th), std::sin(th), 0};
          return angular_window(w, 2, tq, om) * std::conj(angular_window(w, 2, tp, om));
        },
        2 * N, 0.0);
  } else {
    int L = 2 * w.angular3d.L();
    // Pole-dependent frames of different orientations overlap by ⟨E_q, E_p⟩.
    const auto& d = freq_table(n).at(q.type);
    double pq[3], pp[3];
    frame_pole(w, n, q.j, q.t, pq);
    frame_pole(w, n, p.j, p.t, pp);
    bool same = pq[0] == pp[0] && pq[1] == pp[1] && pq[2] == pp[2];
    bool pole_free = popcount(d.mask & 0b11u) != 1;
    if (same || pole_free) {
      g = AngularSeries::spherical(
          [&](const double* om) {
            return angular_window(w, 3, tq, om) * std::conj(angular_window(w, 3, tp, om));
          },
          L);
    } else {
      auto cm = masks_of_degree(n, n - q.type.r);
      g = AngularSeries::spherical(
          [&](const double* om) {
            auto Fq = spherical_frame(n, om, pq), Fp = spherical_frame(n, om, pp);
            double ov = 0.0;
            for (unsigned K : cm) ov += frame_minor(Fq, d.mask, K) * frame_minor(Fp, d.mask, K);
            return angular_window(w, 3, tq, om) * std::conj(angular_window(w, 3, tp, om)) * ov;
          },
          std::max(L, 40));
    }
  }
  // Radial pieces between window breakpoints.
  std::vector<double> cuts = {lo, hi};
  breakpoints(q.j, cuts);
  breakpoints(p.j, cuts);
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> gx, gw;
  gauss_legendre(64, gx, gw);
  int M = g.max_order();
  std::vector<double> J(M + 3);
  std::vector<cplx> acc(g.c.size(), 0.0);
  const double cq = level_norm(n, q.j), cp = level_norm(n, p.j);
  for (size_t c = 0; c + 1 < cuts.size(); ++c) {
    double a = std::max(cuts[c], lo), b = std::min(cuts[c + 1], hi);
    if (!(b > a)) continue;
    int pieces = 1 + static_cast<int>(dist * (b - a) / (2.0 * kPi) / 8.0);
    double hpc = (b - a) / pieces;
    for (int pc = 0; pc < pieces; ++pc) {
      double a0 = a + pc * hpc;
      for (int i = 0; i < 64; ++i) {
        double rho = a0 + 0.5 * hpc * (gx[i] + 1.0);
        double wt = 0.5 * hpc * gw[i] * w.radial.level_window(q.j, rho) *
                    w.radial.level_window(p.j, rho) * std::pow(rho, n + 1 - 2 * wp);
        if (wt == 0.0) continue;
        if (n == 2) bessel_j_range(M + 1, rho * dist, J.data());
        else spherical_bessel_j_range(M + 1, rho * dist, J.data());
        if (n == 2) {
          for (size_t k = 0; k < g.c.size(); ++k) acc[k] += wt * J[std::abs(g.lo + int(k))];
        } else {
          for (int l = 0; l <= g.L; ++l)
            for (int m = -l; m <= l; ++m) acc[lm_index(l, m)] += wt * J[l];
        }
      }
    }
  }
  static const cplx mi[4] = {1.0, cplx(0, -1), -1.0, cplx(0, 1)};  // (-i)^k
  cplx total = 0.0;
  if (n == 2) {
    double th = std::atan2(D[1], D[0]);
    for (size_t k = 0; k < g.c.size(); ++k) {
      int m = g.lo + int(k);
      // J_{-m} = (-1)^m J_m folded into the radial sum via |m|
      double sgn = (m < 0 && (-m) % 2) ? -1.0 : 1.0;
      total += g.c[k] * 2.0 * kPi * mi[((m % 4) + 4) % 4] * std::polar(1.0, m * th) * sgn * acc[k];
    }
  } else {
    double th, ph;
    to_spherical(D, th, ph);
    std::vector<cplx> y(lm_count(g.L));
    sph_harm_all(g.L, th, ph, y.data());
    for (int l = 0; l <= g.L; ++l)
      for (int m = -l; m <= l; ++m)
        total += g.c[lm_index(l, m)] * 4.0 * kPi * mi[l % 4] * y[lm_index(l, m)] * acc[lm_index(l, m)];
  }
  total *= cq * cp;
  if (imag) *imag = std::abs(total.imag());
  return total.real();
}

std::vector<std::vector<double>> galerkin_laplacian(const std::vector<FormAtomIndex>& rows,
                                                    const std::vector<FormAtomIndex>& cols,
                                                    const WindowSet& w, double* max_imag) {
  std::vector<std::vector<double>> D(rows.size(), std::vector<double>(cols.size(), 0.0));
  double mi = 0.0;
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t k = 0; k < cols.size(); ++k) {
      double im = 0.0;
      D[i][k] = galerkin_entry(rows[i], cols[k], w, &im);
      mi = std::max(mi, im);
    }
  if (max_imag) *max_imag = mi;
  return D;
}

}  // namespace psiec
