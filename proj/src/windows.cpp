#include "psiec/windows.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace psiec {

namespace {
// Degree-13 smoothstep, C^6 at both ends, s(v) + s(1 - v) = 1. Its atoms
// decay faster over desk-scale extents than the C-infinity bump transition.
double smooth_step(double v) {
  if (v <= 0.0) return 0.0;
  if (v >= 1.0) return 1.0;
  constexpr int k = 6, deg = 2 * k + 1;
  double s = 0.0, binom = 1.0;
  for (int i = 0; i <= deg; ++i) {
    if (i > k) s += binom * std::pow(v, i) * std::pow(1.0 - v, deg - i);
    binom = binom * (deg - i) / (i + 1);
  }
  return s;
}
}  // namespace

RadialProfile::RadialProfile(RadialKind kind, double amplitude) : kind_(kind), amp_(amplitude) {}

std::string RadialProfile::name() const {
  switch (kind_) {
    case RadialKind::Steerable: return "steerable";
    case RadialKind::Smooth: return "smooth";
    case RadialKind::Box: return "box";
  }
  return "?";
}

double RadialProfile::h_lo() const { return kind_ == RadialKind::Box ? kPi / 2 : kPi / 4; }
double RadialProfile::g_hi() const { return kPi / 2; }

double RadialProfile::h(double rho) const {
  if (kind_ == RadialKind::Box) return (rho >= kPi / 2 && rho < kPi) ? amp_ : 0.0;
  if (!(rho > kPi / 4 && rho < kPi)) return 0.0;
  double u = std::log2(2.0 * rho / kPi);
  if (kind_ == RadialKind::Steerable) return amp_ * std::cos(0.5 * kPi * u);
  double m = u < 0 ? -smooth_step(-u) : smooth_step(u);
  return amp_ * std::cos(0.5 * kPi * m);
}

double RadialProfile::g(double rho) const {
  if (rho < 0) return 0.0;
  if (kind_ == RadialKind::Box) return rho < kPi / 2 ? 1.0 : 0.0;
  if (rho <= kPi / 4) return 1.0;
  if (rho >= kPi / 2) return 0.0;
  double u = std::log2(2.0 * rho / kPi);  // in (-1, 0)
  if (kind_ == RadialKind::Steerable) return -std::sin(0.5 * kPi * u);
  return std::sin(0.5 * kPi * smooth_step(-u));
}

RadialFunction RadialProfile::h_function() const {
  RadialProfile self = *this;
  return {[self](double r) { return self.h(r); }, h_lo(), h_hi()};
}

RadialFunction RadialProfile::g_function() const {
  RadialProfile self = *this;
  return {[self](double r) { return self.g(r); }, 0.0, g_hi()};
}

double RadialProfile::level_window(int j, double rho) const {
  if (j < 0) return g(rho);
  return h(std::ldexp(rho, -j));
}

RadialProfile make_steerable_radial() { return RadialProfile(RadialKind::Steerable); }

std::vector<double> calderon_grid(int levels, int count, double rho_min) {
  std::vector<double> r(count);
  double hi = std::ldexp(kPi, levels);
  for (int i = 0; i < count; ++i) r[i] = rho_min + (hi - rho_min) * i / (count - 1.0);
  return r;
}

double calderon_check(const RadialProfile& p, int levels, const std::vector<double>& radii) {
  double worst = 0.0;
  for (double rho : radii) {
    double s = p.g(rho) * p.g(rho);
    for (int j = 0; j <= levels + 2; ++j) {
      double v = p.h(std::ldexp(rho, -j));
      s += v * v;
    }
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return worst;
}

// ---- 2D -------------------------------------------------------------------

AngularWindow2D::AngularWindow2D(std::vector<cplx> beta, int orientations, std::string label)
    : beta_(std::move(beta)), T_(orientations), label_(std::move(label)) {
  if (beta_.size() % 2 == 0) throw std::invalid_argument("AngularWindow2D: need 2N+1 coefficients");
  if (T_ < 1) throw std::invalid_argument("AngularWindow2D: need at least one orientation");
  N_ = static_cast<int>(beta_.size() / 2);
}

AngularWindow2D AngularWindow2D::isotropic() { return AngularWindow2D({cplx(1.0)}, 1, "isotropic"); }

AngularWindow2D AngularWindow2D::cos_power(int p, int T, bool normalize) {
  int N = 2 * p;
  std::vector<cplx> b(2 * N + 1, 0.0);
  double binom = 1.0;
  for (int k = 0; k <= 2 * p; ++k) {
    b[(2 * p - 2 * k) + N] = binom / std::ldexp(1.0, 2 * p);
    binom = binom * (2 * p - k) / (k + 1);
  }
  if (normalize) {
    double s = 0.0;
    for (auto& v : b) s += std::norm(v);
    double c = 1.0 / std::sqrt(T * s);
    for (auto& v : b) v *= c;
  }
  return AngularWindow2D(b, T, "cos_power" + std::to_string(2 * p));
}

cplx AngularWindow2D::beta_t(int n, int t) const {
  if (std::abs(n) > N_) return 0.0;
  return beta_[n + N_] * std::polar(1.0, -n * t * 2.0 * kPi / T_);
}

cplx AngularWindow2D::gamma(int t, double theta) const {
  cplx s = 0.0;
  for (int n = -N_; n <= N_; ++n) s += beta_t(n, t) * std::polar(1.0, n * theta);
  return s;
}

AngularWindow2D AngularWindow2D::rotated(double angle) const {
  std::vector<cplx> b = beta_;
  for (int n = -N_; n <= N_; ++n) b[n + N_] *= std::polar(1.0, -n * angle);
  return AngularWindow2D(b, T_, label_ + "_rot");
}

AdmissibilityReport admissibility_2d(const AngularWindow2D& w, double tol) {
  AdmissibilityReport rep;
  int N = w.N(), T = w.T(), D = 2 * N + 1;
  for (int a = 0; a < D; ++a)
    for (int b = 0; b < D; ++b) {
      cplx s = 0.0;
      for (int t = 0; t < T; ++t) s += std::conj(w.beta_t(a - N, t)) * w.beta_t(b - N, t);
      if (a == b) rep.trace += s.real();
      else if (std::abs(s) > rep.max_offdiag) {
        rep.max_offdiag = std::abs(s);
        rep.fail_l = a - N;
        rep.fail_m = b - N;
      }
    }
  bool diag = rep.max_offdiag <= tol;
  bool tr = std::abs(rep.trace - 1.0) <= tol;
  rep.pass = diag && tr;
  std::ostringstream os;
  if (!diag)
    os << "U^H U not diagonal: |entry(" << rep.fail_l << "," << rep.fail_m << ")| = " << rep.max_offdiag
       << "; ";
  if (!tr) os << "trace(U^H U) = " << rep.trace << " != 1";
  if (rep.pass) os << "ok (off-diagonal " << rep.max_offdiag << ", trace " << rep.trace << ")";
  rep.message = os.str();
  return rep;
}

// ---- 3D -------------------------------------------------------------------

namespace {
std::array<double, 3> perpendicular(const std::array<double, 3>& v) {
  int k = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(v[i]) < std::abs(v[k])) k = i;
  double e[3] = {0, 0, 0};
  e[k] = 1.0;
  std::array<double, 3> p{v[1] * e[2] - v[2] * e[1], v[2] * e[0] - v[0] * e[2],
                          v[0] * e[1] - v[1] * e[0]};
  double n = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
  for (auto& x : p) x /= n;
  return p;
}
}  // namespace

AngularWindow3D::AngularWindow3D() {
  L_ = 0;
  zonal_ = {std::sqrt(4.0 * kPi)};
  kappa_ = {{cplx(std::sqrt(4.0 * kPi))}};
  centers_ = {{0.0, 0.0, 1.0}};
  poles_ = {{0.0, 0.0, 1.0}};
  label_ = "isotropic";
}

AngularWindow3D AngularWindow3D::isotropic() {
  AngularWindow3D w;
  return w;
}

AngularWindow3D AngularWindow3D::from_zonal(const std::vector<double>& kl0,
                                            const std::vector<std::array<double, 3>>& centers,
                                            const std::vector<double>& weights, std::string label) {
  AngularWindow3D w;
  w.L_ = static_cast<int>(kl0.size()) - 1;
  w.zonal_ = kl0;
  w.label_ = std::move(label);
  w.kappa_.clear();
  w.centers_.clear();
  w.poles_.clear();
  for (size_t t = 0; t < centers.size(); ++t) {
    std::vector<cplx> k(lm_count(w.L_), 0.0);
    double lam[3] = {centers[t][0], centers[t][1], centers[t][2]};
    double sw = std::sqrt(weights[t]);
    for (int l = 0; l <= w.L_; ++l)
      for (int m = -l; m <= l; ++m) k[lm_index(l, m)] = sw * kl0[l] * wigner_zonal(l, m, lam);
    w.kappa_.push_back(k);
    w.centers_.push_back(centers[t]);
    w.poles_.push_back(w.L_ == 0 ? std::array<double, 3>{0, 0, 1} : perpendicular(centers[t]));
  }
  return w;
}

AngularWindow3D AngularWindow3D::directional(int p, bool normalize) {
  int L = 2 * p;
  std::vector<double> gx, gw;
  int nq = L + 4;
  gauss_legendre(nq, gx, gw);
  double c = normalize ? std::sqrt(4.0 * p + 1.0) : 1.0;
  std::vector<double> kl0(L + 1, 0.0), P(lm_count(L));
  for (int i = 0; i < nq; ++i) {
    legendre_normalized_all(L, gx[i], P.data());
    double f = c * std::pow(gx[i], 2 * p);
    for (int l = 0; l <= L; ++l) kl0[l] += 2.0 * kPi * gw[i] * f * P[lm_index(l, 0)];
  }
  // Axes of an antipodal product rule exact for degree 4p.
  int nu = 2 * p + 1, nphi = 4 * p + 2;
  std::vector<double> ux, uw;
  gauss_legendre(nu, ux, uw);
  std::vector<std::array<double, 3>> centers;
  std::vector<double> weights;
  for (int i = 0; i < nu; ++i) {
    if (ux[i] < -1e-14) continue;
    bool equator = std::abs(ux[i]) < 1e-14;
    int kmax = equator ? nphi / 2 : nphi;
    double st = std::sqrt(1.0 - ux[i] * ux[i]);
    for (int k = 0; k < kmax; ++k) {
      double ph = 2.0 * kPi * (k + 0.5) / nphi;
      centers.push_back({st * std::cos(ph), st * std::sin(ph), equator ? 0.0 : ux[i]});
      weights.push_back(2.0 * uw[i] * (2.0 * kPi / nphi) / (4.0 * kPi));
    }
  }
  return from_zonal(kl0, centers, weights, "directional_u" + std::to_string(2 * p));
}

cplx AngularWindow3D::gamma(int t, const double omega[3]) const {
  double th, ph;
  to_spherical(omega, th, ph);
  std::vector<cplx> y(lm_count(L_));
  sph_harm_all(L_, th, ph, y.data());
  cplx s = 0.0;
  for (int i = 0; i < lm_count(L_); ++i) s += kappa_[t][i] * y[i];
  return s;
}

AdmissibilityReport admissibility_3d(const AngularWindow3D& w, const GauntTable& G, double tol) {
  AdmissibilityReport rep;
  int L = w.L();
  if (G.max_degree() < 2 * L) throw std::invalid_argument("admissibility_3d: Gaunt table too small");
  double norm = std::sqrt(4.0 * kPi);
  bool first_fail = true;
  for (int l = 0; l <= 2 * L; ++l)
    for (int m = -l; m <= l; ++m) {
      cplx c = 0.0;
      for (int t = 0; t < w.T(); ++t) {
        const auto& k = w.kappa(t);
        for (int l1 = 0; l1 <= L; ++l1)
          for (int m1 = -l1; m1 <= l1; ++m1) {
            int m2 = m1 - m;
            for (int l2 = 0; l2 <= L; ++l2) {
              if (std::abs(m2) > l2) continue;
              double g = G(l1, m1, l2, -m2, l, m);
              if (g == 0.0) continue;
              double sg = (m2 % 2) ? -1.0 : 1.0;
              c += k[lm_index(l1, m1)] * std::conj(k[lm_index(l2, m2)]) * sg * g;
            }
          }
      }
      c /= norm;
      double target = (l == 0 && m == 0) ? 1.0 : 0.0;
      double err = std::abs(c - target);
      if (l == 0) rep.trace = c.real();
      else rep.max_offdiag = std::max(rep.max_offdiag, std::abs(c));
      if (err > tol && first_fail) {
        first_fail = false;
        rep.fail_l = l;
        rep.fail_m = m;
      }
    }
  rep.pass = first_fail;
  std::ostringstream os;
  if (rep.pass) os << "ok (normalized c00 " << rep.trace << ", max |c_lm| " << rep.max_offdiag << ")";
  else
    os << "violated at (l,m) = (" << rep.fail_l << "," << rep.fail_m << "); normalized c00 = " << rep.trace
       << ", max |c_lm| (l>0) = " << rep.max_offdiag;
  rep.message = os.str();
  return rep;
}

// ---- configuration --------------------------------------------------------

WindowSet load_windows(const std::string& text) {
  using nlohmann::json;
  json j = json::parse(text);
  WindowSet w;
  if (j.contains("radial")) {
    auto r = j["radial"];
    std::string kind = r.value("kind", "smooth");
    double amp = r.value("amplitude", 1.0);
    if (kind == "steerable") w.radial = RadialProfile(RadialKind::Steerable, amp);
    else if (kind == "smooth") w.radial = RadialProfile(RadialKind::Smooth, amp);
    else if (kind == "box") w.radial = RadialProfile(RadialKind::Box, amp);
    else throw std::invalid_argument("unknown radial kind: " + kind);
  }
  if (j.contains("angular2d")) {
    auto a = j["angular2d"];
    std::string kind = a.value("kind", "isotropic");
    if (kind == "isotropic") w.angular2d = AngularWindow2D::isotropic();
    else if (kind == "cos_power")
      w.angular2d = AngularWindow2D::cos_power(a.value("p", 1), a.value("T", 5), a.value("normalize", true));
    else if (kind == "explicit") {
      auto re = a.at("beta_re").get<std::vector<double>>();
      std::vector<double> im = a.value("beta_im", std::vector<double>(re.size(), 0.0));
      std::vector<cplx> b(re.size());
      for (size_t i = 0; i < re.size(); ++i) b[i] = cplx(re[i], im[i]);
      w.angular2d = AngularWindow2D(b, a.value("T", 1));
    } else throw std::invalid_argument("unknown angular2d kind: " + kind);
  }
  if (j.contains("angular3d")) {
    auto a = j["angular3d"];
    std::string kind = a.value("kind", "isotropic");
    if (kind == "isotropic") w.angular3d = AngularWindow3D::isotropic();
    else if (kind == "directional")
      w.angular3d = AngularWindow3D::directional(a.value("p", 2), a.value("normalize", true));
    else if (kind == "zonal") {
      auto kl0 = a.at("kappa_l0").get<std::vector<double>>();
      auto c = a.at("centers").get<std::vector<std::array<double, 3>>>();
      auto wt = a.value("weights", std::vector<double>(c.size(), 1.0 / c.size()));
      w.angular3d = AngularWindow3D::from_zonal(kl0, c, wt, "zonal");
    } else throw std::invalid_argument("unknown angular3d kind: " + kind);
  }
  w.source = "json";
  return w;
}

WindowSet load_windows_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open window config: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  WindowSet w = load_windows(ss.str());
  w.source = path;
  return w;
}

std::string windows_to_json(const WindowSet& w) {
  nlohmann::json j;
  j["radial"] = {{"kind", w.radial.name()}};
  std::vector<double> bre, bim;
  for (auto b : w.angular2d.beta()) bre.push_back(b.real()), bim.push_back(b.imag());
  j["angular2d"] = {{"label", w.angular2d.label()}, {"N", w.angular2d.N()}, {"T", w.angular2d.T()},
                    {"beta_re", bre}, {"beta_im", bim}};
  std::vector<std::array<double, 3>> c;
  for (int t = 0; t < w.angular3d.T(); ++t) c.push_back(w.angular3d.center(t));
  j["angular3d"] = {{"label", w.angular3d.label()}, {"L", w.angular3d.L()}, {"T", w.angular3d.T()},
                    {"zonal", w.angular3d.zonal()}, {"centers", c}};
  return j.dump();
}

}  // namespace psiec
