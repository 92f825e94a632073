#pragma once
// Radial (Calderón) and angular (directional) localization windows.

#include <array>
#include <string>
#include <vector>

#include "psiec/specfun.hpp"

namespace psiec {

enum class RadialKind { Steerable, Smooth, Box };

// ĥ supported in (π/4, π) (box: [π/2, π)), ĝ in [0, π/2].
class RadialProfile {
 public:
  explicit RadialProfile(RadialKind kind = RadialKind::Smooth, double amplitude = 1.0);
  RadialKind kind() const { return kind_; }
  std::string name() const;
  double h(double rho) const;
  double g(double rho) const;
  double h_lo() const;
  double h_hi() const { return kPi; }
  double g_hi() const;
  RadialFunction h_function() const;
  RadialFunction g_function() const;
  // Window of level j (j = -1 is the scaling band), evaluated at |ξ|.
  double level_window(int j, double rho) const;

 private:
  RadialKind kind_;
  double amp_;
};

RadialProfile make_steerable_radial();

// max over grid of | ĝ² + Σ_{j>=0} ĥ(2^{-j} ρ)² - 1 |
double calderon_check(const RadialProfile& p, int levels, const std::vector<double>& radii);
std::vector<double> calderon_grid(int levels, int count = 20000, double rho_min = 0.1);

struct AdmissibilityReport {
  bool pass = false;
  double max_offdiag = 0.0;  // 2D: |U^H U| off-diagonal; 3D: max |c_lm| for (l,m) != (0,0)
  double trace = 0.0;        // 2D trace; 3D normalized c_00
  int fail_l = -1, fail_m = 0;
  std::string message;
};

class AngularWindow2D {
 public:
  AngularWindow2D() : AngularWindow2D(isotropic()) {}
  AngularWindow2D(std::vector<cplx> beta, int orientations, std::string label = "explicit");
  static AngularWindow2D isotropic();
  // γ ∝ cos^{2p}(θ), normalized so that T Σ|β|² = 1.
  static AngularWindow2D cos_power(int p, int orientations, bool normalize = true);
  int N() const { return N_; }
  int T() const { return T_; }
  const std::string& label() const { return label_; }
  const std::vector<cplx>& beta() const { return beta_; }
  // β_n^{t} = β_n e^{-i n t 2π/T}, t = 0..T-1
  cplx beta_t(int n, int t) const;
  cplx gamma(int t, double theta) const;
  AngularWindow2D rotated(double angle) const;

 private:
  std::vector<cplx> beta_;  // index n + N
  int N_, T_;
  std::string label_;
};

AdmissibilityReport admissibility_2d(const AngularWindow2D& w, double tol = 1e-12);

class AngularWindow3D {
 public:
  AngularWindow3D();  // isotropic
  static AngularWindow3D isotropic();
  // Zonal f(u) = c u^{2p} rotated to the axes of an antipodal product rule
  // exact for degree 4p; weights folded into κ.
  static AngularWindow3D directional(int p = 2, bool normalize = true);
  static AngularWindow3D from_zonal(const std::vector<double>& kappa_l0,
                                    const std::vector<std::array<double, 3>>& centers,
                                    const std::vector<double>& weights, std::string label);
  int L() const { return L_; }
  int T() const { return static_cast<int>(kappa_.size()); }
  const std::string& label() const { return label_; }
  const std::vector<cplx>& kappa(int t) const { return kappa_[t]; }
  const std::array<double, 3>& center(int t) const { return centers_[t]; }
  // Pole of the spherical frame used by form atoms of orientation t.
  const std::array<double, 3>& frame_pole(int t) const { return poles_[t]; }
  cplx gamma(int t, const double omega[3]) const;
  const std::vector<double>& zonal() const { return zonal_; }

 private:
  int L_ = 0;
  std::vector<double> zonal_;
  std::vector<std::vector<cplx>> kappa_;
  std::vector<std::array<double, 3>> centers_, poles_;
  std::string label_;
};

AdmissibilityReport admissibility_3d(const AngularWindow3D& w, const GauntTable& gaunt,
                                     double tol = 1e-10);

struct WindowSet {
  RadialProfile radial;
  AngularWindow2D angular2d;
  AngularWindow3D angular3d;
  std::string source = "default";
};

WindowSet load_windows(const std::string& json_text);
WindowSet load_windows_file(const std::string& path);
std::string windows_to_json(const WindowSet& w);

}  // namespace psiec
