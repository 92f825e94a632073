#pragma once
// Scalar polar wavelets in 2D/3D and the radial x angular kernel shared by
// the form wavelets.

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include "psiec/grid.hpp"
#include "psiec/specfun.hpp"
#include "psiec/windows.hpp"

namespace psiec {

// Level j >= -1 (j = -1 is the scaling band), translation k on the lattice
// 2^{-max(j,0)} Z^n, orientation t in [0, T).
struct ScalarAtomIndex {
  int n = 2;
  int j = 0;
  std::array<int, 3> k{0, 0, 0};
  int t = 0;
};

inline int level_scale(int j) { return j < 0 ? 0 : j; }
// 2^{-ns/2} (2π)^{-n/2}
double level_norm(int n, int j);
void atom_center(int n, int j, const std::array<int, 3>& k, double x[3]);
// Unscaled window of the band: ĝ for j = -1, ĥ otherwise.
RadialFunction band_function(const RadialProfile& p, int j);
int orientation_count(const WindowSet& w, int n);
// t < 0 selects the isotropic window of the scaling band.
cplx angular_window(const WindowSet& w, int n, int t, const double xi[3]);

cplx eval_freq_scalar(const ScalarAtomIndex& idx, const WindowSet& w, const double xi[3]);
double eval_space_scalar(const ScalarAtomIndex& idx, const WindowSet& w, const double x[3],
                         double* imag = nullptr);

// Angular function on the circle (Fourier orders) or sphere (harmonics).
struct AngularSeries {
  int dim = 2;
  int lo = 0;             // 2D: lowest order stored
  int L = 0;              // 3D: max degree; 2D: highest order
  std::vector<cplx> c;    // 2D: c[n - lo]; 3D: c[lm_index]
  int max_order() const;  // largest |order| or degree
  static AngularSeries fourier(const std::function<cplx(double)>& f, int max_order,
                               double drop_tol = 1e-15);
  static AngularSeries spherical(const std::function<cplx(const double*)>& f, int L);
  cplx eval(const double dir[3]) const;
  // ℓ² mass of coefficients above the given order (truncation diagnostic).
  double tail(int above) const;
};

// Shared cache of Hankel tables per (window, band, dim, q). Grows on demand.
std::shared_ptr<const HankelCache> hankel_cache(const RadialProfile& p, int j, int dim, int q,
                                                int max_order, double r_max);

// Inverse FT of c_j W(2^{-s}ρ) ρ^{-q} a(ξ̄): evaluated in closed form via
// Hankel transforms, i^order phases and harmonics of the spatial direction.
class RadialAngularKernel {
 public:
  RadialAngularKernel(const RadialProfile& p, int n, int j, int q, AngularSeries a,
                      double y_max);
  cplx eval(const double y[3]) const;
  const AngularSeries& series() const { return a_; }

 private:
  int n_, j_, s_, q_;
  double pref_;
  AngularSeries a_;
  std::shared_ptr<const HankelCache> cache_;
  std::vector<cplx> phase_;  // i^order folded into coefficients
};

// Translation lattice of level j on a grid: M = L 2^s points per axis,
// k in [-M/2, M/2), stored at index k + M/2.
int lattice_size(const Grid& g, int j);
// α_k = (2π/L)^n Σ_m G_m e^{iξ_m·x_k}
void lattice_analyze(const Grid& g, int j, const std::vector<cplx>& G, std::vector<cplx>& alpha);
// G_m += D_m Σ_k α_k e^{-iξ_m·x_k}
void lattice_synthesize(const Grid& g, int j, const std::vector<cplx>& alpha,
                        const std::vector<cplx>& D, std::vector<cplx>& G);

struct ScalarBand {
  int j = 0, t = 0;
  std::vector<cplx> alpha;
};

struct ScalarRoundtrip {
  std::vector<ScalarBand> bands;
  std::vector<double> reconstruction;
  double rel_error = 0.0;
  double parseval_ratio = 0.0;  // Σ|α|² / ‖f‖²
  double leakage = 0.0;         // field energy outside the frame cover
  double max_imag = 0.0;        // largest imaginary residue of coefficients
};

// Bands j = -1..J-1, all orientations.
ScalarRoundtrip scalar_roundtrip(const Grid& g, const std::vector<double>& field, int J,
                                 const WindowSet& w);

}  // namespace psiec
