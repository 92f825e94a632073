#pragma once
// Frame analysis/synthesis of sampled form fields, fiber integration along a
// lattice axis, and characteristic forms of simple shapes.

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "psiec/form_wavelets.hpp"
#include "psiec/grid.hpp"

namespace psiec {

// Stable FNV-1a hash of the serialized window set.
std::string window_hash(const WindowSet& w);

// One (type, j, t) band: coefficients on the centred M^n translation lattice.
struct FrameBand {
  AtomType type;
  int j = 0;
  int t = 0;
  int M = 0;
  std::vector<cplx> alpha;
  FormAtomIndex index(size_t slot) const;
};

struct FrameCoefficients {
  int n = 2;
  int r = 1;
  int J = 0;
  Grid grid;
  std::string window_hash;
  std::vector<FrameBand> exact;    // ν = d, L² pairing
  std::vector<FrameBand> coexact;  // ν = δ, Ḣ¹ pairing
  double max_imag = 0.0;
  double leakage = 0.0;  // relative energy outside the frame cover
  bool leakage_warning() const { return leakage > 1e-6; }

  size_t count() const;
  double energy(Nu nu) const;
  double energy() const { return energy(Nu::d) + energy(Nu::delta); }
  // Non-zero entries (|α| > drop) in deterministic band/lattice order.
  std::vector<std::pair<FormAtomIndex, double>> entries(double drop = 0.0) const;
  // Zeroed copy with the same band layout.
  FrameCoefficients zeros_like() const;
  FrameBand* find(const AtomType& type, int j, int t);
};

// (j, t) bands of a family: d-types run j = -1..J-1, δ-types j = 0..J-1.
std::vector<std::pair<int, int>> band_list(const AtomType& type, int J, const WindowSet& w);

// Samples the band descriptor (k = 0) on the grid frequencies; components
// ordered as masks_of_degree(n, n - r).
std::vector<std::vector<cplx>> band_spectrum(const Grid& g, const AtomType& type, int j, int t,
                                             const WindowSet& w, int extra_weight = 0);

// A single atom sampled on the grid by inverse FFT of its descriptor.
SampledFormField sample_atom(const FormAtomIndex& idx, const Grid& g, const WindowSet& w,
                             double* max_imag = nullptr, int extra_weight = 0);
// Seeded random r-form with spectrum restricted to lo <= |ξ| <= hi.
SampledFormField random_bandlimited(const Grid& g, int degree, double lo, double hi,
                                    unsigned long long seed);

FrameCoefficients analyze(const FreqFormField& F, int J, const WindowSet& w);
FrameCoefficients analyze(const SampledFormField& f, int J, const WindowSet& w);
FreqFormField synthesize_spectrum(const FrameCoefficients& c, const WindowSet& w);
SampledFormField synthesize(const FrameCoefficients& c, const WindowSet& w,
                            double* max_imag = nullptr);

// Σ|α|² against the matching field norms: ‖P_exact f‖²_{L²} + ‖P_coexact f‖²_{Ḣ¹}.
struct ParsevalReport {
  double coeff_energy_d = 0.0, coeff_energy_delta = 0.0;
  double field_energy_d = 0.0, field_energy_delta = 0.0;
  double rel_error() const;
};
ParsevalReport parseval_report(const FreqFormField& F, const FrameCoefficients& c);

// ---------------------------------------------------------------------------
// Fiber integration along a lattice axis.

// The 2D atom obtained by integrating a 3D atom along `axis`. Components are
// on the 2D spatial monomials of degree r - 1 and evaluated in closed form.
struct FiberAtom {
  AtomType source;
  int axis = 2;
  int j = 0;
  int t = 0;
  std::array<int, 3> k2{0, 0, 0};  // projected translation
  bool zero = false;                // restriction vanishes identically
  std::vector<unsigned> masks2;     // 2D spatial monomials
  std::vector<AngularSeries> series;
  int weight_power = 0;
  // Matching 2D table atom (2D window β̄, scale 2^{-s/2}) when one exists.
  bool has_table_atom = false;
  AtomType type2;
  int table_sign = 1;
  std::vector<cplx> beta_bar;  // orders -L..L (axis = x3 only)
};

FiberAtom fiber_integrate(const FormAtomIndex& idx, int axis, const WindowSet& w);
// β̄_m = Σ_l κ_lm y_lm(π/2, 0) for orientation t.
std::vector<cplx> fiber_beta_bar(const AngularWindow3D& w, int t);

class FiberEvaluator {
 public:
  FiberEvaluator(const FiberAtom& f, const WindowSet& w, double y_max = 64.0);
  // x in the 2D coordinates (remaining axes in increasing order).
  std::vector<double> eval(const double x[2], double* imag = nullptr) const;
  const std::vector<unsigned>& masks() const { return masks_; }

 private:
  std::vector<unsigned> masks_;
  std::vector<std::unique_ptr<RadialAngularKernel>> kernels_;
  double center_[2] = {0.0, 0.0};
};

// Trapezoid integration of a sampled 3D field along `axis`.
SampledFormField fiber_integrate_sampled(const SampledFormField& f, int axis);

// ---------------------------------------------------------------------------
// Characteristic forms in 2D.

enum class ShapeKind { Disc, Square, Halfspace };

struct CharacteristicShape {
  ShapeKind kind = ShapeKind::Disc;
  double center[2] = {0.0, 0.0};
  double size = 1.0;  // disc radius, square side; unused for the halfspace x1 > 0
  int n = 2;
  std::string str() const;
};

// Disc: R J1(Rρ)/ρ e^{-iξ·c} (unitary transform of the indicator).
cplx disc_indicator_ft(const CharacteristicShape& s, const double xi[2]);
// interior: χ_M dx1∧dx2 (degree 2); boundary: the 1-current ∫_∂M (degree 1).
FreqFormField characteristic_spectrum(const CharacteristicShape& s, const Grid& g, bool boundary);
// χ̃_s = ∫_M ψ^{2,d}_s (interior) or ∫_∂M ψ^{1,δ}_s (boundary) for bands
// j = -1..J-1.
FrameCoefficients characteristic_coefficients(const CharacteristicShape& s, bool boundary, int J,
                                              const Grid& g, const WindowSet& w);
// Single atom by polar quadrature in frequency (disc only).
double atom_shape_integral(const FormAtomIndex& idx, const CharacteristicShape& s,
                           const WindowSet& w);

struct StokesLevel {
  int J = 0;
  double boundary_sum = 0.0;  // Σ α χ̃^{∂M} over levels < J
  double interior_sum = 0.0;  // Σ α χ̃^{M}
  double route_gap = 0.0;     // |boundary - interior|
  double residual = 0.0;      // |boundary - reference| / |reference|
};
// alpha: d-atom coefficients of ω = du (analyze of the 2-form). They coincide
// with the Ḣ¹ coefficients of u on δ-atoms, the j = -1 band included, so both
// routes use the same α. reference: the exact circulation ∫_M ω.
std::vector<StokesLevel> stokes_residual(const FrameCoefficients& alpha,
                                         const CharacteristicShape& s, const WindowSet& w,
                                         double reference);

}  // namespace psiec
