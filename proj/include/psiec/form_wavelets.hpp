#pragma once
// Differential r-form polar wavelets: frequency table, closed-form spatial
// evaluation and the wavelet-level operators.

#include <array>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "psiec/exterior.hpp"
#include "psiec/polarlets.hpp"

namespace psiec {

enum class Nu { d = 0, delta = 1 };

// (n, r, ν, a): the frame family of an atom.
struct AtomType {
  int n = 2;
  int r = 1;
  Nu nu = Nu::d;
  int a = 1;
  bool operator<(const AtomType& o) const;
  bool operator==(const AtomType& o) const;
  std::string str() const;  // e.g. "1,delta,2"
};

std::vector<AtomType> atom_types(int n);
std::vector<int> families(int n, int r, Nu nu);
Nu parse_nu(const std::string& s);
std::string nu_name(Nu nu);

struct FormAtomIndex {
  AtomType type;
  int j = 0;
  std::array<int, 3> k{0, 0, 0};
  int t = 0;
  ScalarAtomIndex scalar() const { return {type.n, j, k, t}; }
};

// ψ̂ = c_j W_j(ρ) ρ^{-weight} γ_t(ξ̄) phase E_mask(ξ̄) e^{-iξ·x_k}, with E_mask a
// spherical-frame monomial (bits θ, (φ,) r; r̂ is the last bit).
struct FreqAtomDescriptor {
  int weight_power = 0;
  cplx phase = 1.0;
  unsigned mask = 0;
  SymbolicForm symbolic(int n) const;  // phase ρ^{-w} E_mask
};

using FreqTable = std::map<AtomType, FreqAtomDescriptor>;
// Builds and validates the table (chain map, closedness, tangential/radial
// split); throws std::logic_error on inconsistency.
FreqTable build_freq_table(int n);
const FreqTable& freq_table(int n);

// Orthonormal spherical frame at direction ω (3D: relative to a pole).
// vec[b] holds the Cartesian components of frame vector b.
struct FrameVectors {
  int n = 2;
  double vec[3][3] = {};
};
FrameVectors spherical_frame(int n, const double omega[3], const double pole[3]);
// Cartesian ∂ξ^K coefficient of the frame monomial E_mask.
double frame_minor(const FrameVectors& f, unsigned frame_mask, unsigned cart_mask);
void frame_pole(const WindowSet& w, int n, int j, int t, double pole[3]);

// Frequency components on Cartesian ∂ξ monomials of degree n - r, ordered as
// masks_of_degree(n, n - r). extra_weight multiplies by ρ^{extra_weight}.
std::vector<cplx> eval_freq_form(const FormAtomIndex& idx, const WindowSet& w,
                                 const double xi[3], int extra_weight = 0);
// Translation-free descriptor (k = 0), used by the frame transforms. δ-types
// accept j = -1 as well: that band lies in Ḣ¹ but not in L² (2D).
void band_descriptor(const AtomType& type, int j, int t, const WindowSet& w, const double xi[3],
                     int extra_weight, cplx* out);

struct SpatialOptions {
  int sphere_degree = 40;  // harmonic truncation for pole-dependent 3D frames
  double y_max = 64.0;     // largest distance from the atom centre
};

// Closed-form spatial evaluator for one (type, j, t) band; components are on
// spatial monomials masks_of_degree(n, r).
class FormAtomEvaluator {
 public:
  FormAtomEvaluator(const AtomType& type, int j, int t, const WindowSet& w,
                    SpatialOptions opt = {}, int extra_weight = 0);
  // y = x - x_k. Returns the real parts; max |imag| through imag.
  std::vector<double> eval(const double y[3], double* imag = nullptr) const;
  const std::vector<unsigned>& spatial_masks() const { return spatial_; }
  // Largest harmonic-truncation tail over components (0 when exact).
  double truncation_tail() const { return tail_; }

 private:
  AtomType type_;
  int j_;
  std::vector<unsigned> spatial_;
  struct Component {
    int spatial_slot;
    int sign;
    std::unique_ptr<RadialAngularKernel> kernel;
  };
  std::vector<Component> comps_;
  double tail_ = 0.0;
};

std::vector<double> eval_space_form(const FormAtomIndex& idx, const WindowSet& w,
                                    const double x[3], SpatialOptions opt = {},
                                    double* imag = nullptr);

// d ψ^{r,δ} = ψ^{r+1,d}; d ψ^{r,d} = 0 (returns false).
bool exterior_derivative_atom(const AtomType& in, AtomType& out);

// ⋆ψ = sign F^{-1}(ρ^{weight} ψ̂_target) for the spatial Hodge dual.
struct HodgeImage {
  AtomType target;
  int weight_power = 0;
  int sign = 1;
};
HodgeImage hodge_atom(const AtomType& t);
// σ_n(r) with F(⋆α) = σ ⋆F(α) for spatial r-forms.
int hodge_ft_sign(int n, int r);

// Δ = dδ + δd has symbol +|ξ|² on every descriptor: Δψ = F^{-1}(ρ² ψ̂).
struct LaplacianImage {
  AtomType type;
  int extra_weight = 2;
  int sign = 1;
};
LaplacianImage laplacian_atom(const AtomType& t);

// D_qp = ⟨⟨Δψ_q, ψ_p⟩⟩ by radial Gauss-Legendre and angular series.
struct GalerkinEntry {
  int q = 0, p = 0;
  double value = 0.0;
};
std::vector<std::vector<double>> galerkin_laplacian(const std::vector<FormAtomIndex>& rows,
                                                    const std::vector<FormAtomIndex>& cols,
                                                    const WindowSet& w,
                                                    double* max_imag = nullptr);
double galerkin_entry(const FormAtomIndex& q, const FormAtomIndex& p, const WindowSet& w,
                      double* imag = nullptr);

}  // namespace psiec
