#pragma once
// Periodic sampling grids, FFT with the unitary continuous normalization and
// sampled form fields.

#include <complex>
#include <string>
#include <vector>

namespace psiec {

using cplx = std::complex<double>;

// Cube [-L/2, L/2)^n with N points per axis; x_i = (i - N/2) h.
struct Grid {
  int n = 2;
  int N = 64;
  double L = 16.0;
  double h() const { return L / N; }
  size_t size() const;
  double coord(int i) const { return (i - N / 2) * h(); }
  // Signed frequency index of array position i.
  int freq_index(int i) const { return i < N / 2 ? i : i - N; }
  double freq(int i) const;
  void point(size_t idx, double x[3]) const;
  void wavevector(size_t idx, double xi[3]) const;
  bool operator==(const Grid& o) const { return n == o.n && N == o.N && L == o.L; }
};

// Continuous-normalized spectrum F(ξ_m) = (2π)^{-n/2} h^n Σ f(x) e^{-iξ_m·x}.
void forward_spectrum(const Grid& g, std::vector<cplx>& data);
// Inverse: f(x) = (2π)^{n/2} L^{-n} Σ_m F_m e^{iξ_m·x}.
void inverse_spectrum(const Grid& g, std::vector<cplx>& data);
// Plain unnormalized DFTs on an M^n array (sign -1 forward).
void dft(int n, int M, std::vector<cplx>& data, bool forward);

// Ordered spatial multi-indices of degree r (lexicographic).
std::vector<unsigned> masks_of_degree(int n, int r);
std::string component_name(unsigned mask, int n);

struct SampledFormField {
  Grid grid;
  int degree = 0;
  std::vector<unsigned> masks;            // spatial monomials
  std::vector<std::vector<double>> comp;  // per mask
  static SampledFormField zeros(const Grid& g, int degree);
  std::vector<double>& at(unsigned mask);
  const std::vector<double>& at(unsigned mask) const;
  double l2_norm() const;
};

// Frequency image: components on ∂ξ monomials of degree n - r.
struct FreqFormField {
  Grid grid;
  int spatial_degree = 0;
  std::vector<unsigned> masks;  // frequency monomials
  std::vector<std::vector<cplx>> comp;
  static FreqFormField zeros(const Grid& g, int spatial_degree);
  std::vector<cplx>& at(unsigned mask);
  const std::vector<cplx>& at(unsigned mask) const;
};

FreqFormField to_frequency(const SampledFormField& f);
// Returns the real part; max |imag| reported through the pointer.
SampledFormField from_frequency(const FreqFormField& f, double* max_imag = nullptr);

// ⟨⟨a,b⟩⟩ = ∫ a ∧ ⋆b by grid quadrature.
double plancherel_spatial(const SampledFormField& a, const SampledFormField& b);
// The same pairing from the frequency images.
cplx plancherel_frequency(const FreqFormField& a, const FreqFormField& b);
SampledFormField wedge_sampled(const SampledFormField& a, const SampledFormField& b);

// Spectral exterior derivative / codifferential of a sampled field.
SampledFormField spectral_d(const SampledFormField& f);
SampledFormField spectral_delta(const SampledFormField& f);

}  // namespace psiec
