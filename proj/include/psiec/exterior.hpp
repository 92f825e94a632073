#pragma once
// Symbolic exterior algebra for n <= 3 with the Fourier transform of forms.
// Monomials are bitmasks over the basis {dx^1..dx^n}, {∂ξ^1..∂ξ^n} or the
// spherical frame {∂θ̂, (∂φ̂,) ∂r̂}; bit i is basis element i+1.

#include <array>
#include <complex>
#include <map>
#include <string>
#include <vector>

namespace psiec {

using cplx = std::complex<double>;

enum class SpaceTag { SpatialX, FreqCartesian, FreqSpherical };

// Polynomial in (ξ1, ξ2, ξ3, |ξ|) with integer exponents (|ξ| may be negative)
// and complex coefficients. Arithmetic is exact for small integer data.
class Poly {
 public:
  using Exp = std::array<int, 4>;
  Poly() = default;
  Poly(cplx c);  // NOLINT
  static Poly xi(int k);           // ξ_k, k = 1..3
  static Poly rho(int power = 1);  // |ξ|^power

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly operator+(const Poly& o) const { Poly r = *this; r += o; return r; }
  Poly operator-(const Poly& o) const { Poly r = *this; r -= o; return r; }
  Poly operator*(const Poly& o) const;
  Poly operator*(cplx c) const;
  Poly operator-() const { return *this * cplx(-1.0); }
  bool operator==(const Poly& o) const;
  bool is_zero() const { return t_.empty(); }
  // Evaluate at a numeric ξ (|ξ| computed from it).
  cplx eval(const double xi[3]) const;
  const std::map<Exp, cplx>& terms() const { return t_; }
  std::string str() const;

 private:
  void prune();
  std::map<Exp, cplx> t_;
};

int popcount(unsigned m);
// Sign of e_a ∧ e_b (0 when they overlap).
int wedge_sign(unsigned a, unsigned b);
// Permutation parity of a sequence of distinct integers.
int permutation_sign(const std::vector<int>& seq);

class SymbolicForm {
 public:
  SymbolicForm(int n = 3, SpaceTag tag = SpaceTag::SpatialX) : n_(n), tag_(tag) {}
  static SymbolicForm monomial(int n, SpaceTag tag, unsigned mask, Poly c = Poly(1.0));

  int dim() const { return n_; }
  SpaceTag tag() const { return tag_; }
  unsigned full_mask() const { return (1u << n_) - 1u; }
  const std::map<unsigned, Poly>& terms() const { return t_; }
  void add(unsigned mask, const Poly& c);
  Poly coeff(unsigned mask) const;
  bool is_zero() const { return t_.empty(); }
  int degree() const;  // -1 if mixed or zero

  SymbolicForm operator+(const SymbolicForm& o) const;
  SymbolicForm operator-(const SymbolicForm& o) const;
  SymbolicForm operator*(const Poly& c) const;
  bool operator==(const SymbolicForm& o) const;
  std::string str() const;

 private:
  int n_;
  SpaceTag tag_;
  std::map<unsigned, Poly> t_;
};

SymbolicForm graded_wedge(const SymbolicForm& a, const SymbolicForm& b);
// i_{iξ} as an anti-derivation contracting into the first slot.
SymbolicForm interior_xi(const SymbolicForm& f);
// Euclidean Hodge dual on an orthonormal oriented basis.
SymbolicForm hodge(const SymbolicForm& f);
// (-1)^{n-1} ⋆ i_{iξ} ⋆ as displayed in the calculus.
SymbolicForm codifferential_freq(const SymbolicForm& f);
// Spatial operators acting on plane-wave amplitudes (∂_p → iξ_p).
SymbolicForm exterior_derivative_planewave(const SymbolicForm& f);
SymbolicForm codifferential_planewave(const SymbolicForm& f);

// Mixed x ⊗ ξ algebra used to expand the form-basis exponential.
class TensorForm {
 public:
  explicit TensorForm(int n) : n_(n) {}
  static TensorForm unit(int n) { TensorForm t(n); t.add(0, 0, Poly(1.0)); return t; }
  int dim() const { return n_; }
  void add(unsigned xmask, unsigned fmask, const Poly& c);
  const std::map<std::pair<unsigned, unsigned>, Poly>& terms() const { return t_; }
  TensorForm operator+(const TensorForm& o) const;
  TensorForm operator*(cplx c) const;
  bool operator==(const TensorForm& o) const { return t_ == o.t_; }
  std::string str() const;

 private:
  int n_;
  std::map<std::pair<unsigned, unsigned>, Poly> t_;
};

// (a⊗A)(b⊗B) = (-1)^{|b||A|} (a∧b)⊗(A∧B)
TensorForm tensor_product(const TensorForm& a, const TensorForm& b);
// Σ_q dx^q ⊗ ∂ξ^q
TensorForm basis_pairing(int n);
// Truncated exponential Σ_k X^k / k! (nilpotent, exact).
TensorForm tensor_exp(const TensorForm& X);

struct SignedMonomial {
  int sign = 0;
  unsigned mask = 0;
};

// F(dx^J) by brute-force expansion of dx^J ∧ e^{dx^q ∂ξ^q}.
SignedMonomial ft_basis(int n, unsigned spatial_mask);
// F^{-1}(∂ξ^K) by the dual expansion with the -1 prefactor.
SignedMonomial ift_basis(int n, unsigned freq_mask);
// The closed-form index rule -(-1)^{floor(r/2)} sgn(σ) ∂ξ^{σ_{r+1..n}}.
SignedMonomial ft_basis_general_rule(int n, unsigned spatial_mask);

SymbolicForm fourier_transform(const SymbolicForm& spatial);
SymbolicForm inverse_fourier_transform(const SymbolicForm& freq);

// Sign ε with F(dα) = ε i_{iξ} F(α), obtained by comparing both sides on every
// basis monomial; throws if no uniform sign exists.
int exterior_derivative_sign(int n);
// Fourier symbol of d under the tabulated transform: ε i_{iξ}.
SymbolicForm exterior_derivative_freq(const SymbolicForm& f);
// Sign η with F(δα) = η (-1)^{n-1} ⋆ i_{iξ} ⋆ F(α) on frequency forms of the
// given degree, obtained from plane waves (δ = (-1)^{n(r+1)+1} ⋆ d ⋆ in space).
int codifferential_sign(int n, int freq_degree);
// Fourier symbol of the codifferential; valid in the Cartesian and in the
// orthonormal spherical frame.
SymbolicForm codifferential_symbol(const SymbolicForm& f);

// Pretty names
std::string monomial_name(int n, SpaceTag tag, unsigned mask);

}  // namespace psiec
