#include "psiec/exterior.hpp"

#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace psiec {

// ---- Poly -----------------------------------------------------------------

Poly::Poly(cplx c) {
  if (c != cplx(0.0)) t_[{0, 0, 0, 0}] = c;
}

Poly Poly::xi(int k) {
  Poly p;
  Exp e{0, 0, 0, 0};
  e[k - 1] = 1;
  p.t_[e] = 1.0;
  return p;
}

Poly Poly::rho(int power) {
  Poly p;
  p.t_[{0, 0, 0, power}] = 1.0;
  return p;
}

void Poly::prune() {
  for (auto it = t_.begin(); it != t_.end();) {
    if (it->second == cplx(0.0)) it = t_.erase(it);
    else ++it;
  }
}

Poly& Poly::operator+=(const Poly& o) {
  for (auto& [e, c] : o.t_) t_[e] += c;
  prune();
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  for (auto& [e, c] : o.t_) t_[e] -= c;
  prune();
  return *this;
}

Poly Poly::operator*(const Poly& o) const {
  Poly r;
  for (auto& [e1, c1] : t_)
    for (auto& [e2, c2] : o.t_) {
      Exp e{e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3]};
      r.t_[e] += c1 * c2;
    }
  r.prune();
  return r;
}

Poly Poly::operator*(cplx c) const {
  Poly r = *this;
  for (auto& kv : r.t_) kv.second *= c;
  r.prune();
  return r;
}

bool Poly::operator==(const Poly& o) const { return t_ == o.t_; }

cplx Poly::eval(const double xi[3]) const {
  double rho = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
  cplx s = 0.0;
  for (auto& [e, c] : t_)
    s += c * std::pow(xi[0], e[0]) * std::pow(xi[1], e[1]) * std::pow(xi[2], e[2]) *
         std::pow(rho, e[3]);
  return s;
}

namespace {
std::string cplx_str(cplx c) {
  std::ostringstream os;
  auto num = [&](double v) {
    if (v == std::round(v) && std::abs(v) < 1e15) os << static_cast<long long>(v);
    else os << v;
  };
  if (c.imag() == 0.0) {
    num(c.real());
  } else if (c.real() == 0.0) {
    if (c.imag() == 1.0) os << "i";
    else if (c.imag() == -1.0) os << "-i";
    else { num(c.imag()); os << "i"; }
  } else {
    os << "(";
    num(c.real());
    os << (c.imag() < 0 ? "-" : "+");
    num(std::abs(c.imag()));
    os << "i)";
  }
  return os.str();
}
}  // namespace

std::string Poly::str() const {
  if (t_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  static const char* names[4] = {"xi1", "xi2", "xi3", "|xi|"};
  for (auto& [e, c] : t_) {
    if (!first) os << " + ";
    first = false;
    bool mono = e[0] || e[1] || e[2] || e[3];
    if (!mono || (c != cplx(1.0))) os << cplx_str(c);
    for (int k = 0; k < 4; ++k) {
      if (!e[k]) continue;
      os << (mono && c != cplx(1.0) ? "*" : "") << names[k];
      if (e[k] != 1) os << "^" << e[k];
      mono = true;
    }
  }
  return os.str();
}

// ---- sign helpers ---------------------------------------------------------

int popcount(unsigned m) { return __builtin_popcount(m); }

int wedge_sign(unsigned a, unsigned b) {
  if (a & b) return 0;
  int inv = 0;
  for (int i = 0; i < 32; ++i)
    if (a & (1u << i)) inv += popcount(b & ((1u << i) - 1u));
  return (inv % 2) ? -1 : 1;
}

int permutation_sign(const std::vector<int>& s) {
  int inv = 0;
  for (size_t i = 0; i < s.size(); ++i)
    for (size_t j = i + 1; j < s.size(); ++j)
      if (s[i] > s[j]) ++inv;
      else if (s[i] == s[j]) return 0;
  return (inv % 2) ? -1 : 1;
}

// ---- SymbolicForm ---------------------------------------------------------

SymbolicForm SymbolicForm::monomial(int n, SpaceTag tag, unsigned mask, Poly c) {
  SymbolicForm f(n, tag);
  f.add(mask, c);
  return f;
}

void SymbolicForm::add(unsigned mask, const Poly& c) {
  if (mask & ~full_mask()) throw std::invalid_argument("SymbolicForm: index beyond dimension");
  auto& slot = t_[mask];
  slot += c;
  if (slot.is_zero()) t_.erase(mask);
}

Poly SymbolicForm::coeff(unsigned mask) const {
  auto it = t_.find(mask);
  return it == t_.end() ? Poly() : it->second;
}

int SymbolicForm::degree() const {
  int d = -1;
  for (auto& kv : t_) {
    int k = popcount(kv.first);
    if (d >= 0 && k != d) return -1;
    d = k;
  }
  return d;
}

SymbolicForm SymbolicForm::operator+(const SymbolicForm& o) const {
  SymbolicForm r = *this;
  for (auto& [m, c] : o.t_) r.add(m, c);
  return r;
}

SymbolicForm SymbolicForm::operator-(const SymbolicForm& o) const {
  SymbolicForm r = *this;
  for (auto& [m, c] : o.t_) r.add(m, -c);
  return r;
}

SymbolicForm SymbolicForm::operator*(const Poly& c) const {
  SymbolicForm r(n_, tag_);
  for (auto& [m, v] : t_) r.add(m, v * c);
  return r;
}

bool SymbolicForm::operator==(const SymbolicForm& o) const {
  return n_ == o.n_ && tag_ == o.tag_ && t_ == o.t_;
}

std::string monomial_name(int n, SpaceTag tag, unsigned mask) {
  if (mask == 0) return tag == SpaceTag::SpatialX ? "1" : "1_xi";
  std::ostringstream os;
  bool first = true;
  for (int i = 0; i < n; ++i) {
    if (!(mask & (1u << i))) continue;
    if (!first) os << "^";
    first = false;
    switch (tag) {
      case SpaceTag::SpatialX: os << "dx" << (i + 1); break;
      case SpaceTag::FreqCartesian: os << "d/dxi" << (i + 1); break;
      case SpaceTag::FreqSpherical: {
        static const char* n2[2] = {"d/dtheta", "d/dr"};
        static const char* n3[3] = {"d/dtheta", "d/dphi", "d/dr"};
        os << (n == 2 ? n2[i] : n3[i]);
        break;
      }
    }
  }
  return os.str();
}

std::string SymbolicForm::str() const {
  if (t_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& [m, c] : t_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.str() << ") " << monomial_name(n_, tag_, m);
  }
  return os.str();
}

SymbolicForm graded_wedge(const SymbolicForm& a, const SymbolicForm& b) {
  if (a.dim() != b.dim() || a.tag() != b.tag())
    throw std::invalid_argument("graded_wedge: incompatible forms");
  SymbolicForm r(a.dim(), a.tag());
  for (auto& [ma, ca] : a.terms())
    for (auto& [mb, cb] : b.terms()) {
      int s = wedge_sign(ma, mb);
      if (s) r.add(ma | mb, ca * cb * cplx(s));
    }
  return r;
}

SymbolicForm interior_xi(const SymbolicForm& f) {
  if (f.tag() == SpaceTag::SpatialX) throw std::invalid_argument("interior_xi: spatial form");
  const int n = f.dim();
  SymbolicForm r(n, f.tag());
  const cplx I(0.0, 1.0);
  for (auto& [m, c] : f.terms()) {
    int pos = 0;
    for (int p = 0; p < n; ++p) {
      if (!(m & (1u << p))) continue;
      double s = (pos % 2) ? -1.0 : 1.0;
      ++pos;
      Poly v;
      if (f.tag() == SpaceTag::FreqCartesian) v = Poly::xi(p + 1) * I;
      else if (p == n - 1) v = Poly::rho(1) * I;
      else continue;
      r.add(m & ~(1u << p), c * v * cplx(s));
    }
  }
  return r;
}

SymbolicForm hodge(const SymbolicForm& f) {
  const int n = f.dim();
  SymbolicForm r(n, f.tag());
  unsigned full = f.full_mask();
  for (auto& [m, c] : f.terms()) {
    unsigned k = full & ~m;
    r.add(k, c * cplx(wedge_sign(m, k)));
  }
  return r;
}

SymbolicForm codifferential_freq(const SymbolicForm& f) {
  double s = (f.dim() - 1) % 2 ? -1.0 : 1.0;
  return hodge(interior_xi(hodge(f))) * Poly(cplx(s));
}

SymbolicForm exterior_derivative_planewave(const SymbolicForm& f) {
  if (f.tag() != SpaceTag::SpatialX) throw std::invalid_argument("spatial form expected");
  const int n = f.dim();
  SymbolicForm r(n, f.tag());
  const cplx I(0.0, 1.0);
  for (auto& [m, c] : f.terms())
    for (int p = 0; p < n; ++p) {
      int s = wedge_sign(1u << p, m);
      if (s) r.add(m | (1u << p), c * Poly::xi(p + 1) * (I * double(s)));
    }
  return r;
}

SymbolicForm codifferential_planewave(const SymbolicForm& f) {
  const int n = f.dim();
  SymbolicForm r(n, f.tag());
  for (int deg = 1; deg <= n; ++deg) {
    SymbolicForm part(n, f.tag());
    for (auto& [m, c] : f.terms())
      if (popcount(m) == deg) part.add(m, c);
    if (part.is_zero()) continue;
    int e = n * (deg + 1) + 1;
    double s = (e % 2) ? -1.0 : 1.0;
    r = r + hodge(exterior_derivative_planewave(hodge(part))) * Poly(cplx(s));
  }
  return r;
}

// ---- TensorForm -----------------------------------------------------------

void TensorForm::add(unsigned xm, unsigned fm, const Poly& c) {
  auto key = std::make_pair(xm, fm);
  auto& slot = t_[key];
  slot += c;
  if (slot.is_zero()) t_.erase(key);
}

TensorForm TensorForm::operator+(const TensorForm& o) const {
  TensorForm r = *this;
  for (auto& [k, c] : o.t_) r.add(k.first, k.second, c);
  return r;
}

TensorForm TensorForm::operator*(cplx s) const {
  TensorForm r(n_);
  for (auto& [k, c] : t_) r.add(k.first, k.second, c * s);
  return r;
}

std::string TensorForm::str() const {
  if (t_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& [k, c] : t_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.str() << ") " << monomial_name(n_, SpaceTag::SpatialX, k.first) << " (x) "
       << monomial_name(n_, SpaceTag::FreqCartesian, k.second);
  }
  return os.str();
}

TensorForm tensor_product(const TensorForm& a, const TensorForm& b) {
  TensorForm r(a.dim());
  for (auto& [ka, ca] : a.terms())
    for (auto& [kb, cb] : b.terms()) {
      int sx = wedge_sign(ka.first, kb.first);
      int sf = wedge_sign(ka.second, kb.second);
      if (!sx || !sf) continue;
      int grade = (popcount(kb.first) * popcount(ka.second)) % 2 ? -1 : 1;
      r.add(ka.first | kb.first, ka.second | kb.second, ca * cb * cplx(sx * sf * grade));
    }
  return r;
}

TensorForm basis_pairing(int n) {
  TensorForm X(n);
  for (int q = 0; q < n; ++q) X.add(1u << q, 1u << q, Poly(1.0));
  return X;
}

TensorForm tensor_exp(const TensorForm& X) {
  TensorForm sum = TensorForm::unit(X.dim());
  TensorForm term = TensorForm::unit(X.dim());
  for (int k = 1; k <= 2 * X.dim(); ++k) {
    term = tensor_product(term, X) * cplx(1.0 / k);
    if (term.terms().empty()) break;
    sum = sum + term;
  }
  return sum;
}

// ---- Fourier transform of basis forms -------------------------------------

SignedMonomial ft_basis(int n, unsigned J) {
  TensorForm a(n);
  a.add(J, 0, Poly(1.0));
  TensorForm e = tensor_product(a, tensor_exp(basis_pairing(n)));
  unsigned full = (1u << n) - 1u;
  SignedMonomial out;
  for (auto& [k, c] : e.terms()) {
    if (k.first != full) continue;
    if (out.sign) throw std::logic_error("ft_basis: more than one image monomial");
    cplx v = c.terms().begin()->second;
    out.sign = v.real() > 0 ? 1 : -1;
    out.mask = k.second;
  }
  return out;
}

SignedMonomial ift_basis(int n, unsigned K) {
  // ξ-part written first: (Â⊗b)(Ĉ⊗d) = (-1)^{|Ĉ||b|} ÂĈ ⊗ bd, prefactor -1.
  // Reuse the tensor product with swapped roles of the two factors.
  TensorForm a(n);
  a.add(K, 0, Poly(1.0));
  TensorForm e = tensor_product(a, tensor_exp(basis_pairing(n)));
  unsigned full = (1u << n) - 1u;
  SignedMonomial out;
  for (auto& [k, c] : e.terms()) {
    if (k.first != full) continue;
    cplx v = c.terms().begin()->second;
    out.sign = v.real() > 0 ? -1 : 1;
    out.mask = k.second;
  }
  return out;
}

SignedMonomial ft_basis_general_rule(int n, unsigned J) {
  std::vector<int> sigma;
  for (int i = 0; i < n; ++i)
    if (J & (1u << i)) sigma.push_back(i);
  unsigned K = 0;
  for (int i = 0; i < n; ++i)
    if (!(J & (1u << i))) {
      sigma.push_back(i);
      K |= 1u << i;
    }
  int r = popcount(J);
  int s = -((r / 2) % 2 ? -1 : 1) * permutation_sign(sigma);
  return {s, K};
}

SymbolicForm fourier_transform(const SymbolicForm& f) {
  SymbolicForm r(f.dim(), SpaceTag::FreqCartesian);
  for (auto& [m, c] : f.terms()) {
    auto sm = ft_basis(f.dim(), m);
    r.add(sm.mask, c * cplx(sm.sign));
  }
  return r;
}

SymbolicForm inverse_fourier_transform(const SymbolicForm& f) {
  SymbolicForm r(f.dim(), SpaceTag::SpatialX);
  for (auto& [m, c] : f.terms()) {
    auto sm = ift_basis(f.dim(), m);
    r.add(sm.mask, c * cplx(sm.sign));
  }
  return r;
}

int exterior_derivative_sign(int n) {
  static int cache[4] = {0, 0, 0, 0};
  static std::mutex mu;
  std::lock_guard<std::mutex> lk(mu);
  if (cache[n]) return cache[n];
  int eps = 0;
  for (unsigned J = 0; J < (1u << n); ++J) {
    if (popcount(J) == n) continue;
    auto a = SymbolicForm::monomial(n, SpaceTag::SpatialX, J);
    auto lhs = fourier_transform(exterior_derivative_planewave(a));
    auto rhs = interior_xi(fourier_transform(a));
    int e = 0;
    if (lhs == rhs) e = 1;
    else if (lhs == rhs * Poly(cplx(-1.0))) e = -1;
    else throw std::logic_error("exterior_derivative_sign: no sign relation");
    if (eps && e != eps) throw std::logic_error("exterior_derivative_sign: degree-dependent sign");
    eps = e;
  }
  cache[n] = eps;
  return eps;
}

SymbolicForm exterior_derivative_freq(const SymbolicForm& f) {
  return interior_xi(f) * Poly(cplx(exterior_derivative_sign(f.dim())));
}

int codifferential_sign(int n, int freq_degree) {
  static int cache[4][4] = {};
  static std::mutex mu;
  std::lock_guard<std::mutex> lk(mu);
  int& slot = cache[n][freq_degree];
  if (slot) return slot;
  int eta = 0;
  for (unsigned K = 0; K < (1u << n); ++K) {
    if (popcount(K) != freq_degree) continue;
    auto f = SymbolicForm::monomial(n, SpaceTag::FreqCartesian, K);
    auto truth = fourier_transform(codifferential_planewave(inverse_fourier_transform(f)));
    auto shown = codifferential_freq(f);
    int e = 0;
    if (truth == shown) e = 1;
    else if (truth == shown * Poly(cplx(-1.0))) e = -1;
    else throw std::logic_error("codifferential_sign: no sign relation");
    if (eta && e != eta) throw std::logic_error("codifferential_sign: monomial-dependent sign");
    eta = e;
  }
  slot = eta ? eta : 1;
  return slot;
}

SymbolicForm codifferential_symbol(const SymbolicForm& f) {
  const int n = f.dim();
  SymbolicForm r(n, f.tag());
  for (int k = 0; k <= n; ++k) {
    SymbolicForm part(n, f.tag());
    for (auto& [m, c] : f.terms())
      if (popcount(m) == k) part.add(m, c);
    if (part.is_zero()) continue;
    r = r + codifferential_freq(part) * Poly(cplx(codifferential_sign(n, k)));
  }
  return r;
}

}  // namespace psiec
