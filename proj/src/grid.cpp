#include "psiec/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "psiec/exterior.hpp"
#include "psiec/specfun.hpp"

namespace psiec {

size_t Grid::size() const {
  size_t s = 1;
  for (int i = 0; i < n; ++i) s *= static_cast<size_t>(N);
  return s;
}

double Grid::freq(int i) const { return 2.0 * kPi * freq_index(i) / L; }

void Grid::point(size_t idx, double x[3]) const {
  x[0] = x[1] = x[2] = 0.0;
  for (int a = n - 1; a >= 0; --a) {
    x[a] = coord(static_cast<int>(idx % N));
    idx /= N;
  }
}

void Grid::wavevector(size_t idx, double xi[3]) const {
  xi[0] = xi[1] = xi[2] = 0.0;
  for (int a = n - 1; a >= 0; --a) {
    xi[a] = freq(static_cast<int>(idx % N));
    idx /= N;
  }
}

namespace {
std::mutex plan_mu;

struct PlanKey {
  int n, M;
  bool fwd;
  bool operator<(const PlanKey& o) const {
    return std::tie(n, M, fwd) < std::tie(o.n, o.M, o.fwd);
  }
};

fftw_plan get_plan(int n, int M, bool forward) {
  static std::map<PlanKey, fftw_plan> plans;
  std::lock_guard<std::mutex> lk(plan_mu);
  PlanKey k{n, M, forward};
  auto it = plans.find(k);
  if (it != plans.end()) return it->second;
  int dims[3] = {M, M, M};
  size_t total = 1;
  for (int i = 0; i < n; ++i) total *= M;
  fftw_complex* buf = fftw_alloc_complex(total);
  fftw_plan p = fftw_plan_dft(n, dims, buf, buf, forward ? FFTW_FORWARD : FFTW_BACKWARD,
                              FFTW_ESTIMATE);
  fftw_free(buf);
  plans[k] = p;
  return p;
}

void checkerboard(const Grid& g, std::vector<cplx>& d) {
  size_t total = g.size();
  for (size_t idx = 0; idx < total; ++idx) {
    size_t r = idx;
    int s = 0;
    for (int a = 0; a < g.n; ++a) {
      s += static_cast<int>(r % g.N);
      r /= g.N;
    }
    if (s % 2) d[idx] = -d[idx];
  }
}
}  // namespace

void dft(int n, int M, std::vector<cplx>& data, bool forward) {
  fftw_plan p = get_plan(n, M, forward);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(data.data()),
                   reinterpret_cast<fftw_complex*>(data.data()));
}

void forward_spectrum(const Grid& g, std::vector<cplx>& d) {
  dft(g.n, g.N, d, true);
  checkerboard(g, d);
  double s = std::pow(g.h() / std::sqrt(2.0 * kPi), g.n);
  for (auto& v : d) v *= s;
}

void inverse_spectrum(const Grid& g, std::vector<cplx>& d) {
  checkerboard(g, d);
  dft(g.n, g.N, d, false);
  double s = std::pow(std::sqrt(2.0 * kPi) / g.L, g.n);
  for (auto& v : d) v *= s;
}

std::vector<unsigned> masks_of_degree(int n, int r) {
  std::vector<std::vector<int>> seqs;
  std::vector<unsigned> out;
  // lexicographic over increasing index tuples
  std::vector<std::pair<std::vector<int>, unsigned>> all;
  for (unsigned m = 0; m < (1u << n); ++m) {
    if (popcount(m) != r) continue;
    std::vector<int> s;
    for (int i = 0; i < n; ++i)
      if (m & (1u << i)) s.push_back(i);
    all.push_back({s, m});
  }
  std::sort(all.begin(), all.end());
  for (auto& a : all) out.push_back(a.second);
  return out;
}

std::string component_name(unsigned mask, int n) {
  std::string s = "c_";
  if (mask == 0) return "c_0";
  for (int i = 0; i < n; ++i)
    if (mask & (1u << i)) s += std::to_string(i + 1);
  return s;
}

SampledFormField SampledFormField::zeros(const Grid& g, int degree) {
  SampledFormField f;
  f.grid = g;
  f.degree = degree;
  f.masks = masks_of_degree(g.n, degree);
  f.comp.assign(f.masks.size(), std::vector<double>(g.size(), 0.0));
  return f;
}

std::vector<double>& SampledFormField::at(unsigned mask) {
  for (size_t i = 0; i < masks.size(); ++i)
    if (masks[i] == mask) return comp[i];
  throw std::out_of_range("SampledFormField: no such component");
}

const std::vector<double>& SampledFormField::at(unsigned mask) const {
  for (size_t i = 0; i < masks.size(); ++i)
    if (masks[i] == mask) return comp[i];
  throw std::out_of_range("SampledFormField: no such component");
}

double SampledFormField::l2_norm() const { return std::sqrt(plancherel_spatial(*this, *this)); }

FreqFormField FreqFormField::zeros(const Grid& g, int spatial_degree) {
  FreqFormField f;
  f.grid = g;
  f.spatial_degree = spatial_degree;
  for (unsigned J : masks_of_degree(g.n, spatial_degree)) f.masks.push_back(ft_basis(g.n, J).mask);
  f.comp.assign(f.masks.size(), std::vector<cplx>(g.size(), 0.0));
  return f;
}

std::vector<cplx>& FreqFormField::at(unsigned mask) {
  for (size_t i = 0; i < masks.size(); ++i)
    if (masks[i] == mask) return comp[i];
  throw std::out_of_range("FreqFormField: no such component");
}

const std::vector<cplx>& FreqFormField::at(unsigned mask) const {
  for (size_t i = 0; i < masks.size(); ++i)
    if (masks[i] == mask) return comp[i];
  throw std::out_of_range("FreqFormField: no such component");
}

FreqFormField to_frequency(const SampledFormField& f) {
  FreqFormField out = FreqFormField::zeros(f.grid, f.degree);
  for (size_t c = 0; c < f.masks.size(); ++c) {
    auto sm = ft_basis(f.grid.n, f.masks[c]);
    std::vector<cplx> d(f.comp[c].begin(), f.comp[c].end());
    forward_spectrum(f.grid, d);
    auto& dst = out.at(sm.mask);
    for (size_t i = 0; i < d.size(); ++i) dst[i] = double(sm.sign) * d[i];
  }
  return out;
}

SampledFormField from_frequency(const FreqFormField& f, double* max_imag) {
  SampledFormField out = SampledFormField::zeros(f.grid, f.spatial_degree);
  double mi = 0.0;
  for (size_t c = 0; c < f.masks.size(); ++c) {
    auto sm = ift_basis(f.grid.n, f.masks[c]);
    std::vector<cplx> d = f.comp[c];
    inverse_spectrum(f.grid, d);
    auto& dst = out.at(sm.mask);
    for (size_t i = 0; i < d.size(); ++i) {
      dst[i] = sm.sign * d[i].real();
      mi = std::max(mi, std::abs(d[i].imag()));
    }
  }
  if (max_imag) *max_imag = mi;
  return out;
}

double plancherel_spatial(const SampledFormField& a, const SampledFormField& b) {
  if (!(a.grid == b.grid) || a.degree != b.degree)
    throw std::invalid_argument("plancherel: grid or degree mismatch");
  double s = 0.0;
  for (size_t c = 0; c < a.masks.size(); ++c) {
    const auto& x = a.comp[c];
    const auto& y = b.at(a.masks[c]);
    for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  }
  return s * std::pow(a.grid.h(), a.grid.n);
}

cplx plancherel_frequency(const FreqFormField& a, const FreqFormField& b) {
  if (!(a.grid == b.grid) || a.spatial_degree != b.spatial_degree)
    throw std::invalid_argument("plancherel: grid or degree mismatch");
  cplx s = 0.0;
  for (size_t c = 0; c < a.masks.size(); ++c) {
    const auto& x = a.comp[c];
    const auto& y = b.at(a.masks[c]);
    for (size_t i = 0; i < x.size(); ++i) s += x[i] * std::conj(y[i]);
  }
  return s * std::pow(2.0 * kPi / a.grid.L, a.grid.n);
}

SampledFormField wedge_sampled(const SampledFormField& a, const SampledFormField& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("wedge_sampled: grid mismatch");
  if (a.degree + b.degree > a.grid.n) throw std::invalid_argument("wedge_sampled: degree overflow");
  SampledFormField out = SampledFormField::zeros(a.grid, a.degree + b.degree);
  for (size_t i = 0; i < a.masks.size(); ++i)
    for (size_t j = 0; j < b.masks.size(); ++j) {
      int s = wedge_sign(a.masks[i], b.masks[j]);
      if (!s) continue;
      auto& dst = out.at(a.masks[i] | b.masks[j]);
      for (size_t p = 0; p < dst.size(); ++p) dst[p] += s * a.comp[i][p] * b.comp[j][p];
    }
  return out;
}

namespace {
// Apply a symbolic frequency operator (given as a function on monomials)
// pointwise in frequency.
template <class Op>
FreqFormField apply_symbol(const FreqFormField& f, int out_degree, Op op) {
  FreqFormField out = FreqFormField::zeros(f.grid, out_degree);
  const int n = f.grid.n;
  size_t total = f.grid.size();
  // Symbolic image of each monomial is a polynomial in ξ.
  std::vector<SymbolicForm> images;
  for (unsigned K : f.masks) images.push_back(op(SymbolicForm::monomial(n, SpaceTag::FreqCartesian, K)));
  for (size_t i = 0; i < total; ++i) {
    double xi[3];
    f.grid.wavevector(i, xi);
    for (size_t c = 0; c < f.masks.size(); ++c) {
      cplx v = f.comp[c][i];
      if (v == cplx(0.0)) continue;
      for (auto& [m, p] : images[c].terms()) out.at(m)[i] += v * p.eval(xi);
    }
  }
  return out;
}
}  // namespace

SampledFormField spectral_d(const SampledFormField& f) {
  if (f.degree >= f.grid.n) return SampledFormField::zeros(f.grid, f.grid.n);
  auto F = to_frequency(f);
  auto G = apply_symbol(F, f.degree + 1, [](const SymbolicForm& s) { return exterior_derivative_freq(s); });
  return from_frequency(G);
}

SampledFormField spectral_delta(const SampledFormField& f) {
  if (f.degree == 0) return SampledFormField::zeros(f.grid, 0);
  auto F = to_frequency(f);
  auto G = apply_symbol(F, f.degree - 1, [](const SymbolicForm& s) { return codifferential_symbol(s); });
  return from_frequency(G);
}

}  // namespace psiec
