#include "psiec/applications.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "psiec/parallel.hpp"

namespace psiec {

std::vector<double> cavity_reference(int count, double side) {
  std::vector<double> v;
  int lim = count + 2;
  double f = kPi / side;
  for (int m = 0; m <= lim; ++m)
    for (int n = 0; n <= lim; ++n)
      if (m || n) v.push_back(f * f * (m * m + n * n));
  std::sort(v.begin(), v.end());
  v.resize(count);
  return v;
}

namespace {

struct Band {
  int j, t;
  std::vector<std::array<int, 3>> ks;
  std::unique_ptr<FormAtomEvaluator> psi, curl;
};

// Tensor Gauss-Legendre rule on [-a, a]^2.
void square_rule(double a, int panels, std::vector<std::array<double, 2>>& pts,
                 std::vector<double>& wts) {
  std::vector<double> gx, gw;
  gauss_legendre(16, gx, gw);
  std::vector<double> x, w;
  double hp = 2.0 * a / panels;
  for (int p = 0; p < panels; ++p)
    for (size_t i = 0; i < gx.size(); ++i) {
      x.push_back(-a + hp * (p + 0.5 + 0.5 * gx[i]));
      w.push_back(0.5 * hp * gw[i]);
    }
  for (size_t i = 0; i < x.size(); ++i)
    for (size_t k = 0; k < x.size(); ++k) {
      pts.push_back({x[i], x[k]});
      wts.push_back(w[i] * w[k]);
    }
}

}  // namespace

CavityResult cavity_solve(const CavityProblem& p, const WindowSet& w) {
  auto t0 = std::chrono::steady_clock::now();
  if (p.J < 1) throw std::invalid_argument("cavity: J >= 1");
  CavityResult res;
  res.J = p.J;
  res.penalty = p.penalty > 0 ? p.penalty : 40.0 * std::ldexp(1.0, p.J);
  const double a = 0.5 * p.side;
  const AtomType psi_t{2, 1, Nu::delta, 1}, curl_t{2, 2, Nu::d, 1};
  SpatialOptions opt;
  opt.y_max = 2.0 * (a + p.margin) * std::sqrt(2.0) + 4.0;

  std::vector<Band> bands;
  std::vector<FormAtomIndex> atoms;
  std::vector<std::pair<int, int>> atom_band;  // (band, k slot)
  int T = orientation_count(w, 2);
  for (int j = -1; j < p.J; ++j)
    for (int t = 0; t < (j < 0 ? 1 : T); ++t) {
      Band b{j, t, {}, nullptr, nullptr};
      double h = std::ldexp(1.0, -level_scale(j));
      int kmax = static_cast<int>(std::floor((a + p.margin * h) / h));
      for (int k1 = -kmax; k1 <= kmax; ++k1)
        for (int k2 = -kmax; k2 <= kmax; ++k2) {
          b.ks.push_back({k1, k2, 0});
          atoms.push_back({psi_t, j, {k1, k2, 0}, t});
          atom_band.emplace_back(static_cast<int>(bands.size()), static_cast<int>(b.ks.size() - 1));
        }
      b.psi = std::make_unique<FormAtomEvaluator>(psi_t, j, t, w, opt);
      b.curl = std::make_unique<FormAtomEvaluator>(curl_t, j, t, w, opt);
      bands.push_back(std::move(b));
    }
  const int A = static_cast<int>(atoms.size());
  res.atoms = A;

  int panels = p.panels_per_side > 0 ? p.panels_per_side : std::max(4, 1 << p.J);
  std::vector<std::array<double, 2>> pts;
  std::vector<double> wts;
  square_rule(a, panels, pts, wts);
  const int P = static_cast<int>(pts.size());

  // Sample ψ (2 components) and dψ at the quadrature points, weighted by √w.
  Eigen::MatrixXd B1(P, A), B2(P, A), C(P, A);
  auto eval_atom = [&](int q, double x, double y, double* v1, double* v2, double* c) {
    const auto& b = bands[atom_band[q].first];
    const auto& k = b.ks[atom_band[q].second];
    double h = std::ldexp(1.0, -level_scale(b.j));
    double yy[3] = {x - k[0] * h, y - k[1] * h, 0.0};
    auto u = b.psi->eval(yy);
    *v1 = u[0];
    *v2 = u[1];
    if (c) *c = b.curl->eval(yy)[0];
  };
  parallel_for(A, [&](long q) {
    for (int i = 0; i < P; ++i) {
      double s = std::sqrt(wts[i]), v1, v2, c;
      eval_atom(q, pts[i][0], pts[i][1], &v1, &v2, &c);
      B1(i, q) = s * v1;
      B2(i, q) = s * v2;
      C(i, q) = s * c;
    }
  });
  Eigen::MatrixXd M = B1.transpose() * B1;
  M.noalias() += B2.transpose() * B2;
  Eigen::MatrixXd K = C.transpose() * C;
  B1.resize(0, 0);
  B2.resize(0, 0);
  C.resize(0, 0);

  // Tangential trace penalty on the four sides.
  {
    std::vector<double> gx, gw;
    gauss_legendre(16, gx, gw);
    int nb = panels * 16 * 4;
    Eigen::MatrixXd Tm(nb, A);
    double hp = 2.0 * a / panels;
    parallel_for(A, [&](long q) {
      int row = 0;
      for (int side = 0; side < 4; ++side)
        for (int pc = 0; pc < panels; ++pc)
          for (size_t i = 0; i < gx.size(); ++i, ++row) {
            double s = -a + hp * (pc + 0.5 + 0.5 * gx[i]);
            double wt = 0.5 * hp * gw[i];
            double x, y;
            bool vertical = side < 2;
            if (vertical) x = side == 0 ? -a : a, y = s;
            else x = s, y = side == 2 ? -a : a;
            double v1, v2;
            eval_atom(q, x, y, &v1, &v2, nullptr);
            Tm(row, q) = std::sqrt(wt) * (vertical ? v2 : v1);
          }
    });
    K.noalias() += res.penalty * (Tm.transpose() * Tm);
  }

  // Reduce to the numerical range of the Gram matrix, then solve.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> gm(M);
  const auto& lm = gm.eigenvalues();
  double top = lm.maxCoeff();
  std::vector<int> keep;
  for (int i = 0; i < A; ++i)
    if (lm(i) > p.gram_cutoff * top) keep.push_back(i);
  res.rank = static_cast<int>(keep.size());
  Eigen::MatrixXd Q(A, res.rank);
  for (int c = 0; c < res.rank; ++c) Q.col(c) = gm.eigenvectors().col(keep[c]) / std::sqrt(lm(keep[c]));
  Eigen::MatrixXd Kr = Q.transpose() * K * Q;
  Kr = 0.5 * (Kr + Kr.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Kr);
  std::vector<int> chosen;
  for (int i = 0; i < res.rank && static_cast<int>(chosen.size()) < p.eig_count; ++i)
    if (es.eigenvalues()(i) >= p.min_eigenvalue) chosen.push_back(i);
  res.reference = cavity_reference(p.eig_count, p.side);
  for (size_t c = 0; c < chosen.size(); ++c) {
    int i = chosen[c];
    double lam = es.eigenvalues()(i);
    Eigen::VectorXd y = es.eigenvectors().col(i);
    res.max_residual = std::max(res.max_residual, (Kr * y - lam * y).norm() / y.norm());
    res.eigenvalues.push_back(lam);
    res.errors.push_back(std::abs(lam - res.reference[c]));
  }

  // Leakage: energy in the margin frame around the square.
  {
    double h = 1.0 / 16.0;
    double outer = a + 1.0;
    int n = static_cast<int>(std::ceil(2.0 * outer / h));
    std::vector<std::array<double, 2>> out_pts;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        double x = -outer + (i + 0.5) * h, y = -outer + (k + 0.5) * h;
        if (std::abs(x) > a || std::abs(y) > a) out_pts.push_back({x, y});
      }
    Eigen::MatrixXd V1(out_pts.size(), A), V2(out_pts.size(), A);
    parallel_for(A, [&](long q) {
      for (size_t i = 0; i < out_pts.size(); ++i) {
        double v1, v2;
        eval_atom(q, out_pts[i][0], out_pts[i][1], &v1, &v2, nullptr);
        V1(i, q) = v1;
        V2(i, q) = v2;
      }
    });
    for (int i : chosen) {
      Eigen::VectorXd v = Q * es.eigenvectors().col(i);
      double inside = v.dot(M * v);
      double outside = h * h * ((V1 * v).squaredNorm() + (V2 * v).squaredNorm());
      res.leakage.push_back(outside / (inside + outside));
    }
  }

  // Full-space Galerkin sparsity against the level-overlap rule.
  std::vector<long> zeros(A, 0);
  parallel_for(A, [&](long q) {
    for (int r = static_cast<int>(q); r < A; ++r)
      if (galerkin_entry(atoms[q], atoms[r], w) == 0.0) zeros[q] += q == r ? 1 : 2;
  });
  for (int q = 0; q < A; ++q) {
    res.zero_entries += zeros[q];
    for (int r = q; r < A; ++r) {
      long mult = q == r ? 1 : 2;
      res.total_entries += mult;
      if (std::abs(atoms[q].j - atoms[r].j) > 1) res.predicted_zero_entries += mult;
    }
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

CirculationStudy circulation_study(double sigma, const double center[2], double radius, int J,
                                   const WindowSet& w, int grid_points, double extent,
                                   double rotation) {
  CirculationStudy out;
  out.sigma = sigma;
  double c = std::cos(rotation), s = std::sin(rotation);
  out.center[0] = c * center[0] - s * center[1];
  out.center[1] = s * center[0] + c * center[1];
  CharacteristicShape disc;
  disc.size = radius;
  Grid g{2, grid_points, extent};
  FreqFormField W = FreqFormField::zeros(g, 2);
  auto sm = ft_basis(2, 0b11u);
  auto& dst = W.at(sm.mask);
  for (size_t i = 0; i < g.size(); ++i) {
    double xi[3];
    g.wavevector(i, xi);
    double r2 = xi[0] * xi[0] + xi[1] * xi[1];
    dst[i] = double(sm.sign) * sigma * sigma * std::exp(-0.5 * sigma * sigma * r2) *
             std::polar(1.0, -(xi[0] * out.center[0] + xi[1] * out.center[1]));
  }
  auto alpha = analyze(W, J, w);
  out.leakage = alpha.leakage;
  std::vector<double> gx, gw;
  gauss_legendre(96, gx, gw);
  const int nth = 512;
  double ref = 0.0;
  for (size_t i = 0; i < gx.size(); ++i) {
    double r = 0.5 * radius * (gx[i] + 1.0);
    for (int m = 0; m < nth; ++m) {
      double th = 2.0 * kPi * m / nth;
      double X = r * std::cos(th) - out.center[0], Y = r * std::sin(th) - out.center[1];
      ref += 0.5 * radius * gw[i] * r * (2.0 * kPi / nth) *
             std::exp(-(X * X + Y * Y) / (2.0 * sigma * sigma));
    }
  }
  out.reference = ref;
  out.levels = stokes_residual(alpha, disc, w, ref);
  return out;
}

std::string circulation_csv(const CirculationStudy& s) {
  std::ostringstream os;
  os << "J,boundary,interior,route_gap,residual\n";
  char buf[160];
  for (const auto& L : s.levels) {
    std::snprintf(buf, sizeof buf, "%d,%.15g,%.15g,%.3e,%.3e\n", L.J, L.boundary_sum,
                  L.interior_sum, L.route_gap, L.residual);
    os << buf;
  }
  return os.str();
}

}  // namespace psiec
