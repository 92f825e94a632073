// psiec: command-line front end. Exit codes: 0 ok, 1 validation/I-O
// failure, 2 usage error.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "psiec/applications.hpp"
#include "psiec/exterior.hpp"
#include "psiec/frame.hpp"
#include "psiec/io.hpp"

using namespace psiec;
using nlohmann::json;

namespace {

struct Common {
  std::string config;
  std::string json_out;
};

WindowSet windows_from(const Common& c) {
  return c.config.empty() ? WindowSet{} : load_windows_file(c.config);
}

void emit_summary(const json& j, const Common& c) {
  if (!c.json_out.empty()) write_json(j, c.json_out);
}

bool power_of_two(int N) { return N > 0 && (N & (N - 1)) == 0; }

std::string frame_name(int n, unsigned mask) {
  static const char* n2[] = {"dθ̂", "dr̂"};
  static const char* n3[] = {"dθ̂", "dφ̂", "dr̂"};
  if (!mask) return "1";
  std::string s;
  for (int b = 0; b < n; ++b)
    if (mask & (1u << b)) s += (s.empty() ? "" : "∧") + std::string(n == 2 ? n2[b] : n3[b]);
  return s;
}

std::string monomial_name(int n, unsigned mask, const char* base) {
  if (!mask) return "1";
  std::string s;
  for (int b = 0; b < n; ++b)
    if (mask & (1u << b)) s += (s.empty() ? "" : "∧") + std::string(base) + std::to_string(b + 1);
  return s;
}

std::string cplx_str(cplx z) {
  if (z == cplx(1.0)) return "+1";
  if (z == cplx(-1.0)) return "-1";
  if (z == cplx(0.0, 1.0)) return "+i";
  if (z == cplx(0.0, -1.0)) return "-i";
  char b[48];
  std::snprintf(b, sizeof b, "(%g%+gi)", z.real(), z.imag());
  return b;
}

AtomType parse_type(int n, int r, const std::string& nu, int a) {
  AtomType t{n, r, parse_nu(nu), a};
  auto fam = families(n, r, t.nu);
  if (std::find(fam.begin(), fam.end(), a) == fam.end())
    throw CLI::ValidationError("type", "no atom family (" + t.str() + ") in dimension " +
                                            std::to_string(n));
  return t;
}

int cmd_check(const Common& c, int levels) {
  WindowSet w = windows_from(c);
  json j;
  auto radii = calderon_grid(levels);
  double cal = calderon_check(w.radial, levels, radii);
  double cal_st = calderon_check(make_steerable_radial(), levels, radii);
  auto a2 = admissibility_2d(w.angular2d);
  GauntTable gaunt(std::max(1, 2 * w.angular3d.L()));
  auto a3 = admissibility_3d(w.angular3d, gaunt);
  bool ok = cal < 1e-10 && a2.pass && a3.pass;
  std::printf("radial %-10s calderon residual %.3e (steerable %.3e)\n", w.radial.name().c_str(),
              cal, cal_st);
  std::printf("angular2d %-10s T=%d N=%d %s max_offdiag %.3e trace %.6f%s%s\n",
              w.angular2d.label().c_str(), w.angular2d.T(), w.angular2d.N(),
              a2.pass ? "PASS" : "FAIL", a2.max_offdiag, a2.trace, a2.message.empty() ? "" : " : ",
              a2.message.c_str());
  std::printf("angular3d %-10s T=%d L=%d %s max_offdiag %.3e c00 %.6f%s%s\n",
              w.angular3d.label().c_str(), w.angular3d.T(), w.angular3d.L(),
              a3.pass ? "PASS" : "FAIL", a3.max_offdiag, a3.trace, a3.message.empty() ? "" : " : ",
              a3.message.c_str());
  j["config"] = c.config;
  j["window_hash"] = window_hash(w);
  j["calderon"] = cal;
  j["angular2d"] = {{"pass", a2.pass}, {"max_offdiag", a2.max_offdiag}, {"message", a2.message}};
  j["angular3d"] = {{"pass", a3.pass}, {"max_offdiag", a3.max_offdiag}, {"fail_l", a3.fail_l},
                    {"fail_m", a3.fail_m}, {"message", a3.message}};
  j["pass"] = ok;
  emit_summary(j, c);
  return ok ? 0 : 1;
}

int cmd_tables(int n) {
  std::printf("# Fourier transform of the spatial basis, n = %d\n", n);
  for (int r = 0; r <= n; ++r)
    for (unsigned m : masks_of_degree(n, r)) {
      auto sm = ft_basis(n, m);
      std::printf("F(%s) = %s %s\n", monomial_name(n, m, "dx").c_str(), sm.sign > 0 ? "+" : "-",
                  monomial_name(n, sm.mask, "∂ξ").c_str());
    }
  std::printf("\n# Wavelet frequency table, n = %d\n", n);
  std::printf("# psi^(r,nu,a)_hat = c_j W_j(rho) gamma_t phase rho^(-w) E\n");
  for (const auto& [t, d] : freq_table(n))
    std::printf("%-10s phase %-3s w %d  E = %s\n", t.str().c_str(), cplx_str(d.phase).c_str(),
                d.weight_power, frame_name(n, d.mask).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"psiec: differential form polar wavelets"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* s) {
    s->add_option("--config", common.config, "window configuration JSON")->check(CLI::ExistingFile);
    s->add_option("--json", common.json_out, "write a JSON run summary");
  };

  int levels = 6;
  auto* check = app.add_subcommand("check-admissibility", "Calderón and angular admissibility");
  add_common(check);
  check->add_option("--levels", levels, "levels for the Calderón check");

  int dim = 2;
  auto* tables = app.add_subcommand("tables", "FT basis and wavelet frequency tables");
  tables->add_option("--dim", dim)->check(CLI::IsMember({2, 3}));

  int degree = 1, family = 1, level = 0, orient = 0, N = 128, seed = 1;
  double extent = 16.0;
  std::string nu = "d", out, format = "csv", method = "fft";
  std::vector<int> kvec;
  auto* emit = app.add_subcommand("emit-wavelet", "sample one atom on a grid");
  add_common(emit);
  emit->add_option("--dim", dim)->check(CLI::IsMember({2, 3}));
  emit->add_option("--degree", degree);
  emit->add_option("--type", nu, "d or delta")->check(CLI::IsMember({"d", "delta"}));
  emit->add_option("--family", family);
  emit->add_option("--level", level)->check(CLI::Range(-1, 12));
  emit->add_option("--k", kvec, "translation, one integer per axis")->delimiter(',');
  emit->add_option("--orientation", orient);
  emit->add_option("--grid", N);
  emit->add_option("--extent", extent);
  emit->add_option("--out", out)->required();
  emit->add_option("--format", format)->check(CLI::IsMember({"csv", "raw"}));
  emit->add_option("--method", method, "fft or closed")->check(CLI::IsMember({"fft", "closed"}));

  auto* round = app.add_subcommand("frame-roundtrip", "analyze + synthesize a random field");
  add_common(round);
  round->add_option("--dim", dim)->check(CLI::IsMember({2, 3}));
  round->add_option("--degree", degree);
  round->add_option("--levels", levels);
  round->add_option("--grid", N);
  round->add_option("--extent", extent);
  round->add_option("--seed", seed);
  std::string coeff_out;
  round->add_option("--coeffs", coeff_out, "write coefficients CSV");

  auto* lap = app.add_subcommand("laplacian-table", "Galerkin Laplace-de Rham matrix");
  add_common(lap);
  lap->add_option("--dim", dim)->check(CLI::IsMember({2, 3}));
  lap->add_option("--degree", degree);
  lap->add_option("--type", nu)->check(CLI::IsMember({"d", "delta"}));
  lap->add_option("--family", family);
  lap->add_option("--levels", levels);
  lap->add_option("--out", out);

  double sigma = 0.12, radius = 1.0;
  auto* stokes = app.add_subcommand("stokes-demo", "Kelvin circulation on the unit disc");
  add_common(stokes);
  stokes->add_option("--levels", levels);
  stokes->add_option("--sigma", sigma);
  stokes->add_option("--radius", radius);
  stokes->add_option("--grid", N);
  stokes->add_option("--extent", extent);
  stokes->add_option("--out", out, "CSV table");

  auto* fiber = app.add_subcommand("fiber-demo", "integrate a 3D co-exact 2-form atom along x3");
  add_common(fiber);
  fiber->add_option("--level", level)->check(CLI::Range(0, 6));
  fiber->add_option("--orientation", orient);
  int fiber_N = 128;
  double fiber_L = 32.0;
  fiber->add_option("--grid", fiber_N);
  fiber->add_option("--extent", fiber_L);
  fiber->add_option("--out", out, "CSV of the integrated field");

  int jlo = 1;
  auto* cavity = app.add_subcommand("cavity", "resonant cavity on the π-square");
  add_common(cavity);
  cavity->add_option("--levels", levels, "finest resolution J");
  cavity->add_option("--from", jlo, "coarsest resolution J");
  int eigs = 6;
  cavity->add_option("--eigs", eigs);
  double penalty = 0.0;
  cavity->add_option("--penalty", penalty, "tangential penalty (0 = automatic)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (check->parsed()) return cmd_check(common, levels);
    if (tables->parsed()) return cmd_tables(dim);

    if (emit->parsed()) {
      if (!power_of_two(N) || extent <= 0) throw CLI::ValidationError("grid", "N must be a power of two, L > 0");
      WindowSet w = windows_from(common);
      AtomType ty = parse_type(dim, degree, nu, family);
      FormAtomIndex idx{ty, level, {0, 0, 0}, orient};
      for (size_t a = 0; a < kvec.size() && a < 3; ++a) idx.k[a] = kvec[a];
      Grid g{dim, N, extent};
      double mi = 0.0;
      SampledFormField f = SampledFormField::zeros(g, degree);
      if (method == "fft") {
        f = sample_atom(idx, g, w, &mi);
      } else {
        FormAtomEvaluator ev(ty, level, orient, w);
        double xk[3];
        atom_center(dim, level, idx.k, xk);
        for (size_t i = 0; i < g.size(); ++i) {
          double x[3], y[3] = {0, 0, 0}, im = 0.0;
          g.point(i, x);
          for (int a = 0; a < dim; ++a) y[a] = x[a] - xk[a];
          auto v = ev.eval(y, &im);
          mi = std::max(mi, im);
          for (size_t c = 0; c < v.size(); ++c) f.at(ev.spatial_masks()[c])[i] = v[c];
        }
      }
      if (format == "csv") write_field_csv(f, out);
      else write_field_raw(f, out);
      std::printf("wrote %s (%s, %zu points, max imag %.2e)\n", out.c_str(), ty.str().c_str(),
                  g.size(), mi);
      emit_summary({{"atom", ty.str()}, {"level", level}, {"grid", N}, {"extent", extent},
                    {"max_imag", mi}, {"method", method}, {"window_hash", window_hash(w)}},
                   common);
      return 0;
    }

    if (round->parsed()) {
      if (!power_of_two(N) || extent <= 0) throw CLI::ValidationError("grid", "N must be a power of two, L > 0");
      WindowSet w = windows_from(common);
      Grid g{dim, N, extent};
      double hi = std::ldexp(kPi, levels - 2);
      if (hi > kPi * N / extent) throw CLI::ValidationError("levels", "grid too coarse for the requested levels");
      auto f = random_bandlimited(g, degree, 0.5 * kPi, hi, static_cast<unsigned long long>(seed));
      auto F = to_frequency(f);
      auto c = analyze(F, levels, w);
      double mi = 0.0;
      auto rec = synthesize(c, w, &mi);
      double num = 0.0, den = 0.0;
      for (size_t k = 0; k < f.comp.size(); ++k)
        for (size_t i = 0; i < g.size(); ++i) {
          double d = rec.comp[k][i] - f.comp[k][i];
          num += d * d;
          den += f.comp[k][i] * f.comp[k][i];
        }
      double rel = den > 0 ? std::sqrt(num / den) : std::sqrt(num);
      auto P = parseval_report(F, c);
      double ps = plancherel_spatial(f, rec), pf = plancherel_frequency(F, to_frequency(rec)).real();
      double pl = std::abs(ps - pf) / std::max(std::abs(ps), 1e-300);
      std::printf("n=%d r=%d J=%d atoms=%zu rel_error %.3e parseval %.3e plancherel %.3e leakage %.3e\n",
                  dim, degree, levels, c.count(), rel, P.rel_error(), pl, c.leakage);
      if (c.leakage_warning()) std::printf("warning: out-of-cover energy %.3e\n", c.leakage);
      if (!coeff_out.empty()) write_coefficients_csv(c, coeff_out, 1e-14);
      bool ok = rel < 1e-5 && P.rel_error() < 1e-5 && pl < 1e-6;
      emit_summary({{"dim", dim}, {"degree", degree}, {"levels", levels}, {"seed", seed},
                    {"rel_error", rel}, {"parseval", P.rel_error()}, {"plancherel", pl},
                    {"leakage", c.leakage}, {"window_hash", window_hash(w)}, {"pass", ok}},
                   common);
      return ok ? 0 : 1;
    }

    if (lap->parsed()) {
      WindowSet w = windows_from(common);
      AtomType ty = parse_type(dim, degree, nu, family);
      std::vector<FormAtomIndex> atoms;
      for (auto [j, t] : band_list(ty, levels, w)) atoms.push_back({ty, j, {0, 0, 0}, t});
      double mi = 0.0;
      auto D = galerkin_laplacian(atoms, atoms, w, &mi);
      long zeros = 0, predicted = 0;
      std::ostringstream os;
      os << "q_j,q_t,p_j,p_t,value\n";
      for (size_t q = 0; q < atoms.size(); ++q)
        for (size_t p = 0; p < atoms.size(); ++p) {
          bool pred = std::abs(atoms[q].j - atoms[p].j) > 1;
          predicted += pred;
          zeros += D[q][p] == 0.0;
          char b[96];
          std::snprintf(b, sizeof b, "%d,%d,%d,%d,%.15g\n", atoms[q].j, atoms[q].t, atoms[p].j,
                        atoms[p].t, D[q][p]);
          os << b;
        }
      if (!out.empty()) {
        std::ofstream f(out);
        if (!f) throw IoError("cannot open " + out);
        f << os.str();
      } else {
        std::cout << os.str();
      }
      bool ok = zeros == predicted;
      std::fprintf(stderr, "%s: %zu atoms, exact zeros %ld, level-separation prediction %ld, max imag %.2e\n",
                   ty.str().c_str(), atoms.size(), zeros, predicted, mi);
      emit_summary({{"atom", ty.str()}, {"atoms", atoms.size()}, {"zeros", zeros},
                    {"predicted_zeros", predicted}, {"max_imag", mi}, {"pass", ok}},
                   common);
      return ok ? 0 : 1;
    }

    if (stokes->parsed()) {
      WindowSet w = windows_from(common);
      double c0[2] = {0.3, -0.2};
      auto st = circulation_study(sigma, c0, radius, levels, w, N < 256 ? 512 : N, extent);
      std::string csv = circulation_csv(st);
      std::cout << csv;
      if (!out.empty()) {
        std::ofstream f(out);
        if (!f) throw IoError("cannot open " + out);
        f << csv;
      }
      bool dec = true;
      json rows = json::array();
      for (size_t i = 0; i < st.levels.size(); ++i) {
        if (i > 0 && st.levels[i].J > 2 && !(st.levels[i].residual < st.levels[i - 1].residual))
          dec = false;
        rows.push_back({{"J", st.levels[i].J}, {"residual", st.levels[i].residual},
                        {"route_gap", st.levels[i].route_gap}});
      }
      std::printf("circulation %.12f, decreasing from J=2: %s\n", st.reference, dec ? "yes" : "no");
      emit_summary({{"reference", st.reference}, {"sigma", sigma}, {"levels", rows},
                    {"window_hash", window_hash(w)}, {"pass", dec}},
                   common);
      return dec ? 0 : 1;
    }

    if (fiber->parsed()) {
      if (!power_of_two(fiber_N) || fiber_L <= 0) throw CLI::ValidationError("grid", "N must be a power of two, L > 0");
      WindowSet w = windows_from(common);
      if (common.config.empty()) w.angular3d = AngularWindow3D::directional();
      Grid g{3, fiber_N, fiber_L};
      FormAtomIndex idx{{3, 2, Nu::delta, 1}, level, {1, -1, 2}, orient};
      auto f3 = sample_atom(idx, g, w);
      auto f2 = fiber_integrate_sampled(f3, 2);
      auto fa = fiber_integrate(idx, 2, w);
      FiberEvaluator ev(fa, w);
      double num = 0.0, den = 0.0;
      for (size_t i = 0; i < f2.grid.size(); ++i) {
        double x[3];
        f2.grid.point(i, x);
        std::vector<double> v(fa.masks2.size(), 0.0);
        for (int m1 = -1; m1 <= 1; ++m1)
          for (int m2 = -1; m2 <= 1; ++m2) {
            double xx[2] = {x[0] + m1 * fiber_L, x[1] + m2 * fiber_L};
            auto u = ev.eval(xx);
            for (size_t c = 0; c < v.size(); ++c) v[c] += u[c];
          }
        for (size_t c = 0; c < v.size(); ++c) {
          num += std::pow(f2.comp[c][i] - v[c], 2);
          den += f2.comp[c][i] * f2.comp[c][i];
        }
      }
      double rel = std::sqrt(num / den);
      std::printf("fiber of %s along x3 -> %s (sign %+d), rel error %.3e\n", idx.type.str().c_str(),
                  fa.has_table_atom ? fa.type2.str().c_str() : "generic", fa.table_sign, rel);
      if (!out.empty()) write_field_csv(f2, out);
      json bb = json::array();
      for (auto b : fa.beta_bar) bb.push_back({b.real(), b.imag()});
      emit_summary({{"rel_error", rel}, {"beta_bar", bb}, {"pass", rel < 1e-3}}, common);
      return rel < 1e-3 ? 0 : 1;
    }

    if (cavity->parsed()) {
      WindowSet w = windows_from(common);
      if (common.config.empty()) w.angular2d = AngularWindow2D::cos_power(1, 5);
      json runs = json::array();
      for (int J = jlo; J <= levels; ++J) {
        CavityProblem p;
        p.J = J;
        p.eig_count = eigs;
        p.penalty = penalty;
        auto r = cavity_solve(p, w);
        std::printf("J=%d atoms=%d rank=%d penalty=%.0f residual %.1e zeros %ld/%ld (predicted %ld) %.1fs\n",
                    J, r.atoms, r.rank, r.penalty, r.max_residual, r.zero_entries, r.total_entries,
                    r.predicted_zero_entries, r.seconds);
        for (size_t i = 0; i < r.eigenvalues.size(); ++i)
          std::printf("  lambda %.6f  reference %.0f  leakage %.3f\n", r.eigenvalues[i],
                      r.reference[i], r.leakage[i]);
        runs.push_back({{"J", J}, {"eigenvalues", r.eigenvalues}, {"reference", r.reference},
                        {"leakage", r.leakage}, {"residual", r.max_residual},
                        {"zeros", r.zero_entries}, {"predicted_zeros", r.predicted_zero_entries}});
      }
      emit_summary({{"runs", runs}, {"window_hash", window_hash(w)}}, common);
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const IoError& e) {
    std::fprintf(stderr, "I/O error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
