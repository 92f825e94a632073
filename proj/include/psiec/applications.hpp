#pragma once
// Demo problems: the π-square resonant cavity and the Kelvin circulation study.

#include <string>
#include <vector>

#include "psiec/frame.hpp"

namespace psiec {

struct CavityProblem {
  double side = kPi;       // square [-side/2, side/2]^2
  int J = 2;               // co-exact bands j = -1..J-1
  int eig_count = 6;
  double penalty = 0.0;    // tangential trace penalty; 0 selects 40 * 2^J
  double margin = 1.0;     // atom centres within side/2 + margin * 2^{-s}
  int panels_per_side = 0; // quadrature panels (16 GL nodes each); 0 = auto
  double gram_cutoff = 1e-9;  // relative eigenvalue cut of the Gram matrix
  double min_eigenvalue = 0.2;  // smaller values are reported as spurious
};

struct CavityResult {
  int J = 0;
  int atoms = 0;
  int rank = 0;  // retained Gram rank
  std::vector<double> eigenvalues;
  std::vector<double> reference;
  std::vector<double> errors;   // |λ - λ_ref|
  std::vector<double> leakage;  // energy outside the square / energy in the margin box
  double max_residual = 0.0;    // ‖K v - λ M v‖ / ‖v‖ in the reduced basis
  double penalty = 0.0;
  // Full-space Galerkin sparsity from level separation.
  long zero_entries = 0;
  long predicted_zero_entries = 0;
  long total_entries = 0;
  double seconds = 0.0;
};

// λ = m² + n² (m, n >= 0, not both 0), sorted.
std::vector<double> cavity_reference(int count, double side = kPi);
CavityResult cavity_solve(const CavityProblem& p, const WindowSet& w);

struct CirculationStudy {
  double sigma = 0.12;
  double center[2] = {0.3, -0.2};
  double reference = 0.0;  // ∫_disc ω by polar quadrature
  double leakage = 0.0;
  std::vector<StokesLevel> levels;
};

// Gaussian vorticity exp(-|x - c|² / 2σ²) against the unit disc.
CirculationStudy circulation_study(double sigma, const double center[2], double radius, int J,
                                   const WindowSet& w, int grid_points = 512,
                                   double extent = 16.0, double rotation = 0.0);
std::string circulation_csv(const CirculationStudy& s);

}  // namespace psiec
