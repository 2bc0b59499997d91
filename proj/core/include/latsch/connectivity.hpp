#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "latsch/detail/rng.hpp"
#include "latsch/lattice.hpp"
#include "latsch/momentum.hpp"

namespace latsch {

/// Point on the complexified torus T^d_C.
struct ComplexTorusPoint {
  CVec z;

  int dim() const { return static_cast<int>(z.size()); }
  /// Euclidean norm of the imaginary vector
  double im_norm() const;
  bool in_omega(double a) const { return im_norm() < a; }
  /// wrap real parts into [0, 2π)
  ComplexTorusPoint normalized() const;
};

/// C*_γ = cos({|Im ζ| <= γ}): the filled ellipse with semi-axes
/// (cosh γ, sinh γ) for γ > 0, the segment [-1, 1] for γ = 0.
struct CosineEllipse {
  double gamma = 0;
  double semi_major = 1;  // cosh γ
  double semi_minor = 0;  // sinh γ

  bool contains(Complex eta, double tol = 1e-12) const;
};

CosineEllipse cosine_ellipse(double gamma);

/// The branch ζ of cos ζ = w nearest to hint among ±acos(w) + 2πk.
/// Throws when no branch lies within π/2 of the hint.
Complex acos_branch(Complex w, Complex hint);

/// Continuous curve c(t) on the complex torus with its surface residuals.
struct PathSample {
  double lambda = 0;
  double a = 0;  // Ω_a the path must stay inside
  std::vector<double> t_grid;
  std::vector<ComplexTorusPoint> points;
  std::vector<double> residuals;     // |p(c(t), λ)| per sample
  std::vector<double> stage_marks;   // stage clocks t_j
  std::vector<std::string> notes;    // skipped/degenerate stages

  const ComplexTorusPoint& front() const { return points.front(); }
  const ComplexTorusPoint& back() const { return points.back(); }
  /// index of the sample at parameter t (exact stage marks are samples)
  size_t sample_index_at(double t) const;
};

/// Path from a regular complex Fermi point of the square lattice to the real
/// torus: imaginary parts of w_j = cos z_j are zeroed pairwise on [0, 2/5],
/// real parts are driven to -λ pairwise afterwards, ending at the all-equal
/// real point. Stage clocks sit at t_j = j/5.
PathSample square_connect(const ComplexTorusPoint& z0, double lambda, double a, int steps);

/// Hexagonal-lattice path via ζ = ((z₁+z₂)/2, (z₁-z₂)/2), η_j = cos ζ_j and
/// the surface η₂(η₁+η₂) = μ: phase of η₂ unwound on [0, 1/2], radius moved
/// into the admissible real interval on [1/2, 1].
PathSample hexagonal_connect(const ComplexTorusPoint& z0, double lambda, double a, int steps);

struct PathReport {
  double max_residual = 0;
  double endpoint_im = 0;
  double max_im_norm = 0;  // sup over samples of |Im c(t)|
  double max_jump = 0;     // torus distance between consecutive samples
  bool residual_ok = false;
  bool endpoint_ok = false;
  bool omega_ok = false;
  bool continuity_ok = false;

  bool passed() const { return residual_ok && endpoint_ok && omega_ok && continuity_ok; }
};

/// Checks residual <= tol throughout, |Im c(1)| <= tol, Ω_a containment at
/// every sample, and bounded inter-sample jumps.
PathReport verify_path(const PathSample& ps, const Symbol& sym, double lambda, double tol,
                       double endpoint_tol = 1e-10, double jump_cap = 0.5);

/// Random regular starting points on the complex Fermi surface, built by
/// perturbing a real Fermi point and re-solving one coordinate exactly.
ComplexTorusPoint random_square_surface_point(int d, double lambda, double a, detail::Rng& rng);
ComplexTorusPoint random_hexagonal_surface_point(double lambda, double a, detail::Rng& rng);

}  // namespace latsch
