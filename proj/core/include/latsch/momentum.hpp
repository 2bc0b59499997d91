#pragma once

#include <complex>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "latsch/lattice.hpp"

namespace latsch {

using CVec = std::vector<Complex>;

/// p(z, λ) = Σ_m e^{-i m·z} Σ_r c_{m,r} λ^r, the exact finite expansion of
/// det(H₀(z) - λ). Supports term-wise analytic derivatives in z and λ.
class CharPolyExpansion {
 public:
  using Terms = std::map<IntVec, std::vector<Complex>>;  // mode -> λ-poly coeffs

  CharPolyExpansion() = default;
  explicit CharPolyExpansion(Terms terms) : terms_(std::move(terms)) {}

  const Terms& terms() const { return terms_; }

  Complex eval(const CVec& z, Complex lambda) const;
  CVec grad_z(const CVec& z, Complex lambda) const;
  Complex d_lambda(const CVec& z, Complex lambda) const;
  Eigen::MatrixXcd hessian_z(const CVec& z, Complex lambda) const;
  CVec grad_z_dlambda(const CVec& z, Complex lambda) const;

  /// Σ |c_{m,r}| |m|^k Λ^r, crude derivative bounds used for grid tolerances.
  double coeff_bound(int mode_power, double lambda_bound) const;

 private:
  Terms terms_;
};

/// s×s Hermitian trigonometric-polynomial symbol H₀(x) = Σ_m A_m e^{-i m·x}.
class Symbol {
 public:
  Symbol(int d, int s, std::map<IntVec, Eigen::MatrixXcd> coeffs);

  int d() const { return d_; }
  int size() const { return s_; }
  const std::map<IntVec, Eigen::MatrixXcd>& coeffs() const { return coeffs_; }

  Eigen::MatrixXcd evaluate(const CVec& z) const;
  Eigen::MatrixXcd evaluate(const RealVec& x) const;
  /// ∂H₀/∂z_axis
  Eigen::MatrixXcd derivative(const CVec& z, int axis) const;

  const CharPolyExpansion& expansion() const { return expansion_; }

  /// Σ ||A_m||_F |m|, a Lipschitz bound for every band function.
  double band_lipschitz_bound() const;
  /// Σ ||A_m||_F, a bound on ||H₀(x)|| for real x.
  double sup_norm_bound() const;

 private:
  int d_;
  int s_;
  std::map<IntVec, Eigen::MatrixXcd> coeffs_;
  CharPolyExpansion expansion_;
};

/// H₀(x)_{jk} = -(1/sqrt(deg_j deg_k)) Σ_{(j,k,m)} e^{-i m·x}
Symbol symbol_from_lattice(const LatticeSpec& spec);

/// det(H₀(z) - λ) by LU with partial pivoting.
Complex char_poly(const Symbol& sym, const CVec& z, Complex lambda);
Complex char_poly(const Symbol& sym, const RealVec& x, Complex lambda);

/// Analytic ∇_z p from the Fourier expansion (never finite differences).
CVec grad_char_poly(const Symbol& sym, const CVec& z, Complex lambda);
CVec grad_char_poly(const Symbol& sym, const RealVec& x, Complex lambda);

/// Eigenvalues of the Hermitian matrix H₀(x), ascending.
std::vector<double> band_functions(const Symbol& sym, const RealVec& x);

struct Interval {
  double lo = 0;
  double hi = 0;
};

/// σ(H₀) as a union of closed intervals from an inclusive grid sweep
/// (grid_per_axis points per axis including both 0 and 2π).
std::vector<Interval> spectrum(const Symbol& sym, int grid_per_axis);

struct ThresholdsResult {
  std::vector<double> values;  // sorted, deduplicated at 1e-6
  /// candidates where the refinement did not converge; the grid value was kept
  std::vector<std::pair<RealVec, double>> unconverged;
};

/// The set T̃ of λ for which some real x has p(x,λ) = 0 and ∇_x p(x,λ) = 0,
/// found as critical values of the band functions: grid candidates refined by
/// damped Gauss-Newton on (p, ∇_x p) = 0, flat bands detected directly.
ThresholdsResult thresholds(const Symbol& sym, int grid_per_axis, double refine_tol = 1e-12);

struct FermiSample {
  double lambda = 0;
  double tol = 0;
  std::vector<RealVec> points;       // torus coordinates in [0, 2π)^d
  std::vector<double> abs_p;         // |p(x, λ)| per point
  std::vector<double> grad_norms;    // |∇_x p| per point

  /// |∇_x p| < cutoff_scale (1 + |λ|) flags a singular Fermi point
  bool is_singular(size_t i, double cutoff_scale = 1e-6) const;
};

/// Sample of the Fermi surface M_λ: sign changes of p along grid lines are
/// refined by 1-D Newton; every returned point satisfies |p| <= tol.
FermiSample fermi_slice(const Symbol& sym, double lambda, int grid_per_axis, double tol);

struct ExclusionSetT1 {
  bool specified = false;
  std::vector<double> points;
  std::vector<Interval> intervals;

  bool contains(double lambda, double tol = 1e-12) const;
};

/// The reference exclusion set T₁ per lattice; triangular is reported
/// unspecified.
ExclusionSetT1 exclusion_set_T1(BuiltinLattice which, int d = 2);

}  // namespace latsch
