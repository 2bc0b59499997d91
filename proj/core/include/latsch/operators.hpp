#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "latsch/lattice.hpp"

namespace latsch {

/// Real potential V̂ on lattice vertices. Either finitely supported or an
/// exponentially enveloped profile |V̂_j(n)| <= C e^{-alpha |n|}.
class Potential {
 public:
  enum class Kind { finite_support, exponential };
  /// seeded: deterministic per-site sign/amplitude in [-1, 1];
  /// attractive: pure envelope -C e^{-alpha |n|}.
  enum class Profile { seeded, attractive };

  static Potential zero();
  static Potential finite(std::map<VertexId, double> entries);
  static Potential exponential(double C, double alpha, std::uint64_t seed,
                               Profile profile = Profile::seeded);

  Kind kind() const { return kind_; }
  double C() const { return C_; }
  double alpha() const { return alpha_; }

  double at(const VertexId& v) const;
  /// max |V(v) - lambda| over a vertex set
  double sup_shifted(const std::vector<VertexId>& verts, double lambda) const;

 private:
  Kind kind_ = Kind::finite_support;
  std::map<VertexId, double> entries_;
  double C_ = 0, alpha_ = 1;
  std::uint64_t seed_ = 0;
  Profile profile_ = Profile::seeded;
};

/// (Δ̂ f)(v) = (1/deg v) Σ_{w~v} f(w)
Complex apply_laplacian(const LatticeSpec& spec, const LatticeFunction& f, const VertexId& v);

/// ((-Δ̂ + V̂ - λ) f)(v)
Complex apply_schrodinger(const LatticeSpec& spec, const Potential& V, double lambda,
                          const LatticeFunction& f, const VertexId& v);

/// Zero-extension truncation of -Δ̂ + V̂ to a box: full degrees are kept and
/// values outside the box are treated as 0 so the matrix agrees with the
/// infinite operator at every vertex whose neighbors all lie in the box.
struct TruncatedOperator {
  std::vector<VertexId> box;           // lexicographic (cell, n) order
  Eigen::MatrixXd matrix;              // symmetric, N x N

  int index_of(const VertexId& v) const;  // -1 if absent
};

TruncatedOperator assemble_truncated(const LatticeSpec& spec, const Potential& V, double R,
                                     int box_cap = 20000);

struct EigenSolution {
  std::vector<double> eigenvalues;  // ascending
  Eigen::MatrixXd eigenvectors;     // orthonormal columns, same order
};

/// Dense symmetric eigensolver. Contract: ascending eigenvalues, orthonormal
/// eigenvectors, residual ||T q - λ q|| <= 1e-10 ||T|| for every pair,
/// deterministic for fixed input.
EigenSolution eigensolve_symmetric(const TruncatedOperator& T);

/// value(R) = (1/R) Σ_j Σ_{|n| < R} |f_j(n)|^2 for each R in R_list.
std::vector<std::pair<double, double>> radiation_estimate(const LatticeFunction& f,
                                                          const std::vector<double>& R_list);

}  // namespace latsch
