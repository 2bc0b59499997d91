#include "latsch/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "latsch/detail/rng.hpp"

namespace latsch {

Potential Potential::zero() { return Potential{}; }

Potential Potential::finite(std::map<VertexId, double> entries) {
  Potential p;
  p.kind_ = Kind::finite_support;
  p.entries_ = std::move(entries);
  return p;
}

Potential Potential::exponential(double C, double alpha, std::uint64_t seed, Profile profile) {
  if (C <= 0 || alpha <= 0) throw std::invalid_argument("exponential potential needs C > 0, alpha > 0");
  Potential p;
  p.kind_ = Kind::exponential;
  p.C_ = C;
  p.alpha_ = alpha;
  p.seed_ = seed;
  p.profile_ = profile;
  return p;
}

double Potential::at(const VertexId& v) const {
  if (kind_ == Kind::finite_support) {
    auto it = entries_.find(v);
    return it == entries_.end() ? 0.0 : it->second;
  }
  const double envelope = C_ * std::exp(-alpha_ * norm(v.n));
  if (profile_ == Profile::attractive) return -envelope;
  return detail::site_profile(seed_, v.cell, v.n) * envelope;
}

double Potential::sup_shifted(const std::vector<VertexId>& verts, double lambda) const {
  double m = 0;
  for (const auto& v : verts) m = std::max(m, std::abs(at(v) - lambda));
  return m;
}

Complex apply_laplacian(const LatticeSpec& spec, const LatticeFunction& f, const VertexId& v) {
  Complex sum = 0;
  for (const auto& w : spec.neighbors(v)) sum += f.at(w);
  return sum / static_cast<double>(spec.degree(v.cell));
}

Complex apply_schrodinger(const LatticeSpec& spec, const Potential& V, double lambda,
                          const LatticeFunction& f, const VertexId& v) {
  return -apply_laplacian(spec, f, v) + (V.at(v) - lambda) * f.at(v);
}

int TruncatedOperator::index_of(const VertexId& v) const {
  auto it = std::lower_bound(box.begin(), box.end(), v);
  if (it == box.end() || !(*it == v)) return -1;
  return static_cast<int>(it - box.begin());
}

TruncatedOperator assemble_truncated(const LatticeSpec& spec, const Potential& V, double R,
                                     int box_cap) {
  TruncatedOperator T;
  T.box = spec.box_vertices(R);
  const int N = static_cast<int>(T.box.size());
  if (N > box_cap)
    throw std::invalid_argument("box has " + std::to_string(N) + " vertices, cap is " +
                                std::to_string(box_cap));
  T.matrix = Eigen::MatrixXd::Zero(N, N);
  for (int i = 0; i < N; ++i) {
    const VertexId& v = T.box[i];
    T.matrix(i, i) = V.at(v);
    const double off = -1.0 / spec.degree(v.cell);
    for (const auto& w : spec.neighbors(v)) {
      int j = T.index_of(w);
      if (j >= 0) T.matrix(i, j) = off;
    }
  }
  return T;
}

EigenSolution eigensolve_symmetric(const TruncatedOperator& T) {
  const int N = static_cast<int>(T.box.size());
  if (N < 1) throw std::invalid_argument("empty operator");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(T.matrix);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("symmetric eigensolver failed to converge (N=" + std::to_string(N) + ")");
  EigenSolution out;
  out.eigenvalues.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + N);
  out.eigenvectors = solver.eigenvectors();
  return out;
}

std::vector<std::pair<double, double>> radiation_estimate(const LatticeFunction& f,
                                                          const std::vector<double>& R_list) {
  if (R_list.empty()) throw std::invalid_argument("R_list must be nonempty");
  std::vector<std::pair<double, double>> out;
  out.reserve(R_list.size());
  for (double R : R_list) {
    if (R <= 0) throw std::invalid_argument("radii must be positive");
    double sum = 0;
    for (const auto& [v, c] : f.support())
      if (norm(v.n) < R) sum += std::norm(c);
    out.emplace_back(R, sum / R);
  }
  return out;
}

}  // namespace latsch
