#pragma once

#include <compare>
#include <complex>
#include <map>
#include <string>
#include <vector>

namespace latsch {

using IntVec = std::vector<int>;        // translation index n in Z^d
using RealVec = std::vector<double>;    // point in R^D
using Complex = std::complex<double>;

double norm(const RealVec& x);
double norm(const IntVec& n);
IntVec negate(const IntVec& n);
IntVec add(const IntVec& a, const IntVec& b);

/// A vertex p_j + v(n) of a periodic lattice, addressed by its cell-point
/// index j (1-based) and translation index n.
struct VertexId {
  int cell = 1;
  IntVec n;

  auto operator<=>(const VertexId&) const = default;
};

std::string to_string(const VertexId& v);

/// Directed edge rule: (from, to, shift) means p_from + v(n) ~ p_to + v(n + shift)
/// for every n. Stored in both directions.
struct EdgeGenerator {
  int from = 1;
  int to = 1;
  IntVec shift;

  auto operator<=>(const EdgeGenerator&) const = default;
};

enum class BuiltinLattice { square, triangular, hexagonal, kagome, ladder };

BuiltinLattice builtin_from_name(const std::string& name);
std::string builtin_name(BuiltinLattice which);

/// Offset-generated periodic graph: basis vectors v_1..v_d in R^D, cell points
/// p_1..p_s, and translation-invariant edge generators.
class LatticeSpec {
 public:
  LatticeSpec(int d, int ambient_dim, std::vector<RealVec> basis, std::vector<RealVec> points,
              std::vector<EdgeGenerator> generators, std::string name = "");

  int d() const { return d_; }
  int ambient_dim() const { return ambient_dim_; }
  int num_cells() const { return static_cast<int>(points_.size()); }
  const std::string& name() const { return name_; }
  const std::vector<RealVec>& basis() const { return basis_; }
  const std::vector<RealVec>& points() const { return points_; }
  const std::vector<EdgeGenerator>& generators() const { return generators_; }

  int degree(int cell) const;
  int max_degree() const;
  bool valid_vertex(const VertexId& v) const;

  std::vector<VertexId> neighbors(const VertexId& v) const;
  RealVec realize(const VertexId& v) const;

  /// All vertices with Euclidean |n| <= R, every cell index, ordered
  /// lexicographically in (cell, n).
  std::vector<VertexId> box_vertices(double R) const;
  /// Same but with the sup norm max_i |n_i| <= R (the patch shape used for
  /// boundary-graph examples).
  std::vector<VertexId> sup_box_vertices(int R) const;

  /// Uniform realized edge length, if the lattice has one.
  double edge_length() const;

 private:
  void validate() const;

  int d_;
  int ambient_dim_;
  std::vector<RealVec> basis_;
  std::vector<RealVec> points_;
  std::vector<EdgeGenerator> generators_;  // sorted, both directions present
  std::string name_;
};

/// The standard example lattices with their exact basis vectors, cell points and
/// adjacency rules. d is honored for square/ladder (>= 2) and fixed to 2 for
/// triangular/hexagonal/kagome.
LatticeSpec builtin_lattice(BuiltinLattice which, int d = 2);
LatticeSpec builtin_lattice(const std::string& name, int d = 2);

/// Finitely supported complex function on lattice vertices (zero off support).
class LatticeFunction {
 public:
  LatticeFunction() = default;

  void set(const VertexId& v, Complex value);
  Complex at(const VertexId& v) const;  // zero outside support
  const std::map<VertexId, Complex>& support() const { return values_; }
  double l2_norm() const;
  bool empty() const { return values_.empty(); }

 private:
  std::map<VertexId, Complex> values_;
};

/// True if the graph induced on `box` plus one layer of outside neighbors is
/// connected.
bool box_is_connected(const LatticeSpec& spec, const std::vector<VertexId>& box);

std::string lattice_to_json(const LatticeSpec& spec);
LatticeSpec lattice_from_json(const std::string& text);

}  // namespace latsch
