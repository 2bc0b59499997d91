#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "latsch/lattice.hpp"

namespace latsch {

/// Finite graph split into interior and boundary vertices. Edges run
/// interior-interior and interior-boundary only; boundary-boundary edges are
/// dropped on construction.
class BoundaryGraph {
 public:
  static BoundaryGraph from_interior(const LatticeSpec& spec, std::vector<VertexId> interior);
  /// interior = box_vertices(spec, R), boundary = outside neighbors
  static BoundaryGraph from_box(const LatticeSpec& spec, double R);
  /// interior = sup_box_vertices(spec, R) (the parallelogram-style patches)
  static BoundaryGraph from_sup_box(const LatticeSpec& spec, int R);
  /// Hand-built graph. ambient_degrees may assign each vertex the degree of a
  /// host graph; vertices default to their degree here.
  static BoundaryGraph custom(std::vector<VertexId> interior, std::vector<VertexId> boundary,
                              std::vector<std::pair<VertexId, VertexId>> edges,
                              std::map<VertexId, int> ambient_degrees = {});

  int num_interior() const { return num_interior_; }
  int num_boundary() const { return static_cast<int>(vertices_.size()) - num_interior_; }
  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  bool is_interior(int idx) const { return idx < num_interior_; }
  const VertexId& vertex(int idx) const { return vertices_[idx]; }
  const std::vector<VertexId>& vertices() const { return vertices_; }
  std::vector<VertexId> interior() const;
  std::vector<VertexId> boundary() const;
  int index_of(const VertexId& v) const;  // -1 if absent
  const std::vector<int>& adjacency(int idx) const { return adj_[idx]; }
  /// Degree of the vertex in the host graph (lattice degree for box graphs).
  int degree(int idx) const { return degree_[idx]; }
  bool connected() const { return connected_; }

  /// BFS distances from vertex idx; -1 marks unreachable vertices.
  std::vector<int> distances_from(int idx) const;

 private:
  std::vector<VertexId> vertices_;  // interior (sorted) then boundary (sorted)
  int num_interior_ = 0;
  std::vector<std::vector<int>> adj_;
  std::vector<int> degree_;
  bool connected_ = false;

  void finalize();
};

/// Minimal number of edges between v and w; nullopt when unreachable.
std::optional<int> graph_distance(const BoundaryGraph& G, const VertexId& v, const VertexId& w);

/// Vertices of S that are the unique nearest member of S from some boundary
/// vertex.
std::vector<VertexId> extreme_points(const BoundaryGraph& G, const std::vector<VertexId>& S);

enum class TwoPointsMode { exhaustive, random };

struct TwoPointsOptions {
  TwoPointsMode mode = TwoPointsMode::exhaustive;
  int exhaustive_cap = 22;
  int random_trials = 1000;
  std::uint64_t seed = 0;
  /// candidate subsets tried before the random draws
  std::vector<std::vector<VertexId>> injected;
};

enum class TwoPointsOutcome { holds, no_counterexample_found, fails };

struct TwoPointsResult {
  TwoPointsOutcome outcome = TwoPointsOutcome::holds;
  std::vector<VertexId> witness;  // subset with <= 1 extreme point
  long long subsets_checked = 0;
};

/// Exhaustive mode iterates every S with |S| >= 2 (deterministic first
/// witness); random mode checks injected candidates then seeded draws and can
/// only report "no counterexample found".
TwoPointsResult two_points_condition(const BoundaryGraph& G, const TwoPointsOptions& options);

struct A5Report {
  /// (z, v, w): boundary z adjacent to interior v and w with v not ~ w
  std::vector<std::array<VertexId, 3>> violations;

  bool passed() const { return violations.empty(); }
};

A5Report check_a5(const BoundaryGraph& G);

/// (1/deg v) Σ_{w interior, w~v} (f(w) - f(v)) for a boundary vertex v.
double neumann_residual(const BoundaryGraph& G, const std::map<VertexId, double>& f,
                        const VertexId& v);

/// Dimension of the solution space of {(-Δ+V-λ)f = 0 on the interior,
/// f = 0 and ∂_ν f = 0 on the boundary}, by SVD rank of the stacked system.
int dirichlet_neumann_nullity(const BoundaryGraph& G, const std::map<VertexId, double>& V,
                              double lambda, double sv_tol = 1e-10);

/// The six vertices of the kagome hexagon addressed by its unit cell, in cycle
/// order.
std::array<VertexId, 6> kagome_hexagon(const IntVec& hexagon_cell);

/// Alternating ±1 vector on a kagome hexagon: a compactly supported
/// eigenvector of -Δ̂ at the flat-band energy 1/2. Throws unless the hexagon
/// and all of its neighbors fit in the box |n| <= R.
LatticeFunction kagome_flat_band_vector(const LatticeSpec& spec, const IntVec& hexagon_cell,
                                        double R);

/// Search for an extreme-point-free subset: hexagon rings fully inside the
/// interior first (the reconstruction), then seeded random subsets.
std::optional<std::vector<VertexId>> find_extreme_point_free_subset(const BoundaryGraph& G,
                                                                    int random_trials,
                                                                    std::uint64_t seed);

}  // namespace latsch
