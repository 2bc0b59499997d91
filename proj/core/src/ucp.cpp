#include "latsch/ucp.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <queue>
#include <set>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "latsch/detail/rng.hpp"

namespace latsch {

BoundaryGraph BoundaryGraph::from_interior(const LatticeSpec& spec,
                                           std::vector<VertexId> interior) {
  std::sort(interior.begin(), interior.end());
  interior.erase(std::unique(interior.begin(), interior.end()), interior.end());
  std::set<VertexId> interior_set(interior.begin(), interior.end());

  std::set<VertexId> boundary_set;
  for (const auto& v : interior)
    for (const auto& w : spec.neighbors(v))
      if (!interior_set.count(w)) boundary_set.insert(w);

  BoundaryGraph G;
  G.num_interior_ = static_cast<int>(interior.size());
  G.vertices_ = interior;
  G.vertices_.insert(G.vertices_.end(), boundary_set.begin(), boundary_set.end());

  const int n = static_cast<int>(G.vertices_.size());
  G.adj_.assign(n, {});
  G.degree_.assign(n, 0);
  for (int i = 0; i < n; ++i) {
    const VertexId& v = G.vertices_[i];
    G.degree_[i] = spec.degree(v.cell);
    if (!G.is_interior(i)) continue;
    for (const auto& w : spec.neighbors(v)) {
      int j = G.index_of(w);
      if (j < 0) continue;
      G.adj_[i].push_back(j);
      if (!G.is_interior(j)) G.adj_[j].push_back(i);
    }
  }
  G.finalize();
  return G;
}

BoundaryGraph BoundaryGraph::from_box(const LatticeSpec& spec, double R) {
  if (R <= 0) throw std::invalid_argument("box radius must be positive");
  return from_interior(spec, spec.box_vertices(R));
}

BoundaryGraph BoundaryGraph::from_sup_box(const LatticeSpec& spec, int R) {
  if (R < 0) throw std::invalid_argument("box radius must be >= 0");
  return from_interior(spec, spec.sup_box_vertices(R));
}

BoundaryGraph BoundaryGraph::custom(std::vector<VertexId> interior, std::vector<VertexId> boundary,
                                    std::vector<std::pair<VertexId, VertexId>> edges,
                                    std::map<VertexId, int> ambient_degrees) {
  std::sort(interior.begin(), interior.end());
  std::sort(boundary.begin(), boundary.end());
  for (const auto& b : boundary)
    if (std::binary_search(interior.begin(), interior.end(), b))
      throw std::invalid_argument("interior and boundary overlap at " + to_string(b));

  BoundaryGraph G;
  G.num_interior_ = static_cast<int>(interior.size());
  G.vertices_ = std::move(interior);
  G.vertices_.insert(G.vertices_.end(), boundary.begin(), boundary.end());
  const int n = static_cast<int>(G.vertices_.size());
  G.adj_.assign(n, {});
  for (const auto& [a, b] : edges) {
    int i = G.index_of(a), j = G.index_of(b);
    if (i < 0 || j < 0) throw std::invalid_argument("edge endpoint not a graph vertex");
    if (!G.is_interior(i) && !G.is_interior(j)) continue;  // boundary-boundary dropped
    G.adj_[i].push_back(j);
    G.adj_[j].push_back(i);
  }
  G.degree_.assign(n, 0);
  for (int i = 0; i < n; ++i) {
    auto it = ambient_degrees.find(G.vertices_[i]);
    G.degree_[i] = it != ambient_degrees.end() ? it->second : static_cast<int>(G.adj_[i].size());
  }
  G.finalize();
  return G;
}

void BoundaryGraph::finalize() {
  for (auto& a : adj_) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  connected_ = true;
  if (vertices_.empty()) return;
  auto dist = distances_from(0);
  connected_ = std::none_of(dist.begin(), dist.end(), [](int d) { return d < 0; });
}

std::vector<VertexId> BoundaryGraph::interior() const {
  return {vertices_.begin(), vertices_.begin() + num_interior_};
}

std::vector<VertexId> BoundaryGraph::boundary() const {
  return {vertices_.begin() + num_interior_, vertices_.end()};
}

int BoundaryGraph::index_of(const VertexId& v) const {
  auto lo = vertices_.begin();
  auto it = std::lower_bound(lo, lo + num_interior_, v);
  if (it != lo + num_interior_ && *it == v) return static_cast<int>(it - lo);
  it = std::lower_bound(lo + num_interior_, vertices_.end(), v);
  if (it != vertices_.end() && *it == v) return static_cast<int>(it - lo);
  return -1;
}

std::vector<int> BoundaryGraph::distances_from(int idx) const {
  std::vector<int> dist(vertices_.size(), -1);
  std::queue<int> work;
  dist[idx] = 0;
  work.push(idx);
  while (!work.empty()) {
    int v = work.front();
    work.pop();
    for (int w : adj_[v])
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        work.push(w);
      }
  }
  return dist;
}

std::optional<int> graph_distance(const BoundaryGraph& G, const VertexId& v, const VertexId& w) {
  int i = G.index_of(v), j = G.index_of(w);
  if (i < 0 || j < 0) throw std::invalid_argument("vertex not in graph");
  int d = G.distances_from(i)[j];
  if (d < 0) return std::nullopt;
  return d;
}

namespace {

/// Indices (into G) of the extreme points of subset S (graph indices).
std::vector<int> extreme_indices(const std::vector<std::vector<int>>& boundary_dist,
                                 const std::vector<int>& S, int stop_after = -1) {
  std::set<int> extremes;
  for (const auto& dist : boundary_dist) {
    int best = -1;
    bool unique = false;
    for (int s : S) {
      if (dist[s] < 0) continue;
      if (best < 0 || dist[s] < dist[best]) {
        best = s;
        unique = true;
      } else if (dist[s] == dist[best]) {
        unique = false;
      }
    }
    if (best >= 0 && unique) {
      extremes.insert(best);
      if (stop_after > 0 && static_cast<int>(extremes.size()) >= stop_after) break;
    }
  }
  return {extremes.begin(), extremes.end()};
}

std::vector<std::vector<int>> all_boundary_distances(const BoundaryGraph& G) {
  std::vector<std::vector<int>> out;
  for (int i = G.num_interior(); i < G.num_vertices(); ++i) out.push_back(G.distances_from(i));
  return out;
}

}  // namespace

std::vector<VertexId> extreme_points(const BoundaryGraph& G, const std::vector<VertexId>& S) {
  if (S.empty()) throw std::invalid_argument("S must be nonempty");
  std::vector<int> s_idx;
  for (const auto& v : S) {
    int i = G.index_of(v);
    if (i < 0 || !G.is_interior(i))
      throw std::invalid_argument("S member " + to_string(v) + " is not an interior vertex");
    s_idx.push_back(i);
  }
  auto idx = extreme_indices(all_boundary_distances(G), s_idx);
  std::vector<VertexId> out;
  for (int i : idx) out.push_back(G.vertex(i));
  std::sort(out.begin(), out.end());
  return out;
}

TwoPointsResult two_points_condition(const BoundaryGraph& G, const TwoPointsOptions& options) {
  const int ni = G.num_interior();
  TwoPointsResult result;
  auto boundary_dist = all_boundary_distances(G);

  auto check_subset = [&](const std::vector<int>& S) {
    ++result.subsets_checked;
    return static_cast<int>(extreme_indices(boundary_dist, S, 2).size()) >= 2;
  };

  if (options.mode == TwoPointsMode::exhaustive) {
    if (ni > options.exhaustive_cap)
      throw std::invalid_argument("exhaustive two-points check capped at " +
                                  std::to_string(options.exhaustive_cap) + " interior vertices");
    const std::uint64_t total = 1ULL << ni;
    std::vector<int> S;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      if (std::popcount(mask) < 2) continue;
      S.clear();
      for (int b = 0; b < ni; ++b)
        if (mask & (1ULL << b)) S.push_back(b);
      if (!check_subset(S)) {
        result.outcome = TwoPointsOutcome::fails;
        for (int i : S) result.witness.push_back(G.vertex(i));
        return result;
      }
    }
    result.outcome = TwoPointsOutcome::holds;
    return result;
  }

  auto fail_with = [&](const std::vector<int>& S) {
    result.outcome = TwoPointsOutcome::fails;
    for (int i : S) result.witness.push_back(G.vertex(i));
    std::sort(result.witness.begin(), result.witness.end());
  };

  for (const auto& cand : options.injected) {
    std::vector<int> S;
    for (const auto& v : cand) {
      int i = G.index_of(v);
      if (i < 0 || !G.is_interior(i))
        throw std::invalid_argument("injected subset member is not interior");
      S.push_back(i);
    }
    if (S.size() >= 2 && !check_subset(S)) {
      fail_with(S);
      return result;
    }
  }

  detail::Rng rng(options.seed);
  for (int trial = 0; trial < options.random_trials; ++trial) {
    int size = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(std::max(1, ni - 1))));
    std::set<int> chosen;
    while (static_cast<int>(chosen.size()) < size)
      chosen.insert(static_cast<int>(rng.below(static_cast<std::uint64_t>(ni))));
    std::vector<int> S(chosen.begin(), chosen.end());
    if (!check_subset(S)) {
      fail_with(S);
      return result;
    }
  }
  result.outcome = TwoPointsOutcome::no_counterexample_found;
  return result;
}

A5Report check_a5(const BoundaryGraph& G) {
  A5Report report;
  for (int z = G.num_interior(); z < G.num_vertices(); ++z) {
    const auto& nbrs = G.adjacency(z);
    for (size_t a = 0; a < nbrs.size(); ++a) {
      if (!G.is_interior(nbrs[a])) continue;
      for (size_t b = a + 1; b < nbrs.size(); ++b) {
        if (!G.is_interior(nbrs[b])) continue;
        const auto& adj_a = G.adjacency(nbrs[a]);
        if (!std::binary_search(adj_a.begin(), adj_a.end(), nbrs[b]))
          report.violations.push_back({G.vertex(z), G.vertex(nbrs[a]), G.vertex(nbrs[b])});
      }
    }
  }
  return report;
}

double neumann_residual(const BoundaryGraph& G, const std::map<VertexId, double>& f,
                        const VertexId& v) {
  int i = G.index_of(v);
  if (i < 0 || G.is_interior(i)) throw std::invalid_argument("v must be a boundary vertex");
  auto value = [&f](const VertexId& u) {
    auto it = f.find(u);
    return it == f.end() ? 0.0 : it->second;
  };
  double fv = value(v);
  double sum = 0;
  for (int w : G.adjacency(i))
    if (G.is_interior(w)) sum += value(G.vertex(w)) - fv;
  return sum / G.degree(i);
}

int dirichlet_neumann_nullity(const BoundaryGraph& G, const std::map<VertexId, double>& V,
                              double lambda, double sv_tol) {
  const int ni = G.num_interior();
  const int nb = G.num_boundary();
  if (ni == 0) return 0;
  auto pot = [&V](const VertexId& u) {
    auto it = V.find(u);
    return it == V.end() ? 0.0 : it->second;
  };

  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(ni + nb, ni);
  for (int i = 0; i < ni; ++i) {
    M(i, i) = pot(G.vertex(i)) - lambda;
    for (int w : G.adjacency(i))
      if (G.is_interior(w)) M(i, w) -= 1.0 / G.degree(i);
  }
  for (int b = 0; b < nb; ++b) {
    const int z = ni + b;
    for (int w : G.adjacency(z))
      if (G.is_interior(w)) M(ni + b, w) += 1.0 / G.degree(z);
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return ni;
  const double cutoff = sv_tol * std::max(sv[0], 1.0);
  int nullity = 0;
  for (int k = 0; k < sv.size(); ++k)
    if (sv[k] <= cutoff) ++nullity;
  return nullity + (ni - static_cast<int>(sv.size()));
}

std::array<VertexId, 6> kagome_hexagon(const IntVec& c) {
  if (c.size() != 2) throw std::invalid_argument("kagome hexagon cell must be 2-dimensional");
  const int c1 = c[0], c2 = c[1];
  return {VertexId{1, {c1, c2}},     VertexId{2, {c1, c2}},     VertexId{3, {c1, c2 - 1}},
          VertexId{1, {c1, c2 - 1}}, VertexId{2, {c1 - 1, c2}}, VertexId{3, {c1 - 1, c2}}};
}

LatticeFunction kagome_flat_band_vector(const LatticeSpec& spec, const IntVec& hexagon_cell,
                                        double R) {
  if (spec.name() != "kagome") throw std::invalid_argument("flat-band vector requires the kagome lattice");
  auto hex = kagome_hexagon(hexagon_cell);
  for (const auto& v : hex) {
    if (norm(v.n) > R) throw std::invalid_argument("hexagon not contained in the box");
    for (const auto& w : spec.neighbors(v))
      if (norm(w.n) > R) throw std::invalid_argument("hexagon neighborhood not contained in the box");
  }
  LatticeFunction f;
  double sign = 1.0;
  for (const auto& v : hex) {
    f.set(v, sign);
    sign = -sign;
  }
  return f;
}

std::optional<std::vector<VertexId>> find_extreme_point_free_subset(const BoundaryGraph& G,
                                                                    int random_trials,
                                                                    std::uint64_t seed) {
  auto boundary_dist = all_boundary_distances(G);
  auto is_free = [&](const std::vector<int>& S) {
    return S.size() >= 2 && extreme_indices(boundary_dist, S, 1).empty();
  };
  auto to_vertices = [&](const std::vector<int>& S) {
    std::vector<VertexId> out;
    for (int i : S) out.push_back(G.vertex(i));
    std::sort(out.begin(), out.end());
    return out;
  };

  // structured candidates: hexagon rings fully inside the interior
  if (!G.vertices().empty() && G.vertex(0).n.size() == 2) {
    for (int i = 0; i < G.num_interior(); ++i) {
      const VertexId& v = G.vertex(i);
      if (v.cell != 1) continue;
      std::vector<int> ring;
      bool ok = true;
      for (const auto& h : kagome_hexagon(v.n)) {
        int j = G.index_of(h);
        if (j < 0 || !G.is_interior(j)) {
          ok = false;
          break;
        }
        ring.push_back(j);
      }
      if (ok && is_free(ring)) return to_vertices(ring);
    }
  }

  detail::Rng rng(seed);
  const int ni = G.num_interior();
  if (ni < 2) return std::nullopt;
  for (int trial = 0; trial < random_trials; ++trial) {
    int size = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(std::max(1, ni - 1))));
    std::set<int> chosen;
    while (static_cast<int>(chosen.size()) < size)
      chosen.insert(static_cast<int>(rng.below(static_cast<std::uint64_t>(ni))));
    std::vector<int> S(chosen.begin(), chosen.end());
    if (is_free(S)) return to_vertices(S);
  }
  return std::nullopt;
}

}  // namespace latsch
