#include "latsch/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <queue>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace latsch {

namespace {

constexpr double kTol = 1e-9;

RealVec vec2(double x, double y) { return {x, y}; }

}  // namespace

double norm(const RealVec& x) {
  double s = 0;
  for (double c : x) s += c * c;
  return std::sqrt(s);
}

double norm(const IntVec& n) {
  double s = 0;
  for (int c : n) s += static_cast<double>(c) * c;
  return std::sqrt(s);
}

IntVec negate(const IntVec& n) {
  IntVec out(n.size());
  for (size_t i = 0; i < n.size(); ++i) out[i] = -n[i];
  return out;
}

IntVec add(const IntVec& a, const IntVec& b) {
  IntVec out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

std::string to_string(const VertexId& v) {
  std::string s = "(" + std::to_string(v.cell) + ",[";
  for (size_t i = 0; i < v.n.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v.n[i]);
  }
  return s + "])";
}

BuiltinLattice builtin_from_name(const std::string& name) {
  if (name == "square") return BuiltinLattice::square;
  if (name == "triangular") return BuiltinLattice::triangular;
  if (name == "hexagonal") return BuiltinLattice::hexagonal;
  if (name == "kagome") return BuiltinLattice::kagome;
  if (name == "ladder") return BuiltinLattice::ladder;
  throw std::invalid_argument("unknown lattice name: " + name);
}

std::string builtin_name(BuiltinLattice which) {
  switch (which) {
    case BuiltinLattice::square: return "square";
    case BuiltinLattice::triangular: return "triangular";
    case BuiltinLattice::hexagonal: return "hexagonal";
    case BuiltinLattice::kagome: return "kagome";
    case BuiltinLattice::ladder: return "ladder";
  }
  throw std::logic_error("bad BuiltinLattice");
}

LatticeSpec::LatticeSpec(int d, int ambient_dim, std::vector<RealVec> basis,
                         std::vector<RealVec> points, std::vector<EdgeGenerator> generators,
                         std::string name)
    : d_(d),
      ambient_dim_(ambient_dim),
      basis_(std::move(basis)),
      points_(std::move(points)),
      generators_(std::move(generators)),
      name_(std::move(name)) {
  std::sort(generators_.begin(), generators_.end());
  generators_.erase(std::unique(generators_.begin(), generators_.end()), generators_.end());
  validate();
}

void LatticeSpec::validate() const {
  if (d_ < 1) throw std::invalid_argument("period dimension must be >= 1");
  if (ambient_dim_ < d_) throw std::invalid_argument("ambient dimension must be >= d");
  if (static_cast<int>(basis_.size()) != d_) throw std::invalid_argument("need d basis vectors");
  if (points_.empty()) throw std::invalid_argument("need at least one cell point");
  for (const auto& b : basis_)
    if (static_cast<int>(b.size()) != ambient_dim_)
      throw std::invalid_argument("basis vector has wrong dimension");
  for (const auto& p : points_)
    if (static_cast<int>(p.size()) != ambient_dim_)
      throw std::invalid_argument("cell point has wrong dimension");

  const int s = num_cells();
  std::set<EdgeGenerator> gens(generators_.begin(), generators_.end());
  for (const auto& g : generators_) {
    if (g.from < 1 || g.from > s || g.to < 1 || g.to > s)
      throw std::invalid_argument("edge generator cell index out of range");
    if (static_cast<int>(g.shift.size()) != d_)
      throw std::invalid_argument("edge generator shift has wrong dimension");
    if (g.from == g.to && std::all_of(g.shift.begin(), g.shift.end(), [](int c) { return c == 0; }))
      throw std::invalid_argument("loop edge generator (j,j,0) is not allowed");
    if (!gens.count(EdgeGenerator{g.to, g.from, negate(g.shift)}))
      throw std::invalid_argument("edge generators are not symmetric");
  }
  for (int j = 1; j <= s; ++j)
    if (degree(j) <= 0) throw std::invalid_argument("cell point " + std::to_string(j) + " has no edges");

  // p_j - p_k must not lie in the Z-span of the basis (distinct cosets).
  for (int j = 0; j < s; ++j) {
    for (int k = j + 1; k < s; ++k) {
      // least-squares solve of basis coefficients for p_j - p_k
      std::vector<double> rhs(ambient_dim_);
      for (int i = 0; i < ambient_dim_; ++i) rhs[i] = points_[j][i] - points_[k][i];
      // Gram system G c = B^T rhs
      std::vector<std::vector<double>> G(d_, std::vector<double>(d_ + 1, 0.0));
      for (int a = 0; a < d_; ++a) {
        for (int b = 0; b < d_; ++b)
          for (int i = 0; i < ambient_dim_; ++i) G[a][b] += basis_[a][i] * basis_[b][i];
        for (int i = 0; i < ambient_dim_; ++i) G[a][d_] += basis_[a][i] * rhs[i];
      }
      // Gaussian elimination
      for (int col = 0; col < d_; ++col) {
        int piv = col;
        for (int r = col + 1; r < d_; ++r)
          if (std::abs(G[r][col]) > std::abs(G[piv][col])) piv = r;
        std::swap(G[col], G[piv]);
        if (std::abs(G[col][col]) < 1e-14) throw std::invalid_argument("basis is degenerate");
        for (int r = 0; r < d_; ++r) {
          if (r == col) continue;
          double f = G[r][col] / G[col][col];
          for (int c2 = col; c2 <= d_; ++c2) G[r][c2] -= f * G[col][c2];
        }
      }
      bool integral = true;
      RealVec recon(ambient_dim_, 0.0);
      for (int a = 0; a < d_; ++a) {
        double c = G[a][d_] / G[a][a];
        double r = std::round(c);
        if (std::abs(c - r) > kTol) integral = false;
        for (int i = 0; i < ambient_dim_; ++i) recon[i] += r * basis_[a][i];
      }
      if (integral) {
        double res = 0;
        for (int i = 0; i < ambient_dim_; ++i) res += (recon[i] - rhs[i]) * (recon[i] - rhs[i]);
        if (res < kTol * kTol)
          throw std::invalid_argument("cell points " + std::to_string(j + 1) + " and " +
                                      std::to_string(k + 1) + " coincide modulo the lattice");
      }
    }
  }
}

int LatticeSpec::degree(int cell) const {
  int deg = 0;
  for (const auto& g : generators_)
    if (g.from == cell) ++deg;
  return deg;
}

int LatticeSpec::max_degree() const {
  int m = 0;
  for (int j = 1; j <= num_cells(); ++j) m = std::max(m, degree(j));
  return m;
}

bool LatticeSpec::valid_vertex(const VertexId& v) const {
  return v.cell >= 1 && v.cell <= num_cells() && static_cast<int>(v.n.size()) == d_;
}

std::vector<VertexId> LatticeSpec::neighbors(const VertexId& v) const {
  if (!valid_vertex(v)) throw std::invalid_argument("invalid vertex " + to_string(v));
  std::vector<VertexId> out;
  out.reserve(8);
  for (const auto& g : generators_)
    if (g.from == v.cell) out.push_back(VertexId{g.to, add(v.n, g.shift)});
  std::sort(out.begin(), out.end());
  return out;
}

RealVec LatticeSpec::realize(const VertexId& v) const {
  if (!valid_vertex(v)) throw std::invalid_argument("invalid vertex " + to_string(v));
  RealVec x = points_[v.cell - 1];
  for (int i = 0; i < d_; ++i)
    for (int c = 0; c < ambient_dim_; ++c) x[c] += v.n[i] * basis_[i][c];
  return x;
}

std::vector<VertexId> LatticeSpec::box_vertices(double R) const {
  if (R < 0) throw std::invalid_argument("box radius must be >= 0");
  const int m = static_cast<int>(std::floor(R + kTol));
  std::vector<VertexId> out;
  for (int cell = 1; cell <= num_cells(); ++cell) {
    IntVec n(d_, -m);
    while (true) {
      if (norm(n) <= R + kTol) out.push_back(VertexId{cell, n});
      int i = d_ - 1;
      while (i >= 0 && n[i] == m) n[i--] = -m;
      if (i < 0) break;
      ++n[i];
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<VertexId> LatticeSpec::sup_box_vertices(int R) const {
  if (R < 0) throw std::invalid_argument("box radius must be >= 0");
  std::vector<VertexId> out;
  for (int cell = 1; cell <= num_cells(); ++cell) {
    IntVec n(d_, -R);
    while (true) {
      out.push_back(VertexId{cell, n});
      int i = d_ - 1;
      while (i >= 0 && n[i] == R) n[i--] = -R;
      if (i < 0) break;
      ++n[i];
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

double LatticeSpec::edge_length() const {
  double len = -1;
  for (const auto& g : generators_) {
    VertexId a{g.from, IntVec(d_, 0)};
    VertexId b{g.to, g.shift};
    RealVec pa = realize(a), pb = realize(b);
    double l = 0;
    for (int i = 0; i < ambient_dim_; ++i) l += (pa[i] - pb[i]) * (pa[i] - pb[i]);
    l = std::sqrt(l);
    if (len < 0) len = l;
    if (std::abs(l - len) > kTol)
      throw std::runtime_error("lattice does not have a uniform edge length");
  }
  return len;
}

LatticeSpec builtin_lattice(BuiltinLattice which, int d) {
  switch (which) {
    case BuiltinLattice::square: {
      if (d < 2) throw std::invalid_argument("square lattice requires d >= 2");
      std::vector<RealVec> basis(d, RealVec(d, 0.0));
      for (int i = 0; i < d; ++i) basis[i][i] = 1.0;
      std::vector<EdgeGenerator> gens;
      for (int i = 0; i < d; ++i) {
        IntVec e(d, 0);
        e[i] = 1;
        gens.push_back({1, 1, e});
        gens.push_back({1, 1, negate(e)});
      }
      return LatticeSpec(d, d, basis, {RealVec(d, 0.0)}, gens, "square");
    }
    case BuiltinLattice::triangular: {
      std::vector<RealVec> basis = {vec2(1, 0), vec2(0.5, std::sqrt(3.0) / 2)};
      std::vector<EdgeGenerator> gens;
      for (IntVec s : {IntVec{1, 0}, IntVec{0, 1}, IntVec{-1, 1}}) {
        gens.push_back({1, 1, s});
        gens.push_back({1, 1, negate(s)});
      }
      return LatticeSpec(2, 2, basis, {vec2(0, 0)}, gens, "triangular");
    }
    case BuiltinLattice::hexagonal: {
      std::vector<RealVec> basis = {vec2(1.5, -std::sqrt(3.0) / 2), vec2(1.5, std::sqrt(3.0) / 2)};
      std::vector<RealVec> pts = {vec2(1, 0), vec2(2, 0)};
      std::vector<EdgeGenerator> gens;
      for (IntVec s : {IntVec{0, 0}, IntVec{-1, 0}, IntVec{0, -1}}) {
        gens.push_back({1, 2, s});
        gens.push_back({2, 1, negate(s)});
      }
      return LatticeSpec(2, 2, basis, pts, gens, "hexagonal");
    }
    case BuiltinLattice::kagome: {
      const double r3 = std::sqrt(3.0);
      std::vector<RealVec> basis = {vec2(0.5, r3 / 2), vec2(-0.5, r3 / 2)};
      std::vector<RealVec> pts = {vec2(0, 0), vec2(0.5, 0), vec2(0.25, r3 / 4)};
      std::vector<EdgeGenerator> gens;
      auto both = [&gens](int a, int b, IntVec s) {
        gens.push_back({a, b, s});
        gens.push_back({b, a, negate(s)});
      };
      both(1, 2, {0, 0});
      both(1, 2, {-1, 1});
      both(1, 3, {0, 0});
      both(1, 3, {-1, 0});
      both(2, 3, {0, 0});
      both(2, 3, {0, -1});
      return LatticeSpec(2, 2, basis, pts, gens, "kagome");
    }
    case BuiltinLattice::ladder: {
      if (d < 2) throw std::invalid_argument("ladder requires d >= 2");
      const int D = d + 1;
      std::vector<RealVec> basis(d, RealVec(D, 0.0));
      for (int i = 0; i < d; ++i) basis[i][i] = 1.0;
      RealVec p1(D, 0.0), p2(D, 0.0);
      p2[D - 1] = 1.0;
      std::vector<EdgeGenerator> gens;
      for (int i = 0; i < d; ++i) {
        IntVec e(d, 0);
        e[i] = 1;
        for (int cell : {1, 2}) {
          gens.push_back({cell, cell, e});
          gens.push_back({cell, cell, negate(e)});
        }
      }
      gens.push_back({1, 2, IntVec(d, 0)});
      gens.push_back({2, 1, IntVec(d, 0)});
      return LatticeSpec(d, D, basis, {p1, p2}, gens, "ladder");
    }
  }
  throw std::logic_error("bad BuiltinLattice");
}

LatticeSpec builtin_lattice(const std::string& name, int d) {
  return builtin_lattice(builtin_from_name(name), d);
}

void LatticeFunction::set(const VertexId& v, Complex value) {
  if (value == Complex(0.0, 0.0))
    values_.erase(v);
  else
    values_[v] = value;
}

Complex LatticeFunction::at(const VertexId& v) const {
  auto it = values_.find(v);
  return it == values_.end() ? Complex(0.0, 0.0) : it->second;
}

double LatticeFunction::l2_norm() const {
  double s = 0;
  for (const auto& [v, c] : values_) s += std::norm(c);
  return std::sqrt(s);
}

bool box_is_connected(const LatticeSpec& spec, const std::vector<VertexId>& box) {
  if (box.empty()) return true;
  std::set<VertexId> verts(box.begin(), box.end());
  for (const auto& v : box)
    for (const auto& w : spec.neighbors(v)) verts.insert(w);

  std::set<VertexId> seen;
  std::queue<VertexId> work;
  work.push(*verts.begin());
  seen.insert(*verts.begin());
  while (!work.empty()) {
    VertexId v = work.front();
    work.pop();
    for (const auto& w : spec.neighbors(v)) {
      if (verts.count(w) && !seen.count(w)) {
        seen.insert(w);
        work.push(w);
      }
    }
  }
  return seen.size() == verts.size();
}

std::string lattice_to_json(const LatticeSpec& spec) {
  nlohmann::ordered_json j;
  j["name"] = spec.name();
  j["d"] = spec.d();
  j["ambient_dim"] = spec.ambient_dim();
  j["basis"] = spec.basis();
  j["points"] = spec.points();
  auto& gens = j["edge_generators"] = nlohmann::ordered_json::array();
  for (const auto& g : spec.generators()) gens.push_back({{"j", g.from}, {"k", g.to}, {"m", g.shift}});
  return j.dump(2) + "\n";
}

LatticeSpec lattice_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  std::vector<EdgeGenerator> gens;
  for (const auto& g : j.at("edge_generators"))
    gens.push_back({g.at("j").get<int>(), g.at("k").get<int>(), g.at("m").get<IntVec>()});
  return LatticeSpec(j.at("d").get<int>(), j.at("ambient_dim").get<int>(),
                     j.at("basis").get<std::vector<RealVec>>(),
                     j.at("points").get<std::vector<RealVec>>(), gens,
                     j.value("name", std::string{}));
}

}  // namespace latsch
