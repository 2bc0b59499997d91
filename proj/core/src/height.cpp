#include "latsch/height.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>

namespace latsch {

HeightFunction builtin_height(BuiltinLattice which) {
  HeightFunction hf;
  switch (which) {
    case BuiltinLattice::square:
      hf.name = "square";
      hf.k0 = 1;
      hf.h = [](const VertexId& v) { return static_cast<long long>(v.n[0]); };
      hf.successor = [](const VertexId& v) {
        VertexId s = v;
        ++s.n[0];
        return s;
      };
      hf.growth_constant_a = 1.0;
      return hf;
    case BuiltinLattice::triangular:
      hf.name = "triangular";
      hf.k0 = 2;
      hf.h = [](const VertexId& v) { return static_cast<long long>(v.n[0]) + 2LL * v.n[1]; };
      hf.successor = [](const VertexId& v) {
        VertexId s = v;  // v₀ = x + ω
        ++s.n[1];
        return s;
      };
      hf.growth_constant_a = 2.0;
      return hf;
    case BuiltinLattice::hexagonal:
      hf.name = "hexagonal";
      hf.k0 = 1;
      // In the Z + Zω coordinates of the plane, h is the ω-coefficient, which
      // for the vertex p_j + n₁v₁ + n₂v₂ equals n₂ - n₁ for both cells.
      hf.h = [](const VertexId& v) { return static_cast<long long>(v.n[1]) - v.n[0]; };
      hf.successor = [](const VertexId& v) {
        if (v.cell == 1) return VertexId{2, {v.n[0] - 1, v.n[1]}};  // x + ω²
        return VertexId{1, {v.n[0], v.n[1] + 1}};                   // x + ω
      };
      hf.growth_constant_a = 2.0 / std::sqrt(3.0);
      return hf;
    case BuiltinLattice::ladder:
      hf.name = "ladder";
      hf.k0 = 1;
      hf.h = [](const VertexId& v) { return static_cast<long long>(v.n[0]); };
      hf.successor = [](const VertexId& v) {
        VertexId s = v;
        ++s.n[0];
        return s;
      };
      hf.growth_constant_a = 1.0;
      return hf;
    case BuiltinLattice::kagome:
      throw std::invalid_argument("kagome: no increasing height function");
  }
  throw std::logic_error("bad BuiltinLattice");
}

HeightFunction builtin_height(const std::string& name) {
  return builtin_height(builtin_from_name(name));
}

HeightReport verify_height(const LatticeSpec& spec, const HeightFunction& hf,
                           double sample_box_R) {
  auto box = spec.box_vertices(sample_box_R);
  if (box.empty()) throw std::invalid_argument("empty sample box");
  std::set<VertexId> in_box(box.begin(), box.end());
  auto inside = [&](const VertexId& v) { return in_box.count(v) > 0; };

  HeightReport report;
  for (const auto& v : box) {
    if (!hf.contains(v)) continue;
    auto nbrs = spec.neighbors(v);
    bool full = std::all_of(nbrs.begin(), nbrs.end(), inside);

    if (full) {
      ++report.vertices_checked;
      for (const auto& w : nbrs) {
        if (!hf.contains(w)) continue;
        if (std::llabs(hf.h(v) - hf.h(w)) > hf.k0)
          report.violations.push_back(
              {v, "|h(v)-h(w)| > k0 at neighbor " + to_string(w)});
      }
    }

    VertexId s = hf.successor(v);
    if (!inside(s)) continue;
    auto snbrs = spec.neighbors(s);
    if (!std::all_of(snbrs.begin(), snbrs.end(), inside)) continue;
    if (!hf.contains(s)) {
      report.violations.push_back({v, "successor outside domain"});
      continue;
    }
    if (std::find(snbrs.begin(), snbrs.end(), v) == snbrs.end()) {
      report.violations.push_back({v, "successor " + to_string(s) + " is not adjacent"});
      continue;
    }
    for (const auto& w : snbrs) {
      if (w == v) continue;
      if (!hf.contains(w)) {
        report.violations.push_back({v, "N_{v0} leaves the domain at " + to_string(w)});
        continue;
      }
      if (hf.h(w) < hf.h(v) + 1)
        report.violations.push_back(
            {v, "h(v)+1 > h(w) for w = " + to_string(w) + " in N_{successor}"});
    }
  }
  return report;
}

std::vector<VertexId> dependence_set(const LatticeSpec& spec, const HeightFunction& hf,
                                     const VertexId& v) {
  if (!hf.contains(v)) throw std::invalid_argument("vertex outside the height domain");
  VertexId s = hf.successor(v);
  std::vector<VertexId> out;
  for (const auto& w : spec.neighbors(s))
    if (!(w == v)) out.push_back(w);
  std::sort(out.begin(), out.end());
  return out;
}

DependenceShell dependence_shell(const LatticeSpec& spec, const HeightFunction& hf,
                                 const VertexId& v, int n) {
  if (n < 1) throw std::invalid_argument("shell index must be >= 1");
  std::set<VertexId> current{v};
  for (int level = 0; level < n; ++level) {
    std::set<VertexId> next;
    for (const auto& w : current)
      for (const auto& u : dependence_set(spec, hf, w)) next.insert(u);
    current = std::move(next);
  }
  DependenceShell shell;
  shell.root = v;
  shell.n = n;
  shell.members.assign(current.begin(), current.end());
  return shell;
}

namespace {

bool cone_square(const VertexId& x, const VertexId& y) {
  long long lateral = 0;
  for (size_t j = 1; j < x.n.size(); ++j) lateral += std::llabs((long long)y.n[j] - x.n[j]);
  return lateral <= (long long)y.n[0] - x.n[0];
}

bool cone_triangular(const VertexId& x, const VertexId& y) {
  // realized form y₂ - x₂ >= -√3 (y₁ - x₁), y₂ >= x₂ in index arithmetic
  long long d1 = (long long)y.n[0] - x.n[0];
  long long d2 = (long long)y.n[1] - x.n[1];
  return d2 >= 0 && d1 + d2 >= 0;
}

bool cone_hexagonal(const VertexId& x, const VertexId& y) {
  if (x == y) return false;
  // realized first coordinate q₁ = cell + (3/2)(n₁+n₂); height coord β = n₂-n₁
  long long two_dq1 = 2LL * (y.cell - x.cell) + 3LL * ((y.n[0] + y.n[1]) - (x.n[0] + x.n[1]));
  long long dbeta = ((long long)y.n[1] - y.n[0]) - ((long long)x.n[1] - x.n[0]);
  if (x.cell == 1)  // left end of its horizontal edge
    return two_dq1 <= 0 && 3 * dbeta >= -two_dq1;
  return two_dq1 >= 0 && 3 * dbeta >= two_dq1;
}

bool cone_ladder(const VertexId& x, const VertexId& y) {
  long long lateral = 0;
  for (size_t j = 1; j < x.n.size(); ++j) lateral += std::llabs((long long)y.n[j] - x.n[j]);
  long long rhs = (long long)y.n[0] - x.n[0] - (x.cell != y.cell ? 1 : 0);
  return lateral <= rhs;
}

}  // namespace

bool cone_membership(BuiltinLattice which, const VertexId& x, const VertexId& y) {
  switch (which) {
    case BuiltinLattice::square: return cone_square(x, y);
    case BuiltinLattice::triangular: return cone_triangular(x, y);
    case BuiltinLattice::hexagonal: return cone_hexagonal(x, y);
    case BuiltinLattice::ladder: return cone_ladder(x, y);
    case BuiltinLattice::kagome: break;
  }
  throw std::invalid_argument("no closed-form cone for this lattice");
}

bool GrowthReport::all_hold() const {
  return std::all_of(rows.begin(), rows.end(), [](const GrowthRow& r) { return r.holds; });
}

GrowthReport growth_bound_check(const LatticeSpec& spec, const Potential& V,
                                const LatticeFunction& f, double lambda, const HeightFunction& hf,
                                const VertexId& v, int n_max) {
  if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  if (!hf.contains(v)) throw std::invalid_argument("vertex outside the height domain");

  // One-step set for the bound: {v₀} ∪ N_{v₀} \ {v}. The successor must be
  // kept because the equation at v₀ carries deg·(V(v₀)-λ)·f(v₀).
  auto bound_set = [&](const VertexId& w) {
    VertexId s = hf.successor(w);
    std::set<VertexId> out{s};
    for (const auto& u : spec.neighbors(s))
      if (!(u == w)) out.insert(u);
    return out;
  };

  GrowthReport report;
  report.C0 = 0;
  report.D0 = 0;

  std::set<VertexId> equation_vertices;
  std::set<VertexId> all_shell_vertices{v};
  std::vector<std::set<VertexId>> shells(n_max + 1);
  shells[0] = {v};
  for (int n = 1; n <= n_max; ++n) {
    for (const auto& w : shells[n - 1]) {
      equation_vertices.insert(hf.successor(w));
      auto B = bound_set(w);
      report.D0 = std::max(report.D0, static_cast<int>(B.size()));
      shells[n].insert(B.begin(), B.end());
    }
    all_shell_vertices.insert(shells[n].begin(), shells[n].end());
  }

  for (const auto& u : equation_vertices) {
    double residual = std::abs(apply_schrodinger(spec, V, lambda, f, u));
    if (residual > 1e-10) {
      char msg[160];
      std::snprintf(msg, sizeof(msg), "equation residual %.3e exceeds 1e-10 at vertex %s",
                    residual, to_string(u).c_str());
      throw std::runtime_error(msg);
    }
  }
  report.equation_vertices_checked = static_cast<int>(equation_vertices.size());

  std::set<VertexId> region = all_shell_vertices;
  region.insert(equation_vertices.begin(), equation_vertices.end());
  const double supV = V.sup_shifted({region.begin(), region.end()}, lambda);
  report.C0 = spec.max_degree() * (1.0 + supV);

  const double lhs = std::abs(f.at(v));
  double factor = 1.0;
  for (int n = 1; n <= n_max; ++n) {
    factor *= report.C0 * report.D0;
    double sup = 0;
    for (const auto& w : shells[n]) sup = std::max(sup, std::abs(f.at(w)));
    GrowthRow row;
    row.n = n;
    row.lhs = lhs;
    row.sup_shell = sup;
    row.bound = factor * sup;
    row.holds = lhs <= row.bound * (1.0 + 1e-12) + 1e-300;
    report.rows.push_back(row);
  }
  return report;
}

DecayReport decay_bound_sequence(double C0, int D0, double C_A, double A, double a, double h_v,
                                 int n_max) {
  if (C0 <= 0 || D0 < 1 || C_A <= 0 || A <= 0 || a <= 0 || n_max < 1)
    throw std::invalid_argument("decay_bound_sequence parameters must be positive (D0 >= 1)");

  DecayReport report;
  report.log_ratio = std::log(C0 * static_cast<double>(D0)) - A / a;
  if (report.log_ratio < 0)
    report.monotonicity = DecayReport::Monotonicity::decreasing;
  else if (report.log_ratio == 0.0)
    report.monotonicity = DecayReport::Monotonicity::constant;
  else {
    report.monotonicity = DecayReport::Monotonicity::increasing;
    report.note = "A too small: C0 D0 e^{-A/a} > 1, no vanishing certificate";
  }

  const double log_prefix = std::log(C_A) - A * h_v / a;
  const double log_cert = std::log(1e-300);
  report.bounds.reserve(n_max);
  report.log_bounds.reserve(n_max);
  for (int n = 1; n <= n_max; ++n) {
    double lb = log_prefix + n * report.log_ratio;
    report.log_bounds.push_back(lb);
    report.bounds.push_back(std::exp(lb));
    if (!report.certificate_n && lb < log_cert) report.certificate_n = n;
  }
  return report;
}

}  // namespace latsch
