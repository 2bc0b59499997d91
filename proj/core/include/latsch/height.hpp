#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "latsch/lattice.hpp"
#include "latsch/operators.hpp"

namespace latsch {

/// Increasing height function: integer h with bounded adjacent variation and,
/// for every v, a neighbor successor(v) = v₀ whose other neighbors all sit at
/// least one level above h(v).
struct HeightFunction {
  std::string name;
  int k0 = 1;
  std::function<long long(const VertexId&)> h;
  std::function<VertexId(const VertexId&)> successor;
  std::function<bool(const VertexId&)> in_domain;  // whole lattice when empty
  /// Constant a with h(w) <= a |realized w| on the domain of dependence
  /// (sharp per builtin lattice).
  double growth_constant_a = 0;

  bool contains(const VertexId& v) const { return !in_domain || in_domain(v); }
};

/// The per-lattice height functions with their k0 and successor choice.
/// Throws for kagome: no increasing height function exists there.
HeightFunction builtin_height(BuiltinLattice which);
HeightFunction builtin_height(const std::string& name);

struct HeightViolation {
  VertexId vertex;
  std::string what;
};

struct HeightReport {
  int vertices_checked = 0;
  std::vector<HeightViolation> violations;

  bool passed() const { return violations.empty(); }
};

/// Checks both defining properties on every box vertex whose relevant
/// neighborhoods lie inside the box. Violations are data, not errors.
HeightReport verify_height(const LatticeSpec& spec, const HeightFunction& hf, double sample_box_R);

/// D_h(v) = N_{successor(v)} \ {v}, sorted. Size <= deg(successor) - 1.
std::vector<VertexId> dependence_set(const LatticeSpec& spec, const HeightFunction& hf,
                                     const VertexId& v);

struct DependenceShell {
  VertexId root;
  int n = 1;
  std::vector<VertexId> members;  // sorted
};

/// Shell n of the domain of dependence via the recursion
/// D_{h,n} = ∪_{w in D_{h,n-1}} D_h(w).
DependenceShell dependence_shell(const LatticeSpec& spec, const HeightFunction& hf,
                                 const VertexId& v, int n);

/// Closed-form cone description of the full domain of dependence, evaluated in
/// exact integer arithmetic. Throws for lattices without a listed cone.
bool cone_membership(BuiltinLattice which, const VertexId& x, const VertexId& y);

struct GrowthRow {
  int n = 0;
  double lhs = 0;        // |f(v)|
  double sup_shell = 0;  // sup over the shell
  double bound = 0;      // (C0 D0)^n * sup_shell
  bool holds = false;
};

struct GrowthReport {
  double C0 = 0;
  int D0 = 0;
  std::vector<GrowthRow> rows;
  int equation_vertices_checked = 0;

  bool all_hold() const;
};

/// Verifies |f(v)| <= (C0 D0)^n sup_{shell n} |f| for n <= n_max, with
/// C0 = deg_max (1 + sup |V-λ|). The recursion shells here include the
/// successor vertex itself, since the equation at v₀ carries the term
/// deg·(V(v₀)-λ)·f(v₀). Throws if f fails the equation (residual > 1e-10)
/// at a required vertex.
GrowthReport growth_bound_check(const LatticeSpec& spec, const Potential& V,
                                const LatticeFunction& f, double lambda, const HeightFunction& hf,
                                const VertexId& v, int n_max);

struct DecayReport {
  enum class Monotonicity { decreasing, constant, increasing };

  std::vector<double> bounds;      // b_n for n = 1..n_max (may underflow to 0)
  std::vector<double> log_bounds;  // exact log-space values
  double log_ratio = 0;            // log(C0 D0) - A/a
  Monotonicity monotonicity = Monotonicity::constant;
  std::optional<int> certificate_n;  // first n with b_n < 1e-300
  std::string note;
};

/// b_n = C_A e^{-A h_v / a} (C0 D0 e^{-A/a})^n, evaluated in log space.
/// Certifies vanishing at the first n with b_n < 1e-300 when the ratio is
/// below one; reports "A too small" when it exceeds one.
DecayReport decay_bound_sequence(double C0, int D0, double C_A, double A, double a, double h_v,
                                 int n_max);

}  // namespace latsch
