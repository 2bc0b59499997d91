// Acceptance suite: prints one pass/fail line per criterion and exits with
// the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include <latsch/connectivity.hpp>
#include <latsch/height.hpp>
#include <latsch/lattice.hpp>
#include <latsch/momentum.hpp>
#include <latsch/operators.hpp>
#include <latsch/pipeline.hpp>
#include <latsch/ucp.hpp>

#include "oracles.hpp"

using namespace latsch;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(int id, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

bool sets_match(const std::vector<double>& got, const std::vector<double>& expected, double tol) {
  for (double e : expected) {
    bool found = false;
    for (double g : got)
      if (std::abs(g - e) <= tol) found = true;
    if (!found) return false;
  }
  for (double g : got) {
    bool known = false;
    for (double e : expected)
      if (std::abs(g - e) <= tol) known = true;
    if (!known) return false;
  }
  return true;
}

void criterion1_spectra() {
  struct Row {
    const char* name;
    int d;
    int grid;
    double lo, hi;
  };
  const std::vector<Row> rows = {{"square", 2, 201, -1, 1},
                                 {"hexagonal", 2, 201, -1, 1},
                                 {"ladder", 2, 201, -1, 1},
                                 {"kagome", 2, 201, -1, 0.5},
                                 {"square", 3, 101, -1, 1}};
  bool ok = true;
  std::string detail = "sigma(H0) endpoints within 1e-4:";
  for (const Row& r : rows) {
    auto t0 = Clock::now();
    auto intervals = spectrum(symbol_from_lattice(builtin_lattice(r.name, r.d)), r.grid);
    const double elapsed = seconds_since(t0);
    bool this_ok = intervals.size() == 1 && std::abs(intervals.front().lo - r.lo) <= 1e-4 &&
                   std::abs(intervals.back().hi - r.hi) <= 1e-4 && elapsed < 30.0;
    ok = ok && this_ok;
    char buf[128];
    std::snprintf(buf, sizeof(buf), " %s(d=%d) [%.6f,%.6f] %.1fs%s", r.name, r.d,
                  intervals.front().lo, intervals.back().hi, elapsed, this_ok ? "" : " <-FAIL");
    detail += buf;
  }
  report(1, ok, detail);
}

void criterion2_thresholds() {
  auto run = [](const char* name, int d) {
    return thresholds(symbol_from_lattice(builtin_lattice(name, d)), 64).values;
  };
  bool ok = true;
  ok &= sets_match(run("square", 2), {-1, 0, 1}, 1e-5);
  ok &= sets_match(run("hexagonal", 2), {-1, -1.0 / 3, 0, 1.0 / 3, 1}, 1e-5);
  ok &= sets_match(run("kagome", 2), {-1, -0.5, -0.25, 0, 0.5}, 1e-5);
  ok &= sets_match(run("ladder", 2), {-1, -0.6, -0.2, 0.2, 0.6, 1}, 1e-5);
  report(2, ok,
         "threshold sets match the reference data within 1e-5 with no spurious extras "
         "(square/hexagonal/kagome/ladder, d=2)");
}

void criterion3_closed_forms() {
  auto t0 = Clock::now();
  detail::Rng rng(101);
  auto sq2 = symbol_from_lattice(builtin_lattice("square", 2));
  auto sq3 = symbol_from_lattice(builtin_lattice("square", 3));
  auto hex = symbol_from_lattice(builtin_lattice("hexagonal"));
  auto kag = symbol_from_lattice(builtin_lattice("kagome"));
  auto lad = symbol_from_lattice(builtin_lattice("ladder", 2));
  double worst = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    RealVec x = {rng.uniform(0, 2 * std::numbers::pi), rng.uniform(0, 2 * std::numbers::pi)};
    RealVec x3 = {x[0], x[1], rng.uniform(0, 2 * std::numbers::pi)};
    double lam = rng.uniform(-1.5, 1.5);

    double p2 = -(std::cos(x[0]) + std::cos(x[1])) / 2 - lam;
    double p3 = -(std::cos(x3[0]) + std::cos(x3[1]) + std::cos(x3[2])) / 3 - lam;
    double ph = lam * lam -
                (3 + 2 * (std::cos(x[0]) + std::cos(x[1]) + std::cos(x[0] - x[1]))) / 9;
    double beta = 1 + std::cos(x[0]) + std::cos(x[1]) + std::cos(x[0] - x[1]);
    double pk = -(lam - 0.5) * (lam * lam + lam / 2 - beta / 8);
    double c = std::cos(x[0]) + std::cos(x[1]);
    double pl = (lam + (2 * c + 1) / 5) * (lam + (2 * c - 1) / 5);

    worst = std::max(worst, std::abs(char_poly(sq2, x, lam) - p2));
    worst = std::max(worst, std::abs(char_poly(sq3, x3, lam) - p3));
    worst = std::max(worst, std::abs(char_poly(hex, x, lam) - ph));
    worst = std::max(worst, std::abs(char_poly(kag, x, lam) - pk));
    worst = std::max(worst, std::abs(char_poly(lad, x, lam) - pl));
    worst = std::max(worst, std::abs(char_poly(kag, x, 0.5)));  // flat-band factor
  }
  const double elapsed = seconds_since(t0);
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "closed forms and factorizations agree to 1e-12 on 10^4 samples per lattice "
                "(worst %.2e, %.1fs)",
                worst, elapsed);
  report(3, worst <= 1e-12 && elapsed < 5.0, buf);
}

void criterion4_heights() {
  bool ok = true;
  long long members_checked = 0;
  detail::Rng rng(202);
  for (const char* name : {"square", "triangular", "hexagonal", "ladder"}) {
    auto spec = builtin_lattice(name, 2);
    auto hf = builtin_height(name);
    auto which = builtin_from_name(name);
    for (int root_i = 0; root_i < 100 && ok; ++root_i) {
      VertexId root{1 + static_cast<int>(rng.below(spec.num_cells())),
                    {static_cast<int>(rng.below(7)) - 3, static_cast<int>(rng.below(7)) - 3}};
      std::set<VertexId> shell{root};
      for (int n = 1; n <= 12 && ok; ++n) {
        std::set<VertexId> next;
        for (const auto& w : shell)
          for (const auto& u : dependence_set(spec, hf, w)) next.insert(u);
        shell = std::move(next);
        for (const auto& w : shell) {
          const long long var = hf.h(w) - hf.h(root);
          if (var < n || var > 2LL * hf.k0 * n || !cone_membership(which, root, w)) {
            ok = false;
            break;
          }
          ++members_checked;
        }
      }
    }
  }

  // manufactured cone solutions via the inward recursion
  auto spec = builtin_lattice("square", 2);
  auto hf = builtin_height("square");
  auto V = Potential::exponential(0.7, 0.6, 7);
  detail::Rng orng(303);
  int oracle_violations = 0;
  for (int seed_i = 0; seed_i < 3; ++seed_i) {
    auto f = oracles::back_propagated_solution(spec, V, 0.25, 10, orng);
    auto growth = growth_bound_check(spec, V, f, 0.25, hf, VertexId{1, {0, 0}}, 10);
    for (const auto& row : growth.rows)
      if (!row.holds) ++oracle_violations;
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "shell sandwich and cone containment exact on %lld members (n<=12, 100 roots x 4 "
                "lattices); growth bound violations on cone solutions: %d",
                members_checked, oracle_violations);
  report(4, ok && oracle_violations == 0, buf);
}

void criterion5_decay() {
  bool ok = true;
  const double log_cert = std::log(1e-300);
  int worst_n = 0;
  // margins large enough for a 400-step certificate: 690.78 / 400 = 1.727
  for (double c0d0 : {2.0, 4.0, 8.0, 16.0}) {
    for (double margin : {1.75, 2.0, 5.0, 20.0}) {
      auto r = decay_bound_sequence(c0d0, 1, 1.0, std::log(c0d0) + margin, 1.0, 0.0, 400);
      int predicted = 1;
      while (predicted * r.log_ratio >= log_cert) ++predicted;
      ok &= r.certificate_n.has_value() && *r.certificate_n <= 400 &&
            *r.certificate_n == predicted &&
            r.monotonicity == DecayReport::Monotonicity::decreasing;
      if (r.certificate_n) worst_n = std::max(worst_n, *r.certificate_n);
    }
    // thin margins certify at the closed-form index beyond 400 steps
    for (double margin : {0.11, 0.3}) {
      auto r = decay_bound_sequence(c0d0, 1, 1.0, std::log(c0d0) + margin, 1.0, 0.0, 8000);
      int predicted = 1;
      while (predicted * r.log_ratio >= log_cert) ++predicted;
      ok &= r.monotonicity == DecayReport::Monotonicity::decreasing &&
            r.certificate_n.has_value() && *r.certificate_n == predicted;
    }
    // exact boundary in log space
    auto rb = decay_bound_sequence(c0d0, 1, 1.0, std::log(c0d0 * 1.0), 1.0, 0.0, 16);
    ok &= rb.log_ratio == 0.0 && rb.monotonicity == DecayReport::Monotonicity::constant;
    auto ri = decay_bound_sequence(c0d0, 1, 1.0, std::log(c0d0) - 0.05, 1.0, 0.0, 16);
    ok &= ri.monotonicity == DecayReport::Monotonicity::increasing;
  }
  char buf[320];
  std::snprintf(buf, sizeof(buf),
                "vanishing certificate < 1e-300 within n <= 400 for A/a >= ln(C0 D0)+1.75 "
                "(max n %d, matches closed form; margins in (0.1, 1.73) certify at the "
                "closed-form index beyond 400); boundary exact in log space",
                worst_n);
  report(5, ok, buf);
}

void criterion6_ucp() {
  // (a) exhaustive two-points on the 3x3 square interior, under a second
  auto t0 = Clock::now();
  auto square3 = BoundaryGraph::from_box(builtin_lattice("square", 2), 1.5);
  auto tp = two_points_condition(square3, {});
  const double square_time = seconds_since(t0);
  bool ok_square = tp.outcome == TwoPointsOutcome::holds && square_time < 1.0;

  // (b) the kagome hexagon-ring reconstruction is extreme-point-free
  auto kag_spec = builtin_lattice("kagome");
  auto kag = BoundaryGraph::from_box(kag_spec, 1.0);
  auto free_set = find_extreme_point_free_subset(kag, 200, 11);
  bool ok_kagome_witness = free_set.has_value() && extreme_points(kag, *free_set).empty();
  TwoPointsOptions kopt;
  kopt.mode = TwoPointsMode::random;
  kopt.random_trials = 50;
  kopt.seed = 11;
  if (free_set) kopt.injected = {*free_set};
  auto ktp = two_points_condition(kag, kopt);
  ok_kagome_witness = ok_kagome_witness && ktp.outcome == TwoPointsOutcome::fails &&
                      free_set && ktp.witness == *free_set;

  // (c) nullity vanishes on 100 random (V, lambda) instances over patches
  // satisfying both hypotheses
  auto tri = builtin_lattice("triangular");
  detail::Rng rng(404);
  int nonzero = 0, instances = 0;
  for (int m : {2, 3, 4}) {
    std::vector<VertexId> interior;
    for (int n1 = 0; n1 <= m; ++n1)
      for (int n2 = 0; n1 + n2 <= m; ++n2) interior.push_back(VertexId{1, {n1, n2}});
    auto G = BoundaryGraph::from_interior(tri, interior);
    if (!check_a5(G).passed() || two_points_condition(G, {}).outcome != TwoPointsOutcome::holds) {
      nonzero = 1000;  // hypothesis graphs must qualify
      break;
    }
    for (int trial = 0; trial < 34 && instances < 100; ++trial, ++instances) {
      std::map<VertexId, double> V;
      for (const auto& v : G.interior()) V[v] = rng.uniform(-1.5, 1.5);
      if (dirichlet_neumann_nullity(G, V, rng.uniform(-2, 2)) != 0) ++nonzero;
    }
  }

  // (d) the kagome flat-band instance has nontrivial nullity
  auto kag_big = BoundaryGraph::from_box(kag_spec, 2.5);
  int flat_nullity = dirichlet_neumann_nullity(kag_big, {}, 0.5);

  char buf[320];
  std::snprintf(buf, sizeof(buf),
                "3x3 exhaustive holds in %.2fs; kagome hexagon-ring witness fails two-points; "
                "nullity zero on %d/100 hypothesis instances; kagome flat-band nullity %d",
                square_time, instances - nonzero, flat_nullity);
  report(6, ok_square && ok_kagome_witness && nonzero == 0 && instances == 100 &&
                flat_nullity >= 1,
         buf);
}

void criterion7_flat_band() {
  auto spec = builtin_lattice("kagome");
  auto f = kagome_flat_band_vector(spec, {0, 0}, 3);
  double worst = 0;
  int interior_checked = 0;
  for (const auto& v : spec.box_vertices(3)) {
    bool full = true;
    for (const auto& w : spec.neighbors(v))
      if (norm(w.n) > 3) full = false;
    if (!full) continue;
    ++interior_checked;
    worst = std::max(worst, std::abs(apply_schrodinger(spec, Potential::zero(), 0.5, f, v)));
  }

  auto G = BoundaryGraph::from_box(spec, 3);
  std::map<VertexId, double> values;
  for (const auto& [v, c] : f.support()) values[v] = c.real();
  double dirichlet = 0, neumann = 0;
  for (const auto& b : G.boundary()) {
    dirichlet = std::max(dirichlet, std::abs(f.at(b)));
    neumann = std::max(neumann, std::abs(neumann_residual(G, values, b)));
  }
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "kagome flat-band vector: residual %.1e on %d interior vertices, boundary "
                "Dirichlet %.1e, Neumann %.1e",
                worst, interior_checked, dirichlet, neumann);
  report(7, worst <= 1e-14 && dirichlet == 0.0 && neumann <= 1e-15 && interior_checked > 0, buf);
}

void criterion8_connectivity() {
  auto t0 = Clock::now();
  bool ok = true;
  double worst_residual = 0, worst_endpoint = 0;
  int verified = 0;

  auto run_case = [&](const char* name, int d, auto make_point, auto make_path) {
    auto sym = symbol_from_lattice(builtin_lattice(name, d));
    detail::Rng rng(1000 + d);
    for (int trial = 0; trial < 50; ++trial) {
      double lam = make_point(rng);
      PathSample ps = make_path(lam, rng);
      auto rep = verify_path(ps, sym, lam, 1e-8);
      worst_residual = std::max(worst_residual, rep.max_residual);
      worst_endpoint = std::max(worst_endpoint, rep.endpoint_im);
      ok = ok && rep.passed() && rep.endpoint_im <= 1e-10 && ps.points.size() >= 1000;
      ++verified;
    }
  };

  for (int d : {2, 3}) {
    run_case(
        "square", d, [](detail::Rng& rng) { return rng.uniform(-0.95, 0.95); },
        [d](double lam, detail::Rng& rng) {
          auto z0 = random_square_surface_point(d, lam, 0.5, rng);
          return square_connect(z0, lam, 0.5, 1000);
        });
  }
  run_case(
      "hexagonal", 2,
      [](detail::Rng& rng) {
        double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
        return sign * rng.uniform(0.05, 0.95);
      },
      [](double lam, detail::Rng& rng) {
        auto z0 = random_hexagonal_surface_point(lam, 0.5, rng);
        return hexagonal_connect(z0, lam, 0.5, 1000);
      });

  const double elapsed = seconds_since(t0);
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "%d paths verified (residual <= 1e-8, worst %.1e; |Im c(1)| <= 1e-10, worst "
                "%.1e; Omega_a containment) in %.1fs",
                verified, worst_residual, worst_endpoint, elapsed);
  report(8, ok && verified == 150 && elapsed < 10.0, buf);
}

void criterion9_rellich_demo() {
  RellichDemoOptions opt;
  opt.R_values = {10, 20, 30};
  opt.seed = 2;
  auto result = run_rellich_demo(opt);
  char buf[240];
  std::snprintf(buf, sizeof(buf),
                "square-lattice demo: tails %.1e -> %.1e -> %.1e (monotone=%d, final < 1e-10: "
                "%d), interior-concentrated embedded candidates %d, growth bound %s",
                result.rows[0].tail_mass, result.rows[1].tail_mass, result.rows[2].tail_mass,
                result.tail_monotone ? 1 : 0, result.tail_below_1e10 ? 1 : 0,
                result.embedded_candidates, result.growth_bound_ok ? "holds" : "violated");
  report(9, result.passed(), buf);
}

}  // namespace

int main() {
  auto t0 = Clock::now();
  criterion1_spectra();
  criterion2_thresholds();
  criterion3_closed_forms();
  criterion4_heights();
  criterion5_decay();
  criterion6_ucp();
  criterion7_flat_band();
  criterion8_connectivity();
  criterion9_rellich_demo();
  std::printf("%d of 9 criteria passed (%.1fs total)\n", 9 - failures, seconds_since(t0));
  return failures;
}
