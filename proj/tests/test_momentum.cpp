#include <doctest.h>

#include <cmath>
#include <numbers>

#include <latsch/io.hpp>
#include <latsch/lattice.hpp>
#include <latsch/momentum.hpp>

using namespace latsch;

namespace {

constexpr double kPi = std::numbers::pi;

double rnd(detail::Rng& rng) { return rng.uniform(0, 2 * kPi); }

double square_p(const RealVec& x, double lam, int d) {
  double s = 0;
  for (int j = 0; j < d; ++j) s += std::cos(x[j]);
  return -s / d - lam;
}

double hexagonal_p(const RealVec& x, double lam) {
  return lam * lam -
         (3 + 2 * (std::cos(x[0]) + std::cos(x[1]) + std::cos(x[0] - x[1]))) / 9.0;
}

double kagome_beta(const RealVec& x) {
  return 1 + std::cos(x[0]) + std::cos(x[1]) + std::cos(x[0] - x[1]);
}

double kagome_p(const RealVec& x, double lam) {
  return -(lam - 0.5) * (lam * lam + lam / 2 - kagome_beta(x) / 8);
}

double ladder_factor(const RealVec& x, double lam, int d, double sign) {
  double c = 0;
  for (int j = 0; j < d; ++j) c += std::cos(x[j]);
  return lam + (2 * c + sign) / (2.0 * d + 1.0);
}

void check_set(const std::vector<double>& got, const std::vector<double>& expected, double tol) {
  for (double e : expected) {
    bool found = false;
    for (double g : got)
      if (std::abs(g - e) <= tol) found = true;
    CHECK_MESSAGE(found, "missing threshold ", e);
  }
  for (double g : got) {
    bool known = false;
    for (double e : expected)
      if (std::abs(g - e) <= tol) known = true;
    CHECK_MESSAGE(known, "spurious threshold ", g);
  }
}

}  // namespace

TEST_CASE("symbols reproduce the reference matrices") {
  detail::Rng rng(2);

  auto hex = symbol_from_lattice(builtin_lattice("hexagonal"));
  auto kag = symbol_from_lattice(builtin_lattice("kagome"));
  auto lad = symbol_from_lattice(builtin_lattice("ladder", 2));
  const Complex i{0, 1};
  for (int trial = 0; trial < 50; ++trial) {
    RealVec x = {rnd(rng), rnd(rng)};
    auto H = hex.evaluate(x);
    Complex phi = 1.0 + std::exp(i * x[0]) + std::exp(i * x[1]);
    CHECK(std::abs(H(0, 1) + phi / 3.0) <= 1e-14);
    CHECK(std::abs(H(1, 0) + std::conj(phi) / 3.0) <= 1e-14);
    CHECK(std::abs(H(0, 0)) == 0.0);

    auto K = kag.evaluate(x);
    CHECK(std::abs(K(0, 1) + (1.0 + std::exp(i * (x[0] - x[1]))) / 4.0) <= 1e-14);
    CHECK(std::abs(K(0, 2) + (1.0 + std::exp(i * x[0])) / 4.0) <= 1e-14);
    CHECK(std::abs(K(1, 2) + (1.0 + std::exp(i * x[1])) / 4.0) <= 1e-14);

    auto L = lad.evaluate(x);
    double c = std::cos(x[0]) + std::cos(x[1]);
    CHECK(std::abs(L(0, 0) + 2 * c / 5.0) <= 1e-14);
    CHECK(std::abs(L(0, 1) + 1.0 / 5.0) <= 1e-14);
  }
}

TEST_CASE("symbols are Hermitian on the real torus") {
  detail::Rng rng(3);
  for (const char* name : {"square", "triangular", "hexagonal", "kagome", "ladder"}) {
    auto sym = symbol_from_lattice(builtin_lattice(name, 2));
    for (int trial = 0; trial < 200; ++trial) {
      RealVec x = {rnd(rng), rnd(rng)};
      auto H = sym.evaluate(x);
      CHECK((H - H.adjoint()).cwiseAbs().maxCoeff() <= 1e-14);
    }
  }
}

TEST_CASE("characteristic polynomial matches every closed form") {
  detail::Rng rng(4);
  auto sq2 = symbol_from_lattice(builtin_lattice("square", 2));
  auto sq3 = symbol_from_lattice(builtin_lattice("square", 3));
  auto hex = symbol_from_lattice(builtin_lattice("hexagonal"));
  auto kag = symbol_from_lattice(builtin_lattice("kagome"));
  auto lad = symbol_from_lattice(builtin_lattice("ladder", 2));

  CHECK(std::abs(char_poly(sq2, RealVec{0, 0}, -1.0)) == 0.0);

  for (int trial = 0; trial < 10000; ++trial) {
    RealVec x = {rnd(rng), rnd(rng)};
    RealVec x3 = {rnd(rng), rnd(rng), rnd(rng)};
    double lam = rng.uniform(-1.5, 1.5);
    CHECK(std::abs(char_poly(sq2, x, lam) - square_p(x, lam, 2)) <= 1e-12);
    CHECK(std::abs(char_poly(sq3, x3, lam) - square_p(x3, lam, 3)) <= 1e-12);
    CHECK(std::abs(char_poly(hex, x, lam) - hexagonal_p(x, lam)) <= 1e-12);
    CHECK(std::abs(char_poly(kag, x, lam) - kagome_p(x, lam)) <= 1e-12);
    CHECK(std::abs(char_poly(lad, x, lam) -
                   ladder_factor(x, lam, 2, 1) * ladder_factor(x, lam, 2, -1)) <= 1e-12);
  }
}

TEST_CASE("p is real on the real torus and the kagome flat slice vanishes") {
  detail::Rng rng(5);
  auto kag = symbol_from_lattice(builtin_lattice("kagome"));
  auto hex = symbol_from_lattice(builtin_lattice("hexagonal"));
  for (int trial = 0; trial < 10000; ++trial) {
    RealVec x = {rnd(rng), rnd(rng)};
    double lam = rng.uniform(-1.5, 1.5);
    Complex p = char_poly(hex, x, lam);
    CHECK(std::abs(p.imag()) <= 1e-13 * (1 + std::abs(p)));
    CHECK(std::abs(char_poly(kag, x, 0.5)) <= 1e-12);
    auto g = grad_char_poly(kag, x, 0.5);
    CHECK(std::abs(g[0]) <= 1e-12);
    CHECK(std::abs(g[1]) <= 1e-12);
  }
}

TEST_CASE("LU determinant and the Fourier expansion agree off the real torus") {
  detail::Rng rng(6);
  for (const char* name : {"square", "hexagonal", "kagome", "ladder"}) {
    auto sym = symbol_from_lattice(builtin_lattice(name, 2));
    for (int trial = 0; trial < 500; ++trial) {
      CVec z = {Complex(rnd(rng), rng.uniform(-0.4, 0.4)),
                Complex(rnd(rng), rng.uniform(-0.4, 0.4))};
      Complex lam{rng.uniform(-1.2, 1.2), rng.uniform(-0.3, 0.3)};
      Complex a = char_poly(sym, z, lam);
      Complex b = sym.expansion().eval(z, lam);
      CHECK(std::abs(a - b) <= 1e-12 * (1 + std::abs(a)));
    }
  }
}

TEST_CASE("analytic gradient: pinned values and finite-difference agreement") {
  auto sq = symbol_from_lattice(builtin_lattice("square", 2));
  auto g = grad_char_poly(sq, RealVec{kPi / 2, kPi / 2}, 0.0);
  CHECK(std::abs(g[0] - 0.5) <= 1e-14);
  CHECK(std::abs(g[1] - 0.5) <= 1e-14);
  auto g0 = grad_char_poly(sq, RealVec{0, 0}, 0.3);
  CHECK(std::abs(g0[0]) <= 1e-14);
  CHECK(std::abs(g0[1]) <= 1e-14);

  detail::Rng rng(7);
  const double h = 1e-5;
  for (const char* name : {"hexagonal", "kagome", "ladder"}) {
    auto sym = symbol_from_lattice(builtin_lattice(name, 2));
    for (int trial = 0; trial < 50; ++trial) {
      CVec z = {Complex(rnd(rng), rng.uniform(-0.3, 0.3)),
                Complex(rnd(rng), rng.uniform(-0.3, 0.3))};
      Complex lam{rng.uniform(-1, 1), rng.uniform(-0.2, 0.2)};
      auto grad = grad_char_poly(sym, z, lam);
      for (int axis = 0; axis < 2; ++axis) {
        CVec zp = z, zm = z;
        zp[axis] += h;
        zm[axis] -= h;
        Complex fd = (char_poly(sym, zp, lam) - char_poly(sym, zm, lam)) / (2 * h);
        CHECK(std::abs(grad[axis] - fd) <= 1e-7 * (1 + std::abs(grad[axis])));
      }
    }
  }
}

TEST_CASE("band functions and det/band consistency") {
  auto sq = symbol_from_lattice(builtin_lattice("square", 2));
  auto sb = band_functions(sq, RealVec{0, 0});
  REQUIRE(sb.size() == 1);
  CHECK(sb[0] == doctest::Approx(-1.0).epsilon(1e-14));

  auto hex = symbol_from_lattice(builtin_lattice("hexagonal"));
  auto hb = band_functions(hex, RealVec{0, 0});
  CHECK(hb[0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(hb[1] == doctest::Approx(1.0).epsilon(1e-12));

  detail::Rng rng(8);
  auto kag = symbol_from_lattice(builtin_lattice("kagome"));
  for (int trial = 0; trial < 100; ++trial) {
    RealVec x = {rnd(rng), rnd(rng)};
    auto bands = band_functions(kag, x);
    CHECK(bands.back() == doctest::Approx(0.5).epsilon(1e-12));
  }

  for (const char* name : {"square", "hexagonal", "kagome", "ladder"}) {
    auto sym = symbol_from_lattice(builtin_lattice(name, 2));
    const double sgn = sym.size() % 2 == 0 ? 1.0 : -1.0;
    for (int trial = 0; trial < 10000; ++trial) {
      RealVec x = {rnd(rng), rnd(rng)};
      double lam = rng.uniform(-1.5, 1.5);
      auto bands = band_functions(sym, x);
      double prod = 1;
      for (double b : bands) prod *= lam - b;
      CHECK(std::abs(char_poly(sym, x, lam) - sgn * prod) <= 1e-10);
    }
  }
}

TEST_CASE("spectra match the reference intervals") {
  struct Row {
    const char* name;
    double lo, hi, tol;
  };
  for (const Row& r : {Row{"square", -1, 1, 1e-4}, Row{"hexagonal", -1, 1, 1e-4},
                       Row{"kagome", -1, 0.5, 1e-4}, Row{"ladder", -1, 1, 1e-4},
                       Row{"triangular", -1, 0.5, 1e-3}}) {
    auto sym = symbol_from_lattice(builtin_lattice(r.name, 2));
    auto intervals = spectrum(sym, 201);
    REQUIRE(intervals.size() == 1);
    CHECK(std::abs(intervals[0].lo - r.lo) <= r.tol);
    CHECK(std::abs(intervals[0].hi - r.hi) <= r.tol);
  }
  CHECK_THROWS_AS(spectrum(symbol_from_lattice(builtin_lattice("square", 2)), 8),
                  std::invalid_argument);

  // refining the grid never shrinks the union by more than resolution error
  for (const char* name : {"hexagonal", "kagome"}) {
    auto sym = symbol_from_lattice(builtin_lattice(name, 2));
    auto coarse = spectrum(sym, 65);
    auto fine = spectrum(sym, 201);
    const double resolution = 5e-3;
    for (const auto& c : coarse) {
      bool covered = false;
      for (const auto& f : fine)
        if (c.lo >= f.lo - resolution && c.hi <= f.hi + resolution) covered = true;
      CHECK(covered);
    }
  }
}

TEST_CASE("threshold sets match the reference data") {
  auto run = [](const char* name, int d) {
    return thresholds(symbol_from_lattice(builtin_lattice(name, d)), 64).values;
  };
  check_set(run("square", 2), {-1, 0, 1}, 1e-5);
  check_set(run("square", 3), {-1, -1.0 / 3, 1.0 / 3, 1}, 1e-5);
  check_set(run("hexagonal", 2), {-1, -1.0 / 3, 0, 1.0 / 3, 1}, 1e-5);
  check_set(run("kagome", 2), {-1, -0.5, -0.25, 0, 0.5}, 1e-5);
  check_set(run("ladder", 2), {-1, -0.6, -0.2, 0.2, 0.6, 1}, 1e-5);
  // no reference data for the triangular lattice; derived from band criticals
  check_set(run("triangular", 2), {-1, 1.0 / 3, 0.5}, 1e-5);

  // T̃ contains the spectral endpoints
  for (const char* name : {"square", "hexagonal", "kagome", "ladder"}) {
    auto sym = symbol_from_lattice(builtin_lattice(name, 2));
    auto iv = spectrum(sym, 101);
    auto vals = thresholds(sym, 64).values;
    for (double endpoint : {iv.front().lo, iv.back().hi}) {
      bool found = false;
      for (double v : vals)
        if (std::abs(v - endpoint) <= 1e-3) found = true;
      CHECK(found);
    }
  }
}

TEST_CASE("fermi slices") {
  auto sq = symbol_from_lattice(builtin_lattice("square", 2));
  auto slice = fermi_slice(sq, 0.0, 129, 1e-9);
  REQUIRE(!slice.points.empty());
  bool has_center = false;
  for (size_t i = 0; i < slice.points.size(); ++i) {
    CHECK(slice.abs_p[i] <= 1e-9);
    CHECK(slice.points[i][0] >= 0);
    CHECK(slice.points[i][0] < 2 * kPi);
    if (std::abs(slice.points[i][0] - kPi / 2) <= 1e-9 &&
        std::abs(slice.points[i][1] - kPi / 2) <= 1e-9)
      has_center = true;
    // λ = 0 is a threshold: the slice meets the singular points (0,π), (π,0);
    // flagged points must sit at such corners, far-away points must not flag
    const double corner_dist = std::max(std::abs(std::sin(slice.points[i][0])),
                                        std::abs(std::sin(slice.points[i][1])));
    if (slice.is_singular(i)) CHECK(corner_dist <= 1e-5);
    if (corner_dist > 1e-3) CHECK(!slice.is_singular(i));
  }
  CHECK(has_center);
  int singular_count = 0;
  for (size_t i = 0; i < slice.points.size(); ++i)
    if (slice.is_singular(i)) ++singular_count;
  CHECK(singular_count >= 1);
  // away from the thresholds every sampled Fermi point is regular
  auto regular = fermi_slice(sq, 0.37, 65, 1e-9);
  REQUIRE(!regular.points.empty());
  for (size_t i = 0; i < regular.points.size(); ++i) CHECK(!regular.is_singular(i));

  CHECK(fermi_slice(sq, 2.0, 65, 1e-9).points.empty());

  auto lad = symbol_from_lattice(builtin_lattice("ladder", 2));
  auto ls = fermi_slice(lad, 0.3, 65, 1e-9);
  REQUIRE(!ls.points.empty());
  for (const auto& x : ls.points) {
    double c = std::cos(x[0]) + std::cos(x[1]);
    double f1 = 0.3 + (2 * c + 1) / 5.0;
    double f2 = 0.3 + (2 * c - 1) / 5.0;
    CHECK(std::min(std::abs(f1), std::abs(f2)) <= 1e-8);
  }

  CHECK_THROWS_AS(fermi_slice(sq, 0.0, 16, 1e-9), std::invalid_argument);
  CHECK_THROWS_AS(fermi_slice(sq, 0.0, 65, 0.0), std::invalid_argument);
}

TEST_CASE("exclusion sets") {
  auto sq = exclusion_set_T1(BuiltinLattice::square);
  CHECK(sq.specified);
  CHECK(sq.points == std::vector<double>{-1, 1});
  CHECK(exclusion_set_T1(BuiltinLattice::hexagonal).points == std::vector<double>{-1, 0, 1});
  CHECK(exclusion_set_T1(BuiltinLattice::kagome).points == std::vector<double>{-1, -0.25, 0.5});

  auto lad = exclusion_set_T1(BuiltinLattice::ladder, 2);
  REQUIRE(lad.intervals.size() == 2);
  CHECK(lad.intervals[0].lo == doctest::Approx(-1.0));
  CHECK(lad.intervals[0].hi == doctest::Approx(-0.6));
  CHECK(lad.intervals[1].lo == doctest::Approx(0.6));
  CHECK(lad.intervals[1].hi == doctest::Approx(1.0));
  CHECK(lad.contains(0.8));
  CHECK(!lad.contains(0.3));

  CHECK(!exclusion_set_T1(BuiltinLattice::triangular).specified);
}

TEST_CASE("momentum exports are deterministic") {
  auto sym = symbol_from_lattice(builtin_lattice("kagome"));
  auto th = thresholds(sym, 64);
  auto js = thresholds_json("kagome", 2, th);
  CHECK(js == thresholds_json("kagome", 2, th));
  CHECK(js.find("\"lattice\": \"kagome\"") != std::string::npos);

  auto slice = fermi_slice(sym, 0.1, 65, 1e-8);
  auto csv = fermi_csv(slice);
  CHECK(csv.rfind("x1,x2,abs_p,grad_norm\n", 0) == 0);
  CHECK(csv == fermi_csv(slice));

  auto sp = spectrum_json("kagome", 2, 201, spectrum(sym, 64));
  CHECK(sp.find("\"intervals\"") != std::string::npos);
}
