#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>

#include <latsch/io.hpp>
#include <latsch/lattice.hpp>

#include "oracles.hpp"

using namespace latsch;

namespace {

std::set<IntVec> translation_set(const std::vector<VertexId>& verts, int cell) {
  std::set<IntVec> out;
  for (const auto& v : verts)
    if (v.cell == cell) out.insert(v.n);
  return out;
}

}  // namespace

TEST_CASE("square lattice matches its reference definition") {
  auto spec = builtin_lattice("square", 2);
  CHECK(spec.num_cells() == 1);
  CHECK(spec.degree(1) == 4);
  CHECK(spec.edge_length() == doctest::Approx(1.0));
  std::set<IntVec> gens;
  for (const auto& g : spec.generators()) {
    CHECK(g.from == 1);
    CHECK(g.to == 1);
    gens.insert(g.shift);
  }
  CHECK(gens == std::set<IntVec>{{1, 0}, {-1, 0}, {0, 1}, {0, -1}});

  auto nbrs = spec.neighbors(VertexId{1, {0, 0}});
  CHECK(translation_set(nbrs, 1) == std::set<IntVec>{{1, 0}, {-1, 0}, {0, 1}, {0, -1}});

  auto d3 = builtin_lattice("square", 3);
  CHECK(d3.degree(1) == 6);
  CHECK(d3.d() == 3);
}

TEST_CASE("hexagonal lattice neighbors and realization") {
  auto spec = builtin_lattice("hexagonal");
  CHECK(spec.num_cells() == 2);
  CHECK(spec.degree(1) == 3);
  CHECK(spec.degree(2) == 3);

  auto nbrs = spec.neighbors(VertexId{1, {0, 0}});
  CHECK(translation_set(nbrs, 2) == std::set<IntVec>{{0, 0}, {-1, 0}, {0, -1}});
  CHECK(translation_set(nbrs, 1).empty());

  auto p2 = spec.realize(VertexId{2, {0, 0}});
  CHECK(p2[0] == doctest::Approx(2.0));
  CHECK(p2[1] == doctest::Approx(0.0));
  CHECK(spec.edge_length() == doctest::Approx(1.0));
}

TEST_CASE("triangular lattice neighbors agree with the sixth-root enumeration") {
  auto spec = builtin_lattice("triangular");
  CHECK(spec.degree(1) == 6);
  detail::Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    VertexId v{1, {static_cast<int>(rng.below(9)) - 4, static_cast<int>(rng.below(9)) - 4}};
    auto got = spec.neighbors(v);
    auto expected = oracles::triangular_neighbors_by_omega(v);
    CHECK(got == expected);
  }
}

TEST_CASE("kagome lattice geometry") {
  auto spec = builtin_lattice("kagome");
  CHECK(spec.num_cells() == 3);
  for (int j = 1; j <= 3; ++j) CHECK(spec.degree(j) == 4);
  auto p3 = spec.realize(VertexId{3, {0, 0}});
  CHECK(p3[0] == doctest::Approx(0.25));
  CHECK(p3[1] == doctest::Approx(std::sqrt(3.0) / 4));
  CHECK(spec.edge_length() == doctest::Approx(0.5));
}

TEST_CASE("ladder lattice") {
  auto spec = builtin_lattice("ladder", 2);
  CHECK(spec.num_cells() == 2);
  CHECK(spec.degree(1) == 5);
  CHECK(spec.ambient_dim() == 3);
  auto x = spec.realize(VertexId{2, {1, 2}});
  CHECK(x[0] == doctest::Approx(1.0));
  CHECK(x[1] == doctest::Approx(2.0));
  CHECK(x[2] == doctest::Approx(1.0));
  CHECK(builtin_lattice("ladder", 3).degree(1) == 7);
}

TEST_CASE("realize is affine in the translation index") {
  auto spec = builtin_lattice("square", 2);
  auto x = spec.realize(VertexId{1, {2, 3}});
  CHECK(x[0] == doctest::Approx(2.0));
  CHECK(x[1] == doctest::Approx(3.0));
}

TEST_CASE("every edge of every builtin lattice has the uniform length") {
  for (const char* name : {"square", "triangular", "hexagonal", "kagome", "ladder"}) {
    auto spec = builtin_lattice(name, 2);
    const double len = spec.edge_length();
    for (const auto& v : spec.box_vertices(2)) {
      auto xv = spec.realize(v);
      for (const auto& w : spec.neighbors(v)) {
        auto xw = spec.realize(w);
        double dist = 0;
        for (int i = 0; i < spec.ambient_dim(); ++i) dist += (xv[i] - xw[i]) * (xv[i] - xw[i]);
        CHECK(std::sqrt(dist) == doctest::Approx(len).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("box_vertices counts and ordering") {
  auto square = builtin_lattice("square", 2);
  auto box = square.box_vertices(1.0);
  CHECK(box.size() == 5);
  CHECK(translation_set(box, 1) ==
        std::set<IntVec>{{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}});

  CHECK(builtin_lattice("hexagonal").box_vertices(1.0).size() == 10);
  CHECK(builtin_lattice("kagome").box_vertices(0.0).size() == 3);

  CHECK(std::is_sorted(box.begin(), box.end()));
  CHECK(square.box_vertices(1.0) == box);  // deterministic
}

TEST_CASE("adjacency is symmetric, loop-free, translation-invariant and connected") {
  for (const char* name : {"square", "triangular", "hexagonal", "kagome", "ladder"}) {
    auto spec = builtin_lattice(name, 2);
    auto box = spec.box_vertices(2.2);
    for (const auto& v : box) {
      auto nbrs = spec.neighbors(v);
      CHECK(static_cast<int>(nbrs.size()) == spec.degree(v.cell));
      for (const auto& w : nbrs) {
        CHECK(!(w == v));
        auto back = spec.neighbors(w);
        CHECK(std::find(back.begin(), back.end(), v) != back.end());
      }
    }
    CHECK(box_is_connected(spec, spec.box_vertices(2.0)));

    int generator_count = 0;
    for (int j = 1; j <= spec.num_cells(); ++j) generator_count += spec.degree(j);
    CHECK(static_cast<int>(spec.generators().size()) == generator_count);
  }
}

TEST_CASE("lattice JSON round-trips") {
  for (const char* name : {"square", "triangular", "hexagonal", "kagome", "ladder"}) {
    auto spec = builtin_lattice(name, 2);
    auto copy = lattice_from_json(lattice_to_json(spec));
    CHECK(copy.d() == spec.d());
    CHECK(copy.ambient_dim() == spec.ambient_dim());
    CHECK(copy.generators() == spec.generators());
    CHECK(copy.points() == spec.points());
    CHECK(copy.basis() == spec.basis());
    CHECK(copy.name() == spec.name());
  }
  auto d3 = builtin_lattice("square", 3);
  CHECK(lattice_from_json(lattice_to_json(d3)).d() == 3);
}

TEST_CASE("shipped lattice documents are the canonical serializations") {
  struct Doc {
    const char* file;
    const char* name;
    int d;
  };
  for (const Doc& doc : {Doc{"square_d2.json", "square", 2}, Doc{"square_d3.json", "square", 3},
                         Doc{"triangular.json", "triangular", 2},
                         Doc{"hexagonal.json", "hexagonal", 2}, Doc{"kagome.json", "kagome", 2},
                         Doc{"ladder_d2.json", "ladder", 2}, Doc{"ladder_d3.json", "ladder", 3}}) {
    auto shipped = latsch::read_file(std::filesystem::path(LATSCH_LATTICE_DOC_DIR) / doc.file);
    CHECK(shipped == lattice_to_json(builtin_lattice(doc.name, doc.d)));
    auto parsed = lattice_from_json(shipped);
    CHECK(parsed.name() == doc.name);
    CHECK(parsed.d() == doc.d);
  }
}

TEST_CASE("invalid lattice specs are rejected") {
  std::vector<RealVec> basis = {{1, 0}, {0, 1}};
  std::vector<RealVec> pts = {{0, 0}};
  CHECK_THROWS_AS(LatticeSpec(2, 2, basis, pts, {{1, 1, {0, 0}}, {1, 1, {0, 0}}}, "loop"),
                  std::invalid_argument);
  CHECK_THROWS_AS(LatticeSpec(2, 2, basis, pts, {{1, 1, {1, 0}}}, "asymmetric"),
                  std::invalid_argument);
  std::vector<RealVec> coincident = {{0, 0}, {1, 1}};
  CHECK_THROWS_AS(
      LatticeSpec(2, 2, basis, coincident,
                  {{1, 2, {0, 0}}, {2, 1, {0, 0}}, {1, 1, {1, 0}}, {1, 1, {-1, 0}},
                   {2, 2, {1, 0}}, {2, 2, {-1, 0}}},
                  "coincident"),
      std::invalid_argument);
  CHECK_THROWS_AS(builtin_lattice("unknown", 2), std::invalid_argument);
  CHECK_THROWS_AS(builtin_lattice("square", 1), std::invalid_argument);
  CHECK_THROWS_AS(builtin_lattice("ladder", 1), std::invalid_argument);

  auto spec = builtin_lattice("square", 2);
  CHECK_THROWS_AS(spec.neighbors(VertexId{7, {0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(spec.realize(VertexId{1, {0}}), std::invalid_argument);
}

TEST_CASE("lattice function stores finite support") {
  LatticeFunction f;
  CHECK(f.empty());
  f.set(VertexId{1, {0, 0}}, {1, 0});
  f.set(VertexId{1, {2, 0}}, {0, -2});
  CHECK(f.at(VertexId{1, {0, 0}}) == Complex{1, 0});
  CHECK(f.at(VertexId{1, {5, 5}}) == Complex{0, 0});
  CHECK(f.l2_norm() == doctest::Approx(std::sqrt(5.0)));
  f.set(VertexId{1, {2, 0}}, {0, 0});
  CHECK(f.support().size() == 1);
}
