#include "doctest.h"
#include "oracles.hpp"
#include "stonekit/matching.hpp"
#include "stonekit/model.hpp"

using namespace stonekit;
using cls::ExtendedPOSystem;
using meas::Measure;
using po::bit;
using po::bits;
using po::has;
using po::Mask;
using po::POSystem;
using stone::Model;
using stone::SpaceTerm;

namespace {

ExtendedPOSystem make_e(const POSystem& P, Mask L, std::map<int, int> f = {}) {
  ExtendedPOSystem e;
  e.P = P;
  e.L = L;
  e.f = std::move(f);
  return e;
}

ExtendedPOSystem chain2() {
  return make_e(POSystem::from_generators({"a", "b"},
                                          {{"a", "a"}, {"b", "b"}, {"a", "b"}}),
                bit(0));
}

ExtendedPOSystem vee() {
  // a < b and a < c, everything reflexive, only a compact-closed
  return make_e(POSystem::from_generators(
                    {"a", "b", "c"},
                    {{"a", "a"}, {"b", "b"}, {"c", "c"}, {"a", "b"}, {"a", "c"}}),
                bit(0));
}

// Finite-crowded systems with |P| <= max_n and f bounded by max_f.
std::vector<ExtendedPOSystem> small_fc(int max_n, int max_f) {
  std::vector<ExtendedPOSystem> out;
  for (int n = 1; n <= max_n; ++n)
    for (const POSystem& P : oracle::all_posystems(n, false))
      for (Mask L = 0; L <= P.full(); ++L) {
        if (!P.is_lower(L)) continue;
        ExtendedPOSystem e = make_e(P, L);
        if (!e.finite_crowded()) continue;
        std::vector<int> dom;
        for (int p : bits(e.L_min_d())) dom.push_back(p);
        std::vector<int> vals(dom.size(), 1);
        while (true) {
          for (size_t i = 0; i < dom.size(); ++i) e.f[dom[i]] = vals[i];
          out.push_back(e);
          size_t i = 0;
          for (; i < vals.size(); ++i)
            if (vals[i] < max_f) {
              ++vals[i];
              for (size_t j = 0; j < i; ++j) vals[j] = 1;
              break;
            }
          if (i == vals.size()) break;
        }
      }
  return out;
}

}  // namespace

TEST_CASE("build_space base cases") {
  using K = SpaceTerm::Kind;
  CHECK(stone::build_space(make_e(POSystem::from_generators({"p"}, {{"p", "p"}}), bit(0)))
            .kind == K::cantor_d1);
  CHECK(stone::build_space(make_e(POSystem::from_generators({"p"}, {{"p", "p"}}), 0))
            .kind == K::cantor_d0);
  SpaceTerm fin =
      stone::build_space(make_e(POSystem::from_generators({"p"}, {}), bit(0), {{0, 3}}));
  CHECK(fin.kind == K::fin_disc);
  CHECK(fin.m == 3);
  // discrete outside L is not finite-crowded; needs the explicit override
  ExtendedPOSystem open = make_e(POSystem::from_generators({"p"}, {}), 0);
  CHECK_THROWS_AS(stone::build_space(open), InvalidInput);
  CHECK(stone::build_space(open, false, true).kind == K::omega_disc);
}

TEST_CASE("build_space picks attachment cases from reflexivity and L") {
  SpaceTerm t = stone::build_space(chain2());
  REQUIRE(t.kind == SpaceTerm::Kind::attach);
  CHECK(t.acase == SpaceTerm::AttachCase::c1B);
  CHECK(t.closed_sel == bit(0));
  CHECK(t.label == 1);
  CHECK(t.children[0].kind == SpaceTerm::Kind::cantor_d1);

  ExtendedPOSystem e = chain2();
  e.L = e.P.full();  // b also compact: case 1A
  CHECK(stone::build_space(e).acase == SpaceTerm::AttachCase::c1A);
}

TEST_CASE("disconnected systems become sums") {
  ExtendedPOSystem e = make_e(
      POSystem::from_generators({"p", "q"}, {{"p", "p"}, {"q", "q"}}), 0b11);
  SpaceTerm t = stone::build_space(e);
  CHECK(t.kind == SpaceTerm::Kind::sum);
  Model m = stone::approximate(e, t, 2);
  CHECK(m.roots.size() == 2);
}

TEST_CASE("the two strategies give different terms on the vee") {
  SpaceTerm a = stone::build_space(vee(), false);
  SpaceTerm b = stone::build_space(vee(), true);
  REQUIRE(a.kind == SpaceTerm::Kind::attach);
  REQUIRE(b.kind == SpaceTerm::Kind::attach);
  CHECK(a.label != b.label);
}

TEST_CASE("approximate depth-0 and depth-k shapes") {
  ExtendedPOSystem e = chain2();
  SpaceTerm t = stone::build_space(e);
  Model m0 = stone::approximate(e, t, 0);
  REQUIRE(m0.roots.size() == 1);
  CHECK(m0.cells.size() == 1);
  CHECK(m0.cells[0].type == e.P.full());
  CHECK_FALSE(m0.cells[0].compact);

  Model m2 = stone::approximate(e, t, 2);
  CHECK(stone::check_partition_invariants(m2).ok());
  // every level is fully covered: types at each level union to the carrier
  std::map<int, Mask> per_level;
  for (const auto& c : m2.cells)
    if (c.children.empty())
      for (int lvl = c.level; lvl <= m2.depth; ++lvl) per_level[lvl] |= c.type;
    else
      per_level[c.level] |= c.type;
  for (const auto& [lvl, u] : per_level) CHECK(u == e.P.full());
}

TEST_CASE("partition laws hold for every small finite-crowded system") {
  for (const ExtendedPOSystem& e : small_fc(3, 2)) {
    for (bool alt : {false, true}) {
      SpaceTerm t = stone::build_space(e, alt);
      for (int k = 0; k <= 3; ++k) {
        Model m = stone::approximate(e, t, k);
        cls::Report r = stone::check_partition_invariants(m);
        INFO("k=", k, " alt=", alt);
        CHECK(r.ok());
      }
    }
  }
}

TEST_CASE("cell measures are additive over children") {
  for (const ExtendedPOSystem& e : small_fc(3, 2)) {
    SpaceTerm t = stone::build_space(e);
    Model m = stone::approximate(e, t, 3);
    for (const auto& c : m.cells) {
      if (!c.compact || c.children.empty()) continue;
      Measure sum = meas::zero_measure(e);
      for (int ch : c.children) sum = meas::mu_add(e, sum, stone::mu_of_cell(m, ch));
      CHECK(sum == stone::mu_of_cell(m, c.id));
    }
  }
}

TEST_CASE("mu_of_cell rejects non-compact cells") {
  ExtendedPOSystem e = chain2();
  Model m = stone::approximate(e, stone::build_space(e), 2);
  CHECK_THROWS_AS(stone::mu_of_cell(m, m.roots[0]), NonCompactCell);
}

TEST_CASE("minimum decomposition of the 2-chain") {
  ExtendedPOSystem e = chain2();
  Model m = stone::approximate(e, stone::build_space(e), 3);
  stone::Decomposition d = stone::minimum_decomposition(m);
  REQUIRE(d.hull_pieces.size() == 1);
  CHECK(d.hull_pieces[0].trim_type == 0);
  Mask u = 0;
  for (int id : d.hull_pieces[0].cells) u |= m.cells[id].type;
  CHECK(u == e.P.full());
  CHECK_FALSE(d.clumps.empty());
  for (const auto& clump : d.clumps)
    for (const auto& piece : clump) CHECK(piece.trim_type == 1);
}

TEST_CASE("minimum decomposition splits discrete points into f pieces") {
  ExtendedPOSystem e = make_e(POSystem::from_generators({"p"}, {}), bit(0), {{0, 3}});
  Model m = stone::approximate(e, stone::build_space(e), 2);
  stone::Decomposition d = stone::minimum_decomposition(m);
  CHECK(d.hull_pieces.size() == 3);
  for (const auto& piece : d.hull_pieces) {
    int marks = 0;
    for (int id : piece.cells) marks += m.subtree_marks(id, 0);
    CHECK(marks == 1);
  }
  CHECK(d.clumps.empty());
}

TEST_CASE("decomposition rejects mutilated models") {
  ExtendedPOSystem e = chain2();
  Model m = stone::approximate(e, stone::build_space(e), 2);
  m.cells[m.roots[0]].type = bit(0);  // break upper-type
  CHECK_THROWS_AS(stone::minimum_decomposition(m), InvalidModel);
}

TEST_CASE("back_and_forth matches the two build strategies") {
  for (const ExtendedPOSystem& e : small_fc(3, 2)) {
    Model a = stone::approximate(e, stone::build_space(e, false), 6);
    Model b = stone::approximate(e, stone::build_space(e, true), 6);
    stone::Matching mt = stone::back_and_forth(a, b, 3);
    CHECK(mt.depth == 3);
    CHECK_FALSE(mt.groups.empty());
    // groups partition each side's cells consistently: non-empty both sides
    for (const auto& g : mt.groups) {
      CHECK_FALSE(g.a_cells.empty());
      CHECK_FALSE(g.b_cells.empty());
    }
  }
}

TEST_CASE("back_and_forth rejects spaces with different measures") {
  ExtendedPOSystem crowded = make_e(POSystem::from_generators({"p"}, {{"p", "p"}}), bit(0));
  ExtendedPOSystem discrete = make_e(POSystem::from_generators({"p"}, {}), bit(0), {{0, 2}});
  Model a = stone::approximate(crowded, stone::build_space(crowded), 4);
  Model b = stone::approximate(discrete, stone::build_space(discrete), 4);
  CHECK_THROWS_AS(stone::back_and_forth(a, b, 2), MeasureMismatch);

  ExtendedPOSystem d3 = make_e(POSystem::from_generators({"p"}, {}), bit(0), {{0, 3}});
  Model c = stone::approximate(d3, stone::build_space(d3), 4);
  CHECK_THROWS_AS(stone::back_and_forth(b, c, 2), MeasureMismatch);
}

TEST_CASE("model JSON is stable and well-formed") {
  ExtendedPOSystem e = chain2();
  Model m = stone::approximate(e, stone::build_space(e), 2);
  std::string j1 = stone::model_to_json(m);
  std::string j2 = stone::model_to_json(stone::approximate(e, stone::build_space(e), 2));
  CHECK(j1 == j2);
  CHECK(j1.find("\"depth\": 2") != std::string::npos);
  CHECK(j1.find("\"coverage\"") != std::string::npos);
}
