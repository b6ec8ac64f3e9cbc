#include <random>

#include "doctest.h"
#include "oracles.hpp"

using namespace stonekit;
using cls::CASystem;
using cls::ExtendedPOSystem;
using cls::TBASystem;
using po::bit;
using po::bits;
using po::has;
using po::Mask;
using po::POSystem;

namespace {

TBASystem atomless() {
  TBASystem t;
  t.base.P = POSystem::from_generators({"p"}, {{"p", "p"}});
  t.base.L = bit(0);
  t.Q = {bit(0)};
  return t;
}

TBASystem chain2_tba() {
  TBASystem t;
  t.base.P = POSystem::from_generators({"a", "b"}, {{"a", "a"}, {"b", "b"}, {"a", "b"}});
  t.base.L = bit(0);
  t.Q = {bit(0)};
  return t;
}

}  // namespace

TEST_CASE("validate_tba_system on the spec examples") {
  CHECK(cls::validate_tba_system(atomless()).ok());

  TBASystem bad;  // discrete 2-antichain with empty L: not finite-crowded
  bad.base.P = POSystem::from_generators({"p", "q"}, {});
  bad.Q = {0b11};
  cls::Report r = cls::validate_tba_system(bad);
  CHECK_FALSE(r.ok());
  CHECK(r.first_failure().find("finite-crowded") != std::string::npos);

  TBASystem gen;  // reflexive 2-antichain, Q = [P] generates only {0, P}
  gen.base.P = POSystem::from_generators({"p", "q"}, {{"p", "p"}, {"q", "q"}});
  gen.base.L = gen.base.P.full();
  gen.Q = {gen.base.P.full()};
  cls::Report r2 = cls::validate_tba_system(gen);
  CHECK_FALSE(r2.ok());
  CHECK(r2.first_failure().find("generation") != std::string::npos);
}

TEST_CASE("extended system invariants") {
  ExtendedPOSystem e;
  e.P = POSystem::from_generators({"a", "b"}, {{"a", "b"}});
  e.L = bit(1);  // not lower
  CHECK_THROWS_AS(e.check(), InvalidInput);
  e.L = bit(0);
  CHECK_THROWS_AS(e.check(), InvalidInput);  // f missing at a
  e.f[0] = 2;
  CHECK_NOTHROW(e.check());
  e.f[0] = 0;
  CHECK_THROWS_AS(e.check(), InvalidInput);
  e.f[0] = 1;
  e.f[1] = 1;  // off L_min^d
  CHECK_THROWS_AS(e.check(), InvalidInput);
}

TEST_CASE("tba_to_ca on the atomless algebra") {
  CASystem c = cls::tba_to_ca(atomless());
  REQUIRE(c.S.size() == 1);
  CHECK(c.S.is_poset());
  CHECK(c.M == bit(0));
  CHECK(c.F == 0);
  CHECK(c.g[0] == 0);
  REQUIRE(c.Q.size() == 1);
  CHECK(c.Q[0] == bit(0));
  CHECK(cls::validate_ca_system(c).ok());
}

TEST_CASE("tba_to_ca on a fully discrete system keeps F = atoms with g = f") {
  TBASystem t;
  t.base.P = POSystem::from_generators({"p", "q"}, {});
  t.base.L = 0b11;
  t.base.f = {{0, 2}, {1, 3}};
  t.Q = {bit(0), 0b11};
  REQUIRE(cls::validate_tba_system(t).ok());
  CASystem c = cls::tba_to_ca(t);
  CHECK(c.S.size() == 2);
  CHECK(c.F == c.S.full());
  CHECK(c.M == c.S.full());
  std::vector<int> g = c.g;
  std::sort(g.begin(), g.end());
  CHECK(g == std::vector<int>{2, 3});
}

TEST_CASE("ca_to_tba splits atoms into crowded and discrete parts") {
  CASystem c;
  c.S = POSystem::from_generators({"s"}, {});
  c.M = bit(0);
  c.F = 0;
  c.g = {2};  // crowded part plus two isolated points
  c.Q = {bit(0)};
  REQUIRE(cls::validate_ca_system(c).ok());
  TBASystem t = cls::ca_to_tba(c);
  REQUIRE(t.base.P.size() == 2);
  int ic = t.base.P.index_of("s.c");
  int id = t.base.P.index_of("s.d");
  REQUIRE(ic >= 0);
  REQUIRE(id >= 0);
  CHECK(t.base.P.reflexive(ic));
  CHECK_FALSE(t.base.P.reflexive(id));
  // the split excludes an atom's own discrete part from below its crowded part
  CHECK_FALSE(t.base.P.lt(id, ic));
  CHECK_FALSE(t.base.P.lt(ic, id));
  CHECK(t.base.L == t.base.P.full());
  CHECK(t.base.f.at(id) == 2);
  CHECK(cls::validate_tba_system(t).ok());
}

TEST_CASE("alpha and beta invert each other on small samples") {
  for (const TBASystem& t : cls::enumerate_systems(3, 1, 2).systems) {
    CASystem c = cls::tba_to_ca(t);
    CHECK(cls::validate_ca_system(c).ok());
    TBASystem back = cls::ca_to_tba(c);
    CHECK(cls::iso_tba(t, back).has_value());
    CHECK(oracle::brute_iso_tba(t, back));
  }
  for (const CASystem& c : cls::enumerate_ca_systems(3, 1, 2).systems) {
    TBASystem t = cls::ca_to_tba(c);
    CHECK(cls::validate_tba_system(t).ok());
    CASystem back = cls::tba_to_ca(t);
    CHECK(cls::iso_ca(c, back).has_value());
    CHECK(oracle::brute_iso_ca(c, back));
  }
}

TEST_CASE("iso_tba finds the relabelling map") {
  std::mt19937 rng(7);
  auto sys = cls::enumerate_systems(3, 1, 2).systems;
  for (int iter = 0; iter < 50; ++iter) {
    const TBASystem& t = sys[rng() % sys.size()];
    std::vector<int> perm(t.base.P.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    TBASystem u = oracle::relabel_tba(t, perm);
    auto theta = cls::iso_tba(t, u);
    REQUIRE(theta.has_value());
    // theta must be a genuine decorated isomorphism
    for (int i = 0; i < t.base.P.size(); ++i)
      CHECK(oracle::apply_perm(t.base.P.below(i), *theta) == u.base.P.below((*theta)[i]));
    CHECK(oracle::apply_perm(t.base.L, *theta) == u.base.L);
    for (size_t qi = 0; qi < t.Q.size(); ++qi)
      CHECK(oracle::apply_perm(t.Q[qi], *theta) == u.Q[qi]);
    for (const auto& [p, v] : t.base.f) CHECK(u.base.f.at((*theta)[p]) == v);
  }
  CHECK_FALSE(cls::iso_tba(atomless(), chain2_tba()).has_value());
}

TEST_CASE("signature h and k values") {
  cls::Signature s = cls::signature_of(chain2_tba());
  REQUIRE(s.S.size() == 2);
  // atom {a}: crowded, compact closure -> k=1; atom {b}: unbounded -> k=2
  int a0 = s.S.below(0) == 0 ? 0 : 1;  // minimal atom
  CHECK(s.k[a0] == 1);
  CHECK(s.k[1 - a0] == 2);
  CHECK(s.h[a0] == 0);
  CHECK(s.h[1 - a0] == 0);

  TBASystem fin;  // two isolated points: k = 0, h = 2
  fin.base.P = POSystem::from_generators({"p"}, {});
  fin.base.L = bit(0);
  fin.base.f = {{0, 2}};
  fin.Q = {bit(0)};
  cls::Signature s2 = cls::signature_of(fin);
  REQUIRE(s2.S.size() == 1);
  CHECK(s2.k[0] == 0);
  CHECK(s2.h[0] == 2);
}

TEST_CASE("signature realizability accepts valid signatures and names violations") {
  cls::Signature s = cls::signature_of(chain2_tba());
  cls::Realizability re = cls::signature_realizable(s);
  CHECK(re.ok);
  REQUIRE(re.witness.has_value());
  CHECK(cls::signature_canon(cls::signature_of(*re.witness)) == cls::signature_canon(s));

  cls::Signature bad = s;
  bad.k = {0, 2};
  bad.h = {0, 0};
  // finite atom without isolated points
  int a0 = s.S.below(0) == 0 ? 0 : 1;
  bad.k[a0] = 0;
  bad.k[1 - a0] = 2;
  cls::Realizability rb = cls::signature_realizable(bad);
  CHECK_FALSE(rb.ok);
  CHECK(rb.reason.find("(b)") != std::string::npos);

  cls::Signature mono = s;
  mono.k[a0] = 2;
  mono.k[1 - a0] = 1;  // k decreasing upward violates (c)
  cls::Realizability rc = cls::signature_realizable(mono);
  CHECK_FALSE(rc.ok);
  CHECK(rc.reason.find("(c)") != std::string::npos);
}

TEST_CASE("omega-categoricity decision") {
  TBASystem t = atomless();
  cls::OmegaCatResult ok = cls::omega_cat_check(t.base, t.Q);
  CHECK(ok.categorical);
  REQUIRE(ok.refined.has_value());
  CHECK(cls::iso_tba(t, *ok.refined).has_value());

  ExtendedPOSystem e;  // one discrete point outside L: infinitely many isolated
  e.P = POSystem::from_generators({"p"}, {});
  e.L = 0;
  cls::OmegaCatResult no = cls::omega_cat_check(e, {bit(0)});
  CHECK_FALSE(no.categorical);
  CHECK_FALSE(no.witness.empty());
}

TEST_CASE("enumeration counts and integrity at |P| = 1") {
  cls::Enumeration e = cls::enumerate_systems(1, 1, 2);
  // reflexive p: L in {0,{p}} x Q1 in {0,{p}} = 4; discrete p: L={p},
  // f in {1,2}, Q1 in {0,{p}} = 4.
  CHECK(e.count_by_size.at(1) == 8);
  for (const TBASystem& t : e.systems) CHECK(cls::validate_tba_system(t).ok());
  for (size_t i = 0; i < e.systems.size(); ++i)
    for (size_t j = i + 1; j < e.systems.size(); ++j)
      CHECK_FALSE(oracle::brute_iso_tba(e.systems[i], e.systems[j]));
}

TEST_CASE("omega_cat rejects non-lower closed sets") {
  TBASystem t = chain2_tba();
  CHECK_THROWS_AS(cls::omega_cat_check(t.base, {bit(1)}), InvalidInput);
}
