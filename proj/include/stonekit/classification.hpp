#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stonekit/canonical.hpp"
#include "stonekit/set_algebra.hpp"

namespace stonekit::cls {

using po::Mask;
using po::POSystem;

// [P, L, f]: a PO system with a lower subset L and discrete-part sizes f
// on the minimal discrete elements of L.
struct ExtendedPOSystem {
  POSystem P;
  Mask L = 0;
  std::map<int, int> f;  // element index -> count, domain = L_min^d

  Mask L_min() const { return P.min_of(L); }
  Mask L_min_d() const { return L_min() & P.discrete_mask(); }
  // All discrete elements are minimal in L (their parts are finite).
  bool finite_crowded() const { return (P.discrete_mask() & ~L_min()) == 0; }
  // Throws InvalidInput on structural violations (L not lower, wrong f
  // domain, non-positive counts).
  void check() const;
};

// Classification tuple [P, L, f, Q^(n)]: the Q_i are lower subsets whose
// generated derived-set algebra is all of 2^P.
struct TBASystem {
  ExtendedPOSystem base;
  std::vector<Mask> Q;
};

// Classification tuple [S, M, F, g, Q^(n)] on a poset: M and the Q_i lower,
// F a set of minimal elements of M, g total with g(s) > 0 on F, and the
// Q_i generate 2^S as a closure algebra.
struct CASystem {
  POSystem S;
  Mask M = 0, F = 0;
  std::vector<int> g;  // size |S|
  std::vector<Mask> Q;
};

struct ReportItem {
  std::string law;
  bool pass;
  std::string witness;  // empty when pass
};
struct Report {
  std::vector<ReportItem> items;
  bool ok() const;
  std::string first_failure() const;
};

Report validate_tba_system(const TBASystem& t);
Report validate_ca_system(const CASystem& c);

// The mutually inverse maps between the two tuple kinds.  Both throw
// InvalidInput when the input fails validation.
CASystem tba_to_ca(const TBASystem& t);
TBASystem ca_to_tba(const CASystem& c);

// Canonical forms covering the full tuple (order, L/M/F marks, Q list in
// order, f/g values); equal bytes iff the tuples are isomorphic.
po::CanonicalResult canon_tba(const TBASystem& t);
po::CanonicalResult canon_ca(const CASystem& c);

// theta[i] = image in b of element i of a; preserves order, marks and
// counts.  Absent when the tuples are not isomorphic.
std::optional<std::vector<int>> iso_tba(const TBASystem& a, const TBASystem& b);
std::optional<std::vector<int>> iso_ca(const CASystem& a, const CASystem& b);

// {C, h, k} signature.  The finite closure algebra is presented by its atom
// poset S (the algebra is the full power set of S with downward closure),
// with the generator ideals as lower subsets; h counts isolated points per
// atom and k is the size class: 0 finite, 1 infinite bounded, 2 unbounded.
struct Signature {
  POSystem S;
  std::vector<Mask> gens;
  std::vector<long long> h;
  std::vector<int> k;
};

Signature signature_of(const TBASystem& t);
std::string signature_canon(const Signature& s);

struct Realizability {
  bool ok = false;
  std::string reason;  // names the violated condition (a)/(b)/(c)
  std::optional<TBASystem> witness;
};
Realizability signature_realizable(const Signature& s);

struct Enumeration {
  std::vector<TBASystem> systems;  // one per class, sorted by canonical form
  std::map<int, int> count_by_size;
};
Enumeration enumerate_systems(int max_p, int n, int max_f);

struct CAEnumeration {
  std::vector<CASystem> systems;
  std::map<int, int> count_by_size;
};
CAEnumeration enumerate_ca_systems(int max_s, int n, int max_g);

struct OmegaCatResult {
  bool categorical = false;
  std::string witness;  // offending atom and element when false
  std::optional<TBASystem> refined;
};
// Decides whether the structure presented by [P, L, f] with the closed sets
// C_i (lower subsets) is determined by its first-order theory; on success
// also returns the refined tuple over the atoms of the generated algebra.
OmegaCatResult omega_cat_check(const ExtendedPOSystem& e, const std::vector<Mask>& C);

}  // namespace stonekit::cls
