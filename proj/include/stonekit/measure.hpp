#pragma once

#include <map>
#include <vector>

#include "stonekit/classification.hpp"

namespace stonekit::meas {

using cls::ExtendedPOSystem;
using cls::TBASystem;
using po::Mask;
using po::POSystem;

// Formal sum over an antichain: counts[p] >= 1 exactly on the support,
// with counts[p] = 1 for non-discrete p.  The complete invariant of a
// compact open set up to partition-preserving homeomorphism.
struct Measure {
  Mask support = 0;
  std::vector<int> counts;  // size |P|; zero off support

  bool zero() const { return support == 0; }
  bool operator==(const Measure& o) const {
    return support == o.support && counts == o.counts;
  }
  bool operator<(const Measure& o) const {
    return support != o.support ? support < o.support : counts < o.counts;
  }
};

Measure zero_measure(const ExtendedPOSystem& e);
// Throws InvalidInput if m violates the Measure invariants over e.
void check_measure(const ExtendedPOSystem& e, const Measure& m);

// Measure of a set with type T (upper, nonempty) and the given explicit
// point counts on the discrete minimal elements of T.
Measure measure_from_type(const ExtendedPOSystem& e, Mask T,
                          const std::map<int, int>& counts);

// Disjoint-union measure.  The type of a union of open sets is the union of
// types, so the support is min(up(F1) | up(F2)); a discrete element that
// stays minimal keeps the sum of its counts (each piece contributes its
// explicit points), and budgets f(p) are enforced on L_min^d.
Measure mu_add(const ExtendedPOSystem& e, const Measure& a, const Measure& b);

// Splits a p-trim set into a p-trim and a q-trim piece; requires p < q, or
// q = p for non-discrete p.
std::pair<Measure, Measure> trim_split(const ExtendedPOSystem& e, const Measure& m, int q);

// The minimum trim decomposition: n_p copies of p per support element,
// as a sorted list of trim types.
std::vector<int> mu_partition(const ExtendedPOSystem& e, const Measure& m);

struct SplitStep {
  int source;    // trim type of the piece that was split
  int produced;  // trim type carved out of it
  int side;      // 1 or 2: where the new piece goes
};
struct VaughtSplit {
  std::vector<int> pieces1, pieces2;  // sorted trim types per side
  std::vector<SplitStep> steps;
};
// Realizes m = t1 + t2 at the piece level: partitions mu_partition(m)
// between the two sides and records the trim splits needed to make each
// side re-add to its target.  Throws Inconsistent if mu_add(t1,t2) != m.
VaughtSplit vaught_split(const ExtendedPOSystem& e, const Measure& m,
                         const Measure& t1, const Measure& t2);

// All measures over a finite-crowded [P,L,f], the zero measure included.
std::vector<Measure> enumerate_measures(const ExtendedPOSystem& e);

struct OrbitInvariants {
  long long count = 0;
  bool exact = false;  // true iff the space is compact (L = P)
  long long inside_count = 0;
  long long outside_options = 0;  // per free cell outside the compact hull
};
// Counts the realizable invariant tuples for r-tuples of ring elements;
// an exact orbit count for compact spaces, an upper bound otherwise.
OrbitInvariants orbit_invariants(const TBASystem& t, int r);

}  // namespace stonekit::meas
