#include "stonekit/measure.hpp"

#include <algorithm>

namespace stonekit::meas {

using po::bit;
using po::bits;
using po::has;
using po::mask_to_string;

Measure zero_measure(const ExtendedPOSystem& e) {
  Measure m;
  m.counts.assign(e.P.size(), 0);
  return m;
}

void check_measure(const ExtendedPOSystem& e, const Measure& m) {
  const POSystem& P = e.P;
  if (m.counts.size() != static_cast<size_t>(P.size()))
    throw InvalidInput("measure counts size mismatch");
  if (!P.is_antichain(m.support))
    throw InvalidInput("measure support " + mask_to_string(P, m.support) +
                       " is not an antichain");
  Mask lmd = e.L_min_d();
  for (int p = 0; p < P.size(); ++p) {
    bool in = has(m.support, p);
    if (!in && m.counts[p] != 0) throw InvalidInput("nonzero count off support");
    if (in && m.counts[p] < 1) throw InvalidInput("count below 1 on support");
    if (in && !has(P.discrete_mask(), p) && m.counts[p] != 1)
      throw InvalidInput("count above 1 on non-discrete " + P.name(p));
    if (in && has(lmd, p) && m.counts[p] > e.f.at(p))
      throw BudgetExceeded(P.name(p));
  }
}

Measure measure_from_type(const ExtendedPOSystem& e, Mask T,
                          const std::map<int, int>& counts) {
  const POSystem& P = e.P;
  if (T == 0) throw InvalidInput("empty type; use the zero measure");
  if (!P.is_upper(T)) throw NotUpper();
  Measure m = zero_measure(e);
  m.support = P.min_of(T);
  for (int p : bits(m.support)) {
    if (has(P.discrete_mask(), p)) {
      auto it = counts.find(p);
      if (it == counts.end()) throw MissingCount(P.name(p));
      m.counts[p] = it->second;
    } else {
      m.counts[p] = 1;
    }
  }
  check_measure(e, m);
  return m;
}

Measure mu_add(const ExtendedPOSystem& e, const Measure& a, const Measure& b) {
  const POSystem& P = e.P;
  if (a.zero()) return b;
  if (b.zero()) return a;
  Measure m = zero_measure(e);
  Mask T = P.upward_closure(a.support) | P.upward_closure(b.support);
  m.support = P.min_of(T);
  for (int p : bits(m.support)) {
    if (has(P.discrete_mask(), p))
      m.counts[p] = (has(a.support, p) ? a.counts[p] : 0) +
                    (has(b.support, p) ? b.counts[p] : 0);
    else
      m.counts[p] = 1;
  }
  check_measure(e, m);
  return m;
}

std::pair<Measure, Measure> trim_split(const ExtendedPOSystem& e, const Measure& m,
                                       int q) {
  const po::POSystem& P = e.P;
  if (po::popcount(m.support) != 1)
    throw InvalidInput("trim_split needs a single-term measure");
  int p = *po::bits(m.support).begin();
  if (m.counts[p] != 1) throw InvalidInput("trim_split needs multiplicity 1");
  if (q < 0 || q >= P.size()) throw InvalidInput("unknown split target");
  if (!P.lt(p, q))
    throw NotAbove(P.name(q) + " is not above " + P.name(p) +
                   (p == q ? " (discrete point cannot split)" : ""));
  Measure first = zero_measure(e), second = zero_measure(e);
  first.support = bit(p);
  first.counts[p] = 1;
  second.support = bit(q);
  second.counts[q] = 1;
  return {first, second};
}

std::vector<int> mu_partition(const ExtendedPOSystem& e, const Measure& m) {
  check_measure(e, m);
  if (m.zero()) throw ZeroMeasure();
  std::vector<int> out;
  for (int p : bits(m.support))
    for (int i = 0; i < m.counts[p]; ++i) out.push_back(p);
  return out;
}

VaughtSplit vaught_split(const ExtendedPOSystem& e, const Measure& m,
                         const Measure& t1, const Measure& t2) {
  const POSystem& P = e.P;
  check_measure(e, m);
  check_measure(e, t1);
  check_measure(e, t2);
  if (!(mu_add(e, t1, t2) == m))
    throw Inconsistent("targets do not add up to the given measure");
  VaughtSplit out;
  // Outstanding target pieces per side and type.
  std::vector<std::vector<int>> need(2, std::vector<int>(P.size(), 0));
  for (int p : bits(t1.support)) need[0][p] = t1.counts[p];
  for (int p : bits(t2.support)) need[1][p] = t2.counts[p];
  auto take = [&](int side, int p) {
    (side == 0 ? out.pieces1 : out.pieces2).push_back(p);
  };
  // Every piece of the minimum decomposition of m matches a target piece of
  // the same type: discrete counts add exactly across the two sides, and a
  // crowded support element of m stays minimal in some target's type.
  for (int p : bits(m.support)) {
    if (has(P.discrete_mask(), p)) {
      for (int side = 0; side < 2; ++side)
        for (int i = 0; i < need[side][p]; ++i) take(side, p);
      int matched = need[0][p] + need[1][p];
      if (matched != m.counts[p])
        throw Inconsistent("discrete counts disagree at " + P.name(p));
      need[0][p] = need[1][p] = 0;
    } else {
      int side = need[0][p] > 0 ? 0 : 1;
      if (need[side][p] == 0)
        throw Inconsistent("crowded piece " + P.name(p) + " matches no target");
      take(side, p);
      --need[side][p];
    }
  }
  // Each remaining target piece is carved out of some piece of m whose trim
  // type lies strictly below it (or equals it and is crowded).
  for (int side = 0; side < 2; ++side) {
    for (int q = 0; q < P.size(); ++q) {
      while (need[side][q] > 0) {
        int src = -1;
        for (int p : bits(m.support))
          if (P.lt(p, q) && (p != q || P.reflexive(p))) { src = p; break; }
        if (src < 0)
          throw Inconsistent("no piece of m can produce a " + P.name(q) +
                             "-trim part");
        out.steps.push_back({src, q, side + 1});
        take(side, q);
        --need[side][q];
      }
    }
  }
  std::sort(out.pieces1.begin(), out.pieces1.end());
  std::sort(out.pieces2.begin(), out.pieces2.end());
  return out;
}

std::vector<Measure> enumerate_measures(const ExtendedPOSystem& e) {
  e.check();
  if (!e.finite_crowded())
    throw LimitExceeded("measure enumeration needs a finite-crowded system");
  const POSystem& P = e.P;
  std::vector<Measure> out;
  for (Mask s = 0; s <= P.full(); ++s) {
    if (!P.is_antichain(s)) continue;
    std::vector<int> dps;
    for (int p : bits(s & P.discrete_mask())) dps.push_back(p);
    Measure m = zero_measure(e);
    m.support = s;
    for (int p : bits(s)) m.counts[p] = 1;
    auto rec = [&](auto&& self, size_t i) -> void {
      if (i == dps.size()) {
        out.push_back(m);
        return;
      }
      for (int v = 1; v <= e.f.at(dps[i]); ++v) {
        m.counts[dps[i]] = v;
        self(self, i + 1);
      }
    };
    rec(rec, 0);
  }
  std::sort(out.begin(), out.end());
  return out;
}

OrbitInvariants orbit_invariants(const TBASystem& t, int r) {
  if (r < 1 || r > 2) throw InvalidInput("r must be 1 or 2");
  cls::Report rep = cls::validate_tba_system(t);
  if (!rep.ok()) throw NotCategorical(rep.first_failure());
  const ExtendedPOSystem& e = t.base;
  const POSystem& P = e.P;
  Mask upL = P.upward_closure(e.L);

  // Target: measure of the canonical compact hull (type exactly up(L)).
  Measure target = zero_measure(e);
  if (e.L != 0) {
    std::map<int, int> counts(e.f.begin(), e.f.end());
    target = measure_from_type(e, upL, counts);
  }
  // Inside pieces live in the hull, so their supports sit inside up(L).
  std::vector<Measure> inside;
  for (const Measure& m : enumerate_measures(e))
    if ((m.support & ~upL) == 0) inside.push_back(m);

  const int cells = 1 << r;
  long long inside_count = 0;
  Measure acc = zero_measure(e);
  auto rec = [&](auto&& self, int i, const Measure& sum) -> void {
    if (i == cells) {
      if (sum == target) ++inside_count;
      return;
    }
    for (const Measure& m : inside) {
      try {
        Measure next = mu_add(e, sum, m);
        self(self, i + 1, next);
      } catch (const BudgetExceeded&) {
        // over budget: this cell assignment is unrealizable
      }
    }
  };
  rec(rec, 0, acc);

  OrbitInvariants out;
  out.inside_count = inside_count;
  out.exact = e.L == P.full();
  out.outside_options = 1;
  for (Mask u = 1; u <= P.full(); ++u)
    if ((u & ~(P.full() & ~e.L)) == 0 && P.is_upper(u)) ++out.outside_options;
  out.count = inside_count;
  for (int i = 0; i < cells - 1; ++i) out.count *= out.outside_options;
  return out;
}

}  // namespace stonekit::meas
