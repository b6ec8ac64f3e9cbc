#include "stonekit/space_term.hpp"

#include <algorithm>

namespace stonekit::stone {

using po::bit;
using po::bits;
using po::has;
using po::POSystem;

SpaceTerm SpaceTerm::leaf(Kind k, int label, int m) {
  SpaceTerm t;
  t.kind = k;
  t.label = label;
  t.m = m;
  return t;
}

SpaceTerm SpaceTerm::sum(SpaceTerm a, SpaceTerm b) {
  SpaceTerm t;
  t.kind = Kind::sum;
  t.children.push_back(std::move(a));
  t.children.push_back(std::move(b));
  return t;
}

SpaceTerm SpaceTerm::attach(AttachCase c, SpaceTerm base, Mask sel, int label) {
  if (sel == 0) throw InvalidInput("attach needs a nonempty closed selection");
  SpaceTerm t;
  t.kind = Kind::attach;
  t.acase = c;
  t.label = label;
  t.closed_sel = sel;
  t.children.push_back(std::move(base));
  return t;
}

namespace {

SpaceTerm single_part(const ExtendedPOSystem& e, int p) {
  bool in_l = has(e.L, p);
  if (e.P.reflexive(p))
    return SpaceTerm::leaf(in_l ? SpaceTerm::Kind::cantor_d1 : SpaceTerm::Kind::cantor_d0, p);
  if (in_l) return SpaceTerm::leaf(SpaceTerm::Kind::fin_disc, p, e.f.at(p));
  return SpaceTerm::leaf(SpaceTerm::Kind::omega_disc, p);
}

SpaceTerm build_rec(const ExtendedPOSystem& e, Mask S, const std::vector<int>& topo,
                    bool alternate) {
  const POSystem& P = e.P;
  if (po::popcount(S) == 1) return single_part(e, *bits(S).begin());
  // Maximal elements of the remaining carrier.
  std::vector<int> maximal;
  for (int i : topo)
    if (has(S, i) && (P.strictly_above(i) & S) == 0) maximal.push_back(i);
  int p = alternate ? maximal.front() : maximal.back();
  SpaceTerm base = build_rec(e, S & ~bit(p), topo, alternate);
  Mask sel = P.below(p) & S & ~bit(p);
  if (sel == 0) return SpaceTerm::sum(std::move(base), single_part(e, p));
  SpaceTerm::AttachCase c;
  if (P.reflexive(p))
    c = has(e.L, p) ? SpaceTerm::AttachCase::c1A : SpaceTerm::AttachCase::c1B;
  else
    c = has(e.L, p) ? SpaceTerm::AttachCase::c2A : SpaceTerm::AttachCase::c2B;
  return SpaceTerm::attach(c, std::move(base), sel, p);
}

}  // namespace

SpaceTerm build_space(const ExtendedPOSystem& e, bool alternate,
                      bool allow_non_categorical) {
  e.check();
  if (!allow_non_categorical && !e.finite_crowded())
    throw InvalidInput("system is not finite-crowded; pass allow_non_categorical to build anyway");
  return build_rec(e, e.P.full(), e.P.topo_order(), alternate);
}

}  // namespace stonekit::stone
