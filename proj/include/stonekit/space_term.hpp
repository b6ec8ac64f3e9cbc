#pragma once

#include <vector>

#include "stonekit/classification.hpp"

namespace stonekit::stone {

using cls::ExtendedPOSystem;
using po::Mask;

// Syntax tree of the space construction: Cantor pieces and discrete sets
// for one-element systems, disjoint sums for minimal elements, and the
// four attachment cases of the induction step.  Labels are element indices
// of the extended PO system the term was built for.
struct SpaceTerm {
  enum class Kind { cantor_d1, cantor_d0, fin_disc, omega_disc, sum, attach };
  enum class AttachCase { c1A, c1B, c2A, c2B };

  Kind kind = Kind::cantor_d1;
  int label = -1;  // partition element of a leaf constructor, or the
                   // attached element for Kind::attach
  int m = 0;       // fin_disc point count
  AttachCase acase = AttachCase::c1A;
  Mask closed_sel = 0;  // attach: labels of the closed set C in the base
  std::vector<SpaceTerm> children;  // sum: 2 parts; attach: 1 base

  static SpaceTerm leaf(Kind k, int label, int m = 0);
  static SpaceTerm sum(SpaceTerm a, SpaceTerm b);
  static SpaceTerm attach(AttachCase c, SpaceTerm base, Mask sel, int label);
};

// Builds the canonical construction for [P, L, f] by removing a maximal
// element at a time.  The primary strategy removes the last maximal element
// in a fixed linear extension; the alternate strategy removes the first,
// which yields a genuinely different build order whenever the order allows
// one.  Non-finite-crowded systems are accepted only with
// allow_non_categorical (the construction itself needs no crowdedness).
SpaceTerm build_space(const ExtendedPOSystem& e, bool alternate = false,
                      bool allow_non_categorical = false);

}  // namespace stonekit::stone
