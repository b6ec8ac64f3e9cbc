#pragma once

#include "stonekit/model.hpp"

namespace stonekit::stone {

// Level-synchronised correspondence between two models.  Cells are grouped
// so that matched groups carry equal compact measures (per support, with
// exact totals on discrete elements) and equal non-compact remainder types;
// groups refine level by level, so restricting to a smaller depth gives a
// sub-matching.
struct Matching {
  struct Group {
    std::vector<int> a_cells, b_cells;
    int a_level = 0, b_level = 0;
    int parent = -1;  // index into groups; -1 for the root group
  };
  std::vector<Group> groups;
  int depth = 0;
};

// Builds a depth-k matching between two models of the same [P, L, f].
// The models should be approximated a few levels deeper than k (slack),
// since aligning differently built trees can need extra refinement on one
// side.  Throws MeasureMismatch when the models disagree at the root or a
// group cannot be reconciled within the available refinement.
Matching back_and_forth(const Model& a, const Model& b, int k);

}  // namespace stonekit::stone
