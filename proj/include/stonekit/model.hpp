#pragma once

#include <map>
#include <string>
#include <vector>

#include "stonekit/measure.hpp"
#include "stonekit/space_term.hpp"

namespace stonekit::stone {

using meas::Measure;

// One clopen cell of a finite-depth approximation.  marks holds explicit
// points resolved at this cell (leaf cells only); point totals for a
// subtree are obtained by summation.
struct Cell {
  int id = -1;
  int parent = -1;  // -1 for roots
  int level = 0;
  Mask type = 0;  // upper subset of P
  std::map<int, int> marks;
  bool compact = true;
  bool is_point = false;
  std::vector<int> children;
};

struct Model {
  ExtendedPOSystem base;
  int depth = 0;
  std::vector<Cell> cells;  // ids are indices, assigned in construction order
  std::vector<int> roots;

  const Cell& cell(int id) const { return cells[id]; }
  // Total explicit points of label p in the subtree of id.
  int subtree_marks(int id, int p) const;
  Mask noncompact_leaf_types(int id) const;
};

// Deterministic finite cell tree of the term at refinement depth k.
Model approximate(const ExtendedPOSystem& e, const SpaceTerm& t, int k);

// Verifies the seven structural laws of a complete-partition approximation:
// upper-type, sibling-union, limit-persistence, trim-basis, discrete-budget,
// compact-flag, crowdedness.  Failures carry a cell witness.
cls::Report check_partition_invariants(const Model& m);

// Measure of a compact cell from its type and subtree point counts.
Measure mu_of_cell(const Model& m, int id);

// Decomposition of the covered hull into trim pieces: for each p in L_min,
// n_p pieces of type p (n_p = f(p) for discrete p, else 1), plus per
// exhaustion step one q-trim piece for each minimal q outside L.
struct Decomposition {
  struct Piece {
    int trim_type;
    std::vector<int> cells;
  };
  std::vector<Piece> hull_pieces;
  std::vector<std::vector<Piece>> clumps;  // one vector per exhaustion step
};
Decomposition minimum_decomposition(const Model& m);

// JSON export with fixed field order; byte-identical across runs.
std::string model_to_json(const Model& m);

}  // namespace stonekit::stone
