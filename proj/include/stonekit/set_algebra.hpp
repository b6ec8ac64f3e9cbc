#pragma once

#include <vector>

#include "stonekit/po_system.hpp"

namespace stonekit::po {

enum class AlgebraKind { boolean, tba, closure };

// A family of subsets of a PO system's carrier, closed under the Boolean
// operations and, depending on kind, under derived set or closure.
// Members are deduplicated bitmasks; atoms are the minimal nonempty members.
struct SetAlgebra {
  POSystem base;
  AlgebraKind kind = AlgebraKind::boolean;
  std::vector<Mask> members;  // sorted ascending, always contains 0 and full
  std::vector<Mask> atoms;    // sorted ascending; partition the carrier

  bool contains(Mask m) const;
  // The atom containing element e.
  Mask atom_of(int e) const;
};

// Least family containing `gens` and the full carrier, closed under union,
// complement and (kind-dependent) the unary operator.  Intersection follows
// from complement + union.
SetAlgebra generate_algebra(const POSystem& p, const std::vector<Mask>& gens,
                            AlgebraKind kind);

// True if every member is a Boolean combination of closed members.
bool generated_by_closed(const SetAlgebra& a);

// The dual PO system of a TBA generated by its closed elements (Lemma-style
// atom system): atoms ordered by A < B iff A is contained in B's derived set.
// gamma maps a lower subset of the atom system back to a member of the
// algebra (union of the selected atoms).
struct AtomSystem {
  POSystem system;               // carrier = atoms of the algebra
  std::vector<Mask> atom_masks;  // atom_masks[i] = atom as subset of base
  Mask gamma(Mask atom_subset) const;
  // Preimage: member of the algebra -> subset of atoms.  The member must be
  // a union of atoms.
  Mask atoms_of_member(Mask member) const;
};

// Requires the algebra to be generated by its closed elements.
// For kind=tba the order is A < B iff A <= B'; for kind=closure it is the
// strict containment A <= closure(B), A != B (so the result is a poset).
AtomSystem atom_posystem(const SetAlgebra& d);

// Per-atom split A = A^c + A^d with A^c = A & A', A^d = A - A^c.
struct AtomSplit {
  Mask atom, crowded_part, discrete_part;
};
std::vector<AtomSplit> split_atoms_cd(const SetAlgebra& c);

}  // namespace stonekit::po
