#include "stonekit/set_algebra.hpp"

#include <algorithm>
#include <set>

namespace stonekit::po {

bool SetAlgebra::contains(Mask m) const {
  return std::binary_search(members.begin(), members.end(), m);
}

Mask SetAlgebra::atom_of(int e) const {
  Mask acc = base.full();
  for (Mask m : members)
    if (has(m, e)) acc &= m;
  return acc;
}

SetAlgebra generate_algebra(const POSystem& p, const std::vector<Mask>& gens,
                            AlgebraKind kind) {
  const Mask full = p.full();
  std::set<Mask> s{Mask{0}, full};
  for (Mask g : gens) {
    if ((g & ~full) != 0) throw InvalidInput("generator outside carrier");
    s.insert(g);
  }
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<Mask> cur(s.begin(), s.end());
    for (Mask a : cur) {
      Mask extra;
      switch (kind) {
        case AlgebraKind::boolean: extra = a; break;
        case AlgebraKind::tba: extra = p.derived(a); break;
        case AlgebraKind::closure: extra = p.closure_of(a); break;
      }
      changed |= s.insert(full & ~a).second;
      changed |= s.insert(extra).second;
    }
    cur.assign(s.begin(), s.end());
    for (size_t i = 0; i < cur.size(); ++i)
      for (size_t j = i + 1; j < cur.size(); ++j)
        changed |= s.insert(cur[i] | cur[j]).second;
  }
  SetAlgebra out;
  out.base = p;
  out.kind = kind;
  out.members.assign(s.begin(), s.end());
  // atom of e = intersection of members containing e
  std::set<Mask> atoms;
  for (int e = 0; e < p.size(); ++e) atoms.insert(out.atom_of(e));
  out.atoms.assign(atoms.begin(), atoms.end());
  return out;
}

bool generated_by_closed(const SetAlgebra& a) {
  std::vector<Mask> closed;
  for (Mask m : a.members)
    if (a.base.closure_of(m) == m) closed.push_back(m);
  SetAlgebra b = generate_algebra(a.base, closed, AlgebraKind::boolean);
  return b.members == a.members;
}

Mask AtomSystem::gamma(Mask atom_subset) const {
  Mask out = 0;
  for (int i : bits(atom_subset)) out |= atom_masks[i];
  return out;
}

Mask AtomSystem::atoms_of_member(Mask member) const {
  Mask out = 0;
  for (size_t i = 0; i < atom_masks.size(); ++i) {
    if ((atom_masks[i] & member) == atom_masks[i])
      out |= bit(static_cast<int>(i));
    else if (atom_masks[i] & member)
      throw InvalidInput("member is not a union of atoms");
  }
  return out;
}

AtomSystem atom_posystem(const SetAlgebra& d) {
  if (!generated_by_closed(d)) throw NotGeneratedByClosed();
  AtomSystem out;
  out.atom_masks = d.atoms;
  const int n = static_cast<int>(d.atoms.size());
  std::vector<std::string> names(n);
  std::vector<Mask> below(n, 0);
  for (int i = 0; i < n; ++i) {
    std::string nm;
    for (int e : bits(d.atoms[i])) {
      if (!nm.empty()) nm += ".";
      nm += d.base.name(e);
    }
    names[i] = nm;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      bool lt;
      if (d.kind == AlgebraKind::closure)
        lt = i != j && (d.atoms[i] & ~d.base.closure_of(d.atoms[j])) == 0;
      else
        lt = (d.atoms[i] & ~d.base.derived(d.atoms[j])) == 0;
      if (lt) below[j] |= bit(i);
    }
  }
  // Antisymmetry here is Lemma "closure of atoms" (distinct atoms, distinct
  // closures); from_below asserts it rather than assuming.
  out.system = POSystem::from_below(std::move(names), std::move(below));
  return out;
}

std::vector<AtomSplit> split_atoms_cd(const SetAlgebra& c) {
  std::vector<AtomSplit> out;
  for (Mask a : c.atoms) {
    Mask ac = a & c.base.derived(a);
    out.push_back({a, ac, a & ~ac});
  }
  return out;
}

}  // namespace stonekit::po
