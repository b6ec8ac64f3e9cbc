#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "stonekit/errors.hpp"

namespace stonekit::po {

// Subsets of a PO system's carrier as bitmasks indexed by element order.
using Mask = std::uint32_t;

inline constexpr Mask bit(int i) { return Mask{1} << i; }
inline bool has(Mask m, int i) { return (m >> i) & 1u; }
inline int popcount(Mask m) { return __builtin_popcount(m); }

// Iterate set bits: for (int i : bits(m)) ...
struct BitRange {
  Mask m;
  struct It {
    Mask m;
    int operator*() const { return __builtin_ctz(m); }
    It& operator++() { m &= m - 1; return *this; }
    bool operator!=(const It& o) const { return m != o.m; }
  };
  It begin() const { return {m}; }
  It end() const { return {0}; }
};
inline BitRange bits(Mask m) { return {m}; }

// A finite set with an antisymmetric transitive relation `<`.  Reflexive
// pairs p < p are allowed; a PO system with none is a poset.  Dual to a
// finite TBA generated by its closed elements.
class POSystem {
 public:
  POSystem() = default;

  // Validates the relation exactly as given (no closure taken).
  static POSystem validate(std::vector<std::string> elements,
                           const std::vector<std::pair<std::string, std::string>>& rel);

  // Takes the transitive closure of `rel` first, then checks antisymmetry.
  static POSystem from_generators(std::vector<std::string> elements,
                                  const std::vector<std::pair<std::string, std::string>>& rel);

  // Direct construction from strict-order masks; below[i] = {j | j < i}.
  static POSystem from_below(std::vector<std::string> elements, std::vector<Mask> below);

  int size() const { return static_cast<int>(names_.size()); }
  Mask full() const { return size() == 32 ? ~Mask{0} : bit(size()) - 1; }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(int i) const { return names_[i]; }
  int index_of(const std::string& name) const;  // -1 if absent

  // j < i ?
  bool lt(int j, int i) const { return has(below_[i], j); }
  bool leq(int j, int i) const { return j == i || lt(j, i); }
  bool reflexive(int i) const { return lt(i, i); }

  Mask below(int i) const { return below_[i]; }           // {j | j < i}
  Mask up_of(int i) const { return up_[i] | bit(i); }      // {j | j >= i}
  Mask strictly_above(int i) const { return up_[i] & ~bit(i); }

  Mask reflexive_mask() const { return reflexive_; }
  Mask discrete_mask() const { return full() & ~reflexive_; }  // P^d
  bool is_poset() const { return reflexive_ == 0; }

  // Minimal elements of (S, <=) for a subset S of the carrier.
  Mask min_of(Mask s) const;
  Mask min_elements() const { return min_of(full()); }   // P_min
  Mask upward_closure(Mask s) const;                     // up(S)

  // Derived-set operator of the dual TBA: {p | p < q for some q in Q}.
  Mask derived(Mask q) const;
  Mask closure_of(Mask q) const { return q | derived(q); }

  bool is_lower(Mask q) const { return closure_of(q) == q; }
  bool is_upper(Mask q) const { return upward_closure(q) == q; }
  bool is_antichain(Mask q) const;

  // Elements in a fixed linear extension (minimal first); reflexivity ignored.
  std::vector<int> topo_order() const;

  bool operator==(const POSystem& o) const {
    return names_ == o.names_ && below_ == o.below_;
  }

 private:
  void finish();  // fills up_, reflexive_ from below_

  std::vector<std::string> names_;
  std::vector<Mask> below_;  // below_[i] = {j | j < i}
  std::vector<Mask> up_;     // up_[i] = {j | i < j} | {i if reflexive}
  Mask reflexive_ = 0;
};

// Derived subset predicates used by loaders and validators.
struct SubsetInfo {
  bool lower, upper, antichain;
};
inline SubsetInfo subset_info(const POSystem& p, Mask q) {
  return {p.is_lower(q), p.is_upper(q), p.is_antichain(q)};
}

std::string mask_to_string(const POSystem& p, Mask m);

}  // namespace stonekit::po
