#include "stonekit/po_system.hpp"

#include <algorithm>
#include <set>

namespace stonekit::po {

int POSystem::index_of(const std::string& name) const {
  for (int i = 0; i < size(); ++i)
    if (names_[i] == name) return i;
  return -1;
}

void POSystem::finish() {
  const int n = size();
  up_.assign(n, 0);
  reflexive_ = 0;
  for (int i = 0; i < n; ++i) {
    if (has(below_[i], i)) reflexive_ |= bit(i);
    for (int j : bits(below_[i])) up_[j] |= bit(i);
  }
}

static void check_elements(const std::vector<std::string>& elements) {
  if (elements.empty()) throw InvalidInput("carrier must be nonempty");
  if (elements.size() > 16) throw LimitExceeded("carrier larger than 16 elements");
  std::set<std::string> seen(elements.begin(), elements.end());
  if (seen.size() != elements.size()) throw InvalidInput("duplicate element names");
}

POSystem POSystem::validate(std::vector<std::string> elements,
                            const std::vector<std::pair<std::string, std::string>>& rel) {
  check_elements(elements);
  POSystem p;
  p.names_ = std::move(elements);
  p.below_.assign(p.size(), 0);
  for (const auto& [a, b] : rel) {
    int ia = p.index_of(a), ib = p.index_of(b);
    if (ia < 0) throw InvalidInput("unknown element " + a);
    if (ib < 0) throw InvalidInput("unknown element " + b);
    p.below_[ib] |= bit(ia);
  }
  const int n = p.size();
  for (int i = 0; i < n; ++i)
    for (int j : bits(p.below_[i]))
      if (i != j && has(p.below_[j], i)) throw CycleError(p.names_[std::min(i, j)],
                                                          p.names_[std::max(i, j)]);
  // transitivity: j < i and k < j must give k < i
  for (int i = 0; i < n; ++i)
    for (int j : bits(p.below_[i]))
      for (int k : bits(p.below_[j]))
        if (!has(p.below_[i], k)) throw TransitivityError(p.names_[k], p.names_[j], p.names_[i]);
  p.finish();
  return p;
}

POSystem POSystem::from_generators(std::vector<std::string> elements,
                                   const std::vector<std::pair<std::string, std::string>>& rel) {
  check_elements(elements);
  POSystem p;
  p.names_ = std::move(elements);
  p.below_.assign(p.size(), 0);
  for (const auto& [a, b] : rel) {
    int ia = p.index_of(a), ib = p.index_of(b);
    if (ia < 0) throw InvalidInput("unknown element " + a);
    if (ib < 0) throw InvalidInput("unknown element " + b);
    p.below_[ib] |= bit(ia);
  }
  // Warshall closure over the strict relation.
  const int n = p.size();
  for (bool changed = true; changed;) {
    changed = false;
    for (int i = 0; i < n; ++i)
      for (int j : bits(p.below_[i])) {
        Mask add = p.below_[j] & ~p.below_[i];
        if (add) { p.below_[i] |= add; changed = true; }
      }
  }
  for (int i = 0; i < n; ++i)
    for (int j : bits(p.below_[i]))
      if (i != j && has(p.below_[j], i)) throw CycleError(p.names_[std::min(i, j)],
                                                          p.names_[std::max(i, j)]);
  p.finish();
  return p;
}

POSystem POSystem::from_below(std::vector<std::string> elements, std::vector<Mask> below) {
  check_elements(elements);
  if (below.size() != elements.size()) throw InvalidInput("below size mismatch");
  POSystem p;
  p.names_ = std::move(elements);
  p.below_ = std::move(below);
  const int n = p.size();
  for (int i = 0; i < n; ++i) {
    for (int j : bits(p.below_[i])) {
      if (i != j && has(p.below_[j], i)) throw CycleError(p.names_[std::min(i, j)],
                                                          p.names_[std::max(i, j)]);
      for (int k : bits(p.below_[j]))
        if (!has(p.below_[i], k)) throw TransitivityError(p.names_[k], p.names_[j], p.names_[i]);
    }
  }
  p.finish();
  return p;
}

Mask POSystem::min_of(Mask s) const {
  Mask out = 0;
  for (int i : bits(s)) {
    // minimal in (S, <=): no distinct j in S with j < i
    if ((below_[i] & s & ~bit(i)) == 0) out |= bit(i);
  }
  return out;
}

Mask POSystem::upward_closure(Mask s) const {
  Mask out = s;
  for (int i : bits(s)) out |= up_[i];
  return out | s;
}

Mask POSystem::derived(Mask q) const {
  Mask out = 0;
  for (int i : bits(q)) out |= below_[i];
  return out;
}

bool POSystem::is_antichain(Mask q) const {
  for (int i : bits(q))
    if (below_[i] & q & ~bit(i)) return false;
  return true;
}

std::vector<int> POSystem::topo_order() const {
  const int n = size();
  std::vector<int> order;
  Mask placed = 0;
  while (static_cast<int>(order.size()) < n) {
    for (int i = 0; i < n; ++i) {
      if (has(placed, i)) continue;
      if ((below_[i] & ~bit(i) & ~placed) == 0) {
        order.push_back(i);
        placed |= bit(i);
      }
    }
  }
  return order;
}

std::string mask_to_string(const POSystem& p, Mask m) {
  std::string out = "{";
  bool first = true;
  for (int i : bits(m)) {
    if (!first) out += ",";
    out += p.name(i);
    first = false;
  }
  return out + "}";
}

}  // namespace stonekit::po
