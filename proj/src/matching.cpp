#include "stonekit/matching.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <tuple>

namespace stonekit::stone {

using po::bits;
using po::has;
using po::Mask;

namespace {

// Bucket key: compact cells pair up when their measures share a support,
// non-compact cells when their remainder types agree.
struct Key {
  bool compact;
  Mask mask;
  bool operator<(const Key& o) const {
    return std::tie(compact, mask) < std::tie(o.compact, o.mask);
  }
};

Key key_of(const Model& m, int id) {
  const Cell& c = m.cells[id];
  if (c.compact) return {true, m.base.P.min_of(c.type)};
  return {false, c.type};
}

std::vector<int> expand(const Model& m, const std::vector<int>& pool) {
  std::vector<int> out;
  for (int id : pool) {
    const Cell& c = m.cells[id];
    if (c.children.empty())
      out.push_back(id);
    else
      for (int ch : c.children) out.push_back(ch);
  }
  return out;
}

// -1 encodes an infinite (crowded) part.
long long part_size(const Model& m, const std::vector<int>& cells, int p) {
  if (!has(m.base.P.discrete_mask(), p)) return -1;
  long long total = 0;
  for (int id : cells) total += m.subtree_marks(id, p);
  return total;
}

}  // namespace

Matching back_and_forth(const Model& a, const Model& b, int k) {
  if (a.base.P.size() != b.base.P.size())
    throw InvalidInput("models live over carriers of different size");
  const int slack = 4;
  Matching out;
  out.depth = k;

  struct Task {
    std::vector<int> a_cells, b_cells;
    int a_level, b_level, parent;
  };
  std::deque<Task> pending;

  auto split = [&](std::vector<int> pa, std::vector<int> pb, int la, int lb,
                   int parent) {
    for (int tries = 0;; ++tries) {
      std::map<Key, std::pair<std::vector<int>, std::vector<int>>> buckets;
      for (int id : pa) buckets[key_of(a, id)].first.push_back(id);
      for (int id : pb) buckets[key_of(b, id)].second.push_back(id);
      int need = 0;  // bit 1: refine a, bit 2: refine b
      std::string why;
      for (const auto& [key, pr] : buckets) {
        if (pr.first.empty()) {
          need |= 1;
          why = "only one side shows this part";
        } else if (pr.second.empty()) {
          need |= 2;
          why = "only one side shows this part";
        } else if (key.compact) {
          for (int p : bits(key.mask)) {
            long long va = part_size(a, pr.first, p);
            long long vb = part_size(b, pr.second, p);
            if (va != vb) {
              need |= 3;
              why = "discrete part sizes at " + a.base.P.name(p) + " differ (" +
                    std::to_string(va) + " vs " + std::to_string(vb) + ")";
            }
          }
        }
      }
      if (need == 0) {
        for (auto& [key, pr] : buckets) {
          int gi = static_cast<int>(out.groups.size());
          out.groups.push_back({std::move(pr.first), std::move(pr.second), la, lb, parent});
          const Matching::Group& g = out.groups.back();
          if (std::min(la, lb) < k)
            pending.push_back({g.a_cells, g.b_cells, la, lb, gi});
        }
        return;
      }
      if (tries >= slack)
        throw MeasureMismatch("level " + std::to_string(std::min(la, lb)) + ": " + why);
      if (need & 1) {
        pa = expand(a, pa);
        ++la;
      }
      if (need & 2) {
        pb = expand(b, pb);
        ++lb;
      }
    }
  };

  split(a.roots, b.roots, 0, 0, -1);
  while (!pending.empty()) {
    Task t = std::move(pending.front());
    pending.pop_front();
    split(expand(a, t.a_cells), expand(b, t.b_cells), t.a_level + 1, t.b_level + 1,
          t.parent);
  }
  return out;
}

}  // namespace stonekit::stone
