#include "stonekit/canonical.hpp"

#include <algorithm>
#include <map>

namespace stonekit::po {
namespace {

// Encode the system under the labelling pos[i] = new index of element i.
std::string encode(const POSystem& p, const std::vector<Mask>& marks,
                   const std::vector<std::vector<long long>>& weights,
                   const std::vector<int>& pos) {
  const int n = p.size();
  std::string out;
  out.push_back(static_cast<char>(n));
  auto put_raw = [&](Mask m) {
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((m >> (8 * b)) & 0xff));
  };
  auto put_mask = [&](Mask m) {
    Mask r = 0;
    for (int i : bits(m)) r |= bit(pos[i]);
    put_raw(r);
  };
  std::vector<Mask> below(n);
  for (int i = 0; i < n; ++i) below[pos[i]] = p.below(i);
  for (Mask m : below) put_mask(m);
  out.push_back(static_cast<char>(marks.size()));
  for (Mask m : marks) put_mask(m);
  out.push_back(static_cast<char>(weights.size()));
  for (const auto& w : weights) {
    std::vector<long long> v(n);
    for (int i = 0; i < n; ++i) v[pos[i]] = w[i];
    for (long long x : v)
      for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((x >> (8 * b)) & 0xff));
  }
  return out;
}

void gen_orders(const std::vector<std::vector<int>>& classes, size_t ci,
                std::vector<int>& order, const POSystem& p,
                const std::vector<Mask>& marks,
                const std::vector<std::vector<long long>>& weights,
                std::string& best, std::vector<int>& best_pos) {
  if (ci == classes.size()) {
    const int n = p.size();
    std::vector<int> pos(n);
    for (int k = 0; k < n; ++k) pos[order[k]] = k;
    std::string enc = encode(p, marks, weights, pos);
    if (best.empty() || enc < best) {
      best = std::move(enc);
      best_pos = pos;
    }
    return;
  }
  std::vector<int> cls = classes[ci];
  std::sort(cls.begin(), cls.end());
  do {
    size_t base = order.size();
    order.insert(order.end(), cls.begin(), cls.end());
    gen_orders(classes, ci + 1, order, p, marks, weights, best, best_pos);
    order.resize(base);
  } while (std::next_permutation(cls.begin(), cls.end()));
}

}  // namespace

CanonicalResult canonical_form(const POSystem& p, const std::vector<Mask>& marks,
                               const std::vector<std::vector<long long>>& weights) {
  const int n = p.size();
  // Initial colouring: reflexivity, mark membership, weights.
  std::vector<std::vector<long long>> key(n);
  for (int i = 0; i < n; ++i) {
    key[i].push_back(p.reflexive(i) ? 1 : 0);
    for (Mask m : marks) key[i].push_back(has(m, i) ? 1 : 0);
    for (const auto& w : weights) key[i].push_back(w[i]);
  }
  std::vector<int> color(n);
  auto assign = [&]() {
    // Ids follow the sorted key order so they are relabelling-invariant.
    std::map<std::vector<long long>, int> ids;
    for (int i = 0; i < n; ++i) ids.emplace(key[i], 0);
    int next = 0;
    for (auto& [k, id] : ids) id = next++;
    for (int i = 0; i < n; ++i) color[i] = ids[key[i]];
    return next;
  };
  int nc = assign();
  // Refine by sorted colour lists of strict predecessors and successors.
  for (;;) {
    for (int i = 0; i < n; ++i) {
      std::vector<long long> down, up;
      for (int j : bits(p.below(i) & ~bit(i))) down.push_back(color[j]);
      for (int j : bits(p.strictly_above(i))) up.push_back(color[j]);
      std::sort(down.begin(), down.end());
      std::sort(up.begin(), up.end());
      key[i].assign(1, color[i]);
      key[i].push_back(-1);
      key[i].insert(key[i].end(), down.begin(), down.end());
      key[i].push_back(-1);
      key[i].insert(key[i].end(), up.begin(), up.end());
    }
    int nc2 = assign();
    if (nc2 == nc) break;
    nc = nc2;
  }
  std::vector<std::vector<int>> classes(nc);
  for (int i = 0; i < n; ++i) classes[color[i]].push_back(i);
  CanonicalResult r;
  std::vector<int> order;
  gen_orders(classes, 0, order, p, marks, weights, r.bytes, r.perm);
  return r;
}

}  // namespace stonekit::po
