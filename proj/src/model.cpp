#include "stonekit/model.hpp"

#include <algorithm>

#include "json.hpp"

namespace stonekit::stone {

using po::bit;
using po::bits;
using po::has;
using po::Mask;
using po::POSystem;

int Model::subtree_marks(int id, int p) const {
  const Cell& c = cells[id];
  int total = 0;
  auto it = c.marks.find(p);
  if (it != c.marks.end()) total += it->second;
  for (int ch : c.children) total += subtree_marks(ch, p);
  return total;
}

Mask Model::noncompact_leaf_types(int id) const {
  const Cell& c = cells[id];
  if (c.children.empty()) return c.compact ? 0 : c.type;
  Mask m = 0;
  for (int ch : c.children) m |= noncompact_leaf_types(ch);
  return m;
}

namespace {

// Construction-time node; flattened into Model cells afterwards.
struct TNode {
  Mask type = 0;
  bool compact = true;
  bool is_point = false;
  std::map<int, int> marks;
  std::vector<TNode> kids;
};

Mask noncompact_types(const TNode& b) {
  if (b.kids.empty()) return b.compact ? 0 : b.type;
  Mask m = 0;
  for (const TNode& c : b.kids) m |= noncompact_types(c);
  return m;
}

TNode point_node(int p) {
  TNode n;
  n.type = bit(p);
  n.is_point = true;
  n.marks[p] = 1;
  return n;
}

struct Builder {
  const ExtendedPOSystem& e;
  int k;

  std::vector<TNode> roots(const SpaceTerm& t) {
    switch (t.kind) {
      case SpaceTerm::Kind::cantor_d1: return {cantor(t.label, 0)};
      case SpaceTerm::Kind::cantor_d0: return {cantor_punct(t.label, 0)};
      case SpaceTerm::Kind::fin_disc: return {fin_disc(t.label, t.m)};
      case SpaceTerm::Kind::omega_disc: return {omega_disc(t.label, 0)};
      case SpaceTerm::Kind::sum: {
        std::vector<TNode> out = roots(t.children[0]);
        std::vector<TNode> right = roots(t.children[1]);
        for (TNode& r : right) out.push_back(std::move(r));
        return out;
      }
      case SpaceTerm::Kind::attach: return attach(t);
    }
    throw InvalidInput("unknown term");
  }

  TNode cantor(int p, int level) {
    TNode n;
    n.type = bit(p);
    if (level < k) {
      n.kids.push_back(cantor(p, level + 1));
      n.kids.push_back(cantor(p, level + 1));
    }
    return n;
  }

  // Cantor set minus one point; the deleted point sits on the all-ones
  // branch, so the right spine is the non-compact remainder.
  TNode cantor_punct(int p, int level) {
    TNode n;
    n.type = bit(p);
    n.compact = false;
    if (level < k) {
      n.kids.push_back(cantor(p, level + 1));
      n.kids.push_back(cantor_punct(p, level + 1));
    }
    return n;
  }

  TNode fin_disc(int p, int m) {
    TNode n;
    n.type = bit(p);
    if (k == 0)
      n.marks[p] = m;
    else
      for (int i = 0; i < m; ++i) n.kids.push_back(point_node(p));
    return n;
  }

  TNode omega_disc(int p, int level) {
    TNode n;
    n.type = bit(p);
    n.compact = false;
    if (level < k) {
      n.kids.push_back(point_node(p));
      n.kids.push_back(omega_disc(p, level + 1));
    }
    return n;
  }

  std::vector<TNode> attach(const SpaceTerm& t) {
    std::vector<TNode> base = roots(t.children[0]);
    const Mask sel = t.closed_sel;
    const int p = t.label;
    bool crowded_case = t.acase == SpaceTerm::AttachCase::c1A ||
                        t.acase == SpaceTerm::AttachCase::c1B;
    bool compact_case = t.acase == SpaceTerm::AttachCase::c1A ||
                        t.acase == SpaceTerm::AttachCase::c2A;
    std::vector<TNode> out;
    if (crowded_case) {
      for (const TNode& r : base) {
        if ((r.type & sel) == 0)
          out.push_back(r);
        else
          out.push_back(wrap1(r, 0, sel, p, compact_case));
      }
    } else {
      // Distribute the dense point schedule round-robin over the roots
      // that meet the closed set; the non-compact tail of case 2B hangs
      // under the first of them.
      std::vector<int> meet;
      for (size_t i = 0; i < base.size(); ++i)
        if (base[i].type & sel) meet.push_back(static_cast<int>(i));
      long long stride = static_cast<long long>(meet.size());
      int mi = 0;
      for (size_t i = 0; i < base.size(); ++i) {
        if (base[i].type & sel) {
          bool vtail = !compact_case && mi == 0;
          out.push_back(wrap2(base[i], 0, 1 + mi, stride, sel, p, vtail));
          ++mi;
        } else {
          out.push_back(base[i]);
        }
      }
    }
    return out;
  }

  // Case 1: the base slice W x {x0} together with the crowded column
  // (C cap b) x D; the chain follows the branch of D towards x0, peeling a
  // pure new-label sibling at every level.
  TNode wrap1(const TNode& b, int j, Mask sel, int p, bool compact_case) {
    if ((b.type & sel) == 0) return b;
    TNode n;
    n.type = b.type | bit(p);
    n.compact = b.compact && !(j == 0 && !compact_case);
    if (j >= k) {
      n.marks = b.marks;
      return n;
    }
    bool ccomp = b.compact || (sel & ~e.L) == 0 || (noncompact_types(b) & sel) == 0;
    if (b.kids.empty())
      n.kids.push_back(wrap1(b, j + 1, sel, p, compact_case));
    else
      for (const TNode& c : b.kids) n.kids.push_back(wrap1(c, j + 1, sel, p, compact_case));
    n.kids.push_back(ycell(j + 1, !compact_case && j == 0, ccomp, p));
    return n;
  }

  TNode ycell(int level, bool punct, bool ccomp, int p) {
    TNode n;
    n.type = bit(p);
    n.compact = ccomp && !punct;
    if (level < k) {
      n.kids.push_back(ycell(level + 1, false, ccomp, p));
      n.kids.push_back(ycell(level + 1, punct, ccomp, p));
    }
    return n;
  }

  // Case 2: shells of isolated points (x_m, 1/n), m < n, over the dense
  // schedule {x_m}; shell n is emitted at level n-2, and the schedule is an
  // arithmetic progression split round-robin among the children meeting C.
  TNode wrap2(const TNode& b, int j, long long a, long long d, Mask sel, int p,
              bool vtail) {
    if ((b.type & sel) == 0) return b;
    TNode n;
    n.type = b.type | bit(p);
    n.compact = b.compact;
    if (j >= k) {
      n.marks = b.marks;
      return n;
    }
    std::vector<const TNode*> kb;
    if (b.kids.empty())
      kb.push_back(&b);
    else
      for (const TNode& c : b.kids) kb.push_back(&c);
    long long stride = 0;
    for (const TNode* c : kb)
      if (c->type & sel) ++stride;
    int mi = 0;
    for (const TNode* c : kb) {
      if (c->type & sel) {
        n.kids.push_back(wrap2(*c, j + 1, a + mi * d, stride * d, sel, p, false));
        ++mi;
      } else {
        n.kids.push_back(*c);
      }
    }
    long long shell = j + 2;
    for (long long m = a; m <= shell - 1; m += d) n.kids.push_back(point_node(p));
    if (vtail) n.kids.push_back(vtail_node(1, p));
    return n;
  }

  TNode vtail_node(int level, int p) {
    TNode n;
    n.type = bit(p);
    n.compact = false;
    if (level < k) {
      n.kids.push_back(point_node(p));
      n.kids.push_back(vtail_node(level + 1, p));
    }
    return n;
  }
};

void flatten(const TNode& n, int parent, int level, Model& m) {
  int id = static_cast<int>(m.cells.size());
  Cell c;
  c.id = id;
  c.parent = parent;
  c.level = level;
  c.type = n.type;
  c.marks = n.marks;
  c.compact = n.compact;
  c.is_point = n.is_point;
  m.cells.push_back(std::move(c));
  if (parent < 0)
    m.roots.push_back(id);
  else
    m.cells[parent].children.push_back(id);
  for (const TNode& kid : n.kids) flatten(kid, id, level + 1, m);
}

}  // namespace

Model approximate(const ExtendedPOSystem& e, const SpaceTerm& t, int k) {
  if (k < 0) throw InvalidInput("negative depth");
  e.check();
  Builder b{e, k};
  std::vector<TNode> forest = b.roots(t);
  Model m;
  m.base = e;
  m.depth = k;
  for (const TNode& r : forest) flatten(r, -1, 0, m);
  return m;
}

Measure mu_of_cell(const Model& m, int id) {
  const Cell& c = m.cells[id];
  if (!c.compact) throw NonCompactCell(id);
  const POSystem& P = m.base.P;
  std::map<int, int> counts;
  for (int p : bits(P.min_of(c.type) & P.discrete_mask()))
    counts[p] = m.subtree_marks(id, p);
  return meas::measure_from_type(m.base, c.type, counts);
}

namespace {

struct LawCheck {
  const Model& m;
  cls::Report& r;

  void law(const std::string& name, bool pass, const std::string& witness) {
    for (auto& item : r.items)
      if (item.law == name) {
        if (!pass && item.pass) {
          item.pass = false;
          item.witness = witness;
        }
        return;
      }
    r.items.push_back({name, pass, pass ? "" : witness});
  }

  int max_level(int id) const {
    int lvl = m.cells[id].level;
    for (int ch : m.cells[id].children) lvl = std::max(lvl, max_level(ch));
    return lvl;
  }

  bool level_has(int id, int level, int p, int q) const {
    const Cell& c = m.cells[id];
    if (c.level == level) return has(c.type, p) && !has(c.type, q);
    if (c.level > level) return false;
    for (int ch : c.children)
      if (level_has(ch, level, p, q)) return true;
    return false;
  }

  bool find_trim(int id, Mask want, int p, bool need_mark) const {
    const Cell& c = m.cells[id];
    if (c.compact && c.type == want &&
        (!need_mark || m.subtree_marks(id, p) == 1))
      return true;
    for (int ch : c.children)
      if (find_trim(ch, want, p, need_mark)) return true;
    return false;
  }
};

}  // namespace

cls::Report check_partition_invariants(const Model& m) {
  const POSystem& P = m.base.P;
  cls::Report r;
  LawCheck lc{m, r};
  auto cellname = [](const Cell& c) { return "cell " + std::to_string(c.id); };

  lc.law("upper-type", true, "");
  lc.law("sibling-union", true, "");
  lc.law("limit-persistence", true, "");
  lc.law("trim-basis", true, "");
  lc.law("discrete-budget", true, "");
  lc.law("compact-flag", true, "");
  lc.law("crowdedness", true, "");

  for (const Cell& c : m.cells) {
    lc.law("upper-type", c.type != 0 && P.is_upper(c.type), cellname(c));

    if (!c.children.empty()) {
      Mask u = 0;
      for (int ch : c.children) u |= m.cells[ch].type;
      lc.law("sibling-union", u == c.type, cellname(c));
    }

    // Every level of the subtree must keep peeling crowded material of each
    // non-minimal label away from its limit region.
    if (!c.children.empty()) {
      int maxlev = lc.max_level(c.id);
      for (int q : bits(c.type))
        for (int p : bits(P.strictly_above(q) & c.type & ~P.discrete_mask())) {
          bool ok = true;
          int bad = -1;
          for (int lvl = c.level + 1; lvl <= maxlev && ok; ++lvl)
            if (!lc.level_has(c.id, lvl, p, q)) {
              ok = false;
              bad = lvl;
            }
          lc.law("limit-persistence", ok,
                 cellname(c) + ": no " + P.name(p) + "-piece free of " + P.name(q) +
                     " at level " + std::to_string(bad));
        }
    }

    if (c.compact) {
      for (int p : bits(P.min_of(c.type))) {
        bool need_mark = m.depth >= 1 && has(P.discrete_mask(), p);
        lc.law("trim-basis", lc.find_trim(c.id, P.up_of(p), p, need_mark),
               cellname(c) + ": no " + P.name(p) + "-trim descendant");
      }
      for (int ch : c.children)
        lc.law("compact-flag", m.cells[ch].compact,
               cellname(m.cells[ch]) + " non-compact under compact parent");
    } else {
      lc.law("compact-flag", (c.type & ~m.base.L) != 0,
             cellname(c) + " non-compact with type inside L");
    }

    if (c.is_point) {
      bool ok = po::popcount(c.type) == 1 && c.children.empty() && c.compact;
      if (ok) {
        int p = *bits(c.type).begin();
        ok = has(P.discrete_mask(), p) && c.marks.size() == 1 &&
             c.marks.count(p) && c.marks.at(p) == 1;
      }
      lc.law("crowdedness", ok, cellname(c) + " is an invalid isolated point");
    }
    for (const auto& [p, v] : c.marks)
      lc.law("discrete-budget",
             v >= 1 && has(P.discrete_mask() & c.type, p),
             cellname(c) + " has a bad mark at " + P.name(p));
  }

  if (m.base.L == P.full())
    for (const Cell& c : m.cells)
      lc.law("compact-flag", c.compact, cellname(c) + " non-compact in a compact space");
  if (m.depth >= 1) {
    Mask u = 0;
    for (int root : m.roots) u |= m.noncompact_leaf_types(root);
    lc.law("compact-flag", u == (P.full() & ~m.base.L),
           "non-compact leaf types " + po::mask_to_string(P, u) +
               " do not cover the complement of L");
  }
  for (int p : bits(m.base.L_min_d())) {
    int total = 0;
    for (const Cell& c : m.cells) {
      auto it = c.marks.find(p);
      if (it != c.marks.end()) total += it->second;
    }
    lc.law("discrete-budget", total == m.base.f.at(p),
           "total marks " + std::to_string(total) + " at " + P.name(p) +
               " differ from f = " + std::to_string(m.base.f.at(p)));
  }
  return r;
}

Decomposition minimum_decomposition(const Model& m) {
  const POSystem& P = m.base.P;
  const Mask L = m.base.L;
  cls::Report rep = check_partition_invariants(m);
  if (!rep.ok()) throw InvalidModel(rep.first_failure());

  std::vector<int> hull, outs;
  for (const Cell& c : m.cells) {
    if (!c.compact) continue;
    if (c.parent >= 0 && m.cells[c.parent].compact) continue;
    (c.type & L ? hull : outs).push_back(c.id);
  }

  // Hull total must be the measure of the canonical compact hull.
  Measure total = meas::zero_measure(m.base);
  for (int id : hull) total = meas::mu_add(m.base, total, mu_of_cell(m, id));
  Measure expect = meas::zero_measure(m.base);
  if (L != 0) {
    std::map<int, int> counts(m.base.f.begin(), m.base.f.end());
    expect = meas::measure_from_type(m.base, P.upward_closure(L), counts);
  }
  if (!(total == expect)) throw InvalidModel("hull cells do not cover the compact hull");

  Decomposition out;
  Mask lmin = P.min_of(L);
  // One piece per expected trim part; discrete parts get one explicit point
  // per piece, so cells are refined until each carries at most one mark.
  std::map<int, std::vector<int>> piece_index;  // trim type -> piece ids
  for (int p : bits(lmin)) {
    int n = has(P.discrete_mask(), p) ? m.base.f.at(p) : 1;
    for (int i = 0; i < n; ++i) {
      piece_index[p].push_back(static_cast<int>(out.hull_pieces.size()));
      out.hull_pieces.push_back({p, {}});
    }
  }
  std::map<int, int> next_piece;  // trim type -> next discrete piece to fill
  std::vector<int> work = hull;
  while (!work.empty()) {
    int id = work.back();
    work.pop_back();
    const Cell& c = m.cells[id];
    Mask mins = P.min_of(c.type);
    int p = -1;
    for (int q : bits(lmin))
      if ((c.type & ~P.up_of(q)) == 0) { p = q; break; }
    if (p < 0) throw InvalidModel("hull cell " + std::to_string(id) +
                                  " fits no minimal trim type");
    (void)mins;
    if (has(P.discrete_mask(), p)) {
      int marks = m.subtree_marks(id, p);
      if (marks > 1) {
        if (c.children.empty())
          throw InvalidModel("cannot separate explicit points in cell " +
                             std::to_string(id));
        for (int ch : c.children) work.push_back(ch);
        continue;
      }
      int& np = next_piece[p];
      int target;
      if (marks == 1) {
        if (np >= static_cast<int>(piece_index[p].size()))
          throw InvalidModel("too many explicit points for " + P.name(p));
        target = piece_index[p][np++];
      } else {
        target = piece_index[p][0];  // absorbed, no extra discrete points
      }
      out.hull_pieces[target].cells.push_back(id);
    } else {
      out.hull_pieces[piece_index[p][0]].cells.push_back(id);
    }
  }
  for (const auto& piece : out.hull_pieces) {
    Mask u = 0;
    for (int id : piece.cells) u |= m.cells[id].type;
    if (u != P.up_of(piece.trim_type))
      throw InvalidModel("piece for " + P.name(piece.trim_type) +
                         " does not assemble a trim set");
  }

  // Outside the hull: clump compact pieces level by level until each clump
  // has full type P - L, then cut one trim piece per minimal type.
  Mask pml = P.full() & ~L;
  if (!outs.empty()) {
    std::sort(outs.begin(), outs.end(), [&](int a, int b) {
      return m.cells[a].level != m.cells[b].level ? m.cells[a].level < m.cells[b].level
                                                  : a < b;
    });
    std::vector<std::vector<int>> clumps;
    std::vector<int> cur;
    Mask curt = 0;
    for (int id : outs) {
      cur.push_back(id);
      curt |= m.cells[id].type;
      if (curt == pml) {
        clumps.push_back(cur);
        cur.clear();
        curt = 0;
      }
    }
    if (!cur.empty()) {
      if (clumps.empty()) throw InvalidModel("outside cells never cover the remainder type");
      for (int id : cur) clumps.back().push_back(id);
    }
    Mask qmin = P.min_of(pml);
    for (const auto& clump : clumps) {
      std::map<int, Decomposition::Piece> pieces;
      for (int q : bits(qmin)) pieces[q] = {q, {}};
      for (int id : clump) {
        int q = -1;
        for (int cand : bits(qmin))
          if ((m.cells[id].type & ~P.up_of(cand)) == 0) { q = cand; break; }
        if (q < 0) throw InvalidModel("outside cell " + std::to_string(id) +
                                      " fits no minimal trim type");
        pieces[q].cells.push_back(id);
      }
      std::vector<Decomposition::Piece> list;
      for (auto& [q, piece] : pieces) {
        if (piece.cells.empty())
          throw InvalidModel("clump misses a " + P.name(q) + "-trim piece");
        list.push_back(std::move(piece));
      }
      out.clumps.push_back(std::move(list));
    }
  }
  return out;
}

std::string model_to_json(const Model& m) {
  using nlohmann::ordered_json;
  const POSystem& P = m.base.P;
  ordered_json j;
  j["depth"] = m.depth;
  j["cells"] = ordered_json::array();
  for (const Cell& c : m.cells) {
    ordered_json jc;
    jc["id"] = c.id;
    jc["parent"] = c.parent;
    jc["level"] = c.level;
    ordered_json type = ordered_json::array();
    for (int p : bits(c.type)) type.push_back(P.name(p));
    jc["type"] = type;
    ordered_json marks = ordered_json::object();
    for (const auto& [p, v] : c.marks) marks[P.name(p)] = v;
    jc["marks"] = marks;
    jc["compact"] = c.compact;
    jc["point"] = c.is_point;
    jc["children"] = c.children;
    j["cells"].push_back(jc);
  }
  ordered_json cov;
  ordered_json hull = ordered_json::array();
  for (const Cell& c : m.cells)
    if (c.compact && (c.parent < 0 || !m.cells[c.parent].compact))
      hull.push_back(c.id);
  cov["hull"] = hull;
  ordered_json rem = ordered_json::array();
  for (int p : bits(P.full() & ~m.base.L)) rem.push_back(P.name(p));
  cov["remainder"] = rem;
  j["coverage"] = cov;
  return j.dump(2) + "\n";
}

}  // namespace stonekit::stone
