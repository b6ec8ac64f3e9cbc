#include "stonekit/classification.hpp"

#include <algorithm>

namespace stonekit::cls {

using po::AlgebraKind;
using po::bit;
using po::bits;
using po::has;
using po::mask_to_string;

void ExtendedPOSystem::check() const {
  if ((L & ~P.full()) != 0) throw InvalidInput("L outside carrier");
  if (!P.is_lower(L)) throw InvalidInput("L is not a lower subset");
  Mask dom = L_min_d();
  for (const auto& [p, v] : f) {
    if (p < 0 || p >= P.size() || !has(dom, p))
      throw InvalidInput("f defined off L_min^d");
    if (v <= 0) throw InvalidInput("f must be positive at " + P.name(p));
  }
  for (int p : bits(dom))
    if (!f.count(p)) throw InvalidInput("f missing at " + P.name(p));
}

bool Report::ok() const {
  for (const auto& i : items)
    if (!i.pass) return false;
  return true;
}

std::string Report::first_failure() const {
  for (const auto& i : items)
    if (!i.pass) return i.law + (i.witness.empty() ? "" : " (" + i.witness + ")");
  return "";
}

namespace {

void add(Report& r, const std::string& law, bool pass, std::string witness = "") {
  r.items.push_back({law, pass, pass ? "" : std::move(witness)});
}

bool generates_full(const POSystem& p, const std::vector<Mask>& q, AlgebraKind kind,
                    size_t* got = nullptr) {
  auto alg = po::generate_algebra(p, q, kind);
  if (got) *got = alg.members.size();
  return alg.members.size() == (size_t{1} << p.size());
}

}  // namespace

Report validate_tba_system(const TBASystem& t) {
  Report r;
  const POSystem& P = t.base.P;
  add(r, "L-lower", P.is_lower(t.base.L), mask_to_string(P, t.base.L));
  bool fc = t.base.finite_crowded();
  add(r, "finite-crowded", fc,
      "discrete elements outside L_min: " +
          mask_to_string(P, P.discrete_mask() & ~t.base.L_min()));
  Mask dom = t.base.L_min_d();
  bool fok = true;
  std::string fw;
  for (int p : bits(dom))
    if (!t.base.f.count(p)) { fok = false; fw = "missing at " + P.name(p); }
  for (const auto& [p, v] : t.base.f) {
    if (p < 0 || p >= P.size() || !has(dom, p)) { fok = false; fw = "defined off L_min^d"; }
    else if (v <= 0) { fok = false; fw = "non-positive at " + P.name(p); }
  }
  add(r, "f-domain", fok, fw);
  for (size_t i = 0; i < t.Q.size(); ++i)
    add(r, "Q" + std::to_string(i + 1) + "-lower", P.is_lower(t.Q[i]),
        mask_to_string(P, t.Q[i]));
  size_t got = 0;
  bool gen = generates_full(P, t.Q, AlgebraKind::tba, &got);
  add(r, "generation", gen,
      "generated subalgebra has " + std::to_string(got) + " of " +
          std::to_string(size_t{1} << P.size()) + " members");
  return r;
}

Report validate_ca_system(const CASystem& c) {
  Report r;
  const POSystem& S = c.S;
  add(r, "poset", S.is_poset(), "reflexive elements " + mask_to_string(S, S.reflexive_mask()));
  add(r, "M-lower", S.is_lower(c.M), mask_to_string(S, c.M));
  add(r, "F-minimal-in-M", (c.F & ~S.min_of(c.M)) == 0,
      mask_to_string(S, c.F & ~S.min_of(c.M)));
  bool gok = c.g.size() == static_cast<size_t>(S.size());
  std::string gw = gok ? "" : "g size mismatch";
  if (gok)
    for (int s = 0; s < S.size(); ++s) {
      if (c.g[s] < 0) { gok = false; gw = "negative at " + S.name(s); }
      if (has(c.F, s) && c.g[s] == 0) { gok = false; gw = "zero on F at " + S.name(s); }
    }
  add(r, "g-values", gok, gw);
  for (size_t i = 0; i < c.Q.size(); ++i)
    add(r, "Q" + std::to_string(i + 1) + "-lower", S.is_lower(c.Q[i]),
        mask_to_string(S, c.Q[i]));
  size_t got = 0;
  bool gen = generates_full(S, c.Q, AlgebraKind::closure, &got);
  add(r, "generation", gen,
      "generated subalgebra has " + std::to_string(got) + " of " +
          std::to_string(size_t{1} << S.size()) + " members");
  return r;
}

CASystem tba_to_ca(const TBASystem& t) {
  Report r = validate_tba_system(t);
  if (!r.ok()) throw InvalidInput("tuple fails validation: " + r.first_failure());
  const POSystem& P = t.base.P;
  auto alg = po::generate_algebra(P, t.Q, AlgebraKind::closure);
  auto as = po::atom_posystem(alg);
  CASystem c;
  c.S = as.system;
  const int n = c.S.size();
  c.g.assign(n, 0);
  for (int i = 0; i < n; ++i) {
    Mask a = as.atom_masks[i];
    if ((a & ~t.base.L) == 0) c.M |= bit(i);
    if ((a & P.derived(a)) == 0) c.F |= bit(i);
    for (int p : bits(a & P.discrete_mask())) c.g[i] += t.base.f.at(p);
  }
  for (Mask q : t.Q) c.Q.push_back(as.atoms_of_member(q));
  return c;
}

TBASystem ca_to_tba(const CASystem& c) {
  Report r = validate_ca_system(c);
  if (!r.ok()) throw InvalidInput("tuple fails validation: " + r.first_failure());
  const POSystem& S = c.S;
  const int ns = S.size();
  std::vector<std::string> names;
  std::vector<int> cidx(ns, -1), didx(ns, -1);
  for (int s = 0; s < ns; ++s)
    if (!has(c.F, s)) {
      cidx[s] = static_cast<int>(names.size());
      names.push_back(S.name(s) + ".c");
    }
  for (int s = 0; s < ns; ++s)
    if (c.g[s] > 0) {
      didx[s] = static_cast<int>(names.size());
      names.push_back(S.name(s) + ".d");
    }
  std::vector<Mask> below(names.size(), 0);
  for (int s = 0; s < ns; ++s) {
    if (cidx[s] < 0) continue;
    Mask b = 0;
    for (int t = 0; t < ns; ++t) {
      // The crowded part of s accumulates every part weakly below it, but
      // the isolated points strictly below only (Prop.-style splitting).
      if (cidx[t] >= 0 && S.leq(t, s)) b |= bit(cidx[t]);
      if (didx[t] >= 0 && S.lt(t, s)) b |= bit(didx[t]);
    }
    below[cidx[s]] = b;
  }
  TBASystem t;
  t.base.P = POSystem::from_below(std::move(names), std::move(below));
  for (int s = 0; s < ns; ++s) {
    if (cidx[s] >= 0 && has(c.M, s)) t.base.L |= bit(cidx[s]);
    if (didx[s] >= 0) {
      t.base.L |= bit(didx[s]);
      t.base.f[didx[s]] = c.g[s];
    }
  }
  for (Mask q : c.Q) {
    Mask m = 0;
    for (int s : bits(q)) {
      if (cidx[s] >= 0) m |= bit(cidx[s]);
      if (didx[s] >= 0) m |= bit(didx[s]);
    }
    t.Q.push_back(m);
  }
  return t;
}

po::CanonicalResult canon_tba(const TBASystem& t) {
  std::vector<Mask> marks{t.base.L};
  marks.insert(marks.end(), t.Q.begin(), t.Q.end());
  std::vector<long long> fv(t.base.P.size(), 0);
  for (const auto& [p, v] : t.base.f) fv[p] = v;
  return po::canonical_form(t.base.P, marks, {fv});
}

po::CanonicalResult canon_ca(const CASystem& c) {
  std::vector<Mask> marks{c.M, c.F};
  marks.insert(marks.end(), c.Q.begin(), c.Q.end());
  std::vector<long long> gv(c.g.begin(), c.g.end());
  return po::canonical_form(c.S, marks, {gv});
}

namespace {

std::optional<std::vector<int>> theta_from(const po::CanonicalResult& a,
                                           const po::CanonicalResult& b) {
  if (a.bytes != b.bytes) return std::nullopt;
  std::vector<int> invb(b.perm.size());
  for (size_t i = 0; i < b.perm.size(); ++i) invb[b.perm[i]] = static_cast<int>(i);
  std::vector<int> theta(a.perm.size());
  for (size_t i = 0; i < a.perm.size(); ++i) theta[i] = invb[a.perm[i]];
  return theta;
}

}  // namespace

std::optional<std::vector<int>> iso_tba(const TBASystem& a, const TBASystem& b) {
  if (a.Q.size() != b.Q.size()) return std::nullopt;
  return theta_from(canon_tba(a), canon_tba(b));
}

std::optional<std::vector<int>> iso_ca(const CASystem& a, const CASystem& b) {
  if (a.Q.size() != b.Q.size()) return std::nullopt;
  return theta_from(canon_ca(a), canon_ca(b));
}

Signature signature_of(const TBASystem& t) {
  Report r = validate_tba_system(t);
  if (!r.ok()) throw InvalidInput("tuple fails validation: " + r.first_failure());
  const POSystem& P = t.base.P;
  auto alg = po::generate_algebra(P, t.Q, AlgebraKind::closure);
  auto as = po::atom_posystem(alg);
  Signature s;
  s.S = as.system;
  const int n = s.S.size();
  s.h.assign(n, 0);
  s.k.assign(n, 0);
  for (int i = 0; i < n; ++i) {
    Mask a = as.atom_masks[i];
    for (int p : bits(a & P.discrete_mask())) s.h[i] += t.base.f.at(p);
    Mask ac = a & P.derived(a);
    if (ac == 0)
      s.k[i] = 0;
    else
      s.k[i] = (ac & ~t.base.L) == 0 ? 1 : 2;
  }
  for (Mask q : t.Q) s.gens.push_back(as.atoms_of_member(q));
  return s;
}

std::string signature_canon(const Signature& s) {
  std::vector<long long> kv(s.k.begin(), s.k.end());
  return po::canonical_form(s.S, s.gens, {s.h, kv}).bytes;
}

Realizability signature_realizable(const Signature& s) {
  Realizability out;
  const POSystem& S = s.S;
  const int n = S.size();
  if (s.h.size() != static_cast<size_t>(n) || s.k.size() != static_cast<size_t>(n)) {
    out.reason = "malformed: h/k size mismatch";
    return out;
  }
  for (int i = 0; i < n; ++i)
    if (s.h[i] < 0 || s.k[i] < 0 || s.k[i] > 2) {
      out.reason = "malformed: h/k value range at " + S.name(i);
      return out;
    }
  for (Mask g : s.gens)
    if (!S.is_lower(g)) {
      out.reason = "(a): generator " + mask_to_string(S, g) + " is not closed";
      return out;
    }
  if (!S.is_poset() || !generates_full(S, s.gens, AlgebraKind::closure)) {
    out.reason = "(a): generators do not generate the full algebra";
    return out;
  }
  Mask mins = S.min_elements();
  for (int i = 0; i < n; ++i) {
    if (s.k[i] == 0 && (s.h[i] == 0 || !has(mins, i))) {
      out.reason = "(b): finite atom " + S.name(i) +
                   (s.h[i] == 0 ? " has no isolated points" : " is not closed");
      return out;
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j : bits(S.below(i)))
      if (s.k[j] > s.k[i]) {
        out.reason = "(c): k(" + S.name(j) + ") > k(" + S.name(i) + ") below it";
        return out;
      }
  CASystem ca;
  ca.S = S;
  ca.g.assign(n, 0);
  for (int i = 0; i < n; ++i) {
    if (s.k[i] <= 1) ca.M |= bit(i);
    if (s.k[i] == 0) ca.F |= bit(i);
    ca.g[i] = static_cast<int>(s.h[i]);
  }
  ca.Q = s.gens;
  out.ok = true;
  out.witness = ca_to_tba(ca);
  return out;
}

namespace {

// All transitive strict relations on n labelled elements where below[i] is a
// subset of the earlier elements (every poset appears in some linear
// extension labelling, which suffices before canonical dedup).
void gen_strict(int n, std::vector<Mask>& below, std::vector<std::vector<Mask>>& out) {
  int i = static_cast<int>(below.size());
  if (i == n) {
    out.push_back(below);
    return;
  }
  for (Mask m = 0; m < bit(i); ++m) {
    bool ok = true;
    for (int j : bits(m))
      if ((below[j] & ~m) != 0) { ok = false; break; }
    if (!ok) continue;
    below.push_back(m);
    gen_strict(n, below, out);
    below.pop_back();
  }
}

std::vector<std::string> default_names(int n) {
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("p" + std::to_string(i));
  return names;
}

// Representatives of PO systems (posets_only: no reflexive points) on
// exactly n elements, deduplicated by canonical form.
std::vector<POSystem> posystem_reps(int n, bool posets_only) {
  std::vector<std::vector<Mask>> stricts;
  std::vector<Mask> work;
  gen_strict(n, work, stricts);
  std::map<std::string, POSystem> reps;
  Mask full = n == 32 ? ~Mask{0} : bit(n) - 1;
  for (const auto& st : stricts) {
    for (Mask refl = 0; refl <= (posets_only ? Mask{0} : full); ++refl) {
      std::vector<Mask> below = st;
      for (int i : bits(refl)) below[i] |= bit(i);
      POSystem p = POSystem::from_below(default_names(n), below);
      reps.emplace(po::canonical_form(p, {}, {}).bytes, p);
    }
  }
  std::vector<POSystem> out;
  for (auto& [k, v] : reps) out.push_back(std::move(v));
  return out;
}

std::vector<Mask> lower_masks(const POSystem& p) {
  std::vector<Mask> out;
  for (Mask m = 0; m <= p.full(); ++m)
    if (p.is_lower(m)) out.push_back(m);
  return out;
}

// All n-tuples of lower subsets generating the full algebra of the given
// kind; generation is checked once per distinct mask set.
std::vector<std::vector<Mask>> generating_tuples(const POSystem& p, int n,
                                                 AlgebraKind kind) {
  std::vector<Mask> lows = lower_masks(p);
  std::map<std::vector<Mask>, bool> cache;
  std::vector<std::vector<Mask>> out;
  std::vector<Mask> tup(n);
  auto rec = [&](auto&& self, int i) -> void {
    if (i == n) {
      std::vector<Mask> key(tup);
      std::sort(key.begin(), key.end());
      key.erase(std::unique(key.begin(), key.end()), key.end());
      auto it = cache.find(key);
      if (it == cache.end())
        it = cache.emplace(key, generates_full(p, key, kind)).first;
      if (it->second) out.push_back(tup);
      return;
    }
    for (Mask m : lows) {
      tup[i] = m;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  return out;
}

// Odometer over value vectors: values[i] ranges over [lo, hi].
bool next_values(std::vector<int>& v, int lo, int hi) {
  for (size_t i = 0; i < v.size(); ++i) {
    if (v[i] < hi) {
      ++v[i];
      for (size_t j = 0; j < i; ++j) v[j] = lo;
      return true;
    }
  }
  return false;
}

}  // namespace

Enumeration enumerate_systems(int max_p, int n, int max_f) {
  if (max_p > 6) throw LimitExceeded("max_p above 6");
  if (max_p < 1 || n < 1 || max_f < 1) throw InvalidInput("bad enumeration bounds");
  std::map<std::string, TBASystem> classes;
  for (int np = 1; np <= max_p; ++np) {
    for (const POSystem& P : posystem_reps(np, false)) {
      auto tuples = generating_tuples(P, n, AlgebraKind::tba);
      if (tuples.empty()) continue;
      // Structural dedup of (P, L, Q) first; f values enumerated on the
      // representatives only.
      std::map<std::string, TBASystem> shapes;
      for (Mask L = 0; L <= P.full(); ++L) {
        if (!P.is_lower(L)) continue;
        TBASystem t;
        t.base.P = P;
        t.base.L = L;
        if (!t.base.finite_crowded()) continue;
        for (const auto& q : tuples) {
          t.Q = q;
          std::vector<Mask> marks{L};
          marks.insert(marks.end(), q.begin(), q.end());
          shapes.emplace(po::canonical_form(P, marks, {}).bytes, t);
        }
      }
      for (auto& [key, shape] : shapes) {
        std::vector<int> dom;
        for (int p : bits(shape.base.L_min_d())) dom.push_back(p);
        std::vector<int> vals(dom.size(), 1);
        do {
          TBASystem t = shape;
          for (size_t i = 0; i < dom.size(); ++i) t.base.f[dom[i]] = vals[i];
          classes.emplace(canon_tba(t).bytes, t);
        } while (next_values(vals, 1, max_f));
      }
    }
  }
  Enumeration out;
  for (auto& [k, t] : classes) {
    out.count_by_size[t.base.P.size()]++;
    out.systems.push_back(std::move(t));
  }
  return out;
}

CAEnumeration enumerate_ca_systems(int max_s, int n, int max_g) {
  if (max_s > 6) throw LimitExceeded("max_s above 6");
  if (max_s < 1 || n < 1 || max_g < 1) throw InvalidInput("bad enumeration bounds");
  std::map<std::string, CASystem> classes;
  for (int ns = 1; ns <= max_s; ++ns) {
    for (const POSystem& S : posystem_reps(ns, true)) {
      auto tuples = generating_tuples(S, n, AlgebraKind::closure);
      if (tuples.empty()) continue;
      std::map<std::string, CASystem> shapes;
      for (Mask M = 0; M <= S.full(); ++M) {
        if (!S.is_lower(M)) continue;
        Mask mmin = S.min_of(M);
        for (Mask F = 0; F <= mmin; ++F) {
          if ((F & ~mmin) != 0) continue;
          CASystem c;
          c.S = S;
          c.M = M;
          c.F = F;
          for (const auto& q : tuples) {
            c.Q = q;
            std::vector<Mask> marks{M, F};
            marks.insert(marks.end(), q.begin(), q.end());
            shapes.emplace(po::canonical_form(S, marks, {}).bytes, c);
          }
        }
      }
      for (auto& [key, shape] : shapes) {
        std::vector<int> vals(ns, 0);
        for (int s : bits(shape.F)) vals[s] = 1;
        // Odometer respecting the g>0-on-F floor.
        auto bump = [&]() {
          for (int i = 0; i < ns; ++i) {
            if (vals[i] < max_g) {
              ++vals[i];
              for (int j = 0; j < i; ++j) vals[j] = has(shape.F, j) ? 1 : 0;
              return true;
            }
          }
          return false;
        };
        do {
          CASystem c = shape;
          c.g = vals;
          classes.emplace(canon_ca(c).bytes, c);
        } while (bump());
      }
    }
  }
  CAEnumeration out;
  for (auto& [k, c] : classes) {
    out.count_by_size[c.S.size()]++;
    out.systems.push_back(std::move(c));
  }
  return out;
}

OmegaCatResult omega_cat_check(const ExtendedPOSystem& e, const std::vector<Mask>& C) {
  e.check();
  const POSystem& P = e.P;
  for (Mask c : C)
    if (!P.is_lower(c))
      throw InvalidInput("closed set " + mask_to_string(P, c) + " is not a lower subset");
  auto calg = po::generate_algebra(P, C, AlgebraKind::closure);
  OmegaCatResult out;
  Mask lmd = e.L_min_d();
  for (Mask a : calg.atoms) {
    for (int p : bits(a & P.discrete_mask())) {
      if ((P.strictly_above(p) & a) != 0) continue;  // p is a limit inside the atom
      if (!has(lmd, p)) {
        out.categorical = false;
        out.witness = "atom " + mask_to_string(P, a) + " has infinitely many isolated points at " + P.name(p);
        return out;
      }
    }
  }
  out.categorical = true;
  // Refined tuple over the atoms of the generated derived-set algebra.
  auto dalg = po::generate_algebra(P, C, AlgebraKind::tba);
  auto as = po::atom_posystem(dalg);
  TBASystem t;
  t.base.P = as.system;
  const int n = t.base.P.size();
  for (int i = 0; i < n; ++i) {
    Mask a = as.atom_masks[i];
    if ((a & ~e.L) == 0) t.base.L |= bit(i);
    if (!t.base.P.reflexive(i) && t.base.P.below(i) == 0) {
      // Discrete atom: its elements are minimal discrete, so f is summed.
      if ((a & ~lmd) == 0) {
        int total = 0;
        for (int p : bits(a)) total += e.f.at(p);
        t.base.f[i] = total;
      }
    }
  }
  for (Mask c : C) t.Q.push_back(as.atoms_of_member(c));
  out.refined = std::move(t);
  return out;
}

}  // namespace stonekit::cls
