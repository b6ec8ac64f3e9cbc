#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "stonekit/matching.hpp"
#include "stonekit/model.hpp"
#include "stonekit/text_io.hpp"

namespace {

using nlohmann::ordered_json;
using namespace stonekit;
using po::bits;
using po::Mask;
using po::POSystem;

constexpr int kExitFalse = 2;
constexpr int kExitError = 1;

bool use_color() {
  const char* c = std::getenv("STONEKIT_COLOR");
  return c && std::string(c) == "1";
}

std::string hex_str(const std::string& bytes) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  for (unsigned char c : bytes) {
    out.push_back(digits[c >> 4]);
    out.push_back(digits[c & 15]);
  }
  return out;
}

std::string ok_str(bool pass) {
  if (!use_color()) return pass ? "pass" : "FAIL";
  return pass ? "\033[32mpass\033[0m" : "\033[31mFAIL\033[0m";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Verbs with two system inputs take two files or one file with two blocks.
std::pair<io::ParsedSystem, io::ParsedSystem> load_two(const std::vector<std::string>& paths) {
  if (paths.size() == 2)
    return {io::parse_system(read_file(paths[0])), io::parse_system(read_file(paths[1]))};
  std::vector<io::ParsedSystem> all = io::parse_systems(read_file(paths.at(0)));
  if (all.size() != 2)
    throw InvalidInput("expected two systems, found " + std::to_string(all.size()));
  return {all[0], all[1]};
}

int print_report(const cls::Report& r, const std::string& format) {
  if (format == "json") {
    ordered_json j;
    j["ok"] = r.ok();
    j["items"] = ordered_json::array();
    for (const auto& it : r.items)
      j["items"].push_back({{"law", it.law}, {"pass", it.pass}, {"witness", it.witness}});
    std::cout << j.dump(2) << "\n";
  } else {
    for (const auto& it : r.items) {
      std::cout << ok_str(it.pass) << "  " << it.law;
      if (!it.pass) std::cout << "  (" << it.witness << ")";
      std::cout << "\n";
    }
  }
  return r.ok() ? 0 : kExitFalse;
}

std::string term_str(const POSystem& P, const stone::SpaceTerm& t) {
  using K = stone::SpaceTerm::Kind;
  using A = stone::SpaceTerm::AttachCase;
  switch (t.kind) {
    case K::cantor_d1: return "D1(" + P.name(t.label) + ")";
    case K::cantor_d0: return "D0(" + P.name(t.label) + ")";
    case K::fin_disc:
      return "Fin(" + P.name(t.label) + "," + std::to_string(t.m) + ")";
    case K::omega_disc: return "Disc(" + P.name(t.label) + ")";
    case K::sum:
      return "sum(" + term_str(P, t.children[0]) + ", " + term_str(P, t.children[1]) + ")";
    case K::attach: {
      const char* c = t.acase == A::c1A ? "1A"
                      : t.acase == A::c1B ? "1B"
                      : t.acase == A::c2A ? "2A" : "2B";
      std::string sel;
      for (int i : bits(t.closed_sel)) sel += (sel.empty() ? "" : " ") + P.name(i);
      return std::string("attach") + c + "(" + term_str(P, t.children[0]) + ", {" + sel +
             "}, " + P.name(t.label) + ")";
    }
  }
  return "?";
}

cls::TBASystem need_tba(const io::ParsedSystem& s) {
  if (s.is_ca) throw InvalidInput("'" + s.name + "' is a casystem; a posystem is required");
  return s.tba;
}

cls::CASystem need_ca(const io::ParsedSystem& s) {
  if (!s.is_ca) throw InvalidInput("'" + s.name + "' is a posystem; a casystem is required");
  return s.ca;
}

stone::Model approx_from(const cls::TBASystem& t, int depth, bool alternate) {
  stone::SpaceTerm term = stone::build_space(t.base, alternate);
  return stone::approximate(t.base, term, depth);
}

int run(int argc, char** argv) {
  CLI::App app{"stonekit: finite combinatorics of omega-categorical Boolean rings"};
  app.require_subcommand(1);
  app.fallthrough();
  app.footer(
      "Input blocks:\n"
      "  posystem NAME            casystem NAME\n"
      "  elements: a b c          elements: s t\n"
      "  reflexive: a             order: s<t\n"
      "  order: a<b b<c           M: s\n"
      "  L: a b                   F: s\n"
      "  f: a=2                   g: s=1 t=0\n"
      "  Q1: a b                  Q1: s\n"
      "  end                      end\n"
      "Measures are written  2*a + 1*b  (or 0).");

  std::string format = "text";
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  std::vector<std::string> paths;
  std::string fpath;
  std::string m1, m2, m3;
  int depth = 3, n = 1, max_p = 3, max_f = 2, r = 1;
  bool alternate = false;
  unsigned seed = 0;

  auto* v_validate = app.add_subcommand("validate", "Check the tuple invariants");
  v_validate->add_option("file", fpath)->required();

  auto* v_omega = app.add_subcommand("omega-cat", "Decide omega-categoricity");
  v_omega->add_option("file", fpath)->required();

  auto* v_atoms = app.add_subcommand("atoms", "Atoms of the generated algebra");
  v_atoms->add_option("file", fpath)->required();

  auto* v_toca = app.add_subcommand("to-ca", "Map a TBA tuple to its CA tuple");
  v_toca->add_option("file", fpath)->required();

  auto* v_totba = app.add_subcommand("to-tba", "Map a CA tuple to its TBA tuple");
  v_totba->add_option("file", fpath)->required();

  auto* v_sig = app.add_subcommand("signature", "Signature {C,h,k} of a TBA tuple");
  v_sig->add_option("file", fpath)->required();

  auto* v_iso = app.add_subcommand("iso", "Test two tuples for isomorphism");
  v_iso->add_option("files", paths)->required()->expected(1, 2);

  auto* v_enum = app.add_subcommand("enumerate", "List tuple classes up to isomorphism");
  v_enum->add_option("--max-p", max_p, "Largest carrier size")->capture_default_str();
  v_enum->add_option("--n", n, "Number of ideals")->capture_default_str();
  v_enum->add_option("--max-f", max_f, "Largest discrete part size")->capture_default_str();

  auto* v_muadd = app.add_subcommand("mu-add", "Add two measures over a system");
  v_muadd->add_option("file", fpath)->required();
  v_muadd->add_option("m1", m1, "First measure")->required();
  v_muadd->add_option("m2", m2, "Second measure")->required();

  auto* v_musplit = app.add_subcommand("mu-split", "Vaught split of m into t1 + t2");
  v_musplit->add_option("file", fpath)->required();
  v_musplit->add_option("m", m1, "Measure to split")->required();
  v_musplit->add_option("t1", m2, "First target")->required();
  v_musplit->add_option("t2", m3, "Second target")->required();

  auto* v_build = app.add_subcommand("build", "Construction term of the space");
  v_build->add_option("file", fpath)->required();
  v_build->add_flag("--alternate", alternate, "Remove the first maximal element instead");

  auto* v_approx = app.add_subcommand("approximate", "Cell tree at finite depth");
  v_approx->add_option("file", fpath)->required();
  v_approx->add_option("--depth", depth, "Refinement depth")->capture_default_str();
  v_approx->add_flag("--alternate", alternate, "Alternate build strategy");

  auto* v_check = app.add_subcommand("check", "Verify the partition laws of the approximation");
  v_check->add_option("file", fpath)->required();
  v_check->add_option("--depth", depth, "Refinement depth")->capture_default_str();
  v_check->add_flag("--alternate", alternate, "Alternate build strategy");

  auto* v_match = app.add_subcommand("match", "Match the two build strategies level by level");
  v_match->add_option("file", fpath)->required();
  v_match->add_option("--depth", depth, "Matching depth")->capture_default_str();

  auto* v_dec = app.add_subcommand("decompose", "Minimum trim decomposition of the hull");
  v_dec->add_option("file", fpath)->required();
  v_dec->add_option("--depth", depth, "Refinement depth")->capture_default_str();
  v_dec->add_flag("--alternate", alternate, "Alternate build strategy");

  auto* v_orbits = app.add_subcommand("orbits", "Invariant-tuple counts for r-tuples");
  v_orbits->add_option("file", fpath)->required();
  v_orbits->add_option("--r", r, "Tuple length")->capture_default_str();

  app.add_option("--seed", seed, "Seed for randomized sweeps");

  CLI11_PARSE(app, argc, argv);

  if (*v_validate) {
    io::ParsedSystem s = io::parse_system(read_file(fpath));
    cls::Report rep = s.is_ca ? cls::validate_ca_system(s.ca) : cls::validate_tba_system(s.tba);
    return print_report(rep, format);
  }

  if (*v_omega) {
    cls::TBASystem t = need_tba(io::parse_system(read_file(fpath)));
    cls::OmegaCatResult res = cls::omega_cat_check(t.base, t.Q);
    if (format == "json") {
      ordered_json j;
      j["categorical"] = res.categorical;
      j["witness"] = res.witness;
      if (res.refined) j["refined"] = io::print_tba("refined", *res.refined);
      std::cout << j.dump(2) << "\n";
    } else if (res.categorical) {
      std::cout << "omega-categorical; refined tuple:\n"
                << io::print_tba("refined", *res.refined);
    } else {
      std::cout << "not omega-categorical: " << res.witness << "\n";
    }
    return res.categorical ? 0 : kExitFalse;
  }

  if (*v_atoms) {
    io::ParsedSystem s = io::parse_system(read_file(fpath));
    const POSystem& P = s.is_ca ? s.ca.S : s.tba.base.P;
    const std::vector<Mask>& Q = s.is_ca ? s.ca.Q : s.tba.Q;
    po::SetAlgebra a = po::generate_algebra(
        P, Q, s.is_ca ? po::AlgebraKind::closure : po::AlgebraKind::tba);
    po::AtomSystem at = po::atom_posystem(a);
    if (format == "json") {
      ordered_json j;
      j["members"] = a.members.size();
      j["atoms"] = ordered_json::array();
      for (int i = 0; i < at.system.size(); ++i)
        j["atoms"].push_back(at.system.name(i));
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << "algebra members: " << a.members.size() << "\n";
      for (int i = 0; i < at.system.size(); ++i) {
        std::cout << "atom " << at.system.name(i) << "  below:";
        for (int jx : bits(at.system.below(i))) std::cout << ' ' << at.system.name(jx);
        std::cout << "\n";
      }
    }
    return 0;
  }

  if (*v_toca) {
    cls::TBASystem t = need_tba(io::parse_system(read_file(fpath)));
    std::cout << io::print_ca("image", cls::tba_to_ca(t));
    return 0;
  }

  if (*v_totba) {
    cls::CASystem c = need_ca(io::parse_system(read_file(fpath)));
    std::cout << io::print_tba("image", cls::ca_to_tba(c));
    return 0;
  }

  if (*v_sig) {
    cls::TBASystem t = need_tba(io::parse_system(read_file(fpath)));
    cls::Signature s = cls::signature_of(t);
    if (format == "json") {
      ordered_json j;
      j["canonical"] = hex_str(cls::signature_canon(s));
      j["atoms"] = ordered_json::array();
      for (int i = 0; i < s.S.size(); ++i)
        j["atoms"].push_back({{"atom", s.S.name(i)},
                              {"h", s.h[i]},
                              {"k", s.k[i]}});
      std::cout << j.dump(2) << "\n";
    } else {
      for (int i = 0; i < s.S.size(); ++i)
        std::cout << "atom " << s.S.name(i) << "  h=" << s.h[i] << "  k=" << s.k[i] << "\n";
      std::cout << "canonical: " << hex_str(cls::signature_canon(s)) << "\n";
    }
    return 0;
  }

  if (*v_iso) {
    auto [a, b] = load_two(paths);
    if (a.is_ca != b.is_ca) throw InvalidInput("cannot compare a posystem with a casystem");
    std::optional<std::vector<int>> theta =
        a.is_ca ? cls::iso_ca(a.ca, b.ca) : cls::iso_tba(a.tba, b.tba);
    const POSystem& PA = a.is_ca ? a.ca.S : a.tba.base.P;
    const POSystem& PB = b.is_ca ? b.ca.S : b.tba.base.P;
    if (!theta) {
      std::cout << "not isomorphic\n";
      return kExitFalse;
    }
    if (format == "json") {
      ordered_json j;
      j["isomorphic"] = true;
      j["theta"] = ordered_json::object();
      for (int i = 0; i < PA.size(); ++i) j["theta"][PA.name(i)] = PB.name((*theta)[i]);
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << "isomorphic; theta:";
      for (int i = 0; i < PA.size(); ++i)
        std::cout << ' ' << PA.name(i) << "->" << PB.name((*theta)[i]);
      std::cout << "\n";
    }
    return 0;
  }

  if (*v_enum) {
    cls::Enumeration e = cls::enumerate_systems(max_p, n, max_f);
    if (format == "json") {
      ordered_json j;
      j["total"] = e.systems.size();
      j["by_size"] = ordered_json::object();
      for (const auto& [sz, cnt] : e.count_by_size) j["by_size"][std::to_string(sz)] = cnt;
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << "classes: " << e.systems.size() << "\n";
      for (const auto& [sz, cnt] : e.count_by_size)
        std::cout << "  |P|=" << sz << ": " << cnt << "\n";
      int idx = 0;
      for (const cls::TBASystem& t : e.systems)
        std::cout << io::print_tba("class" + std::to_string(idx++), t);
    }
    return 0;
  }

  if (*v_muadd) {
    cls::TBASystem t = need_tba(io::parse_system(read_file(fpath)));
    meas::Measure a = io::parse_measure(t.base, m1);
    meas::Measure b = io::parse_measure(t.base, m2);
    std::cout << io::print_measure(t.base, meas::mu_add(t.base, a, b)) << "\n";
    return 0;
  }

  if (*v_musplit) {
    cls::TBASystem t = need_tba(io::parse_system(read_file(fpath)));
    meas::Measure m = io::parse_measure(t.base, m1);
    meas::Measure t1 = io::parse_measure(t.base, m2);
    meas::Measure t2 = io::parse_measure(t.base, m3);
    try {
      meas::VaughtSplit vs = meas::vaught_split(t.base, m, t1, t2);
      auto side = [&](const std::vector<int>& pieces) {
        std::string out;
        for (int p : pieces) out += (out.empty() ? "" : " ") + t.base.P.name(p);
        return out;
      };
      if (format == "json") {
        ordered_json j;
        j["side1"] = ordered_json::array();
        for (int p : vs.pieces1) j["side1"].push_back(t.base.P.name(p));
        j["side2"] = ordered_json::array();
        for (int p : vs.pieces2) j["side2"].push_back(t.base.P.name(p));
        j["steps"] = vs.steps.size();
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << "side 1 trim pieces: " << side(vs.pieces1) << "\n";
        std::cout << "side 2 trim pieces: " << side(vs.pieces2) << "\n";
        std::cout << "splits performed: " << vs.steps.size() << "\n";
      }
      return 0;
    } catch (const Inconsistent& err) {
      std::cout << err.what() << "\n";
      return kExitFalse;
    }
  }

  if (*v_build) {
    cls::TBASystem t = need_tba(io::parse_system(read_file(fpath)));
    std::cout << term_str(t.base.P, stone::build_space(t.base, alternate)) << "\n";
    return 0;
  }

  if (*v_approx) {
    cls::TBASystem t = need_tba(io::parse_system(read_file(fpath)));
    stone::Model m = approx_from(t, depth, alternate);
    if (format == "json")
      std::cout << stone::model_to_json(m);
    else
      std::cout << "cells: " << m.cells.size() << "  roots: " << m.roots.size()
                << "  depth: " << m.depth << "\n";
    return 0;
  }

  if (*v_check) {
    cls::TBASystem t = need_tba(io::parse_system(read_file(fpath)));
    stone::Model m = approx_from(t, depth, alternate);
    return print_report(stone::check_partition_invariants(m), format);
  }

  if (*v_match) {
    cls::TBASystem t = need_tba(io::parse_system(read_file(fpath)));
    stone::Model a = approx_from(t, depth + 4, false);
    stone::Model b = approx_from(t, depth + 4, true);
    try {
      stone::Matching mt = stone::back_and_forth(a, b, depth);
      if (format == "json") {
        ordered_json j;
        j["matched"] = true;
        j["groups"] = mt.groups.size();
        j["depth"] = mt.depth;
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << "matched at depth " << depth << "; groups: " << mt.groups.size()
                  << "\n";
      }
      return 0;
    } catch (const MeasureMismatch& err) {
      std::cout << err.what() << "\n";
      return kExitFalse;
    }
  }

  if (*v_dec) {
    cls::TBASystem t = need_tba(io::parse_system(read_file(fpath)));
    stone::Model m = approx_from(t, depth, alternate);
    stone::Decomposition d = stone::minimum_decomposition(m);
    if (format == "json") {
      ordered_json j;
      j["hull_pieces"] = ordered_json::array();
      for (const auto& piece : d.hull_pieces)
        j["hull_pieces"].push_back(
            {{"trim", t.base.P.name(piece.trim_type)}, {"cells", piece.cells}});
      j["clumps"] = ordered_json::array();
      for (const auto& clump : d.clumps) {
        ordered_json jc = ordered_json::array();
        for (const auto& piece : clump)
          jc.push_back({{"trim", t.base.P.name(piece.trim_type)}, {"cells", piece.cells}});
        j["clumps"].push_back(jc);
      }
      std::cout << j.dump(2) << "\n";
    } else {
      for (const auto& piece : d.hull_pieces) {
        std::cout << "hull piece " << t.base.P.name(piece.trim_type) << "-trim, cells:";
        for (int id : piece.cells) std::cout << ' ' << id;
        std::cout << "\n";
      }
      std::cout << "exhaustion steps outside the hull: " << d.clumps.size() << "\n";
    }
    return 0;
  }

  if (*v_orbits) {
    cls::TBASystem t = need_tba(io::parse_system(read_file(fpath)));
    meas::OrbitInvariants oi = meas::orbit_invariants(t, r);
    if (format == "json") {
      ordered_json j;
      j["count"] = oi.count;
      j["exact"] = oi.exact;
      j["inside"] = oi.inside_count;
      j["outside_options"] = oi.outside_options;
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << "invariant tuples for r=" << r << ": " << oi.count
                << (oi.exact ? " (exact orbit count)" : " (upper bound)") << "\n";
    }
    return 0;
  }

  return kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const stonekit::Error& err) {
    std::cerr << err.what() << "\n";
    return kExitError;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitError;
  }
}
