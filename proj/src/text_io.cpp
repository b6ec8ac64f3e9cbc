#include "stonekit/text_io.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace stonekit::io {

using po::bit;
using po::bits;
using po::has;
using po::Mask;
using po::POSystem;

namespace {

struct Token {
  std::string text;
  int col;  // 1-based
};

std::vector<Token> tokenize(const std::string& line) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    if (line[i] == '#') break;
    size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])))
      ++j;
    out.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
    i = j;
  }
  return out;
}

struct Block {
  std::string header;  // posystem | casystem
  std::string name;
  int header_line = 0;
  // key -> list of value tokens with positions; keys may repeat (values append)
  std::vector<std::pair<std::pair<std::string, int>, std::vector<Token>>> fields;
};

int element_index(const std::vector<std::string>& names, const Token& t, int line) {
  auto it = std::find(names.begin(), names.end(), t.text);
  if (it == names.end())
    throw ParseError(line, t.col, "unknown element '" + t.text + "'");
  return static_cast<int>(it - names.begin());
}

std::pair<std::string, int> split_assign(const Token& t, int line) {
  size_t eq = t.text.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 >= t.text.size())
    throw ParseError(line, t.col, "expected name=value, got '" + t.text + "'");
  const std::string num = t.text.substr(eq + 1);
  for (char c : num)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw ParseError(line, t.col, "expected an integer after '=' in '" + t.text + "'");
  return {t.text.substr(0, eq), std::stoi(num)};
}

ParsedSystem assemble(const Block& blk) {
  ParsedSystem out;
  out.name = blk.name;
  out.is_ca = blk.header == "casystem";

  std::vector<std::string> names;
  std::vector<std::pair<std::string, std::string>> rel;
  Mask L = 0, M = 0, F = 0;
  std::map<int, int> f;
  std::map<int, int> g;
  std::map<int, Mask> qmap;

  for (const auto& [keypos, vals] : blk.fields) {
    const auto& [key, line] = keypos;
    if (key == "elements") {
      for (const Token& t : vals) {
        if (std::find(names.begin(), names.end(), t.text) != names.end())
          throw ParseError(line, t.col, "duplicate element '" + t.text + "'");
        names.push_back(t.text);
      }
      if (names.size() > 16)
        throw ParseError(line, 1, "at most 16 elements are supported");
      continue;
    }
    if (names.empty())
      throw ParseError(line, 1, "'" + key + ":' before 'elements:'");
    if (key == "reflexive") {
      for (const Token& t : vals) {
        element_index(names, t, line);
        rel.emplace_back(t.text, t.text);
      }
    } else if (key == "order") {
      for (const Token& t : vals) {
        size_t lt = t.text.find('<');
        if (lt == std::string::npos || lt == 0 || lt + 1 >= t.text.size())
          throw ParseError(line, t.col, "expected a<b, got '" + t.text + "'");
        Token a{t.text.substr(0, lt), t.col};
        Token b{t.text.substr(lt + 1), t.col + static_cast<int>(lt) + 1};
        element_index(names, a, line);
        element_index(names, b, line);
        rel.emplace_back(a.text, b.text);
      }
    } else if (key == "L" || key == "M" || key == "F") {
      Mask& target = key == "L" ? L : (key == "M" ? M : F);
      for (const Token& t : vals) target |= bit(element_index(names, t, line));
    } else if (key == "f" || key == "g") {
      for (const Token& t : vals) {
        auto [nm, v] = split_assign(t, line);
        int i = element_index(names, {nm, t.col}, line);
        if (key == "f") {
          if (v <= 0) throw ParseError(line, t.col, "f must be positive");
          f[i] = v;
        } else {
          g[i] = v;
        }
      }
    } else if (key.size() >= 2 && key[0] == 'Q') {
      int qi = 0;
      try {
        qi = std::stoi(key.substr(1));
      } catch (const std::exception&) {
        throw ParseError(line, 1, "unknown field '" + key + ":'");
      }
      if (qi < 1) throw ParseError(line, 1, "Q indices start at 1");
      Mask q = 0;
      for (const Token& t : vals) q |= bit(element_index(names, t, line));
      qmap[qi] |= q;
    } else {
      throw ParseError(line, 1, "unknown field '" + key + ":'");
    }
  }

  if (names.empty())
    throw ParseError(blk.header_line, 1, "block has no 'elements:' line");

  std::vector<Mask> Q;
  for (const auto& [qi, mask] : qmap) {
    if (qi != static_cast<int>(Q.size()) + 1)
      throw ParseError(blk.header_line, 1, "Q indices must be contiguous from 1");
    Q.push_back(mask);
  }

  POSystem P;
  try {
    P = POSystem::from_generators(names, rel);
  } catch (const Error& err) {
    throw ParseError(blk.header_line, 1, err.what());
  }

  if (out.is_ca) {
    out.ca.S = P;
    out.ca.M = M;
    out.ca.F = F;
    out.ca.g.assign(P.size(), 0);
    for (const auto& [i, v] : g) out.ca.g[i] = v;
    out.ca.Q = std::move(Q);
  } else {
    out.tba.base.P = P;
    out.tba.base.L = L;
    out.tba.base.f = std::move(f);
    out.tba.Q = std::move(Q);
  }
  return out;
}

}  // namespace

std::vector<ParsedSystem> parse_systems(const std::string& text) {
  std::vector<ParsedSystem> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  Block* cur = nullptr;
  std::vector<Block> blocks;
  while (std::getline(in, line)) {
    ++lineno;
    std::vector<Token> toks = tokenize(line);
    if (toks.empty()) continue;
    if (!cur) {
      if (toks[0].text != "posystem" && toks[0].text != "casystem")
        throw ParseError(lineno, toks[0].col,
                         "expected 'posystem NAME' or 'casystem NAME'");
      if (toks.size() != 2)
        throw ParseError(lineno, toks[0].col, "expected exactly one block name");
      blocks.push_back({toks[0].text, toks[1].text, lineno, {}});
      cur = &blocks.back();
      continue;
    }
    if (toks[0].text == "end") {
      if (toks.size() != 1) throw ParseError(lineno, toks[1].col, "junk after 'end'");
      cur = nullptr;
      continue;
    }
    std::string key = toks[0].text;
    if (key.empty() || key.back() != ':')
      throw ParseError(lineno, toks[0].col, "expected 'field:' or 'end'");
    key.pop_back();
    cur->fields.push_back({{key, lineno}, {toks.begin() + 1, toks.end()}});
  }
  if (cur) throw ParseError(lineno, 1, "missing 'end' for block '" + cur->name + "'");
  for (const Block& b : blocks) out.push_back(assemble(b));
  return out;
}

ParsedSystem parse_system(const std::string& text) {
  std::vector<ParsedSystem> all = parse_systems(text);
  if (all.size() != 1)
    throw ParseError(1, 1, "expected exactly one block, found " +
                               std::to_string(all.size()));
  return all.front();
}

Measure parse_measure(const ExtendedPOSystem& e, const std::string& text) {
  Measure m = meas::zero_measure(e);
  std::vector<std::string> terms;
  std::string cur;
  for (char c : text) {
    if (c == '+') {
      terms.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur.push_back(c);
    }
  }
  terms.push_back(cur);
  if (terms.size() == 1 && (terms[0] == "0" || terms[0].empty())) return m;
  for (const std::string& term : terms) {
    if (term.empty()) throw ParseError(1, 1, "empty measure term");
    size_t star = term.find('*');
    int count = 1;
    std::string nm = term;
    if (star != std::string::npos) {
      const std::string num = term.substr(0, star);
      if (num.empty() ||
          !std::all_of(num.begin(), num.end(),
                       [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        throw ParseError(1, 1, "expected n*name in measure term '" + term + "'");
      count = std::stoi(num);
      nm = term.substr(star + 1);
    }
    int i = e.P.index_of(nm);
    if (i < 0) throw ParseError(1, 1, "unknown element '" + nm + "' in measure");
    if (has(m.support, i))
      throw ParseError(1, 1, "element '" + nm + "' repeats in measure");
    if (count < 1) throw ParseError(1, 1, "measure counts must be positive");
    m.support |= bit(i);
    m.counts[i] = count;
  }
  meas::check_measure(e, m);
  return m;
}

namespace {

void print_common(std::ostream& os, const POSystem& P) {
  os << "elements:";
  for (const std::string& n : P.names()) os << ' ' << n;
  os << '\n';
  if (P.reflexive_mask()) {
    os << "reflexive:";
    for (int i : bits(P.reflexive_mask())) os << ' ' << P.name(i);
    os << '\n';
  }
  bool any = false;
  for (int i = 0; i < P.size(); ++i)
    if (P.below(i) & ~bit(i)) any = true;
  if (any) {
    os << "order:";
    for (int i = 0; i < P.size(); ++i)
      for (int j : bits(P.below(i) & ~bit(i))) os << ' ' << P.name(j) << '<' << P.name(i);
    os << '\n';
  }
}

void print_mask_line(std::ostream& os, const POSystem& P, const char* key, Mask m) {
  if (!m) return;
  os << key << ':';
  for (int i : bits(m)) os << ' ' << P.name(i);
  os << '\n';
}

void print_q(std::ostream& os, const POSystem& P, const std::vector<Mask>& Q) {
  for (size_t qi = 0; qi < Q.size(); ++qi) {
    os << 'Q' << qi + 1 << ':';
    for (int i : bits(Q[qi])) os << ' ' << P.name(i);
    os << '\n';
  }
}

}  // namespace

std::string print_tba(const std::string& name, const TBASystem& t) {
  std::ostringstream os;
  os << "posystem " << name << '\n';
  print_common(os, t.base.P);
  print_mask_line(os, t.base.P, "L", t.base.L);
  if (!t.base.f.empty()) {
    os << "f:";
    for (const auto& [i, v] : t.base.f) os << ' ' << t.base.P.name(i) << '=' << v;
    os << '\n';
  }
  print_q(os, t.base.P, t.Q);
  os << "end\n";
  return os.str();
}

std::string print_ca(const std::string& name, const CASystem& c) {
  std::ostringstream os;
  os << "casystem " << name << '\n';
  print_common(os, c.S);
  print_mask_line(os, c.S, "M", c.M);
  print_mask_line(os, c.S, "F", c.F);
  if (c.S.size() > 0) {
    os << "g:";
    for (int i = 0; i < c.S.size(); ++i) os << ' ' << c.S.name(i) << '=' << c.g[i];
    os << '\n';
  }
  print_q(os, c.S, c.Q);
  os << "end\n";
  return os.str();
}

std::string print_measure(const ExtendedPOSystem& e, const Measure& m) {
  if (m.zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i : bits(m.support)) {
    if (!first) os << " + ";
    first = false;
    os << m.counts[i] << '*' << e.P.name(i);
  }
  return os.str();
}

}  // namespace stonekit::io
