#pragma once

#include <string>
#include <vector>

#include "stonekit/measure.hpp"

namespace stonekit::io {

using cls::CASystem;
using cls::ExtendedPOSystem;
using cls::TBASystem;
using meas::Measure;

// One `posystem NAME ... end` or `casystem NAME ... end` block.  A posystem
// block always yields a TBASystem; L, f and the Q_i are optional, so plain
// PO systems and extended systems parse through the same shape.
struct ParsedSystem {
  std::string name;
  bool is_ca = false;
  TBASystem tba;
  CASystem ca;
};

// Parses every block in the text; throws ParseError with line/column on
// malformed input.
std::vector<ParsedSystem> parse_systems(const std::string& text);
// Requires exactly one block.
ParsedSystem parse_system(const std::string& text);

// `2*a + 1*b`, bare names meaning count 1, or `0` for the zero measure.
Measure parse_measure(const ExtendedPOSystem& e, const std::string& text);

std::string print_tba(const std::string& name, const TBASystem& t);
std::string print_ca(const std::string& name, const CASystem& c);
std::string print_measure(const ExtendedPOSystem& e, const Measure& m);

}  // namespace stonekit::io
