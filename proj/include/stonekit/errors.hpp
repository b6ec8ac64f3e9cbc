#pragma once

#include <stdexcept>
#include <string>

namespace stonekit {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Antisymmetry violation: a < b and b < a for distinct a, b.
struct CycleError : Error {
  std::string a, b;
  CycleError(std::string a_, std::string b_)
      : Error("antisymmetry violation: " + a_ + " < " + b_ + " and " + b_ + " < " + a_),
        a(std::move(a_)), b(std::move(b_)) {}
};

// Missing composite: a < b and b < c but not a < c.
struct TransitivityError : Error {
  std::string a, b, c;
  TransitivityError(std::string a_, std::string b_, std::string c_)
      : Error("transitivity violation: " + a_ + " < " + b_ + " < " + c_ + " but not " +
              a_ + " < " + c_),
        a(std::move(a_)), b(std::move(b_)), c(std::move(c_)) {}
};

struct NotGeneratedByClosed : Error {
  NotGeneratedByClosed() : Error("algebra is not generated by its closed elements") {}
};

struct InvalidInput : Error {
  explicit InvalidInput(const std::string& msg) : Error("invalid input: " + msg) {}
};

struct LimitExceeded : Error {
  explicit LimitExceeded(const std::string& msg) : Error("limit exceeded: " + msg) {}
};

struct NotUpper : Error {
  NotUpper() : Error("subset is not an upper set") {}
};

struct MissingCount : Error {
  explicit MissingCount(const std::string& elem)
      : Error("missing point count for discrete minimal element " + elem) {}
};

struct BudgetExceeded : Error {
  explicit BudgetExceeded(const std::string& elem)
      : Error("discrete point count exceeds budget at " + elem) {}
};

struct NotAbove : Error {
  explicit NotAbove(const std::string& msg) : Error("cannot split: " + msg) {}
};

struct ZeroMeasure : Error {
  ZeroMeasure() : Error("operation undefined on the zero measure") {}
};

struct Inconsistent : Error {
  explicit Inconsistent(const std::string& msg) : Error("inconsistent measures: " + msg) {}
};

struct NotCategorical : Error {
  explicit NotCategorical(const std::string& msg) : Error("system is not valid: " + msg) {}
};

struct NonCompactCell : Error {
  explicit NonCompactCell(int id)
      : Error("cell " + std::to_string(id) + " is not compact; measure undefined") {}
};

struct InvalidModel : Error {
  explicit InvalidModel(const std::string& msg) : Error("invalid model: " + msg) {}
};

struct MeasureMismatch : Error {
  explicit MeasureMismatch(const std::string& msg) : Error("measure mismatch: " + msg) {}
};

struct ParseError : Error {
  int line, col;
  ParseError(int line_, int col_, const std::string& msg)
      : Error("parse error at " + std::to_string(line_) + ":" + std::to_string(col_) +
              ": " + msg),
        line(line_), col(col_) {}
};

}  // namespace stonekit
