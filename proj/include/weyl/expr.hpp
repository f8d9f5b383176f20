#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "weyl/jet.hpp"
#include "weyl/linalg.hpp"

namespace weyl {

// Parameter name -> value map. Immutable by convention once a run starts;
// every parameter referenced by a scenario's expressions must be bound.
class Bindings {
 public:
  Bindings() = default;
  Bindings(std::initializer_list<std::pair<const std::string, double>> init)
      : values_(init) {}

  Bindings& set(const std::string& name, double v) {
    values_[name] = v;
    return *this;
  }
  std::optional<double> find(const std::string& name) const {
    auto it = values_.find(name);
    if (it == values_.end()) return std::nullopt;
    return it->second;
  }
  double at(const std::string& name) const;

  // Values for a declared parameter list, in order; throws naming the first
  // missing parameter.
  Vec resolve(const std::vector<std::string>& params) const;

  const std::map<std::string, double>& values() const { return values_; }

 private:
  std::map<std::string, double> values_;
};

// Declared names of a chart: coordinates first, then scenario parameters.
// Expressions built over the same Symbols object (or an equal one) can be
// combined with the operators below.
struct Symbols {
  std::vector<std::string> coords;
  std::vector<std::string> params;

  static std::shared_ptr<const Symbols> make(std::vector<std::string> coords,
                                             std::vector<std::string> params);

  int coord_index(std::string_view name) const;
  int param_index(std::string_view name) const;
  friend bool operator==(const Symbols&, const Symbols&) = default;
};

using SymbolsPtr = std::shared_ptr<const Symbols>;

// Parsed arithmetic expression over named coordinates and parameters.
//
// Grammar (whitespace insignificant, '^' binds tighter than unary minus,
// which binds tighter than '*' and '/'):
//   expr   := term (("+"|"-") term)*
//   term   := factor (("*"|"/") factor)*
//   factor := "-" factor | power
//   power  := base ("^" base)?
//   base   := number | ident | ident "(" expr ")" | "(" expr ")" | "-" base
// Functions: sin, cos, exp, log, sqrt. The exponent of '^' must fold to a
// numeric constant at parse time.
class ScalarExpr {
 public:
  ScalarExpr() = default;

  static ScalarExpr parse(std::string_view text, SymbolsPtr symbols);
  static ScalarExpr parse(std::string_view text,
                          std::vector<std::string> coords,
                          std::vector<std::string> params = {});

  // Canonical text; parse(print()) reproduces the tree exactly and printing
  // is idempotent.
  std::string print() const;

  double eval(const Point& pt, const Bindings& binds) const;
  Jet1 eval_jet1(const Point& pt, const Bindings& binds) const;
  Jet2 eval_jet2(const Point& pt, const Bindings& binds) const;

  // Structural partial derivative with respect to coordinate i, with light
  // constant folding. No simplification beyond that.
  ScalarExpr derivative(int coord) const;

  bool depends_on_coord(int coord) const;
  int dim() const { return static_cast<int>(symbols_->coords.size()); }
  const SymbolsPtr& symbols() const { return symbols_; }
  explicit operator bool() const { return root_ != nullptr; }

  // Tree builders for programmatic construction (scenario metrics, dlog
  // terms). Operands must share equal Symbols. Literal subtrees fold.
  static ScalarExpr number(double v, SymbolsPtr symbols);
  static ScalarExpr coordinate(int i, SymbolsPtr symbols);
  static ScalarExpr parameter(int i, SymbolsPtr symbols);

  friend ScalarExpr operator-(const ScalarExpr& a);
  friend ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b);
  friend ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b);
  friend ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b);
  friend ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b);
  friend ScalarExpr pow(const ScalarExpr& a, double expo);
  friend ScalarExpr sin(const ScalarExpr& a);
  friend ScalarExpr cos(const ScalarExpr& a);
  friend ScalarExpr exp(const ScalarExpr& a);
  friend ScalarExpr log(const ScalarExpr& a);
  friend ScalarExpr sqrt(const ScalarExpr& a);

  friend bool structurally_equal(const ScalarExpr& a, const ScalarExpr& b);

  struct Node;
  using NodePtr = std::shared_ptr<const Node>;
  const NodePtr& root() const { return root_; }

 private:
  ScalarExpr(NodePtr root, SymbolsPtr symbols)
      : root_(std::move(root)), symbols_(std::move(symbols)) {}

  NodePtr root_;
  SymbolsPtr symbols_;
};

// Shortest-round-trip decimal form of v (the form the printer emits).
std::string format_double(double v);

}  // namespace weyl
