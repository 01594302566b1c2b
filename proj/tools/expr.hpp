#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "apx/names.hpp"
#include "apx/rational.hpp"

namespace apx::cli {

/// Expression tree for `eval`: const:<c>, rat:<q>, sqrt:<c>, variables, and
/// id(e), sq(e), add(e,e), mul(e,e), affine(a,b,e).
struct Expr {
  enum class Kind { Const, Leaf, Var, Call };
  Kind kind = Kind::Const;
  std::string text;  // leaf spec, variable name or function name
  Rat a, b;          // constant value, or affine coefficients
  std::size_t var = 0;
  std::vector<std::shared_ptr<Expr>> args;
};

struct Parsed {
  std::shared_ptr<Expr> root;
  std::vector<std::string> variables;  // in order of first appearance
};

/// Throws ParseError with the offending position.
Parsed parse_expression(const std::string& text);

/// "rat:<q>" or "sqrt:<c>" as a scalar name.
AlphaName input_name(const std::string& spec, const Schedule& sch);

/// Chains evaluate_metric over the builder systems; binary operations feed a
/// product name of their arguments.
AlphaName compile(const Expr& e, const std::vector<AlphaName>& inputs, const Schedule& sch,
                  std::uint64_t step_cap);

}  // namespace apx::cli
