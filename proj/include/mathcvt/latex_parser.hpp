#pragma once

#include <string>
#include <vector>

#include "mathcvt/expr_tree.hpp"
#include "mathcvt/latex_tokens.hpp"
#include "mathcvt/macro_registry.hpp"

namespace mathcvt {

/// Parses a token stream into a presentation tree. Leaf order matches source
/// reading order; fences stay inline tokens; x^a_b and x_b^a normalize to the
/// same Script node. Throws UnknownMacro, ArityError, ParseError.
ExprNode parse(const std::vector<Token>& tokens, const MacroRegistry& registry);

/// tokenize + parse + preorder id assignment (ids from 0).
ExprNode parse_latex(const std::string& src, const MacroRegistry& registry);

/// Serializes a presentation tree back to LaTeX. parse(print(t)) produces a
/// tree equal to t up to node ids.
std::string print_latex(const ExprNode& tree);

}  // namespace mathcvt
