#pragma once

#include <string>

#include "mathcvt/expr_tree.hpp"

namespace mathcvt {

// Compact tree-term notation: `head(arg1,arg2)`, bare leaves, `?name` for
// pattern variables. Used by the rewrite-rule file format and by tests.

/// Parses a term. Variables (`?x`) are only accepted when `allow_vars` is set;
/// they become leaves with attr var="1". Throws FormatError on bad syntax.
ExprNode parse_term(const std::string& text, bool allow_vars = false);

std::string print_term(const ExprNode& t);

}  // namespace mathcvt
