#ifndef LPDO_PRINTER_HPP
#define LPDO_PRINTER_HPP

#include <string>

#include "lpdo/expr.hpp"

namespace lpdo {

// Canonical text forms. Deterministic (term maps are ordered) and designed
// to re-parse to the same value: '/' and '*' are left-associative in the
// DSL, '^' binds tighter, so denominators get parentheses unless they are a
// single atom power.
std::string print_poly(const Poly& p);
std::string print_expr(const Expr& e);

// As a factor in a product (e.g. an operator coefficient): sums and
// fractions with non-atomic denominators are parenthesized.
std::string print_expr_factor(const Expr& e);

}  // namespace lpdo

#endif
