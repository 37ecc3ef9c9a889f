#ifndef LPDO_PARSER_HPP
#define LPDO_PARSER_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lpdo/sympoly.hpp"

namespace lpdo {

enum class CommandKind {
    Compose,
    Adjoint,
    Gauge,
    Symbol,
    FactorSymbol,
    Types,
    VerifyFamily,
    Reducible,
    Linearize,
    Factorize,
    Apply,
};

// A parsed script: declarations are applied to the atom registry during
// parsing; the single trailing command is captured here.
struct Script {
    CommandKind kind;
    std::string echo;  // the command statement as written

    std::vector<DiffOp> ops;          // evaluated operator arguments
    std::vector<DiffOp> factors;      // inline family factors, in order
    std::string family_name;          // catalogue family name, "" for inline
    std::optional<std::pair<Expr, Expr>> thm41_ab;
    std::optional<DiffOp> reference;  // verify-family ref clause
    std::optional<Expr> scalar;       // gauge function / apply argument
    std::optional<SymPoly> sym;       // factor-symbol / types operand
    std::vector<SymPoly> type_parts;  // factorize type
    int k = 0;                        // types part count
    std::pair<int, int> ansatz{0, 0}; // linearize orders
    bool admissible_only = false;     // types: drop coprime-split types
};

Script parse_script(const std::string& source);

// Parses a single operator/scalar expression against the current registry
// (identifiers must already be interned). Used by tests and the round-trip
// checks.
DiffOp parse_operator_text(const std::string& text);
Expr parse_expression_text(const std::string& text);

}  // namespace lpdo

#endif
