#ifndef LPDO_SYMPOLY_HPP
#define LPDO_SYMPOLY_HPP

#include <optional>
#include <vector>

#include "lpdo/errors.hpp"
#include "lpdo/operator.hpp"

namespace lpdo {

// Homogeneous bivariate polynomial in the symbol variables X, Y:
// sum_k c_k X^(d-k) Y^k with Expr coefficients.
struct SymPoly {
    int degree = 0;
    std::vector<Expr> coeffs;  // size degree+1, index k multiplies X^(d-k) Y^k

    static SymPoly constant(const Expr& c) { return {0, {c}}; }
    static SymPoly X();
    static SymPoly Y();

    bool is_zero() const;
    Expr coeff(int k) const { return k >= 0 && k <= degree ? coeffs[size_t(k)] : Expr(); }

    SymPoly operator*(const SymPoly& o) const;
    SymPoly operator-(const SymPoly& o) const;  // degrees must match
    SymPoly scaled(const Expr& e) const;
    bool operator==(const SymPoly& o) const;

    std::string str() const;
};

// alpha*X + beta*Y, canonically scaled: X-coefficient 1 when nonzero, else
// Y-coefficient 1. Proportional forms have identical canonical
// representatives.
struct LinearForm {
    Expr alpha, beta;

    static LinearForm make(const Expr& a, const Expr& b);  // canonicalizes
    SymPoly to_sympoly() const;
    bool operator==(const LinearForm& o) const { return alpha == o.alpha && beta == o.beta; }
    std::string str() const;
};

// Complete linear factorization: scalar * prod forms[i]^mult[i], forms
// pairwise non-proportional, deterministic order.
struct SymFactorization {
    std::vector<std::pair<LinearForm, int>> factors;
    Expr scalar;

    int total_multiplicity() const;
    SymPoly product() const;
};

// Ordered parts (S_1)...(S_k) of a factorization type. Enumerated types
// carry their provenance (forms and the per-part multiplicity assignment);
// hand-built ones may leave it empty.
struct FactorizationType {
    std::vector<SymPoly> parts;
    std::vector<LinearForm> forms;       // distinct forms (enumeration only)
    std::vector<std::vector<int>> mults; // parts x forms

    std::string str() const;
};

// Thrown when the root search leaves an unfactored residual; callers may
// verify externally supplied factors with verify_hint.
class NeedsHint : public MathError {
public:
    NeedsHint(std::string what, SymPoly residual)
        : MathError(std::move(what)), residual(std::move(residual)) {}
    SymPoly residual;
};

// The symbol of a nonzero operator: top-order coefficients as a SymPoly.
SymPoly symbol_of(const DiffOp& L);

// Complete linear factorization for degree <= 4. Supported roots: X/Y
// content, square-free split, rational roots of constant-coefficient
// residuals, quadratics whose discriminant is a perfect square in the
// class. Anything else raises NeedsHint with the residual.
SymFactorization factor_symbol(const SymPoly& p);

// Checks that the candidate forms multiply (with some scalar) to p.
SymFactorization verify_hint(const SymPoly& p, const std::vector<LinearForm>& forms);

bool is_coprime(const SymPoly& a, const SymPoly& b);

// True iff the symbol factors completely with all multiplicities one.
bool is_hyperbolic(const DiffOp& L);

// All ordered k-part partitions of the factor multiset, each part nonempty.
// With exclude_coprime_splits, types where some contiguous split has
// coprime sides are dropped (no family can exist across such a split).
std::vector<FactorizationType> enumerate_types(const SymFactorization& f, int k,
                                               bool exclude_coprime_splits = false);

// Independent count of the ordered multiset partitions (inclusion-exclusion
// over empty parts); used as a cross-check by the test suites.
long count_ordered_partitions(const std::vector<int>& multiplicities, int k);

bool type_has_coprime_split(const FactorizationType& t);

// Classification catalogue of type shapes that admit an irreducible family
// (orders 2-4), up to renaming the forms and reversing the part order.
// nullopt when the shape is outside the catalogue's range.
std::optional<bool> catalog_admits_irreducible(const FactorizationType& t);

}  // namespace lpdo

#endif
