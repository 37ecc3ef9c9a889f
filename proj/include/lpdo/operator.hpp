#ifndef LPDO_OPERATOR_HPP
#define LPDO_OPERATOR_HPP

#include <map>
#include <string>

#include "lpdo/expr.hpp"

namespace lpdo {

// Bivariate derivative multi-index J = (i, j): D^J = Dx^i Dy^j.
struct MultiIndex {
    int i = 0;
    int j = 0;

    int total() const { return i + j; }
    bool operator==(const MultiIndex& o) const { return i == o.i && j == o.j; }
    bool leq(const MultiIndex& o) const { return i <= o.i && j <= o.j; }
    MultiIndex plus(const MultiIndex& o) const { return {i + o.i, j + o.j}; }
    MultiIndex minus(const MultiIndex& o) const { return {i - o.i, j - o.j}; }
};

// Key order (total degree, i); printing walks it in reverse, so Dx^2 comes
// before Dx*Dy before Dy^2.
struct MultiIndexLess {
    bool operator()(const MultiIndex& a, const MultiIndex& b) const {
        if (a.total() != b.total()) return a.total() < b.total();
        return a.i < b.i;
    }
};

Rat binom(const MultiIndex& upper, const MultiIndex& lower);

// Linear partial differential operator in expanded standard form: a finite
// coefficient map with no stored zeros. Factored presentations live in the
// family layer.
class DiffOp {
public:
    using CoeffMap = std::map<MultiIndex, Expr, MultiIndexLess>;

    DiffOp() = default;
    static DiffOp mult(const Expr& e);            // multiplication operator
    static DiffOp d(Var v, int order = 1);        // Dx^k / Dy^k
    static DiffOp term(const MultiIndex& J, const Expr& coeff);

    bool is_zero() const { return coeffs_.empty(); }
    // Max |J| over stored keys; the zero operator has order -1.
    int order() const;
    const CoeffMap& coeffs() const { return coeffs_; }
    Expr coeff(const MultiIndex& J) const;

    void add_term(const MultiIndex& J, const Expr& coeff);

    DiffOp operator+(const DiffOp& o) const;
    DiffOp operator-(const DiffOp& o) const;
    DiffOp scaled(const Expr& e) const;
    bool operator==(const DiffOp& o) const;
    bool operator!=(const DiffOp& o) const { return !(*this == o); }

    void collect_atoms(std::set<AtomId>& out) const;

    std::string str() const;

private:
    CoeffMap coeffs_;
};

// L(f): sum of a_J * dx^i dy^j (f).
Expr apply(const DiffOp& L, const Expr& f);

// Operator composition via the binomial Leibniz expansion:
// D^J (b D^K) = sum_{I <= J} binom(J, I) d^(J-I)(b) D^(I+K).
DiffOp compose(const DiffOp& a, const DiffOp& b);

// Formal adjoint: L^t(f) = sum (-1)^|J| D^J(a_J f), expanded to standard form.
DiffOp adjoint(const DiffOp& L);

// Conjugation g^-1 L g; requires g nonzero, preserves the symbol.
DiffOp gauge(const DiffOp& L, const Expr& g);

inline DiffOp subtract(const DiffOp& a, const DiffOp& b) { return a - b; }
inline bool equals(const DiffOp& a, const DiffOp& b) { return a == b; }

std::string print_op(const DiffOp& L);

}  // namespace lpdo

#endif
