#ifndef LPDO_EXPR_HPP
#define LPDO_EXPR_HPP

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "lpdo/poly.hpp"

namespace lpdo {

// Canonical rational normal form: num/den reduced, den integer-primitive
// with positive leading coefficient (exactly 1 when constant). Two
// expressions are equal iff their normal forms are structurally identical.
struct NormalForm {
    Poly num;
    Poly den;

    bool is_zero() const { return num.is_zero(); }
    bool operator==(const NormalForm& o) const { return num == o.num && den == o.den; }
};

// Exact scalar over the coefficient class: rational functions (rational
// coefficients) in x, y, declared function symbols and defined symbols.
// Values are immutable; all expressions are kept in normal form, so the
// zero test is structural. Atoms are treated as algebraically independent;
// the only relations the kernel knows are the derivative rules.
class Expr {
public:
    Expr() : Expr(Rat(0)) {}
    explicit Expr(const Rat& c);
    explicit Expr(int c) : Expr(Rat(c)) {}
    static Expr atom(AtomId a);
    static Expr from_fraction(Poly num, Poly den);

    bool is_zero() const { return nf_->num.is_zero(); }
    bool is_constant() const { return nf_->num.is_constant() && nf_->den.is_one(); }
    Rat constant_value() const;  // requires is_constant()
    bool is_polynomial() const { return nf_->den.is_one(); }

    const Poly& num() const { return nf_->num; }
    const Poly& den() const { return nf_->den; }
    NormalForm normal_form() const { return {nf_->num, nf_->den}; }

    Expr operator-() const;
    Expr operator+(const Expr& o) const;
    Expr operator-(const Expr& o) const;
    Expr operator*(const Expr& o) const;
    Expr operator/(const Expr& o) const;  // records a side condition
    Expr pow(int e) const;                // negative exponents invert

    bool operator==(const Expr& o) const { return *nf_ == *o.nf_; }
    bool operator!=(const Expr& o) const { return !(*this == o); }

    void collect_atoms(std::set<AtomId>& out) const;
    Deps deps() const;

    std::string str() const;

private:
    std::shared_ptr<const NormalForm> nf_;
};

inline Expr operator+(int a, const Expr& b) { return Expr(a) + b; }
inline Expr operator-(int a, const Expr& b) { return Expr(a) - b; }
inline Expr operator*(int a, const Expr& b) { return Expr(a) * b; }

// Convenience constructors.
Expr var(Var v);

// Nonzero side conditions encountered while computing (inverted
// denominators). Collection is scoped: conditions recorded inside a Scope
// are visible to it and to every enclosing scope.
namespace side_conditions {

class Scope {
public:
    // An absorbing scope swallows conditions instead of propagating them to
    // the enclosing scope on destruction.
    explicit Scope(bool absorb = false);
    ~Scope();
    Scope(const Scope&) = delete;
    Scope& operator=(const Scope&) = delete;
    // Conditions recorded while this scope was active (canonical, deduped,
    // insertion order).
    std::vector<Expr> take();

private:
    friend void record(const Expr&);
    std::vector<Expr> items_;
    Scope* prev_;
    bool absorb_;
};

void record(const Expr& denominator);

}  // namespace side_conditions

// Partial derivative with the full chain rule: variables, function-symbol
// priming, defined-symbol rules. Total on Expr.
Expr differentiate(const Expr& e, Var v);
Expr differentiate(const Expr& e, Var v, int order);

// Formal partial derivative w.r.t. a single atom, all other atoms constant.
Expr formal_derivative(const Expr& e, AtomId a);

NormalForm normalize(const Expr& e);
bool is_zero(const Expr& e);

// True iff any atom of the set, or a primed descendant of one, occurs in
// the normal form of e.
bool depends_on(const Expr& e, const std::set<AtomId>& bases);
bool depends_on_var(const Expr& e, Var v);

// Simultaneous substitution. Bindings must respect dependencies; binding a
// function symbol also binds its primed descendants to the derivatives of
// the value; binding a defined symbol requires the value to satisfy the
// symbol's derivative rules.
Expr substitute(const Expr& e, const std::map<AtomId, Expr>& bindings);

// Deterministic total order (compares normal forms).
int compare(const Expr& a, const Expr& b);

// The condition "e != 0" in canonical shape: primitive numerator, positive
// leading coefficient.
Expr canonical_condition(const Expr& e);

}  // namespace lpdo

#endif
