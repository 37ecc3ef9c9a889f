#ifndef LPDO_POLY_HPP
#define LPDO_POLY_HPP

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "lpdo/atom.hpp"
#include "lpdo/rational.hpp"

namespace lpdo {

// Power product over interned atoms; factors sorted by the canonical atom
// order, exponents >= 1.
struct Monomial {
    std::vector<std::pair<AtomId, int>> factors;

    int total_degree() const;
    int degree_in(AtomId a) const;
    bool is_unit() const { return factors.empty(); }
    bool operator==(const Monomial& o) const { return factors == o.factors; }

    static Monomial unit() { return {}; }
    static Monomial atom(AtomId a, int exp = 1);
    Monomial times(const Monomial& o) const;
    // Divides exactly; nullopt when not divisible.
    std::optional<Monomial> divide(const Monomial& o) const;
};

// Graded lexicographic order (atom order from the registry).
bool mono_less(const Monomial& a, const Monomial& b);

struct MonoLess {
    bool operator()(const Monomial& a, const Monomial& b) const { return mono_less(a, b); }
};

// Sparse multivariate polynomial over the rationals. Zero coefficients are
// never stored; the term map is ordered, so iteration and printing are
// deterministic.
class Poly {
public:
    using TermMap = std::map<Monomial, Rat, MonoLess>;

    Poly() = default;
    explicit Poly(const Rat& c);
    static Poly atom(AtomId a, int exp = 1);

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    // The constant value; requires is_constant().
    Rat constant_value() const;
    bool is_one() const { return is_constant() && constant_value() == 1; }

    const TermMap& terms() const { return terms_; }
    int total_degree() const;
    int degree_in(AtomId a) const;

    // Leading data w.r.t. the graded-lex order.
    const Monomial& leading_monomial() const;
    const Rat& leading_coeff() const;

    Poly operator-() const;
    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    bool operator==(const Poly& o) const { return terms_ == o.terms_; }

    Poly scaled(const Rat& c) const;
    Poly pow(int e) const;  // e >= 0

    void add_term(const Monomial& m, const Rat& c);

    // Atoms occurring in the polynomial.
    void collect_atoms(std::set<AtomId>& out) const;
    bool contains_atom(AtomId a) const;

    // Formal partial derivative w.r.t. one atom (other atoms held constant;
    // no chain rule).
    Poly formal_derivative(AtomId a) const;

    // View as univariate in `a` with Poly coefficients (exponent -> coeff).
    std::map<int, Poly> coeffs_in(AtomId a) const;
    static Poly from_coeffs_in(AtomId a, const std::map<int, Poly>& cs);

    // Signed rational content: content * sign(leading coefficient).
    // Dividing by it yields the integer-primitive, positive-leading form.
    Rat signed_content() const;
    Poly primitive() const;

    // Exact division; nullopt when the division does not come out even.
    std::optional<Poly> divide_exact(const Poly& d) const;

    std::string str() const;  // canonical printing (see printer.cpp)

private:
    TermMap terms_;
};

// GCD of the primitive parts, returned integer-primitive with positive
// leading coefficient (1 for coprime inputs). Classical recursion: contents
// split off, primitive PRS in a chosen main atom.
Poly poly_gcd(const Poly& a, const Poly& b);

// Exact polynomial square root, if one exists.
std::optional<Poly> poly_sqrt(const Poly& p);

// Deterministic total order on polynomials (term-by-term).
int poly_compare(const Poly& a, const Poly& b);

}  // namespace lpdo

#endif
