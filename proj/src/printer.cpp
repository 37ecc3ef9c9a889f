#include "lpdo/printer.hpp"

namespace lpdo {

namespace {

std::string print_monomial(const Monomial& m) {
    std::string out;
    for (auto& [a, e] : m.factors) {
        if (!out.empty()) out += "*";
        out += atoms::display_name(a);
        if (e != 1) out += "^" + std::to_string(e);
    }
    return out;
}

// One term, unsigned part; the caller handles the sign.
std::string print_term(const Rat& coeff, const Monomial& m) {
    Rat c = coeff < 0 ? Rat(-coeff) : coeff;
    if (m.is_unit()) return rat_to_string(c);
    if (c == 1) return print_monomial(m);
    return rat_to_string(c) + "*" + print_monomial(m);
}

}  // namespace

std::string print_poly(const Poly& p) {
    if (p.is_zero()) return "0";
    std::string out;
    // Terms descending: reverse iteration over the ordered map.
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        const auto& [m, c] = *it;
        if (out.empty()) {
            if (c < 0) out += "-";
        } else {
            out += c < 0 ? " - " : " + ";
        }
        out += print_term(c, m);
    }
    return out;
}

namespace {

bool is_single_term(const Poly& p) { return p.terms().size() == 1; }

// True when the polynomial prints as a single atom power ("x", "f1^2"),
// which needs no parentheses as a denominator.
bool is_atomic_power(const Poly& p) {
    if (!is_single_term(p)) return false;
    const auto& [m, c] = *p.terms().begin();
    return c == 1 && m.factors.size() == 1;
}

}  // namespace

std::string print_expr(const Expr& e) {
    const Poly& n = e.num();
    const Poly& d = e.den();
    if (d.is_one()) return print_poly(n);
    std::string ns = is_single_term(n) ? print_poly(n) : "(" + print_poly(n) + ")";
    std::string ds = is_atomic_power(d) ? print_poly(d) : "(" + print_poly(d) + ")";
    return ns + "/" + ds;
}

std::string print_expr_factor(const Expr& e) {
    if (e.den().is_one() && is_single_term(e.num())) {
        const auto& [m, c] = *e.num().terms().begin();
        if (c >= 0) return print_expr(e);
    }
    if (!e.den().is_one() && is_single_term(e.num())) {
        const auto& [m, c] = *e.num().terms().begin();
        if (c >= 0) return print_expr(e);
    }
    return "(" + print_expr(e) + ")";
}

std::string Poly::str() const { return print_poly(*this); }
std::string Expr::str() const { return print_expr(*this); }

}  // namespace lpdo
