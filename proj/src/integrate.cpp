#include "lpdo/integrate.hpp"

#include "lpdo/errors.hpp"

namespace lpdo {

namespace {

// The constant k when the atom is a defined symbol with rule d/dv = k*self,
// nullopt otherwise.
std::optional<Rat> exponential_rate(AtomId a, Var v) {
    const AtomData d = atoms::data(a);
    if (d.kind != AtomKind::DefSym) return std::nullopt;
    const auto& rule = v == Var::X ? d.rule_dx : d.rule_dy;
    if (!rule) return std::nullopt;
    // rule = k*a exactly iff it is the single monomial a with rational coeff.
    const Poly& n = rule->num();
    if (!rule->den().is_one() || n.terms().size() != 1) return std::nullopt;
    const auto& [m, c] = *n.terms().begin();
    if (!(m == Monomial::atom(a, 1))) return std::nullopt;
    return c;
}

// integral of v^p * E^m dv with dE/dv = k*E (k constant, m*k != 0):
// by parts, descending powers of v.
Expr integrate_power_exp(int p, const Expr& vv, const Expr& ee, int m, const Rat& k, Var v) {
    Rat mk = k * m;
    Expr head = vv.pow(p) * ee.pow(m) * Expr(Rat(1) / mk);
    if (p == 0) return head;
    return head - Expr(Rat(p) / mk) * integrate_power_exp(p - 1, vv, ee, m, k, v);
}

}  // namespace

std::optional<Expr> integrate(const Expr& e, Var v) {
    if (e.is_zero()) return Expr(0);
    AtomId va = atoms::variable(v);
    Expr vv = Expr::atom(va);

    // Denominator must be v-free or a pure power of one exponential symbol.
    Poly den = e.den();
    int denom_exp_power = 0;
    AtomId denom_exp_atom = 0;
    if (depends_on_var(Expr::from_fraction(den, Poly(Rat(1))), v)) {
        if (den.terms().size() != 1) return std::nullopt;
        const auto& [m, c] = *den.terms().begin();
        if (m.factors.size() != 1) return std::nullopt;
        auto [a, exp] = m.factors[0];
        if (!exponential_rate(a, v)) return std::nullopt;
        denom_exp_atom = a;
        denom_exp_power = exp;
        den = Poly(c);
    }

    Expr rest_den = Expr::from_fraction(Poly(Rat(1)), den);
    Expr out;
    for (auto& [mono, c] : e.num().terms()) {
        int vpow = 0;
        int epow = -denom_exp_power;
        std::optional<std::pair<AtomId, Rat>> exp_sym;
        if (denom_exp_power > 0)
            exp_sym = {denom_exp_atom, *exponential_rate(denom_exp_atom, v)};
        Expr coeff(c);
        for (auto& [a, exp] : mono.factors) {
            if (a == va) {
                vpow = exp;
                continue;
            }
            const AtomData d = atoms::data(a);
            if (!d.deps.has(v)) {
                coeff = coeff * Expr::atom(a).pow(exp);
                continue;
            }
            auto rate = exponential_rate(a, v);
            if (!rate) return std::nullopt;
            if (exp_sym && exp_sym->first != a) return std::nullopt;
            if (!exp_sym) exp_sym = {a, *rate};
            epow += exp;
        }
        Expr term;
        if (!exp_sym || epow == 0) {
            if (exp_sym && epow == 0) {
                // exponential cancelled against the denominator
            }
            term = coeff * vv.pow(vpow + 1) * Expr(Rat(1, vpow + 1));
        } else {
            Expr ee = Expr::atom(exp_sym->first);
            if (exp_sym->second * epow == 0) return std::nullopt;
            term = coeff * integrate_power_exp(vpow, vv, ee, epow, exp_sym->second, v);
        }
        out = out + term * rest_den;
    }
    return out;
}

}  // namespace lpdo
