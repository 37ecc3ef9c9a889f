#include "lpdo/expr.hpp"

#include <algorithm>

#include "lpdo/errors.hpp"

namespace lpdo {

namespace {

std::shared_ptr<const NormalForm> make_nf(Poly num, Poly den) {
    if (den.is_zero()) throw MathError("division by structural zero");
    if (num.is_zero()) return std::make_shared<const NormalForm>(NormalForm{Poly(), Poly(Rat(1))});
    Poly g = poly_gcd(num, den);
    if (!g.is_one()) {
        num = *num.divide_exact(g);
        den = *den.divide_exact(g);
    }
    Rat unit = den.signed_content();
    num = num.scaled(Rat(1) / unit);
    den = den.scaled(Rat(1) / unit);
    return std::make_shared<const NormalForm>(NormalForm{std::move(num), std::move(den)});
}

}  // namespace

Expr::Expr(const Rat& c) : nf_(std::make_shared<const NormalForm>(NormalForm{Poly(c), Poly(Rat(1))})) {}

Expr Expr::atom(AtomId a) {
    Expr e;
    e.nf_ = std::make_shared<const NormalForm>(NormalForm{Poly::atom(a), Poly(Rat(1))});
    return e;
}

Expr Expr::from_fraction(Poly num, Poly den) {
    Expr e;
    e.nf_ = make_nf(std::move(num), std::move(den));
    return e;
}

Rat Expr::constant_value() const {
    if (!is_constant()) throw InternalError("constant_value on non-constant expression");
    return nf_->num.constant_value();
}

Expr Expr::operator-() const { return from_fraction(-nf_->num, nf_->den); }

Expr Expr::operator+(const Expr& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    const Poly &a = nf_->num, &b = nf_->den, &c = o.nf_->num, &d = o.nf_->den;
    // a/b + c/d with the usual gcd shortcut on the denominators.
    Poly g = poly_gcd(b, d);
    if (g.is_one()) return from_fraction(a * d + c * b, b * d);
    Poly b1 = *b.divide_exact(g);
    Poly d1 = *d.divide_exact(g);
    return from_fraction(a * d1 + c * b1, b1 * d);
}

Expr Expr::operator-(const Expr& o) const { return *this + (-o); }

Expr Expr::operator*(const Expr& o) const {
    if (is_zero() || o.is_zero()) return Expr();
    return from_fraction(nf_->num * o.nf_->num, nf_->den * o.nf_->den);
}

Expr Expr::operator/(const Expr& o) const {
    if (o.is_zero()) throw MathError("division by structural zero");
    side_conditions::record(o);
    return from_fraction(nf_->num * o.nf_->den, nf_->den * o.nf_->num);
}

Expr Expr::pow(int e) const {
    if (e == 0) return Expr(1);
    if (e > 0) return from_fraction(nf_->num.pow(e), nf_->den.pow(e));
    if (is_zero()) throw MathError("negative power of structural zero");
    side_conditions::record(*this);
    return from_fraction(nf_->den.pow(-e), nf_->num.pow(-e));
}

void Expr::collect_atoms(std::set<AtomId>& out) const {
    nf_->num.collect_atoms(out);
    nf_->den.collect_atoms(out);
}

Deps Expr::deps() const {
    std::set<AtomId> as;
    collect_atoms(as);
    Deps d = Deps::none();
    for (AtomId a : as) d = d.unite(atoms::data(a).deps);
    return d;
}

Expr var(Var v) { return Expr::atom(atoms::variable(v)); }

// --- side conditions ------------------------------------------------------

namespace side_conditions {
namespace {
thread_local Scope* active = nullptr;
}

Scope::Scope(bool absorb) : prev_(active), absorb_(absorb) { active = this; }

Scope::~Scope() {
    active = prev_;
    // Propagate to the enclosing scope so outer collectors see everything.
    if (prev_ && !absorb_)
        for (auto& e : items_) {
            bool dup = false;
            for (auto& have : prev_->items_)
                if (have == e) { dup = true; break; }
            if (!dup) prev_->items_.push_back(e);
        }
}

std::vector<Expr> Scope::take() { return std::move(items_); }

void record(const Expr& denominator) {
    if (!active) return;
    if (denominator.is_constant()) return;  // nonzero constants need no condition
    Expr cond = canonical_condition(denominator);
    for (auto& have : active->items_)
        if (have == cond) return;
    active->items_.push_back(cond);
}

}  // namespace side_conditions

Expr canonical_condition(const Expr& e) {
    return Expr::from_fraction(e.num().primitive(), Poly(Rat(1)));
}

// --- differentiation ------------------------------------------------------

namespace {

// d(atom)/dv with the chain rule for symbols.
Expr atom_derivative(AtomId a, Var v) {
    const AtomData d = atoms::data(a);
    switch (d.kind) {
        case AtomKind::Variable:
            return d.deps.has(v) ? Expr(1) : Expr(0);
        case AtomKind::FuncSym:
            if (!d.deps.has(v)) return Expr(0);
            return Expr::atom(atoms::primed(a, v));
        case AtomKind::DefSym: {
            if (!d.deps.has(v)) return Expr(0);
            const auto& rule = v == Var::X ? d.rule_dx : d.rule_dy;
            if (!rule)
                throw MathError("defined symbol '" + d.name + "' has no d" +
                                std::string(1, var_name(v)) + " rule");
            return *rule;
        }
    }
    throw InternalError("unreachable atom kind");
}

// Derivative of a polynomial under a per-atom derivative map; the result is
// a general expression.
Expr poly_derivative(const Poly& p, const std::function<Expr(AtomId)>& datom) {
    Expr out;
    for (auto& [m, c] : p.terms()) {
        for (size_t k = 0; k < m.factors.size(); ++k) {
            auto [a, e] = m.factors[k];
            Expr da = datom(a);
            if (da.is_zero()) continue;
            // c * e * a^(e-1) * (other factors) * da
            Poly rest(c * e);
            for (size_t t = 0; t < m.factors.size(); ++t) {
                auto [b, eb] = m.factors[t];
                rest = rest * Poly::atom(b, t == k ? eb - 1 : eb);
            }
            out = out + Expr::from_fraction(rest, Poly(Rat(1))) * da;
        }
    }
    return out;
}

Expr derivative_impl(const Expr& e, const std::function<Expr(AtomId)>& datom) {
    const Poly &n = e.num(), &d = e.den();
    Expr dn = poly_derivative(n, datom);
    if (d.is_one()) return dn;
    Expr dd = poly_derivative(d, datom);
    // (n/d)' = (n'd - nd')/d^2
    Expr nd = Expr::from_fraction(n, Poly(Rat(1)));
    Expr de = Expr::from_fraction(Poly(Rat(1)), d);
    return (dn - nd * dd * de) * de;
}

}  // namespace

Expr differentiate(const Expr& e, Var v) {
    return derivative_impl(e, [v](AtomId a) { return atom_derivative(a, v); });
}

Expr differentiate(const Expr& e, Var v, int order) {
    Expr out = e;
    for (int i = 0; i < order; ++i) out = differentiate(out, v);
    return out;
}

Expr formal_derivative(const Expr& e, AtomId a) {
    return derivative_impl(e, [a](AtomId b) { return b == a ? Expr(1) : Expr(0); });
}

NormalForm normalize(const Expr& e) { return e.normal_form(); }

bool is_zero(const Expr& e) { return e.is_zero(); }

bool depends_on(const Expr& e, const std::set<AtomId>& bases) {
    std::set<AtomId> as;
    e.collect_atoms(as);
    for (AtomId a : as)
        if (bases.count(a) || bases.count(atoms::base_of(a))) return true;
    return false;
}

bool depends_on_var(const Expr& e, Var v) { return e.deps().has(v); }

// --- substitution ---------------------------------------------------------

namespace {

Expr eval_poly(const Poly& p, const std::function<Expr(AtomId)>& value) {
    Expr out;
    for (auto& [m, c] : p.terms()) {
        Expr term(c);
        for (auto& [a, e] : m.factors) term = term * value(a).pow(e);
        out = out + term;
    }
    return out;
}

}  // namespace

Expr substitute(const Expr& e, const std::map<AtomId, Expr>& bindings) {
    if (bindings.empty()) return e;
    for (auto& [a, v] : bindings) {
        const AtomData d = atoms::data(a);
        if (!v.deps().subset_of(d.deps))
            throw MathError("binding for '" + atoms::display_name(a) +
                            "' violates its dependency set");
        if (d.kind == AtomKind::Variable)
            throw MathError("cannot bind the variable '" + d.name + "'");
        if (d.kind == AtomKind::FuncSym && (d.dx > 0 || d.dy > 0))
            throw MathError("bind the base symbol, not the derived '" +
                            atoms::display_name(a) + "'");
        if (d.kind == AtomKind::DefSym) {
            // The value must satisfy the symbol's derivative rules.
            for (Var dir : {Var::X, Var::Y}) {
                const auto& rule = dir == Var::X ? d.rule_dx : d.rule_dy;
                if (!rule) continue;
                Expr want = substitute(*rule, bindings);
                if (!(differentiate(v, dir) == want))
                    throw MathError("binding for defined symbol '" + d.name +
                                    "' is inconsistent with its d" +
                                    std::string(1, var_name(dir)) + " rule");
            }
        }
    }

    // Derivative closure: a primed descendant of a bound symbol maps to the
    // corresponding derivative of the bound value.
    std::map<AtomId, Expr> memo;
    std::function<Expr(AtomId)> value = [&](AtomId a) -> Expr {
        auto hit = memo.find(a);
        if (hit != memo.end()) return hit->second;
        Expr out = Expr::atom(a);
        auto direct = bindings.find(a);
        if (direct != bindings.end()) {
            out = direct->second;
        } else {
            const AtomData d = atoms::data(a);
            if (d.kind == AtomKind::FuncSym && (d.dx > 0 || d.dy > 0)) {
                auto base = bindings.find(atoms::base_of(a));
                if (base != bindings.end())
                    out = differentiate(differentiate(base->second, Var::X, d.dx), Var::Y, d.dy);
            }
        }
        memo.emplace(a, out);
        return out;
    };

    Expr num = eval_poly(e.num(), value);
    Expr den = eval_poly(e.den(), value);
    if (den.is_zero()) throw MathError("substitution produced a zero denominator");
    return num / den;
}

int compare(const Expr& a, const Expr& b) {
    int c = poly_compare(a.num(), b.num());
    if (c != 0) return c;
    return poly_compare(a.den(), b.den());
}

}  // namespace lpdo
