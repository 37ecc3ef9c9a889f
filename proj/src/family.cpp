#include "lpdo/family.hpp"

#include <algorithm>

#include "lpdo/errors.hpp"
#include "lpdo/integrate.hpp"

namespace lpdo {

namespace {

std::set<AtomId> param_bases_of(const std::vector<DiffOp>& factors) {
    std::set<AtomId> atoms_in;
    for (auto& F : factors) F.collect_atoms(atoms_in);
    std::set<AtomId> params;
    for (AtomId a : atoms_in) {
        AtomId base = atoms::base_of(a);
        if (atoms::data(base).is_param) params.insert(base);
    }
    return params;
}

DiffOp compose_all(const std::vector<DiffOp>& factors) {
    if (factors.empty()) throw MathError("empty factor list");
    DiffOp out = factors[0];
    for (size_t i = 1; i < factors.size(); ++i) out = compose(out, factors[i]);
    return out;
}

bool op_depends_on(const DiffOp& L, const std::set<AtomId>& bases) {
    for (auto& [J, c] : L.coeffs())
        if (depends_on(c, bases)) return true;
    return false;
}

DiffOp substitute_op(const DiffOp& L, const std::map<AtomId, Expr>& bindings) {
    DiffOp out;
    for (auto& [J, c] : L.coeffs()) out.add_term(J, substitute(c, bindings));
    return out;
}

}  // namespace

FamilyTemplate make_template(std::vector<DiffOp> factors, std::vector<AtomId> definitions,
                             std::vector<Expr> side_conditions) {
    FamilyTemplate t;
    t.factors = std::move(factors);
    t.definitions = std::move(definitions);
    t.side_conditions = std::move(side_conditions);
    auto params = param_bases_of(t.factors);
    t.params.assign(params.begin(), params.end());
    std::sort(t.params.begin(), t.params.end(),
              [](AtomId a, AtomId b) { return atoms::less(a, b); });
    for (auto& F : t.factors) {
        SymPoly sym = symbol_of(F);
        for (auto& c : sym.coeffs)
            if (depends_on(c, params))
                throw MathError("family factor symbol depends on a parameter");
    }
    return t;
}

FamilyTemplate second_order_family(const Expr& a, const Expr& b) {
    if (!a.deps().subset_of(Deps::x()) || !b.deps().subset_of(Deps::x()))
        throw MathError("second_order_family: a and b must depend on x alone");
    side_conditions::Scope scope;
    std::vector<AtomId> defs;

    Expr diff = b - a;
    Expr q;
    if (diff.is_zero()) {
        q = Expr(1);
    } else {
        AtomId qid = atoms::defsym(atoms::fresh_name("Q"), Deps::x());
        atoms::set_rule(qid, Var::X, diff * Expr::atom(qid));
        atoms::set_rule(qid, Var::Y, Expr(0));
        q = Expr::atom(qid);
        defs.push_back(qid);
    }
    Expr w;
    if (auto closed = integrate(q, Var::X)) {
        w = *closed;
    } else {
        AtomId wid = atoms::defsym(atoms::fresh_name("W"), Deps::x());
        atoms::set_rule(wid, Var::X, q);
        atoms::set_rule(wid, Var::Y, Expr(0));
        w = Expr::atom(wid);
        defs.push_back(wid);
    }
    AtomId f1 = atoms::func(atoms::fresh_name("f1"), Deps::y(), true);
    Expr g = q / (w + Expr::atom(f1));

    std::vector<DiffOp> factors{
        DiffOp::d(Var::X) + DiffOp::mult(a + g),
        DiffOp::d(Var::X) + DiffOp::mult(b - g),
    };
    return make_template(std::move(factors), std::move(defs), scope.take());
}

FamilyTemplate landau_family() {
    side_conditions::Scope scope;
    AtomId c = atoms::func(atoms::fresh_name("c"), Deps::y(), true);
    Expr g = Expr(1) / (var(Var::X) + Expr::atom(c));
    std::vector<DiffOp> factors{
        DiffOp::d(Var::X) + DiffOp::mult(Expr(1) + g),
        DiffOp::d(Var::X) + DiffOp::mult(Expr(1) - g),
        DiffOp::d(Var::X) + DiffOp::term({0, 1}, var(Var::X)),
    };
    return make_template(std::move(factors), {}, scope.take());
}

FamilyTemplate quartic_xx_family() {
    side_conditions::Scope scope;
    AtomId f1 = atoms::func(atoms::fresh_name("f1"), Deps::y(), true);
    Expr h = Expr(2) / (var(Var::X) + Expr(2) * Expr::atom(f1));
    Expr y = var(Var::Y);
    std::vector<DiffOp> factors{
        DiffOp::d(Var::X, 2) + DiffOp::mult(h + y),
        DiffOp::d(Var::X, 2) + DiffOp::mult(-h + y),
    };
    return make_template(std::move(factors), {}, scope.take());
}

FamilyTemplate quartic_xy_family() {
    side_conditions::Scope scope;
    AtomId alpha = atoms::func(atoms::fresh_name("alpha"), Deps::none(), true);
    AtomId beta = atoms::func(atoms::fresh_name("beta"), Deps::none(), true);
    Expr al = Expr::atom(alpha), be = Expr::atom(beta);
    Expr s = var(Var::Y) + al * var(Var::X) + be;
    Expr inv = Expr(1) / s;
    std::vector<DiffOp> factors{
        DiffOp::d(Var::X) + DiffOp::mult(al * inv),
        DiffOp::d(Var::Y) + DiffOp::mult(inv),
        DiffOp::term({1, 1}, Expr(1)) + DiffOp::term({1, 0}, -inv) + DiffOp::term({0, 1}, -al * inv),
    };
    return make_template(std::move(factors), {}, scope.take());
}

std::optional<FamilyTemplate> catalog_family(const std::string& name) {
    if (name == "dxx") return second_order_family(Expr(0), Expr(0));
    if (name == "landau") return landau_family();
    if (name == "quartic-xx") return quartic_xx_family();
    if (name == "quartic-xy") return quartic_xy_family();
    return std::nullopt;
}

std::optional<DiffOp> catalog_reference(const std::string& name) {
    if (name == "dxx") return DiffOp::d(Var::X, 2);
    if (name == "quartic-xx") return DiffOp::d(Var::X, 4);
    if (name == "quartic-xy")
        return compose(DiffOp::d(Var::X, 2), DiffOp::d(Var::Y, 2));
    if (name == "landau") {
        // The printed head D_xx(D_x + x D_y) read as a composition, plus the
        // printed lower-order tail.
        Expr x = var(Var::X);
        DiffOp head = compose(DiffOp::d(Var::X, 2),
                              DiffOp::d(Var::X) + DiffOp::term({0, 1}, x));
        return head + DiffOp::term({2, 0}, Expr(2)) +
               DiffOp::term({1, 1}, Expr(2) * (x + Expr(1))) + DiffOp::d(Var::X) +
               DiffOp::term({0, 1}, x + Expr(1));
    }
    return std::nullopt;
}

namespace {

// Deterministic concrete values for a parameter, used by the two-point
// instantiation cross-check. The offsets step on retry when a substitution
// lands on a structural zero.
Expr instantiation_value(AtomId param, int which, int attempt) {
    static const int first_pool[] = {2, 5, 11};
    static const int second_pool[] = {3, 7, 13};
    int base = which == 0 ? first_pool[attempt] : second_pool[attempt];
    Deps d = atoms::data(param).deps;
    if (which == 0) return Expr(base);
    if (d.has(Var::Y)) return var(Var::Y) + Expr(base);
    if (d.has(Var::X)) return var(Var::X) + Expr(base);
    return Expr(base);
}

}  // namespace

VerificationReport verify_family(const FamilyTemplate& t, const std::optional<DiffOp>& reference) {
    side_conditions::Scope scope;
    VerificationReport r;
    std::set<AtomId> params(t.params.begin(), t.params.end());

    DiffOp acc;
    bool first = true;
    for (size_t i = 0; i < t.factors.size(); ++i) {
        acc = first ? t.factors[i] : compose(acc, t.factors[i]);
        first = false;
        if (i + 1 < t.factors.size()) r.prefix_dependence.push_back(op_depends_on(acc, params));
    }
    r.composed = acc;
    r.parameter_dependent = op_depends_on(acc, params);
    r.reference = reference;
    if (reference) r.residual = acc - *reference;

    // Cross-check: instantiating the parameters and composing must agree
    // with instantiating the symbolic composition. Conditions raised by the
    // probe values are internal, not part of the report.
    side_conditions::Scope probe_scope(true);
    for (int which = 0; which < 2 && !t.params.empty(); ++which) {
        bool done = false;
        for (int attempt = 0; attempt < 3 && !done; ++attempt) {
            std::map<AtomId, Expr> binding;
            for (AtomId p : t.params) binding.emplace(p, instantiation_value(p, which, attempt));
            try {
                std::vector<DiffOp> inst;
                for (auto& F : t.factors) inst.push_back(substitute_op(F, binding));
                if (!(compose_all(inst) == substitute_op(acc, binding)))
                    throw InternalError("family instantiation cross-check failed");
                done = true;
            } catch (const MathError&) {
                // structural zero at this instantiation; try the next offset
            }
        }
        if (!done) throw MathError("family verification: no valid parameter instantiation found");
    }

    r.side_conditions = t.side_conditions;
    for (auto& c : scope.take()) {
        bool dup = false;
        for (auto& have : r.side_conditions) dup = dup || have == c;
        if (!dup) r.side_conditions.push_back(c);
    }
    return r;
}

std::pair<bool, int> is_reducible(const FamilyTemplate& t) {
    if (t.factors.size() < 2) throw MathError("is_reducible needs at least two factors");
    VerificationReport r = verify_family(t, std::nullopt);
    for (size_t i = 0; i < r.prefix_dependence.size(); ++i)
        if (!r.prefix_dependence[i]) return {true, int(i) + 1};
    return {false, -1};
}

FamilyTemplate regroup(const FamilyTemplate& t, const std::vector<std::vector<int>>& grouping) {
    int expect = 1;
    std::vector<DiffOp> grouped;
    for (auto& block : grouping) {
        if (block.empty()) throw MathError("regroup: empty block");
        DiffOp acc;
        bool first = true;
        for (int idx : block) {
            if (idx != expect) throw MathError("regroup: blocks must be contiguous and ordered");
            ++expect;
            acc = first ? t.factors[size_t(idx - 1)] : compose(acc, t.factors[size_t(idx - 1)]);
            first = false;
        }
        grouped.push_back(acc);
    }
    if (expect != int(t.factors.size()) + 1)
        throw MathError("regroup: grouping must cover every factor");
    return make_template(std::move(grouped), t.definitions, t.side_conditions);
}

DiffOp linearized_residual(const DiffOp& L1, const DiffOp& L2, const DiffOp& F1,
                           const DiffOp& F2) {
    return compose(F1, L2) + compose(L1, F2);
}

DiffOp linearized_residual(const DiffOp& L1, const DiffOp& L2, const DiffOp& L3,
                           const DiffOp& F1, const DiffOp& F2, const DiffOp& F3) {
    return compose(compose(F1, L2), L3) + compose(compose(L1, F2), L3) +
           compose(compose(L1, L2), F3);
}

std::pair<DiffOp, DiffOp> epsilon_expand(const FamilyTemplate& t,
                                         const std::map<AtomId, Expr>& T0,
                                         const std::map<AtomId, Expr>& R) {
    for (AtomId p : t.params)
        if (!T0.count(p) || !R.count(p))
            throw MathError("epsilon_expand: bindings must cover every parameter");

    AtomId eps = atoms::func(atoms::fresh_name("eps"), Deps::none());
    Expr eps_e = Expr::atom(eps);
    std::map<AtomId, Expr> shift;
    for (AtomId p : t.params) shift.emplace(p, T0.at(p) + eps_e * R.at(p));

    std::vector<DiffOp> shifted;
    for (auto& F : t.factors) shifted.push_back(substitute_op(F, shift));
    DiffOp composed = compose_all(shifted);

    std::map<AtomId, Expr> at_zero{{eps, Expr(0)}};
    DiffOp order0, order1;
    for (auto& [J, c] : composed.coeffs()) {
        order0.add_term(J, substitute(c, at_zero));
        order1.add_term(J, substitute(formal_derivative(c, eps), at_zero));
    }
    return {order0, order1};
}

CoeffSystem linearized_system(const DiffOp& L1, const DiffOp& L2,
                              std::pair<int, int> ansatz_orders) {
    auto [n1, n2] = ansatz_orders;
    if (n1 < 0 || n2 < 0 || n1 >= L1.order() || n2 >= L2.order())
        throw MathError("linearized_system: ansatz orders must be below the factor orders");

    CoeffSystem s;
    auto make_unknowns = [&s](int order, int which) {
        DiffOp F;
        for (int total = 0; total <= order; ++total) {
            for (int i = total; i >= 0; --i) {
                std::string name;
                if (which == 1)
                    name = order == 0 ? "r1" : "r" + std::to_string(i) + std::to_string(total - i);
                else
                    name = "a" + std::to_string(i) + std::to_string(total - i);
                AtomId u = atoms::func(atoms::fresh_name(name), Deps::xy());
                s.unknowns.push_back(u);
                F.add_term({i, total - i}, Expr::atom(u));
            }
        }
        return F;
    };
    DiffOp F1 = make_unknowns(n1, 1);
    DiffOp F2 = make_unknowns(n2, 2);
    DiffOp R = linearized_residual(L1, L2, F1, F2);
    for (auto& [J, c] : R.coeffs()) s.equations.emplace_back(J, c);
    return s;
}

}  // namespace lpdo
