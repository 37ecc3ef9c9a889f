#include "lpdo/solver.hpp"

#include <algorithm>

#include "lpdo/errors.hpp"
#include "lpdo/integrate.hpp"

namespace lpdo {

namespace {

// Occurrence profile of one unknown inside one equation.
struct Occurrence {
    bool unprimed = false;
    std::vector<AtomId> primed;  // primed descendants present
};

std::map<AtomId, Occurrence> scan_unknowns(const Expr& e, const std::vector<AtomId>& unknowns) {
    std::map<AtomId, Occurrence> out;
    std::set<AtomId> atoms_in;
    e.collect_atoms(atoms_in);
    for (AtomId a : atoms_in) {
        AtomId base = atoms::base_of(a);
        if (std::find(unknowns.begin(), unknowns.end(), base) == unknowns.end()) continue;
        auto& occ = out[base];
        if (a == base) occ.unprimed = true;
        else occ.primed.push_back(a);
    }
    return out;
}

void check_affine(const Expr& e, const std::vector<AtomId>& unknowns) {
    auto is_unknown_derived = [&](AtomId a) {
        AtomId base = atoms::base_of(a);
        return std::find(unknowns.begin(), unknowns.end(), base) != unknowns.end();
    };
    std::set<AtomId> in_den;
    e.den().collect_atoms(in_den);
    for (AtomId a : in_den)
        if (is_unknown_derived(a)) throw MathError("nonlinear equation: unknown in a denominator");
    for (auto& [m, c] : e.num().terms()) {
        int count = 0;
        for (auto& [a, exp] : m.factors) {
            if (!is_unknown_derived(a)) continue;
            if (exp > 1) throw MathError("nonlinear equation: unknown to a power above 1");
            ++count;
        }
        if (count > 1) throw MathError("nonlinear equation: product of unknowns");
    }
}

Expr known_part(const Expr& e, const std::vector<AtomId>& unknowns) {
    std::map<AtomId, Expr> zeros;
    for (AtomId u : unknowns) zeros.emplace(u, Expr(0));
    return substitute(e, zeros);
}

struct SolverState {
    std::vector<AtomId> unknowns;
    std::vector<std::pair<MultiIndex, Expr>> eqs;
    SolveOutcome out;
    int param_counter = 0;
    int esym_counter = 0;

    bool condition_entailed(const Expr& cond) const {
        for (auto& have : out.conditions) {
            if (have == cond) return true;
            if (cond.num().divide_exact(have.num())) return true;
        }
        return false;
    }

    void add_condition(const Expr& raw) {
        Expr cond = canonical_condition(raw);
        if (cond.is_zero()) return;
        if (!condition_entailed(cond)) out.conditions.push_back(cond);
    }

    void bind(AtomId u, const Expr& value) {
        std::map<AtomId, Expr> one{{u, value}};
        for (auto& [k, v] : out.bindings) v = substitute(v, one);
        out.bindings.emplace(u, value);
        out.binding_order.push_back(u);
        for (auto& [mi, e] : eqs) e = substitute(e, one);
    }

    // Drops equations that became identically zero.
    void prune() {
        std::vector<std::pair<MultiIndex, Expr>> keep;
        for (auto& [mi, e] : eqs)
            if (!e.is_zero()) keep.emplace_back(mi, e);
        eqs = std::move(keep);
    }

    bool algebraic_pass() {
        for (size_t idx = 0; idx < eqs.size(); ++idx) {
            const Expr& e = eqs[idx].second;
            auto occ = scan_unknowns(e, unknowns);
            if (occ.empty()) continue;
            for (AtomId u : unknowns) {
                auto it = occ.find(u);
                if (it == occ.end() || !it->second.unprimed || !it->second.primed.empty())
                    continue;
                Expr coeff = formal_derivative(e, u);
                if (!coeff.is_constant() || coeff.is_zero()) continue;
                Expr rest = e - coeff * Expr::atom(u);
                Expr value = -(rest / coeff);
                eqs.erase(eqs.begin() + static_cast<long>(idx));
                bind(u, value);
                prune();
                return true;
            }
        }
        return false;
    }

    bool generic_split_pass() {
        for (size_t idx = 0; idx < eqs.size(); ++idx) {
            const Expr& e = eqs[idx].second;
            auto occ = scan_unknowns(e, unknowns);
            if (occ.size() != 1) continue;
            auto& [u, o] = *occ.begin();
            if (!o.unprimed || !o.primed.empty()) continue;
            Expr coeff = formal_derivative(e, u);
            if (coeff.is_constant()) continue;  // the algebraic pass owns that case
            std::set<AtomId> coeff_atoms;
            coeff.collect_atoms(coeff_atoms);
            bool coeff_known = scan_unknowns(coeff, unknowns).empty();
            if (!coeff_known) continue;
            if (!(e - coeff * Expr::atom(u)).is_zero()) continue;  // must be exactly c*u
            Expr cond = coeff;
            eqs.erase(eqs.begin() + static_cast<long>(idx));
            add_condition(cond);
            return true;
        }
        return false;
    }

    bool ode_pass() {
        for (size_t idx = 0; idx < eqs.size(); ++idx) {
            const Expr& e = eqs[idx].second;
            auto occ = scan_unknowns(e, unknowns);
            if (occ.size() != 1) continue;
            auto& [u, o] = *occ.begin();
            if (o.primed.size() != 1) continue;
            AtomId pa = o.primed[0];
            const AtomData pd = atoms::data(pa);
            if (pd.dx + pd.dy != 1) continue;  // first-order primes only
            Var v = pd.dx == 1 ? Var::X : Var::Y;
            Expr alpha = formal_derivative(e, pa);
            Expr beta = formal_derivative(e, u);
            if (!scan_unknowns(alpha, unknowns).empty() || !scan_unknowns(beta, unknowns).empty())
                continue;
            Expr gamma = known_part(e, unknowns);
            if (alpha.is_zero()) continue;
            Expr p = -(beta / alpha);
            Expr q = -(gamma / alpha);

            Expr esym(1);
            if (!p.is_zero()) {
                std::string name = "E" + std::to_string(++esym_counter);
                AtomId e_id = atoms::defsym(atoms::fresh_name(name), p.deps().unite(Deps::of(v)));
                atoms::set_rule(e_id, v, p * Expr::atom(e_id));
                if (!p.deps().has(other_var(v)))
                    atoms::set_rule(e_id, other_var(v), Expr(0));
                esym = Expr::atom(e_id);
                out.introduced.push_back(e_id);
            }
            Expr particular(0);
            if (!q.is_zero()) {
                auto anti = integrate(q / esym, v);
                if (!anti) continue;  // left in unsolved
                particular = *anti;
            }
            std::string pname = atoms::fresh_name("f" + std::to_string(param_counter + 1));
            AtomId c_id = atoms::func(pname, Deps::of(other_var(v)), true);
            ++param_counter;
            out.free_params.push_back(c_id);
            Expr value = (Expr::atom(c_id) + particular) * esym;
            eqs.erase(eqs.begin() + static_cast<long>(idx));
            bind(u, value);
            prune();
            return true;
        }
        return false;
    }

    bool condition_pass() {
        for (size_t idx = 0; idx < eqs.size(); ++idx) {
            const Expr& e = eqs[idx].second;
            if (!scan_unknowns(e, unknowns).empty()) continue;
            Expr cond = e;
            eqs.erase(eqs.begin() + static_cast<long>(idx));
            if (!cond.is_zero()) add_condition(cond);
            return true;
        }
        return false;
    }
};

// One-line structural description of an unsolved equation, when it is a
// single-unknown ODE in one direction.
std::optional<std::string> describe_unsolved(const Expr& e, const std::vector<AtomId>& unknowns) {
    auto occ = scan_unknowns(e, unknowns);
    if (occ.size() != 1) return std::nullopt;
    auto& [u, o] = *occ.begin();
    int max_order = 0;
    bool pure_x = true, pure_y = true;
    for (AtomId pa : o.primed) {
        const AtomData pd = atoms::data(pa);
        max_order = std::max(max_order, pd.dx + pd.dy);
        if (pd.dy > 0) pure_x = false;
        if (pd.dx > 0) pure_y = false;
    }
    if (max_order < 1 || (!pure_x && !pure_y)) return std::nullopt;
    char dir = pure_x ? 'x' : 'y';
    char free_var = pure_x ? 'y' : 'x';
    return "order-" + std::to_string(max_order) + " linear ODE in d" + std::string(1, dir) +
           " for " + atoms::display_name(u) + "; solution space: " + std::to_string(max_order) +
           " function(s) of " + std::string(1, free_var);
}

}  // namespace

SolveOutcome solve_triangular(const CoeffSystem& s) {
    side_conditions::Scope scope;
    SolverState st;
    st.unknowns = s.unknowns;
    st.eqs = s.equations;
    for (auto& [mi, e] : st.eqs) check_affine(e, st.unknowns);
    std::stable_sort(st.eqs.begin(), st.eqs.end(),
                     [](const auto& a, const auto& b) { return MultiIndexLess{}(a.first, b.first); });
    st.prune();

    for (;;) {
        if (st.algebraic_pass()) continue;
        if (st.generic_split_pass()) continue;
        if (st.ode_pass()) continue;
        if (st.condition_pass()) continue;
        break;
    }

    st.out.unsolved = st.eqs;
    for (auto& [mi, e] : st.out.unsolved) {
        if (auto note = describe_unsolved(e, st.unknowns)) st.out.notes.push_back(*note);
    }
    st.out.side_conditions = scope.take();
    return st.out;
}

// --- unique factorization ---------------------------------------------------

namespace {

// Per-level linear solve for the factorization ansatz: algebraic steps with
// constant coefficients first, then symbolic divisions; leftovers free of
// unknowns become conditions.
void solve_level(std::vector<Expr>& eqs, std::vector<AtomId>& unknowns,
                 std::map<AtomId, Expr>& bindings, std::vector<Expr>& conditions) {
    auto substitute_all = [&](const std::map<AtomId, Expr>& one) {
        for (auto& e : eqs) e = substitute(e, one);
        for (auto& [k, v] : bindings) v = substitute(v, one);
    };
    bool progress = true;
    while (progress) {
        progress = false;
        for (bool allow_symbolic : {false, true}) {
            for (size_t idx = 0; idx < eqs.size() && !progress; ++idx) {
                const Expr& e = eqs[idx];
                if (e.is_zero()) continue;
                auto occ = scan_unknowns(e, unknowns);
                for (AtomId u : unknowns) {
                    auto it = occ.find(u);
                    if (it == occ.end() || !it->second.unprimed || !it->second.primed.empty())
                        continue;
                    Expr coeff = formal_derivative(e, u);
                    if (coeff.is_zero()) continue;
                    if (!scan_unknowns(coeff, unknowns).empty()) continue;
                    if (!allow_symbolic && !coeff.is_constant()) continue;
                    Expr value = -((e - coeff * Expr::atom(u)) / coeff);
                    bindings.emplace(u, value);
                    unknowns.erase(std::find(unknowns.begin(), unknowns.end(), u));
                    eqs.erase(eqs.begin() + static_cast<long>(idx));
                    substitute_all({{u, value}});
                    progress = true;
                    break;
                }
            }
            if (progress) break;
        }
    }
    // Unknown-free leftovers are solvability conditions on this level.
    std::vector<Expr> keep;
    for (auto& e : eqs) {
        if (e.is_zero()) continue;
        if (scan_unknowns(e, unknowns).empty()) conditions.push_back(canonical_condition(e));
        else keep.push_back(e);
    }
    eqs = std::move(keep);
}

}  // namespace

std::variant<std::vector<DiffOp>, NotFactorable>
unique_factorization(const DiffOp& L, const FactorizationType& t) {
    if (L.is_zero()) throw MathError("unique_factorization: zero operator");
    if (L.order() > 4) throw MathError("unique_factorization: order above 4 unsupported");
    for (size_t i = 0; i < t.parts.size(); ++i)
        for (size_t j = i + 1; j < t.parts.size(); ++j)
            if (!is_coprime(t.parts[i], t.parts[j]))
                throw MathError("unique_factorization: parts are not pairwise coprime");
    SymPoly prod = SymPoly::constant(Expr(1));
    for (auto& p : t.parts) prod = prod * p;
    if (!(symbol_of(L) == prod))
        throw MathError("unique_factorization: symbol does not match the type");

    // Ansatz: the symbol fixes the top coefficients; everything below is an
    // unknown function m{factor}_{ij}.
    std::vector<DiffOp> factors;
    std::vector<AtomId> unknowns;
    for (size_t f = 0; f < t.parts.size(); ++f) {
        const SymPoly& part = t.parts[f];
        DiffOp F;
        for (int k = 0; k <= part.degree; ++k)
            F.add_term({part.degree - k, k}, part.coeff(k));
        for (int total = part.degree - 1; total >= 0; --total) {
            for (int i = total; i >= 0; --i) {
                std::string name = "m" + std::to_string(f + 1) + "_" + std::to_string(i) +
                                   std::to_string(total - i);
                AtomId u = atoms::func(atoms::fresh_name(name), Deps::xy());
                unknowns.push_back(u);
                F.add_term({i, total - i}, Expr::atom(u));
            }
        }
        factors.push_back(F);
    }

    std::map<AtomId, Expr> bindings;
    std::vector<Expr> conditions;
    int d = L.order();
    for (int level = d - 1; level >= 0; --level) {
        std::map<AtomId, Expr> all(bindings.begin(), bindings.end());
        std::vector<DiffOp> bound;
        for (auto& F : factors) {
            DiffOp G;
            for (auto& [J, c] : F.coeffs()) G.add_term(J, substitute(c, all));
            bound.push_back(G);
        }
        DiffOp C = bound[0];
        for (size_t f = 1; f < bound.size(); ++f) C = compose(C, bound[f]);
        DiffOp R = C - L;
        std::vector<Expr> eqs;
        for (auto& [J, c] : R.coeffs())
            if (J.total() == level) eqs.push_back(c);
        for (auto& e : eqs) check_affine(e, unknowns);
        solve_level(eqs, unknowns, bindings, conditions);
        if (!eqs.empty())
            throw InternalError("unique_factorization: level system not triangular");
    }

    if (!conditions.empty()) return NotFactorable{conditions};
    if (!unknowns.empty())
        throw InternalError("unique_factorization: undetermined coefficients remain");

    std::vector<DiffOp> out;
    for (auto& F : factors) {
        DiffOp G;
        for (auto& [J, c] : F.coeffs()) G.add_term(J, substitute(c, bindings));
        out.push_back(G);
    }
    DiffOp check = out[0];
    for (size_t f = 1; f < out.size(); ++f) check = compose(check, out[f]);
    if (!(check == L)) throw InternalError("unique_factorization: verification failed");
    return out;
}

}  // namespace lpdo
