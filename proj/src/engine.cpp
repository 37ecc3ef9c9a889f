#include "lpdo/engine.hpp"

#include "lpdo/errors.hpp"
#include "lpdo/printer.hpp"
#include "lpdo/solver.hpp"

namespace lpdo {

namespace {

Report exprs_to_report(const std::vector<Expr>& es) {
    Report arr = Report::array();
    for (auto& e : es) arr.push_back(e.str());
    return arr;
}

Report definitions_report(const std::vector<AtomId>& ids) {
    Report arr = Report::array();
    for (AtomId id : ids) {
        const AtomData d = atoms::data(id);
        Report entry;
        entry["name"] = d.name;
        if (d.rule_dx) entry["dx"] = d.rule_dx->str();
        if (d.rule_dy) entry["dy"] = d.rule_dy->str();
        if (d.kind == AtomKind::DefSym && !d.rule_dx && d.deps.has(Var::X)) entry["dx"] = "(opaque)";
        if (d.kind == AtomKind::DefSym && !d.rule_dy && d.deps.has(Var::Y)) entry["dy"] = "(opaque)";
        arr.push_back(entry);
    }
    return arr;
}

std::string index_str(const MultiIndex& J) {
    return "(" + std::to_string(J.i) + "," + std::to_string(J.j) + ")";
}

void check_order(const DiffOp& L, const RunOptions& opts) {
    if (L.order() > opts.max_order)
        throw MathError("operator order " + std::to_string(L.order()) +
                        " exceeds --max-order=" + std::to_string(opts.max_order));
}

FamilyTemplate resolve_family(const Script& s, std::optional<DiffOp>& reference) {
    if (s.family_name == "thm41") {
        auto [a, b] = *s.thm41_ab;
        FamilyTemplate t = second_order_family(a, b);
        if (!reference)
            reference = compose(DiffOp::d(Var::X) + DiffOp::mult(a),
                                DiffOp::d(Var::X) + DiffOp::mult(b));
        return t;
    }
    if (!s.family_name.empty()) {
        auto t = catalog_family(s.family_name);
        if (!t) throw MathError("unknown family '" + s.family_name + "'");
        if (!reference) reference = catalog_reference(s.family_name);
        return *t;
    }
    return make_template(s.factors);
}

RunResult run_verify_family(const Script& s, const RunOptions& opts) {
    std::optional<DiffOp> reference = s.reference;
    FamilyTemplate t = resolve_family(s, reference);
    for (auto& F : t.factors) check_order(F, opts);
    VerificationReport v = verify_family(t, reference);

    Report r;
    r["command"] = s.echo;
    r["status"] = "ok";
    Report res;
    Report fac = Report::array();
    for (auto& F : t.factors) fac.push_back(print_op(F));
    res["factors"] = fac;
    Report params = Report::array();
    for (AtomId p : t.params) params.push_back(atoms::display_name(p));
    res["parameters"] = params;
    if (!t.definitions.empty()) res["definitions"] = definitions_report(t.definitions);
    res["composed"] = print_op(v.composed);
    res["parameter_dependent"] = v.parameter_dependent;
    Report pref = Report::array();
    for (bool b : v.prefix_dependence) pref.push_back(b);
    res["prefix_dependence"] = pref;
    bool residual_nonzero = false;
    if (v.reference) {
        res["reference"] = print_op(*v.reference);
        res["residual"] = print_op(*v.residual);
        residual_nonzero = !v.residual->is_zero();
        res["residual_zero"] = !residual_nonzero;
    }
    r["result"] = res;
    r["side_conditions"] = exprs_to_report(v.side_conditions);

    Report findings = Report::array();
    if (residual_nonzero)
        findings.push_back("composed operator differs from the reference; residual: " +
                           print_op(*v.residual));
    if (v.parameter_dependent)
        findings.push_back("composed operator still depends on the parameters; "
                           "the factor list is not a factorization family as stated");
    r["findings"] = findings;

    int code = (residual_nonzero || v.parameter_dependent) ? 3 : 0;
    return {r, code};
}

RunResult run_reducible(const Script& s, const RunOptions& opts) {
    std::optional<DiffOp> reference;
    FamilyTemplate t = resolve_family(s, reference);
    for (auto& F : t.factors) check_order(F, opts);
    auto [red, witness] = is_reducible(t);
    Report r;
    r["command"] = s.echo;
    r["status"] = "ok";
    Report res;
    Report fac = Report::array();
    for (auto& F : t.factors) fac.push_back(print_op(F));
    res["factors"] = fac;
    res["reducible"] = red;
    if (red) res["witness_prefix"] = witness;
    r["result"] = res;
    return {r, 0};
}

RunResult run_linearize(const Script& s, const RunOptions& opts) {
    check_order(s.ops[0], opts);
    check_order(s.ops[1], opts);
    CoeffSystem sys = linearized_system(s.ops[0], s.ops[1], s.ansatz);
    SolveOutcome out = solve_triangular(sys);

    Report r;
    r["command"] = s.echo;
    r["status"] = "ok";
    Report res;
    Report unk = Report::array();
    for (AtomId u : sys.unknowns) unk.push_back(atoms::display_name(u));
    res["unknowns"] = unk;
    Report eqs = Report::array();
    for (auto& [J, e] : sys.equations) {
        Report one;
        one["index"] = index_str(J);
        one["equation"] = e.str();
        eqs.push_back(one);
    }
    res["equations"] = eqs;
    Report binds = Report::array();
    for (AtomId u : sys.unknowns) {
        auto it = out.bindings.find(u);
        if (it == out.bindings.end()) continue;
        Report one;
        one["unknown"] = atoms::display_name(u);
        one["value"] = it->second.str();
        binds.push_back(one);
    }
    res["bindings"] = binds;
    Report fp = Report::array();
    for (AtomId p : out.free_params) fp.push_back(atoms::display_name(p));
    res["free_parameters"] = fp;
    if (!out.introduced.empty()) res["definitions"] = definitions_report(out.introduced);
    res["conditions"] = exprs_to_report(out.conditions);
    Report uns = Report::array();
    for (auto& [J, e] : out.unsolved) {
        Report one;
        one["index"] = index_str(J);
        one["equation"] = e.str();
        uns.push_back(one);
    }
    res["unsolved"] = uns;
    Report notes = Report::array();
    for (auto& n : out.notes) notes.push_back(n);
    res["notes"] = notes;
    r["result"] = res;
    r["side_conditions"] = exprs_to_report(out.side_conditions);
    return {r, 0};
}

RunResult run_factorize(const Script& s, const RunOptions& opts) {
    check_order(s.ops[0], opts);
    FactorizationType t;
    t.parts = s.type_parts;
    auto outcome = unique_factorization(s.ops[0], t);
    Report r;
    r["command"] = s.echo;
    if (auto* factors = std::get_if<std::vector<DiffOp>>(&outcome)) {
        r["status"] = "ok";
        Report res;
        Report fac = Report::array();
        for (auto& F : *factors) fac.push_back(print_op(F));
        res["factors"] = fac;
        r["result"] = res;
        return {r, 0};
    }
    const auto& nf = std::get<NotFactorable>(outcome);
    r["status"] = "not-factorable";
    Report res;
    res["violated_conditions"] = exprs_to_report(nf.conditions);
    r["result"] = res;
    return {r, 2};
}

RunResult dispatch(const Script& s, const RunOptions& opts) {
    switch (s.kind) {
        case CommandKind::Compose:
        case CommandKind::Adjoint:
        case CommandKind::Gauge: {
            check_order(s.ops[0], opts);
            side_conditions::Scope scope;
            DiffOp out = s.kind == CommandKind::Compose ? s.ops[0]
                         : s.kind == CommandKind::Adjoint ? adjoint(s.ops[0])
                                                          : gauge(s.ops[0], *s.scalar);
            Report r;
            r["command"] = s.echo;
            r["status"] = "ok";
            Report res;
            res["operator"] = print_op(out);
            res["order"] = out.order();
            r["result"] = res;
            r["side_conditions"] = exprs_to_report(scope.take());
            return {r, 0};
        }
        case CommandKind::Symbol: {
            check_order(s.ops[0], opts);
            Report r;
            r["command"] = s.echo;
            r["status"] = "ok";
            Report res;
            res["symbol"] = symbol_of(s.ops[0]).str();
            r["result"] = res;
            return {r, 0};
        }
        case CommandKind::Apply: {
            check_order(s.ops[0], opts);
            Report r;
            r["command"] = s.echo;
            r["status"] = "ok";
            Report res;
            res["value"] = apply(s.ops[0], *s.scalar).str();
            r["result"] = res;
            return {r, 0};
        }
        case CommandKind::FactorSymbol: {
            if (s.sym->degree > opts.max_order)
                throw MathError("symbol degree exceeds --max-order");
            SymFactorization f = factor_symbol(*s.sym);
            Report r;
            r["command"] = s.echo;
            r["status"] = "ok";
            Report res;
            res["scalar"] = f.scalar.str();
            Report fac = Report::array();
            for (auto& [form, m] : f.factors) {
                Report one;
                one["form"] = form.str();
                one["multiplicity"] = m;
                fac.push_back(one);
            }
            res["factors"] = fac;
            r["result"] = res;
            return {r, 0};
        }
        case CommandKind::Types: {
            SymFactorization f = factor_symbol(*s.sym);
            auto types = enumerate_types(f, s.k, s.admissible_only);
            Report r;
            r["command"] = s.echo;
            r["status"] = "ok";
            Report res;
            res["symbol"] = s.sym->str();
            res["parts"] = s.k;
            res["count"] = types.size();
            std::vector<int> mults;
            for (auto& [form, m] : f.factors) mults.push_back(m);
            if (!s.admissible_only)
                res["independent_count"] = count_ordered_partitions(mults, s.k);
            Report list = Report::array();
            for (auto& t : types) {
                Report one;
                one["type"] = t.str();
                one["coprime_split"] = type_has_coprime_split(t);
                auto cat = catalog_admits_irreducible(t);
                if (cat) one["admits_irreducible_family"] = *cat;
                else one["admits_irreducible_family"] = nullptr;
                list.push_back(one);
            }
            res["types"] = list;
            r["result"] = res;
            return {r, 0};
        }
        case CommandKind::VerifyFamily:
            return run_verify_family(s, opts);
        case CommandKind::Reducible:
            return run_reducible(s, opts);
        case CommandKind::Linearize:
            return run_linearize(s, opts);
        case CommandKind::Factorize:
            return run_factorize(s, opts);
    }
    throw InternalError("unhandled command kind");
}

}  // namespace

RunResult run_script(const Script& s, const RunOptions& opts) { return dispatch(s, opts); }

RunResult run_source(const std::string& source, const RunOptions& opts) {
    try {
        Script s = parse_script(source);
        return run_script(s, opts);
    } catch (const ParseError& e) {
        Report r;
        r["status"] = "parse-error";
        r["error"] = e.what();
        return {r, 1};
    } catch (const NeedsHint& e) {
        Report r;
        r["status"] = "needs-hint";
        r["error"] = e.what();
        r["residual"] = e.residual.str();
        return {r, 2};
    } catch (const MathError& e) {
        Report r;
        r["status"] = "math-error";
        r["error"] = e.what();
        return {r, 2};
    } catch (const std::exception& e) {
        Report r;
        r["status"] = "internal-error";
        r["error"] = e.what();
        return {r, 4};
    }
}

}  // namespace lpdo
