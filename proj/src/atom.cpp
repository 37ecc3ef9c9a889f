#include "lpdo/atom.hpp"

#include <map>
#include <mutex>
#include <tuple>

#include "lpdo/errors.hpp"
#include "lpdo/expr.hpp"

namespace lpdo {
namespace atoms {
namespace {

struct Registry {
    std::vector<AtomData> table;
    std::map<std::tuple<std::string, int, int>, AtomId> by_key;  // (name, dx, dy)
    std::mutex mu;
};

Registry& reg() {
    static Registry r;
    return r;
}

AtomId intern_locked(Registry& r, AtomData d) {
    auto key = std::make_tuple(d.name, d.dx, d.dy);
    auto it = r.by_key.find(key);
    if (it != r.by_key.end()) {
        const AtomData& have = r.table[it->second];
        if (have.kind != d.kind || !(have.deps == d.deps) || have.is_param != d.is_param)
            throw MathError("atom '" + d.name + "' already declared with a different profile");
        return it->second;
    }
    AtomId id = static_cast<AtomId>(r.table.size());
    r.table.push_back(std::move(d));
    r.by_key.emplace(key, id);
    return id;
}

}  // namespace

AtomId variable(Var v) {
    Registry& r = reg();
    std::lock_guard<std::mutex> lock(r.mu);
    AtomData d;
    d.kind = AtomKind::Variable;
    d.name = v == Var::X ? "x" : "y";
    d.deps = Deps::of(v);
    return intern_locked(r, std::move(d));
}

AtomId func(const std::string& name, Deps deps, bool is_param) {
    Registry& r = reg();
    std::lock_guard<std::mutex> lock(r.mu);
    AtomData d;
    d.kind = AtomKind::FuncSym;
    d.name = name;
    d.deps = deps;
    d.is_param = is_param;
    return intern_locked(r, std::move(d));
}

AtomId defsym(const std::string& name, Deps deps) {
    Registry& r = reg();
    std::lock_guard<std::mutex> lock(r.mu);
    AtomData d;
    d.kind = AtomKind::DefSym;
    d.name = name;
    d.deps = deps;
    return intern_locked(r, std::move(d));
}

void set_rule(AtomId id, Var v, const Expr& rule) {
    Registry& r = reg();
    std::lock_guard<std::mutex> lock(r.mu);
    AtomData& d = r.table.at(id);
    if (d.kind != AtomKind::DefSym)
        throw MathError("set_rule: '" + d.name + "' is not a defined symbol");
    auto& slot = v == Var::X ? d.rule_dx : d.rule_dy;
    if (slot) throw MathError("set_rule: rule for '" + d.name + "' already set");
    slot = std::make_shared<const Expr>(rule);
}

void refine_deps(AtomId id, Deps deps) {
    Registry& r = reg();
    std::lock_guard<std::mutex> lock(r.mu);
    AtomData& d = r.table.at(id);
    if (d.kind != AtomKind::DefSym)
        throw MathError("refine_deps: '" + d.name + "' is not a defined symbol");
    if (!deps.subset_of(d.deps))
        throw MathError("refine_deps: cannot widen the dependency of '" + d.name + "'");
    d.deps = deps;
}

AtomId primed(AtomId id, Var v) {
    Registry& r = reg();
    std::lock_guard<std::mutex> lock(r.mu);
    const AtomData base = r.table.at(id);
    if (base.kind != AtomKind::FuncSym)
        throw MathError("primed: '" + base.name + "' is not a function symbol");
    AtomData d = base;
    d.rule_dx.reset();
    d.rule_dy.reset();
    if (v == Var::X) d.dx++; else d.dy++;
    return intern_locked(r, std::move(d));
}

AtomId base_of(AtomId id) {
    Registry& r = reg();
    std::lock_guard<std::mutex> lock(r.mu);
    const AtomData& d = r.table.at(id);
    if (d.dx == 0 && d.dy == 0) return id;
    auto it = r.by_key.find(std::make_tuple(d.name, 0, 0));
    if (it == r.by_key.end()) throw InternalError("base_of: base atom missing");
    return it->second;
}

const AtomData& data(AtomId id) {
    Registry& r = reg();
    std::lock_guard<std::mutex> lock(r.mu);
    return r.table.at(id);
}

bool exists(const std::string& name) {
    Registry& r = reg();
    std::lock_guard<std::mutex> lock(r.mu);
    return r.by_key.count(std::make_tuple(name, 0, 0)) > 0;
}

std::optional<AtomId> lookup(const std::string& name, int dx, int dy) {
    Registry& r = reg();
    std::lock_guard<std::mutex> lock(r.mu);
    auto it = r.by_key.find(std::make_tuple(name, dx, dy));
    if (it == r.by_key.end()) return std::nullopt;
    return it->second;
}

std::string fresh_name(const std::string& stem) {
    Registry& r = reg();
    std::lock_guard<std::mutex> lock(r.mu);
    if (!r.by_key.count(std::make_tuple(stem, 0, 0))) return stem;
    for (int i = 1;; ++i) {
        std::string candidate = stem + std::to_string(i);
        if (!r.by_key.count(std::make_tuple(candidate, 0, 0))) return candidate;
    }
}

bool less(AtomId a, AtomId b) {
    if (a == b) return false;
    Registry& r = reg();
    std::lock_guard<std::mutex> lock(r.mu);
    const AtomData& da = r.table.at(a);
    const AtomData& db = r.table.at(b);
    auto key = [](const AtomData& d) {
        return std::make_tuple(static_cast<int>(d.kind), std::cref(d.name), d.dx + d.dy, d.dx);
    };
    return key(da) < key(db);
}

std::string display_name(AtomId id) {
    const AtomData d = data(id);
    if (d.dx == 0 && d.dy == 0) return d.name;
    // Univariate symbols print with primes, mixed dependencies with suffixes.
    bool univariate = d.deps == Deps::x() || d.deps == Deps::y();
    if (univariate) return d.name + std::string(static_cast<size_t>(d.dx + d.dy), '\'');
    std::string s = d.name + "_";
    s.append(static_cast<size_t>(d.dx), 'x');
    s.append(static_cast<size_t>(d.dy), 'y');
    return s;
}

void reset() {
    Registry& r = reg();
    std::lock_guard<std::mutex> lock(r.mu);
    r.table.clear();
    r.by_key.clear();
}

size_t count() {
    Registry& r = reg();
    std::lock_guard<std::mutex> lock(r.mu);
    return r.table.size();
}

}  // namespace atoms
}  // namespace lpdo
