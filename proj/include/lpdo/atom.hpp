#ifndef LPDO_ATOM_HPP
#define LPDO_ATOM_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace lpdo {

class Expr;

// The two derivation directions of the plane.
enum class Var : uint8_t { X = 0, Y = 1 };

inline char var_name(Var v) { return v == Var::X ? 'x' : 'y'; }
inline Var other_var(Var v) { return v == Var::X ? Var::Y : Var::X; }

// Dependency sets are subsets of {x, y}, stored as a bitmask.
struct Deps {
    uint8_t bits = 0;

    static Deps none() { return {0}; }
    static Deps x() { return {1}; }
    static Deps y() { return {2}; }
    static Deps xy() { return {3}; }
    static Deps of(Var v) { return v == Var::X ? x() : y(); }

    bool has(Var v) const { return bits & (v == Var::X ? 1 : 2); }
    bool subset_of(Deps o) const { return (bits & ~o.bits) == 0; }
    Deps unite(Deps o) const { return {uint8_t(bits | o.bits)}; }
    bool operator==(const Deps& o) const { return bits == o.bits; }
};

// Canonical ordering of atom kinds: variables, then function symbols,
// then defined symbols.
enum class AtomKind : uint8_t { Variable = 0, FuncSym = 1, DefSym = 2 };

using AtomId = uint32_t;

struct AtomData {
    AtomKind kind;
    std::string name;     // base name, without primes
    int dx = 0, dy = 0;   // accumulated derivative orders (function symbols)
    Deps deps;
    bool is_param = false;
    // Defined symbols carry explicit derivative rules; a missing rule makes
    // differentiation in that direction an error.
    std::shared_ptr<const Expr> rule_dx, rule_dy;
};

// Global interning registry for atoms. Expressions refer to atoms by id;
// the registry is the only shared mutable state in the kernel and is
// guarded by a mutex.
namespace atoms {

AtomId variable(Var v);

// Interns a function symbol. Re-interning with the same profile returns the
// same id; a conflicting profile is an error.
AtomId func(const std::string& name, Deps deps, bool is_param = false);

// Interns a defined symbol; derivative rules are attached afterwards with
// set_rule (at most once per direction, before first use).
AtomId defsym(const std::string& name, Deps deps);
void set_rule(AtomId id, Var v, const Expr& rule);
// Narrows a defined symbol's dependency set once its rules are known.
void refine_deps(AtomId id, Deps deps);

// The derivative symbol of a function symbol (f -> f', f_x, ...).
// Stable: repeated calls return the same id.
AtomId primed(AtomId id, Var v);

// Base symbol with all primes stripped (identity for non-function atoms).
AtomId base_of(AtomId id);

const AtomData& data(AtomId id);
bool exists(const std::string& name);
std::optional<AtomId> lookup(const std::string& name, int dx = 0, int dy = 0);

// Smallest decorated name ("name", "name1", "name2", ...) not yet interned.
std::string fresh_name(const std::string& stem);

// Canonical total order: (kind, base name, total primes, x-primes).
bool less(AtomId a, AtomId b);

// Printable form: primes for univariate symbols (f', f''), subscripts for
// mixed partials (f_x, f_xy).
std::string display_name(AtomId id);

// Drops every interned atom. Used between independent computations (tests,
// CLI runs) so fresh-name generation is reproducible.
void reset();

size_t count();

}  // namespace atoms
}  // namespace lpdo

#endif
