#ifndef LPDO_FAMILY_HPP
#define LPDO_FAMILY_HPP

#include <optional>
#include <utility>

#include "lpdo/solver.hpp"

namespace lpdo {

// Ordered factor list whose coefficients may contain parameter symbols.
// Factors are stored as operators (expanded form); the factored structure
// is the list itself.
struct FamilyTemplate {
    std::vector<DiffOp> factors;
    std::vector<AtomId> params;       // parameter atoms occurring in the factors
    std::vector<AtomId> definitions;  // defined symbols the factors rely on
    std::vector<Expr> side_conditions;
};

struct VerificationReport {
    DiffOp composed;
    bool parameter_dependent = false;
    std::optional<DiffOp> reference;
    std::optional<DiffOp> residual;           // composed - reference
    std::vector<bool> prefix_dependence;      // proper prefixes 1..k-1
    std::vector<Expr> side_conditions;
};

// Builds a template from explicit factors: collects the parameter atoms,
// checks every factor's symbol is parameter-free.
FamilyTemplate make_template(std::vector<DiffOp> factors,
                             std::vector<AtomId> definitions = {},
                             std::vector<Expr> side_conditions = {});

// (Dx + a + Q/(W+f1)) o (Dx + b - Q/(W+f1)) with dQ/dx = (b-a)Q, dW/dx = Q;
// composes to (Dx+a) o (Dx+b) for every f1(y). Requires a, b to depend on
// x alone. Q and W collapse to closed forms when the limited integrator
// finds them.
FamilyTemplate second_order_family(const Expr& a, const Expr& b);

// (Dx + 1 + 1/(x+c(y))) o (Dx + 1 - 1/(x+c(y))) o (Dx + x Dy).
FamilyTemplate landau_family();

// Catalogue transcriptions of the published fourth-order families; their
// verification (and any discrepancy) is the verifier's job, not assumed.
FamilyTemplate quartic_xx_family();
FamilyTemplate quartic_xy_family();

// Printed reference operators the catalogue entries claim to compose to;
// nullopt when the entry has no claimed reference.
std::optional<DiffOp> catalog_reference(const std::string& name);
std::optional<FamilyTemplate> catalog_family(const std::string& name);

// Symbolic composition with the parameters left symbolic, dependence via
// depends_on after normalization, cross-checked by composing at two
// concrete parameter instantiations.
VerificationReport verify_family(const FamilyTemplate& t,
                                 const std::optional<DiffOp>& reference);

// True iff some proper prefix product is parameter-free; the witness is the
// 1-based prefix length.
std::pair<bool, int> is_reducible(const FamilyTemplate& t);

// Composes the factors inside each contiguous block.
FamilyTemplate regroup(const FamilyTemplate& t,
                       const std::vector<std::vector<int>>& grouping);

// F1 o L2 + L1 o F2 and its three-factor analogue.
DiffOp linearized_residual(const DiffOp& L1, const DiffOp& L2,
                           const DiffOp& F1, const DiffOp& F2);
DiffOp linearized_residual(const DiffOp& L1, const DiffOp& L2, const DiffOp& L3,
                           const DiffOp& F1, const DiffOp& F2, const DiffOp& F3);

// Substitutes T0 + eps*R for the parameters, expands the composition, and
// returns the eps^0 and eps^1 coefficient operators.
std::pair<DiffOp, DiffOp> epsilon_expand(const FamilyTemplate& t,
                                         const std::map<AtomId, Expr>& T0,
                                         const std::map<AtomId, Expr>& R);

// Unknown-coefficient ansatz for F1, F2 up to the given orders; one
// equation per multi-index of the linearized residual. Unknowns are named
// r1 (order-0 F1) / r{ij}, and a{ij} for F2.
CoeffSystem linearized_system(const DiffOp& L1, const DiffOp& L2,
                              std::pair<int, int> ansatz_orders);

}  // namespace lpdo

#endif
