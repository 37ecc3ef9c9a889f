#ifndef LPDO_SOLVER_HPP
#define LPDO_SOLVER_HPP

#include <variant>

#include "lpdo/sympoly.hpp"

namespace lpdo {

// System of equations (each expression = 0), affine-linear in the unknown
// function atoms and their primes. Equations keep the multi-index they came
// from; processing order is lowest multi-index first.
struct CoeffSystem {
    std::vector<std::pair<MultiIndex, Expr>> equations;
    std::vector<AtomId> unknowns;  // creation order
};

struct SolveOutcome {
    // Fully resolved values; iteration in unknown creation order via
    // binding_order.
    std::map<AtomId, Expr> bindings;
    std::vector<AtomId> binding_order;
    std::vector<AtomId> free_params;   // fresh f1, f2, ... symbols
    std::vector<AtomId> introduced;    // fresh E1, E2, ... defined symbols
    std::vector<Expr> conditions;      // constraints on known coefficients
    std::vector<Expr> side_conditions; // divisors assumed nonzero
    std::vector<std::pair<MultiIndex, Expr>> unsolved;
    std::vector<std::string> notes;    // structure of unsolved equations
};

// Triangular elimination to fixpoint:
//  - algebraic step: an equation with an unknown that occurs unprimed,
//    linearly, with a nonzero rational-constant coefficient, and has no
//    primed occurrence there; earliest equation, earliest unknown;
//  - generic split: an equation of the exact shape c*u = 0 with c known and
//    non-constant records the condition c (the nontrivial branch);
//  - ODE step: alpha*dv(u) + beta*u + gamma = 0 with known coefficients
//    introduces E (dE/dv = p*E), binds u = (f_n + P)*E with a fresh
//    parameter f_n in the complementary variable, P from the limited
//    integrator; when the integrator fails the equation stays unsolved;
//  - condition step: equations free of unknowns move to conditions.
SolveOutcome solve_triangular(const CoeffSystem& s);

struct NotFactorable {
    std::vector<Expr> conditions;
};

// Factorization of L along a pairwise-coprime type: builds the unknown
// lower-order ansatz, equates the composition to L level by level (each
// level linear after the ones above are bound), and returns the factors or
// the violated conditions.
std::variant<std::vector<DiffOp>, NotFactorable>
unique_factorization(const DiffOp& L, const FactorizationType& t);

}  // namespace lpdo

#endif
