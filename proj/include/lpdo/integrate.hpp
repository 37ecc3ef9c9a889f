#ifndef LPDO_INTEGRATE_HPP
#define LPDO_INTEGRATE_HPP

#include <optional>

#include "lpdo/expr.hpp"

namespace lpdo {

// Limited antiderivative in `v`: polynomials in v (coefficients free of v)
// and terms c * v^p * E^m where E is a defined symbol with a constant-factor
// rule dE/dv = k*E (integration by parts). Everything else returns nullopt;
// the caller keeps the integral opaque.
std::optional<Expr> integrate(const Expr& e, Var v);

}  // namespace lpdo

#endif
