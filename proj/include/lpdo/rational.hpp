#ifndef LPDO_RATIONAL_HPP
#define LPDO_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>

namespace lpdo {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

inline Int int_gcd(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }
inline Int int_lcm(const Int& a, const Int& b) { return boost::multiprecision::lcm(a, b); }

// Exact integer square root; nullopt if n is negative or not a perfect square.
std::optional<Int> int_sqrt_exact(const Int& n);

// Exact rational square root (nonnegative root), if one exists.
std::optional<Rat> rat_sqrt_exact(const Rat& r);

Rat rat_pow(const Rat& base, int exp);

// Prints "p" or "p/q"; exact, no floating point anywhere in the project.
std::string rat_to_string(const Rat& r);

}  // namespace lpdo

#endif
