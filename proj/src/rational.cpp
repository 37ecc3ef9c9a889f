#include "lpdo/rational.hpp"

#include <stdexcept>

namespace lpdo {

std::optional<Int> int_sqrt_exact(const Int& n) {
    if (n < 0) return std::nullopt;
    Int r = boost::multiprecision::sqrt(n);
    if (r * r != n) return std::nullopt;
    return r;
}

std::optional<Rat> rat_sqrt_exact(const Rat& r) {
    if (r < 0) return std::nullopt;
    auto n = int_sqrt_exact(rat_num(r));
    if (!n) return std::nullopt;
    auto d = int_sqrt_exact(rat_den(r));
    if (!d) return std::nullopt;
    return Rat(*n, *d);
}

Rat rat_pow(const Rat& base, int exp) {
    if (exp == 0) return Rat(1);
    if (base == 0 && exp < 0) throw std::domain_error("rat_pow: zero base with negative exponent");
    Rat acc(1);
    Rat b = base;
    int e = exp < 0 ? -exp : exp;
    while (e > 0) {
        if (e & 1) acc *= b;
        b *= b;
        e >>= 1;
    }
    if (exp < 0) acc = Rat(1) / acc;
    return acc;
}

std::string rat_to_string(const Rat& r) {
    Int n = rat_num(r), d = rat_den(r);
    if (d == 1) return n.str();
    return n.str() + "/" + d.str();
}

}  // namespace lpdo
