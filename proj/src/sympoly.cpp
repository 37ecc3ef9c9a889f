#include "lpdo/sympoly.hpp"

#include <algorithm>
#include <functional>

#include "lpdo/errors.hpp"
#include "lpdo/printer.hpp"

namespace lpdo {

SymPoly SymPoly::X() { return {1, {Expr(1), Expr(0)}}; }
SymPoly SymPoly::Y() { return {1, {Expr(0), Expr(1)}}; }

bool SymPoly::is_zero() const {
    for (auto& c : coeffs)
        if (!c.is_zero()) return false;
    return true;
}

SymPoly SymPoly::operator*(const SymPoly& o) const {
    SymPoly out;
    out.degree = degree + o.degree;
    out.coeffs.assign(size_t(out.degree) + 1, Expr());
    for (int a = 0; a <= degree; ++a)
        for (int b = 0; b <= o.degree; ++b)
            out.coeffs[size_t(a + b)] = out.coeffs[size_t(a + b)] + coeffs[size_t(a)] * o.coeffs[size_t(b)];
    return out;
}

SymPoly SymPoly::operator-(const SymPoly& o) const {
    if (degree != o.degree) throw MathError("subtracting symbols of different degree");
    SymPoly out = *this;
    for (int k = 0; k <= degree; ++k) out.coeffs[size_t(k)] = out.coeffs[size_t(k)] - o.coeffs[size_t(k)];
    return out;
}

SymPoly SymPoly::scaled(const Expr& e) const {
    SymPoly out = *this;
    for (auto& c : out.coeffs) c = c * e;
    return out;
}

bool SymPoly::operator==(const SymPoly& o) const {
    if (degree != o.degree) return is_zero() && o.is_zero();
    for (int k = 0; k <= degree; ++k)
        if (coeffs[size_t(k)] != o.coeffs[size_t(k)]) return false;
    return true;
}

std::string SymPoly::str() const {
    if (is_zero()) return "0";
    std::string out;
    for (int k = 0; k <= degree; ++k) {
        const Expr& c = coeffs[size_t(k)];
        if (c.is_zero()) continue;
        bool negative = c.num().leading_coeff() < 0;
        Expr mag = negative ? -c : c;
        if (out.empty()) {
            if (negative) out += "-";
        } else {
            out += negative ? " - " : " + ";
        }
        std::string xpart;
        int xe = degree - k, ye = k;
        if (xe > 0) xpart = xe == 1 ? "X" : "X^" + std::to_string(xe);
        if (ye > 0) {
            if (!xpart.empty()) xpart += "*";
            xpart += ye == 1 ? "Y" : "Y^" + std::to_string(ye);
        }
        if (xpart.empty()) out += print_expr(mag);
        else if (mag == Expr(1)) out += xpart;
        else out += print_expr_factor(mag) + "*" + xpart;
    }
    return out;
}

LinearForm LinearForm::make(const Expr& a, const Expr& b) {
    if (a.is_zero() && b.is_zero()) throw MathError("zero linear form");
    if (a.is_zero()) return {Expr(0), Expr(1)};
    return {Expr(1), b / a};
}

SymPoly LinearForm::to_sympoly() const { return {1, {alpha, beta}}; }

std::string LinearForm::str() const { return to_sympoly().str(); }

int SymFactorization::total_multiplicity() const {
    int m = 0;
    for (auto& [f, k] : factors) m += k;
    return m;
}

SymPoly SymFactorization::product() const {
    SymPoly out = SymPoly::constant(scalar);
    for (auto& [f, k] : factors)
        for (int t = 0; t < k; ++t) out = out * f.to_sympoly();
    return out;
}

std::string FactorizationType::str() const {
    std::string out;
    for (auto& p : parts) out += "(" + p.str() + ")";
    return out;
}

SymPoly symbol_of(const DiffOp& L) {
    if (L.is_zero()) throw MathError("symbol of the zero operator");
    int d = L.order();
    SymPoly out;
    out.degree = d;
    out.coeffs.assign(size_t(d) + 1, Expr());
    for (int k = 0; k <= d; ++k) out.coeffs[size_t(k)] = L.coeff({d - k, k});
    return out;
}

namespace {

bool form_less(const LinearForm& a, const LinearForm& b) {
    int c = compare(a.alpha, b.alpha);
    if (c != 0) return c > 0;  // X-forms (alpha 1) ahead of the pure-Y form
    return compare(a.beta, b.beta) < 0;
}

std::optional<Expr> expr_sqrt(const Expr& e) {
    if (e.is_zero()) return Expr(0);
    auto n = poly_sqrt(e.num());
    if (!n) return std::nullopt;
    auto d = poly_sqrt(e.den());
    if (!d) return std::nullopt;
    return Expr::from_fraction(*n, *d);
}

std::vector<Int> divisors_of(const Int& n) {
    Int a = n < 0 ? Int(-n) : n;
    if (a == 0 || a > 1000000000000LL)
        throw MathError("rational root search: constant term too large");
    std::vector<Int> out;
    for (Int d = 1; d * d <= a; ++d) {
        if (a % d == 0) {
            out.push_back(d);
            if (d * d != a) out.push_back(a / d);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

using UniPoly = std::vector<Expr>;  // coefficient of t^k at index k

int uni_degree(const UniPoly& p) {
    for (int k = int(p.size()) - 1; k >= 0; --k)
        if (!p[size_t(k)].is_zero()) return k;
    return -1;
}

void uni_trim(UniPoly& p) { p.resize(size_t(uni_degree(p) + 1)); }

Expr uni_eval(const UniPoly& p, const Expr& t) {
    Expr out;
    for (int k = uni_degree(p); k >= 0; --k) out = out * t + p[size_t(k)];
    return out;
}

// Exact division by (t - r); remainder must vanish.
UniPoly uni_deflate(const UniPoly& p, const Expr& r) {
    int n = uni_degree(p);
    UniPoly q(size_t(n), Expr{});
    Expr carry;
    for (int k = n; k >= 1; --k) {
        carry = p[size_t(k)] + carry * r;
        q[size_t(k - 1)] = carry;
    }
    Expr rem = p[0] + carry * r;
    if (!rem.is_zero()) throw InternalError("uni_deflate: nonzero remainder");
    return q;
}

UniPoly uni_derivative(const UniPoly& p) {
    UniPoly out;
    for (int k = 1; k <= uni_degree(p); ++k) out.push_back(Expr(k) * p[size_t(k)]);
    if (out.empty()) out.push_back(Expr(0));
    return out;
}

UniPoly uni_scale_monic(const UniPoly& p) {
    int n = uni_degree(p);
    UniPoly out = p;
    Expr lead = p[size_t(n)];
    for (auto& c : out) c = c / lead;
    uni_trim(out);
    return out;
}

// Euclidean remainder over the expression field.
UniPoly uni_rem(UniPoly a, const UniPoly& b) {
    int db = uni_degree(b);
    const Expr& bl = b[size_t(db)];
    while (uni_degree(a) >= db && uni_degree(a) >= 0) {
        int da = uni_degree(a);
        Expr f = a[size_t(da)] / bl;
        for (int k = 0; k <= db; ++k)
            a[size_t(da - db + k)] = a[size_t(da - db + k)] - f * b[size_t(k)];
        a[size_t(da)] = Expr(0);  // force exact cancellation of the top term
        uni_trim(a);
        if (a.empty()) break;
    }
    return a;
}

UniPoly uni_gcd(UniPoly a, UniPoly b) {
    if (uni_degree(a) < uni_degree(b)) std::swap(a, b);
    while (uni_degree(b) >= 1) {
        UniPoly r = uni_rem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (uni_degree(b) == 0) return {Expr(1)};  // coprime
    return uni_scale_monic(a);
}

UniPoly uni_divide(const UniPoly& a, const UniPoly& b) {
    int db = uni_degree(b);
    UniPoly rem = a;
    UniPoly quot(size_t(std::max(uni_degree(a) - db + 1, 1)), Expr());
    const Expr& bl = b[size_t(db)];
    while (uni_degree(rem) >= db && uni_degree(rem) >= 0) {
        int dr = uni_degree(rem);
        Expr f = rem[size_t(dr)] / bl;
        quot[size_t(dr - db)] = f;
        for (int k = 0; k <= db; ++k)
            rem[size_t(dr - db + k)] = rem[size_t(dr - db + k)] - f * b[size_t(k)];
        rem[size_t(dr)] = Expr(0);
        uni_trim(rem);
        if (rem.empty()) break;
    }
    if (uni_degree(rem) >= 0) throw InternalError("uni_divide: nonzero remainder");
    return quot;
}

bool uni_all_constant(const UniPoly& p) {
    for (auto& c : p)
        if (!c.is_constant()) return false;
    return true;
}

// Roots of a square-free polynomial over the supported class; nullopt when
// the search runs out of methods.
std::optional<std::vector<Expr>> squarefree_roots(const UniPoly& s) {
    int n = uni_degree(s);
    if (n <= 0) return std::vector<Expr>{};
    if (n == 1) return std::vector<Expr>{-(s[0] / s[1])};
    if (n == 2) {
        Expr disc = s[1] * s[1] - Expr(4) * s[2] * s[0];
        auto rt = expr_sqrt(disc);
        if (!rt) return std::nullopt;
        Expr two_a = Expr(2) * s[2];
        return std::vector<Expr>{(-s[1] + *rt) / two_a, (-s[1] - *rt) / two_a};
    }
    if (!uni_all_constant(s)) return std::nullopt;
    // Rational root theorem on the integer-cleared polynomial.
    Int den_lcm = 1;
    for (auto& c : s) den_lcm = int_lcm(den_lcm, rat_den(c.constant_value()));
    std::vector<Int> ic;
    for (auto& c : s) ic.push_back(rat_num(c.constant_value() * Rat(den_lcm)));
    UniPoly work = s;
    std::vector<Expr> roots;
    auto lows = divisors_of(ic.front());
    auto highs = divisors_of(ic.back());
    for (const Int& p : lows) {
        for (const Int& q : highs) {
            for (int sign = 0; sign < 2; ++sign) {
                if (uni_degree(work) <= 2) break;
                Rat cand(sign ? -p : p, q);
                Expr r = Expr(cand);
                if (uni_eval(work, r).is_zero()) {
                    roots.push_back(r);
                    work = uni_deflate(work, r);
                }
            }
        }
    }
    int left = uni_degree(work);
    if (left >= 3) return std::nullopt;
    if (left >= 1) {
        auto rest = squarefree_roots(work);
        if (!rest) return std::nullopt;
        for (auto& r : *rest) roots.push_back(r);
    }
    return roots;
}

SymPoly rehomogenize(const UniPoly& q, int pad_degree) {
    int n = uni_degree(q);
    SymPoly out;
    out.degree = std::max(n, 0) + pad_degree;
    out.coeffs.assign(size_t(out.degree) + 1, Expr());
    for (int k = 0; k <= n; ++k) out.coeffs[size_t(n - k)] = q[size_t(k)];
    return out;
}

}  // namespace

SymFactorization factor_symbol(const SymPoly& p) {
    if (p.is_zero()) throw MathError("factor_symbol: zero symbol");
    if (p.degree > 4) throw MathError("factor_symbol: degree above 4 unsupported");

    int d = p.degree;
    int kmin = -1, kmax = -1;
    for (int k = 0; k <= d; ++k) {
        if (!p.coeffs[size_t(k)].is_zero()) {
            if (kmin < 0) kmin = k;
            kmax = k;
        }
    }
    int ypow = kmin;        // common Y factor
    int xpow = d - kmax;    // common X factor

    std::map<std::string, std::pair<LinearForm, int>> acc;
    auto add_form = [&](const LinearForm& f, int mult) {
        std::string key = f.str();
        auto it = acc.find(key);
        if (it == acc.end()) acc.emplace(key, std::make_pair(f, mult));
        else it->second.second += mult;
    };
    if (xpow > 0) add_form(LinearForm::make(Expr(1), Expr(0)), xpow);
    if (ypow > 0) add_form(LinearForm::make(Expr(0), Expr(1)), ypow);

    // Dehomogenized residual q(t), t standing in for X (with Y set to 1).
    UniPoly q;
    int m = kmax - kmin;
    q.assign(size_t(m) + 1, Expr());
    for (int k = kmin; k <= kmax; ++k) q[size_t(kmax - k)] = p.coeffs[size_t(k)];

    while (uni_degree(q) >= 1) {
        UniPoly sfree = uni_divide(q, uni_gcd(q, uni_derivative(q)));
        auto roots = squarefree_roots(sfree);
        if (!roots)
            throw NeedsHint("symbol residual did not factor over the supported class",
                            rehomogenize(q, 0));
        if (roots->empty()) break;
        for (auto& r : *roots) {
            int mult = 0;
            while (uni_degree(q) >= 1 && uni_eval(q, r).is_zero()) {
                q = uni_deflate(q, r);
                ++mult;
            }
            if (mult > 0) add_form(LinearForm::make(Expr(1), -r), mult);
        }
    }

    SymFactorization out;
    for (auto& [key, fm] : acc) out.factors.push_back(fm);
    std::sort(out.factors.begin(), out.factors.end(),
              [](const auto& a, const auto& b) { return form_less(a.first, b.first); });
    out.scalar = Expr(1);
    SymPoly prod = out.product();
    // Fix the scalar from the first nonzero coefficient, then verify.
    int k0 = -1;
    for (int k = 0; k <= prod.degree; ++k)
        if (!prod.coeffs[size_t(k)].is_zero()) { k0 = k; break; }
    if (k0 < 0 || prod.degree != d) throw InternalError("factor_symbol: product shape mismatch");
    out.scalar = p.coeffs[size_t(k0)] / prod.coeffs[size_t(k0)];
    if (!(out.product() == p)) throw InternalError("factor_symbol: product check failed");
    return out;
}

SymFactorization verify_hint(const SymPoly& p, const std::vector<LinearForm>& forms) {
    std::map<std::string, std::pair<LinearForm, int>> acc;
    for (auto& f : forms) {
        std::string key = f.str();
        auto it = acc.find(key);
        if (it == acc.end()) acc.emplace(key, std::make_pair(f, 1));
        else it->second.second += 1;
    }
    SymFactorization out;
    for (auto& [key, fm] : acc) out.factors.push_back(fm);
    std::sort(out.factors.begin(), out.factors.end(),
              [](const auto& a, const auto& b) { return form_less(a.first, b.first); });
    out.scalar = Expr(1);
    SymPoly prod = out.product();
    if (prod.degree != p.degree) throw MathError("hint degree mismatch");
    int k0 = -1;
    for (int k = 0; k <= prod.degree; ++k)
        if (!prod.coeffs[size_t(k)].is_zero()) { k0 = k; break; }
    if (k0 < 0 || p.coeffs[size_t(k0)].is_zero()) throw MathError("hint does not match the symbol");
    out.scalar = p.coeffs[size_t(k0)] / prod.coeffs[size_t(k0)];
    if (!(out.product() == p)) throw MathError("hint factors do not multiply back to the symbol");
    return out;
}

bool is_coprime(const SymPoly& a, const SymPoly& b) {
    SymFactorization fa = factor_symbol(a);
    SymFactorization fb = factor_symbol(b);
    for (auto& [f1, m1] : fa.factors)
        for (auto& [f2, m2] : fb.factors)
            if (f1 == f2) return false;
    return true;
}

bool is_hyperbolic(const DiffOp& L) {
    SymFactorization f = factor_symbol(symbol_of(L));
    for (auto& [form, mult] : f.factors)
        if (mult > 1) return false;
    return true;
}

std::vector<FactorizationType> enumerate_types(const SymFactorization& f, int k,
                                               bool exclude_coprime_splits) {
    int total = f.total_multiplicity();
    if (k < 2 || k > total) throw MathError("enumerate_types: invalid part count");
    size_t r = f.factors.size();

    std::vector<FactorizationType> out;
    // Odometer over weak compositions of each multiplicity into k parts.
    std::vector<std::vector<int>> comp(r, std::vector<int>(size_t(k), 0));
    for (size_t i = 0; i < r; ++i) comp[i][0] = f.factors[i].second;

    std::function<void(size_t)> walk = [&](size_t i) {
        if (i == r) {
            for (int part = 0; part < k; ++part) {
                int weight = 0;
                for (size_t t = 0; t < r; ++t) weight += comp[t][size_t(part)];
                if (weight == 0) return;
            }
            FactorizationType ft;
            for (size_t t = 0; t < r; ++t) ft.forms.push_back(f.factors[t].first);
            ft.mults.assign(size_t(k), std::vector<int>(r, 0));
            for (int part = 0; part < k; ++part) {
                SymPoly sp = SymPoly::constant(Expr(1));
                for (size_t t = 0; t < r; ++t) {
                    int e = comp[t][size_t(part)];
                    ft.mults[size_t(part)][t] = e;
                    for (int c = 0; c < e; ++c) sp = sp * f.factors[t].first.to_sympoly();
                }
                ft.parts.push_back(sp);
            }
            if (exclude_coprime_splits && type_has_coprime_split(ft)) return;
            out.push_back(std::move(ft));
            return;
        }
        int m = f.factors[i].second;
        std::vector<int> bins(size_t(k), 0);
        std::function<void(int, int)> fill = [&](int pos, int left) {
            if (pos == k - 1) {
                bins[size_t(pos)] = left;
                comp[i] = bins;
                walk(i + 1);
                return;
            }
            for (int take = left; take >= 0; --take) {
                bins[size_t(pos)] = take;
                fill(pos + 1, left - take);
            }
        };
        fill(0, m);
    };
    walk(0);
    return out;
}

long count_ordered_partitions(const std::vector<int>& multiplicities, int k) {
    auto choose = [](long n, long r) {
        if (r < 0 || n < 0 || r > n) return 0L;
        long acc = 1;
        for (long t = 1; t <= r; ++t) acc = acc * (n - t + 1) / t;
        return acc;
    };
    long total = 0;
    long sign = 1;
    for (int j = 0; j <= k; ++j) {
        long ways = 1;
        for (int m : multiplicities) ways *= choose(m + (k - j) - 1, (k - j) - 1);
        long ck = choose(k, j);
        total += sign * ck * ways;
        sign = -sign;
    }
    return total;
}

bool type_has_coprime_split(const FactorizationType& t) {
    std::vector<std::vector<int>> mults = t.mults;
    if (mults.empty()) {
        // Hand-built type: recover the multiplicity matrix by factoring.
        std::vector<LinearForm> forms;
        for (auto& part : t.parts) {
            SymFactorization f = factor_symbol(part);
            for (auto& [form, m] : f.factors) {
                bool seen = false;
                for (auto& have : forms) seen = seen || have == form;
                if (!seen) forms.push_back(form);
            }
        }
        mults.assign(t.parts.size(), std::vector<int>(forms.size(), 0));
        for (size_t p = 0; p < t.parts.size(); ++p) {
            SymFactorization f = factor_symbol(t.parts[p]);
            for (auto& [form, m] : f.factors)
                for (size_t idx = 0; idx < forms.size(); ++idx)
                    if (forms[idx] == form) mults[p][idx] += m;
        }
    }
    size_t parts = mults.size();
    size_t r = parts ? mults[0].size() : 0;
    for (size_t split = 1; split < parts; ++split) {
        bool shares = false;
        for (size_t f = 0; f < r && !shares; ++f) {
            int left = 0, right = 0;
            for (size_t p = 0; p < split; ++p) left += mults[p][f];
            for (size_t p = split; p < parts; ++p) right += mults[p][f];
            if (left > 0 && right > 0) shares = true;
        }
        if (!shares) return true;
    }
    return false;
}

std::optional<bool> catalog_admits_irreducible(const FactorizationType& t) {
    // Shape matrix (parts x forms), zero columns dropped.
    std::vector<std::vector<int>> m = t.mults;
    if (m.empty()) {
        FactorizationType probe = t;
        // Reuse the recovery in type_has_coprime_split by factoring parts.
        std::vector<LinearForm> forms;
        for (auto& part : t.parts) {
            SymFactorization f = factor_symbol(part);
            for (auto& [form, mm] : f.factors) {
                bool seen = false;
                for (auto& have : forms) seen = seen || have == form;
                if (!seen) forms.push_back(form);
            }
        }
        m.assign(t.parts.size(), std::vector<int>(forms.size(), 0));
        for (size_t p = 0; p < t.parts.size(); ++p) {
            SymFactorization f = factor_symbol(t.parts[p]);
            for (auto& [form, mm] : f.factors)
                for (size_t idx = 0; idx < forms.size(); ++idx)
                    if (forms[idx] == form) m[p][idx] += mm;
        }
    }
    size_t parts = m.size();
    size_t r = parts ? m[0].size() : 0;
    std::vector<size_t> used;
    for (size_t f = 0; f < r; ++f) {
        int s = 0;
        for (size_t p = 0; p < parts; ++p) s += m[p][f];
        if (s > 0) used.push_back(f);
    }
    std::vector<std::vector<int>> shape(parts, std::vector<int>(used.size(), 0));
    int order = 0;
    for (size_t p = 0; p < parts; ++p)
        for (size_t f = 0; f < used.size(); ++f) {
            shape[p][f] = m[p][used[f]];
            order += shape[p][f];
        }
    if (order < 2 || order > 4) return std::nullopt;

    using Shape = std::vector<std::vector<int>>;
    static const std::vector<Shape> catalog = {
        // order 2
        {{1}, {1}},
        // order 3
        {{1}, {2}},
        {{2}, {1}},
        {{1}, {1}, {1}},
        // order 4
        {{1, 1}, {1, 1}},
        {{1, 0}, {1, 2}},
        {{1, 2}, {1, 0}},
        {{1, 0}, {0, 1}, {1, 1}},
        {{1, 1}, {0, 1}, {1, 0}},
        {{2}, {2}},
    };
    auto matches = [](const Shape& a, const Shape& b) {
        if (a.size() != b.size()) return false;
        if (a.empty()) return true;
        if (a[0].size() != b[0].size()) return false;
        std::vector<size_t> perm(a[0].size());
        for (size_t i = 0; i < perm.size(); ++i) perm[i] = i;
        do {
            bool ok = true;
            for (size_t p = 0; p < a.size() && ok; ++p)
                for (size_t f = 0; f < perm.size() && ok; ++f)
                    if (a[p][f] != b[p][perm[f]]) ok = false;
            if (ok) return true;
        } while (std::next_permutation(perm.begin(), perm.end()));
        return false;
    };
    Shape reversed(shape.rbegin(), shape.rend());
    for (auto& entry : catalog)
        if (matches(shape, entry) || matches(reversed, entry)) return true;
    return false;
}

}  // namespace lpdo
