#include "lpdo/poly.hpp"

#include <algorithm>
#include <cstdio>

#include "lpdo/errors.hpp"

namespace lpdo {

int Monomial::total_degree() const {
    int d = 0;
    for (auto& [a, e] : factors) d += e;
    return d;
}

int Monomial::degree_in(AtomId a) const {
    for (auto& [id, e] : factors)
        if (id == a) return e;
    return 0;
}

Monomial Monomial::atom(AtomId a, int exp) {
    Monomial m;
    if (exp != 0) m.factors.emplace_back(a, exp);
    return m;
}

Monomial Monomial::times(const Monomial& o) const {
    Monomial out;
    auto i = factors.begin();
    auto j = o.factors.begin();
    while (i != factors.end() || j != o.factors.end()) {
        if (j == o.factors.end() || (i != factors.end() && atoms::less(i->first, j->first))) {
            out.factors.push_back(*i++);
        } else if (i == factors.end() || atoms::less(j->first, i->first)) {
            out.factors.push_back(*j++);
        } else {
            out.factors.emplace_back(i->first, i->second + j->second);
            ++i, ++j;
        }
    }
    return out;
}

std::optional<Monomial> Monomial::divide(const Monomial& o) const {
    Monomial out;
    auto i = factors.begin();
    for (auto& [a, e] : o.factors) {
        while (i != factors.end() && atoms::less(i->first, a)) out.factors.push_back(*i++);
        if (i == factors.end() || i->first != a || i->second < e) return std::nullopt;
        if (i->second > e) out.factors.emplace_back(i->first, i->second - e);
        ++i;
    }
    while (i != factors.end()) out.factors.push_back(*i++);
    return out;
}

bool mono_less(const Monomial& a, const Monomial& b) {
    int da = a.total_degree(), db = b.total_degree();
    if (da != db) return da < db;
    // Lex on the sorted factor lists: the monomial with the higher exponent
    // at the smallest differing atom is the larger one.
    auto i = a.factors.begin();
    auto j = b.factors.begin();
    while (i != a.factors.end() && j != b.factors.end()) {
        if (i->first == j->first) {
            if (i->second != j->second) return i->second < j->second;
            ++i, ++j;
            continue;
        }
        // The side owning the smaller atom has a positive exponent there.
        return atoms::less(j->first, i->first);
    }
    if (i != a.factors.end()) return false;  // a has the smaller remaining atom... a > b
    if (j != b.factors.end()) return true;
    return false;
}

Poly::Poly(const Rat& c) {
    if (c != 0) terms_.emplace(Monomial::unit(), c);
}

Poly Poly::atom(AtomId a, int exp) {
    Poly p;
    p.terms_.emplace(Monomial::atom(a, exp), Rat(1));
    return p;
}

bool Poly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_unit());
}

Rat Poly::constant_value() const {
    if (terms_.empty()) return Rat(0);
    if (!is_constant()) throw InternalError("constant_value on non-constant polynomial");
    return terms_.begin()->second;
}

int Poly::total_degree() const {
    int d = 0;
    for (auto& [m, c] : terms_) d = std::max(d, m.total_degree());
    return d;
}

int Poly::degree_in(AtomId a) const {
    int d = 0;
    for (auto& [m, c] : terms_) d = std::max(d, m.degree_in(a));
    return d;
}

const Monomial& Poly::leading_monomial() const {
    if (terms_.empty()) throw InternalError("leading_monomial of zero");
    return terms_.rbegin()->first;
}

const Rat& Poly::leading_coeff() const {
    if (terms_.empty()) throw InternalError("leading_coeff of zero");
    return terms_.rbegin()->second;
}

void Poly::add_term(const Monomial& m, const Rat& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Poly Poly::operator-() const {
    Poly out;
    for (auto& [m, c] : terms_) out.terms_.emplace(m, -c);
    return out;
}

Poly Poly::operator+(const Poly& o) const {
    Poly out = *this;
    for (auto& [m, c] : o.terms_) out.add_term(m, c);
    return out;
}

Poly Poly::operator-(const Poly& o) const {
    Poly out = *this;
    for (auto& [m, c] : o.terms_) out.add_term(m, -c);
    return out;
}

Poly Poly::operator*(const Poly& o) const {
    Poly out;
    for (auto& [m1, c1] : terms_)
        for (auto& [m2, c2] : o.terms_) out.add_term(m1.times(m2), c1 * c2);
    return out;
}

Poly Poly::scaled(const Rat& c) const {
    Poly out;
    if (c == 0) return out;
    for (auto& [m, k] : terms_) out.terms_.emplace(m, k * c);
    return out;
}

Poly Poly::pow(int e) const {
    if (e < 0) throw InternalError("Poly::pow negative exponent");
    Poly acc(Rat(1));
    Poly b = *this;
    while (e > 0) {
        if (e & 1) acc = acc * b;
        b = b * b;
        e >>= 1;
    }
    return acc;
}

void Poly::collect_atoms(std::set<AtomId>& out) const {
    for (auto& [m, c] : terms_)
        for (auto& [a, e] : m.factors) out.insert(a);
}

bool Poly::contains_atom(AtomId a) const {
    for (auto& [m, c] : terms_)
        if (m.degree_in(a) > 0) return true;
    return false;
}

Poly Poly::formal_derivative(AtomId a) const {
    Poly out;
    for (auto& [m, c] : terms_) {
        int e = m.degree_in(a);
        if (e == 0) continue;
        Monomial reduced = *m.divide(Monomial::atom(a, 1));
        out.add_term(reduced, c * e);
    }
    return out;
}

std::map<int, Poly> Poly::coeffs_in(AtomId a) const {
    std::map<int, Poly> out;
    for (auto& [m, c] : terms_) {
        int e = m.degree_in(a);
        Monomial rest = e == 0 ? m : *m.divide(Monomial::atom(a, e));
        out[e].add_term(rest, c);
    }
    return out;
}

Poly Poly::from_coeffs_in(AtomId a, const std::map<int, Poly>& cs) {
    Poly out;
    for (auto& [e, p] : cs) {
        Poly t = p * Poly::atom(a, e);
        if (e == 0) t = p;
        out = out + t;
    }
    return out;
}

Rat Poly::signed_content() const {
    if (terms_.empty()) return Rat(0);
    Int num_gcd = 0, den_lcm = 1;
    for (auto& [m, c] : terms_) {
        num_gcd = int_gcd(num_gcd, rat_num(c));
        den_lcm = int_lcm(den_lcm, rat_den(c));
    }
    Rat content(num_gcd, den_lcm);
    if (leading_coeff() < 0) content = -content;
    return content;
}

Poly Poly::primitive() const {
    if (terms_.empty()) return *this;
    Rat c = signed_content();
    Poly out;
    for (auto& [m, k] : terms_) out.terms_.emplace(m, k / c);
    return out;
}

std::optional<Poly> Poly::divide_exact(const Poly& d) const {
    if (d.is_zero()) return std::nullopt;
    if (d.is_constant()) return scaled(Rat(1) / d.constant_value());
    Poly rem = *this;
    Poly quot;
    const Monomial& lm = d.leading_monomial();
    const Rat& lc = d.leading_coeff();
    while (!rem.is_zero()) {
        auto q = rem.leading_monomial().divide(lm);
        if (!q) return std::nullopt;
        Rat qc = rem.leading_coeff() / lc;
        Poly qt;
        qt.terms_.emplace(*q, qc);
        quot = quot + qt;
        rem = rem - qt * d;
    }
    return quot;
}

namespace {

// Pseudo-remainder of a by b, both viewed as univariate in `v` with Poly
// coefficients.
Poly pseudo_rem(const Poly& a, const Poly& b, AtomId v) {
    int db = b.degree_in(v);
    auto bc = b.coeffs_in(v);
    Poly blead = bc.rbegin()->second;
    Poly rem = a;
    while (!rem.is_zero() && rem.degree_in(v) >= db) {
        auto rc = rem.coeffs_in(v);
        int dr = rc.rbegin()->first;
        Poly rlead = rc.rbegin()->second;
        // rem <- blead*rem - rlead*v^(dr-db)*b
        rem = blead * rem - rlead * Poly::atom(v, dr - db) * b;
        if (!rem.is_zero() && rem.degree_in(v) >= dr)
            throw InternalError("pseudo_rem failed to reduce degree");
    }
    return rem;
}

// GCD of the univariate-in-v coefficient list (recursive content).
Poly content_in(const Poly& p, AtomId v) {
    Poly g;
    for (auto& [e, c] : p.coeffs_in(v)) g = poly_gcd(g, c);
    return g;
}

// Subresultant-flavoured fallback: primitive PRS in a main atom, contents
// handled recursively. Correct everywhere, slow on many-atom inputs.
Poly prs_gcd(const Poly& pa, const Poly& pb, AtomId v) {
    Poly ca = content_in(pa, v);
    Poly cb = content_in(pb, v);
    Poly cont = poly_gcd(ca, cb);
    Poly fa = *pa.divide_exact(ca);
    Poly fb = *pb.divide_exact(cb);

    if (fa.degree_in(v) < fb.degree_in(v)) std::swap(fa, fb);
    while (!fb.is_zero() && fb.degree_in(v) > 0) {
        Poly r = pseudo_rem(fa, fb, v);
        fa = std::move(fb);
        if (r.is_zero()) {
            fb = Poly();
        } else {
            Poly rc = content_in(r, v);
            fb = *r.divide_exact(rc);
        }
    }
    // A v-free remainder means the v-primitive parts are coprime.
    if (!fb.is_zero() || fa.degree_in(v) == 0) return cont.primitive();
    return (cont * fa).primitive();
}

// --- heuristic gcd (integer evaluation / xi-adic reconstruction) ----------

Int max_abs_coeff(const Poly& p) {
    Int m = 0;
    for (auto& [mono, c] : p.terms()) {
        Int a = boost::multiprecision::abs(rat_num(c));
        if (a > m) m = a;
    }
    return m;
}

// p with `a` evaluated at the integer xi. Coefficients stay integral when
// p has integer coefficients.
Poly eval_at_int(const Poly& p, AtomId a, const Int& xi) {
    Poly out;
    Rat rxi(xi);
    for (auto& [m, c] : p.terms()) {
        int e = m.degree_in(a);
        Monomial rest = e == 0 ? m : *m.divide(Monomial::atom(a, e));
        out.add_term(rest, c * rat_pow(rxi, e));
    }
    return out;
}

// Balanced remainder in (-xi/2, xi/2].
Int balanced_rem(const Int& c, const Int& xi) {
    Int r = c % xi;
    if (2 * r > xi) r -= xi;
    if (2 * r <= -xi) r += xi;
    return r;
}

// xi-adic reconstruction of a polynomial in `a` from its integer image.
Poly xi_interpolate(Poly gamma, AtomId a, const Int& xi) {
    Poly out;
    int e = 0;
    while (!gamma.is_zero()) {
        Poly digit;
        for (auto& [m, c] : gamma.terms())
            digit.add_term(m, Rat(balanced_rem(rat_num(c), xi)));
        if (!digit.is_zero()) out = out + digit * Poly::atom(a, e);
        gamma = (gamma - digit).scaled(Rat(1, xi));
        ++e;
    }
    return out;
}

// Positive gcd of the (integer) coefficients.
Int int_content(const Poly& p) {
    Int g = 0;
    for (auto& [m, c] : p.terms()) g = int_gcd(g, rat_num(c));
    return g < 0 ? Int(-g) : g;
}

// Heuristic gcd on integer-coefficient inputs; vars lists the atoms still
// to eliminate. Returns the gcd or nullopt when the heuristic gives up
// (caller falls back to the PRS route). Soundness comes from the balanced
// xi-adic reconstruction: with xi past twice the coefficient bound, a
// reconstructed candidate dividing both inputs is the gcd.
std::optional<Poly> heur_gcd(const Poly& p, const Poly& q,
                             const std::vector<AtomId>& vars, size_t vi) {
    if (p.is_constant() && q.is_constant()) {
        Int g = int_gcd(rat_num(p.constant_value()), rat_num(q.constant_value()));
        return Poly(Rat(g));
    }
    if (vi >= vars.size()) return std::nullopt;
    AtomId v = vars[vi];
    if (p.degree_in(v) == 0 && q.degree_in(v) == 0) return heur_gcd(p, q, vars, vi + 1);

    Int gc = int_gcd(int_content(p), int_content(q));
    Poly ph = p.scaled(Rat(1, gc));
    Poly qh = q.scaled(Rat(1, gc));
    Int mp = max_abs_coeff(ph), mq = max_abs_coeff(qh);
    Int xi = 2 * (mp < mq ? mp : mq) + 2;
    int maxdeg = std::max(ph.degree_in(v), qh.degree_in(v));
    for (int attempt = 0; attempt < 6; ++attempt) {
        if (Int(maxdeg + 1) * Int(boost::multiprecision::msb(xi) + 1) > 100000)
            return std::nullopt;
        auto gamma = heur_gcd(eval_at_int(ph, v, xi), eval_at_int(qh, v, xi), vars, vi + 1);
        if (gamma && !gamma->is_zero()) {
            Poly candidate = xi_interpolate(*gamma, v, xi);
            Int cc = int_content(candidate);
            if (cc != 0 && cc != 1) candidate = candidate.scaled(Rat(1, cc));
            if (!candidate.is_zero() && ph.divide_exact(candidate) && qh.divide_exact(candidate))
                return candidate.scaled(Rat(gc));
        }
        Int step = boost::multiprecision::sqrt(boost::multiprecision::sqrt(xi));
        xi = xi * step * 73794 / 27011;
    }
    return std::nullopt;
}

}  // namespace

Poly poly_gcd(const Poly& a, const Poly& b) {
    if (a.is_zero()) return b.is_zero() ? b : b.primitive();
    if (b.is_zero()) return a.primitive();
    Poly pa = a.primitive();
    Poly pb = b.primitive();
    if (pa == pb) return pa;
    if (pa.is_constant() || pb.is_constant()) return Poly(Rat(1));

    // Split off the common monomial content first; it is cheap and keeps
    // the recursive machinery small.
    auto min_exps = [](const Poly& p) {
        std::map<AtomId, int> e;
        bool first = true;
        for (auto& [m, c] : p.terms()) {
            if (first) {
                for (auto& [id, k] : m.factors) e[id] = k;
                first = false;
            } else {
                for (auto it = e.begin(); it != e.end();) {
                    int k = m.degree_in(it->first);
                    if (k == 0) it = e.erase(it);
                    else { it->second = std::min(it->second, k); ++it; }
                }
            }
        }
        return e;
    };
    auto ea = min_exps(pa);
    auto eb = min_exps(pb);
    Monomial common;
    for (auto& [id, k] : ea) {
        auto it = eb.find(id);
        if (it != eb.end()) common.factors.emplace_back(id, std::min(k, it->second));
    }
    if (!common.factors.empty()) {
        Poly mono;
        mono.add_term(common, Rat(1));
        Poly qa = *pa.divide_exact(mono);
        Poly qb = *pb.divide_exact(mono);
        return (mono * poly_gcd(qa, qb)).primitive();
    }
    // Strip one-sided monomial contents so trial division has a chance.
    auto strip_own = [&](Poly& p, const std::map<AtomId, int>& e) {
        if (e.empty()) return;
        Monomial m;
        for (auto& [id, k] : e) m.factors.emplace_back(id, k);
        Poly mono;
        mono.add_term(m, Rat(1));
        p = *p.divide_exact(mono);
    };
    strip_own(pa, ea);
    strip_own(pb, eb);
    if (pa == pb) return pa;
    if (pa.is_constant() || pb.is_constant()) return Poly(Rat(1));

    // Trial division: the gcd frequently equals the smaller operand.
    const Poly& small = pa.terms().size() <= pb.terms().size() ? pa : pb;
    const Poly& large = pa.terms().size() <= pb.terms().size() ? pb : pa;
    if (large.divide_exact(small)) return small;

    std::set<AtomId> support;
    pa.collect_atoms(support);
    pb.collect_atoms(support);
    std::vector<AtomId> vars(support.begin(), support.end());
    std::sort(vars.begin(), vars.end(), [](AtomId x, AtomId y) { return atoms::less(x, y); });

    if (auto g = heur_gcd(pa, pb, vars, 0)) return g->primitive();

    // Fallback: primitive PRS in the smallest atom present in both (an atom
    // missing from one side goes through the content recursion).
    AtomId v = vars.front();
    if (pa.degree_in(v) == 0 || pb.degree_in(v) == 0) {
        const Poly& vfree = pa.degree_in(v) == 0 ? pa : pb;
        const Poly& rest = pa.degree_in(v) == 0 ? pb : pa;
        return poly_gcd(vfree, content_in(rest, v));
    }
    return prs_gcd(pa, pb, v);
}

std::optional<Poly> poly_sqrt(const Poly& p) {
    if (p.is_zero()) return Poly();
    if (p.is_constant()) {
        auto r = rat_sqrt_exact(p.constant_value());
        if (!r) return std::nullopt;
        return Poly(*r);
    }
    std::set<AtomId> support;
    p.collect_atoms(support);
    AtomId v = *std::min_element(support.begin(), support.end(),
                                 [](AtomId a, AtomId b) { return atoms::less(a, b); });
    auto cs = p.coeffs_in(v);
    int n = cs.rbegin()->first;
    if (n % 2 != 0) return std::nullopt;
    int m = n / 2;
    auto lead_root = poly_sqrt(cs.rbegin()->second);
    if (!lead_root || lead_root->is_zero()) return std::nullopt;

    // Undetermined coefficients from the top down: the v^(m+k) coefficient
    // of R^2 is 2*r_m*r_k plus cross terms already known for indices > k.
    std::map<int, Poly> root;
    root[m] = *lead_root;
    auto coeff_of = [](const std::map<int, Poly>& cc, int e) {
        auto it = cc.find(e);
        return it == cc.end() ? Poly() : it->second;
    };
    Poly twice_lead = lead_root->scaled(Rat(2));
    for (int k = m - 1; k >= 0; --k) {
        Poly cross;  // sum over ordered pairs (i, j), i+j = m+k, k < i,j < m
        for (int i = k + 1; i <= m - 1; ++i) {
            int j = m + k - i;
            if (j < k + 1 || j > m - 1) continue;
            cross = cross + root[i] * root[j];
        }
        Poly rhs = coeff_of(cs, m + k) - cross;
        auto rk = rhs.divide_exact(twice_lead);
        if (!rk) return std::nullopt;
        root[k] = *rk;
    }
    Poly candidate = Poly::from_coeffs_in(v, root);
    if (!(candidate * candidate == p)) return std::nullopt;
    return candidate;
}

int poly_compare(const Poly& a, const Poly& b) {
    auto i = a.terms().begin();
    auto j = b.terms().begin();
    while (i != a.terms().end() && j != b.terms().end()) {
        if (!(i->first == j->first)) return mono_less(i->first, j->first) ? -1 : 1;
        if (i->second != j->second) return i->second < j->second ? -1 : 1;
        ++i, ++j;
    }
    if (i != a.terms().end()) return 1;
    if (j != b.terms().end()) return -1;
    return 0;
}

}  // namespace lpdo
