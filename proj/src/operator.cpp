#include "lpdo/operator.hpp"

#include <vector>

#include "lpdo/errors.hpp"
#include "lpdo/printer.hpp"

namespace lpdo {

Rat binom(const MultiIndex& upper, const MultiIndex& lower) {
    auto choose = [](int n, int k) {
        Rat acc(1);
        for (int t = 1; t <= k; ++t) acc = acc * Rat(n - t + 1) / Rat(t);
        return acc;
    };
    return choose(upper.i, lower.i) * choose(upper.j, lower.j);
}

DiffOp DiffOp::mult(const Expr& e) {
    DiffOp out;
    out.add_term({0, 0}, e);
    return out;
}

DiffOp DiffOp::d(Var v, int order) {
    DiffOp out;
    out.add_term(v == Var::X ? MultiIndex{order, 0} : MultiIndex{0, order}, Expr(1));
    return out;
}

DiffOp DiffOp::term(const MultiIndex& J, const Expr& coeff) {
    DiffOp out;
    out.add_term(J, coeff);
    return out;
}

int DiffOp::order() const {
    if (coeffs_.empty()) return -1;
    return coeffs_.rbegin()->first.total();
}

Expr DiffOp::coeff(const MultiIndex& J) const {
    auto it = coeffs_.find(J);
    return it == coeffs_.end() ? Expr() : it->second;
}

void DiffOp::add_term(const MultiIndex& J, const Expr& coeff) {
    if (coeff.is_zero()) return;
    auto [it, inserted] = coeffs_.emplace(J, coeff);
    if (!inserted) {
        it->second = it->second + coeff;
        if (it->second.is_zero()) coeffs_.erase(it);
    }
}

DiffOp DiffOp::operator+(const DiffOp& o) const {
    DiffOp out = *this;
    for (auto& [J, c] : o.coeffs_) out.add_term(J, c);
    return out;
}

DiffOp DiffOp::operator-(const DiffOp& o) const {
    DiffOp out = *this;
    for (auto& [J, c] : o.coeffs_) out.add_term(J, -c);
    return out;
}

DiffOp DiffOp::scaled(const Expr& e) const {
    DiffOp out;
    if (e.is_zero()) return out;
    for (auto& [J, c] : coeffs_) out.add_term(J, c * e);
    return out;
}

bool DiffOp::operator==(const DiffOp& o) const {
    if (coeffs_.size() != o.coeffs_.size()) return false;
    auto i = coeffs_.begin();
    auto j = o.coeffs_.begin();
    for (; i != coeffs_.end(); ++i, ++j) {
        if (!(i->first == j->first) || i->second != j->second) return false;
    }
    return true;
}

void DiffOp::collect_atoms(std::set<AtomId>& out) const {
    for (auto& [J, c] : coeffs_) c.collect_atoms(out);
}

Expr apply(const DiffOp& L, const Expr& f) {
    Expr out;
    for (auto& [J, c] : L.coeffs())
        out = out + c * differentiate(differentiate(f, Var::X, J.i), Var::Y, J.j);
    return out;
}

DiffOp compose(const DiffOp& a, const DiffOp& b) {
    DiffOp out;
    for (auto& [K, bK] : b.coeffs()) {
        // Derivatives of bK up to the largest J of a, computed once.
        int mi = 0, mj = 0;
        for (auto& [J, aJ] : a.coeffs()) mi = std::max(mi, J.i), mj = std::max(mj, J.j);
        std::vector<std::vector<Expr>> der(static_cast<size_t>(mi) + 1,
                                           std::vector<Expr>(static_cast<size_t>(mj) + 1));
        der[0][0] = bK;
        for (int p = 1; p <= mi; ++p) der[p][0] = differentiate(der[p - 1][0], Var::X);
        for (int p = 0; p <= mi; ++p)
            for (int q = 1; q <= mj; ++q) der[p][q] = differentiate(der[p][q - 1], Var::Y);

        for (auto& [J, aJ] : a.coeffs()) {
            for (int p = 0; p <= J.i; ++p) {
                for (int q = 0; q <= J.j; ++q) {
                    MultiIndex I{p, q};
                    const Expr& db = der[J.i - p][J.j - q];
                    if (db.is_zero()) continue;
                    out.add_term(I.plus(K), aJ * Expr(binom(J, I)) * db);
                }
            }
        }
    }
    return out;
}

DiffOp adjoint(const DiffOp& L) {
    DiffOp out;
    for (auto& [J, aJ] : L.coeffs()) {
        DiffOp t = compose(DiffOp::term(J, Expr(1)), DiffOp::mult(aJ));
        if (J.total() % 2 == 1) t = DiffOp() - t;
        out = out + t;
    }
    return out;
}

DiffOp gauge(const DiffOp& L, const Expr& g) {
    if (g.is_zero()) throw MathError("gauge by the zero function");
    return compose(DiffOp::mult(Expr(1) / g), compose(L, DiffOp::mult(g)));
}

std::string print_op(const DiffOp& L) {
    if (L.is_zero()) return "0";
    std::string out;
    for (auto it = L.coeffs().rbegin(); it != L.coeffs().rend(); ++it) {
        const auto& [J, c] = *it;
        bool negative = c.num().leading_coeff() < 0;
        Expr mag = negative ? -c : c;
        if (out.empty()) {
            if (negative) out += "-";
        } else {
            out += negative ? " - " : " + ";
        }
        std::string dpart;
        if (J.i > 0) dpart = J.i == 1 ? "Dx" : "Dx^" + std::to_string(J.i);
        if (J.j > 0) {
            if (!dpart.empty()) dpart += "*";
            dpart += J.j == 1 ? "Dy" : "Dy^" + std::to_string(J.j);
        }
        if (dpart.empty()) {
            out += print_expr(mag);
        } else if (mag == Expr(1)) {
            out += dpart;
        } else {
            out += print_expr_factor(mag) + "*" + dpart;
        }
    }
    return out;
}

std::string DiffOp::str() const { return print_op(*this); }

}  // namespace lpdo
