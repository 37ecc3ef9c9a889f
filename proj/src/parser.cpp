#include "lpdo/parser.hpp"

#include <cctype>
#include <map>
#include <set>

#include "lpdo/errors.hpp"

namespace lpdo {

namespace {

enum class Tok { Ident, Int, Punct, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    int primes = 0;  // trailing apostrophes on identifiers
    size_t line = 1, col = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& peek() const { return cur_; }
    Token next() {
        Token t = cur_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) bump();
        // comments: '#' to end of line
        while (pos_ < src_.size() && src_[pos_] == '#') {
            while (pos_ < src_.size() && src_[pos_] != '\n') bump();
            while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) bump();
        }
        cur_ = Token{};
        cur_.line = line_;
        cur_.col = col_;
        if (pos_ >= src_.size()) {
            cur_.kind = Tok::End;
            return;
        }
        char c = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            cur_.kind = Tok::Ident;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
                cur_.text += src_[pos_];
                bump();
            }
            while (pos_ < src_.size() && src_[pos_] == '\'') {
                cur_.primes++;
                bump();
            }
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            cur_.kind = Tok::Int;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                cur_.text += src_[pos_];
                bump();
            }
            return;
        }
        cur_.kind = Tok::Punct;
        cur_.text = std::string(1, c);
        bump();
    }

    void bump() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    const std::string& src_;
    size_t pos_ = 0;
    size_t line_ = 1, col_ = 1;
    Token cur_;
};

const std::set<std::string> kReserved = {
    "param", "func", "defsym", "op", "ref", "admissible",
    "compose", "adjoint", "gauge", "symbol", "factor", "types",
    "verify", "reducible", "linearize", "factorize", "apply",
    "thm41", "dxx", "landau", "quartic",
    "d", "dx", "dy", "Dx", "Dy", "X", "Y", "x", "y",
};

class Parser {
public:
    explicit Parser(const std::string& src) : src_(src), lex_(src) {}

    Script parse() {
        std::optional<Script> cmd;
        while (lex_.peek().kind != Tok::End) {
            if (cmd) fail(lex_.peek(), "the command must be the last statement");
            const Token& t = lex_.peek();
            if (t.kind != Tok::Ident) fail(t, "expected a declaration or command");
            if (t.text == "param" || t.text == "func") {
                parse_symbol_decl();
            } else if (t.text == "defsym") {
                parse_defsym_decl();
            } else if (t.text == "op") {
                parse_op_decl();
            } else {
                cmd = parse_command();
            }
        }
        if (!cmd) fail(lex_.peek(), "script has no command");
        return *cmd;
    }

    DiffOp parse_operator_only() {
        DiffOp L = parse_opexpr();
        expect_end();
        return L;
    }

private:
    [[noreturn]] void fail(const Token& t, const std::string& msg) {
        std::string detail = msg;
        if (t.kind != Tok::End && !t.text.empty()) detail += " (near '" + t.text + "')";
        throw ParseError(t.line, t.col, detail);
    }

    Token expect_punct(const std::string& p) {
        Token t = lex_.next();
        if (t.kind != Tok::Punct || t.text != p) fail(t, "expected '" + p + "'");
        return t;
    }

    bool accept_punct(const std::string& p) {
        if (lex_.peek().kind == Tok::Punct && lex_.peek().text == p) {
            lex_.next();
            return true;
        }
        return false;
    }

    Token expect_ident() {
        Token t = lex_.next();
        if (t.kind != Tok::Ident) fail(t, "expected an identifier");
        return t;
    }

    int expect_int() {
        Token t = lex_.next();
        if (t.kind != Tok::Int) fail(t, "expected an integer");
        return std::stoi(t.text);
    }

    void expect_end() {
        if (lex_.peek().kind != Tok::End) fail(lex_.peek(), "unexpected trailing input");
    }

    std::string fresh_decl_name(const Token& t) {
        if (t.primes > 0) fail(t, "declared names cannot carry primes");
        if (kReserved.count(t.text)) fail(t, "'" + t.text + "' is reserved");
        if (atoms::exists(t.text) || ops_.count(t.text))
            fail(t, "'" + t.text + "' is already declared");
        return t.text;
    }

    Deps parse_deps(int max_vars) {
        Deps d = Deps::none();
        if (!accept_punct("(")) return d;
        int n = 0;
        for (;;) {
            Token v = expect_ident();
            if (v.text == "x") d = d.unite(Deps::x());
            else if (v.text == "y") d = d.unite(Deps::y());
            else fail(v, "dependency must be x or y");
            if (++n > max_vars) fail(v, "too many dependency variables");
            if (accept_punct(")")) break;
            expect_punct(",");
        }
        return d;
    }

    void parse_symbol_decl() {
        Token kw = lex_.next();
        bool is_param = kw.text == "param";
        Token name = expect_ident();
        std::string nm = fresh_decl_name(name);
        Deps d = parse_deps(is_param ? 1 : 2);
        expect_punct(";");
        atoms::func(nm, d, is_param);
    }

    void parse_defsym_decl() {
        lex_.next();
        Token name = expect_ident();
        std::string nm = fresh_decl_name(name);
        // Conservative dependency first; refined once the rules are known.
        AtomId id = atoms::defsym(nm, Deps::xy());
        std::optional<Expr> rx, ry;
        while (lex_.peek().kind == Tok::Ident &&
               (lex_.peek().text == "dx" || lex_.peek().text == "dy")) {
            Token which = lex_.next();
            expect_punct("=");
            Expr rule = parse_scalar();
            if (which.text == "dx") {
                if (rx) fail(which, "duplicate dx rule");
                rx = rule;
            } else {
                if (ry) fail(which, "duplicate dy rule");
                ry = rule;
            }
        }
        expect_punct(";");
        Deps d = Deps::none();
        if (!rx || !rx->is_zero()) d = d.unite(Deps::x());
        if (!ry || !ry->is_zero()) d = d.unite(Deps::y());
        atoms::refine_deps(id, d);
        if (rx && !rx->is_zero()) atoms::set_rule(id, Var::X, *rx);
        if (ry && !ry->is_zero()) atoms::set_rule(id, Var::Y, *ry);
    }

    void parse_op_decl() {
        lex_.next();
        Token name = expect_ident();
        std::string nm = fresh_decl_name(name);
        expect_punct("=");
        DiffOp L = parse_opexpr();
        expect_punct(";");
        ops_.emplace(nm, L);
    }

    // --- operator / scalar expressions (order-0 operators are scalars) ----

    DiffOp parse_opexpr() {
        bool neg = accept_punct("-");
        DiffOp acc = parse_opterm();
        if (neg) acc = DiffOp() - acc;
        for (;;) {
            if (accept_punct("+")) acc = acc + parse_opterm();
            else if (accept_punct("-")) acc = acc - parse_opterm();
            else return acc;
        }
    }

    DiffOp parse_opterm() {
        DiffOp acc = parse_oppower();
        for (;;) {
            if (accept_punct("*")) {
                acc = compose(acc, parse_oppower());
            } else if (lex_.peek().kind == Tok::Punct && lex_.peek().text == "/") {
                Token slash = lex_.next();
                DiffOp rhs = parse_oppower();
                if (acc.order() > 0 || rhs.order() > 0)
                    fail(slash, "division is only defined for scalar expressions");
                Expr d = rhs.coeff({0, 0});
                if (d.is_zero()) fail(slash, "division by zero");
                acc = DiffOp::mult(acc.coeff({0, 0}) / d);
            } else {
                return acc;
            }
        }
    }

    DiffOp parse_oppower() {
        Token at = lex_.peek();
        DiffOp base = parse_opprimary();
        if (lex_.peek().kind == Tok::Punct && lex_.peek().text == "^") {
            lex_.next();
            bool neg = accept_punct("-");
            int e = expect_int();
            if (neg) {
                if (base.order() != 0) fail(at, "negative power of an operator");
                return DiffOp::mult(base.coeff({0, 0}).pow(-e));
            }
            if (base.order() == 0) return DiffOp::mult(base.coeff({0, 0}).pow(e));
            DiffOp acc = DiffOp::mult(Expr(1));
            for (int i = 0; i < e; ++i) acc = compose(acc, base);
            return acc;
        }
        return base;
    }

    DiffOp parse_opprimary() {
        Token t = lex_.peek();
        if (t.kind == Tok::Punct && t.text == "(") {
            lex_.next();
            DiffOp inner = parse_opexpr();
            expect_punct(")");
            return inner;
        }
        if (t.kind == Tok::Int) {
            lex_.next();
            return DiffOp::mult(Expr(Rat(t.text)));
        }
        if (t.kind != Tok::Ident) fail(t, "expected an expression");
        if (t.text == "Dx" || t.text == "Dy") {
            lex_.next();
            return DiffOp::d(t.text == "Dx" ? Var::X : Var::Y);
        }
        if (t.text == "d") return DiffOp::mult(parse_derivative());
        lex_.next();
        return resolve_ident(t);
    }

    // d/dx(expr), d/dy(expr)
    Expr parse_derivative() {
        Token d = lex_.next();  // 'd'
        expect_punct("/");
        Token which = expect_ident();
        if (which.text != "dx" && which.text != "dy") fail(which, "expected dx or dy");
        expect_punct("(");
        Expr inner = parse_scalar();
        expect_punct(")");
        (void)d;
        return differentiate(inner, which.text == "dx" ? Var::X : Var::Y);
    }

    DiffOp resolve_ident(const Token& t) {
        if (t.text == "x" || t.text == "y") {
            if (t.primes > 0) fail(t, "variables cannot carry primes");
            return DiffOp::mult(var(t.text == "x" ? Var::X : Var::Y));
        }
        if (t.primes == 0) {
            auto op = ops_.find(t.text);
            if (op != ops_.end()) return op->second;
        }
        if (auto id = atoms::lookup(t.text)) {
            const AtomData d = atoms::data(*id);
            if (t.primes == 0) return DiffOp::mult(Expr::atom(*id));
            if (d.kind != AtomKind::FuncSym) fail(t, "primes apply to function symbols only");
            bool ux = d.deps == Deps::x(), uy = d.deps == Deps::y();
            if (!ux && !uy) fail(t, "primes need a univariate symbol; use name_xy suffixes");
            AtomId cur = *id;
            for (int i = 0; i < t.primes; ++i) cur = atoms::primed(cur, ux ? Var::X : Var::Y);
            return DiffOp::mult(Expr::atom(cur));
        }
        // name_x / name_xy... : derivative of a declared symbol
        auto us = t.text.rfind('_');
        if (us != std::string::npos && t.primes == 0) {
            std::string base = t.text.substr(0, us);
            std::string suffix = t.text.substr(us + 1);
            bool all_xy = !suffix.empty();
            int ddx = 0, ddy = 0;
            for (char c : suffix) {
                if (c == 'x') ++ddx;
                else if (c == 'y') ++ddy;
                else all_xy = false;
            }
            if (all_xy) {
                if (auto id = atoms::lookup(base)) {
                    if (atoms::data(*id).kind == AtomKind::FuncSym) {
                        AtomId cur = *id;
                        for (int i = 0; i < ddx; ++i) cur = atoms::primed(cur, Var::X);
                        for (int i = 0; i < ddy; ++i) cur = atoms::primed(cur, Var::Y);
                        return DiffOp::mult(Expr::atom(cur));
                    }
                }
            }
        }
        fail(t, "undeclared identifier '" + t.text + "'");
    }

    Expr parse_scalar() {
        Token at = lex_.peek();
        DiffOp L = parse_opexpr();
        if (L.order() > 0) fail(at, "expected a scalar expression");
        return L.coeff({0, 0});
    }

    Expr parse_scalar_factor() {
        Token at = lex_.peek();
        DiffOp L = parse_oppower();
        if (L.order() > 0) fail(at, "expected a scalar expression");
        return L.coeff({0, 0});
    }

    // --- symbol polynomials ------------------------------------------------

    SymPoly parse_sympoly() {
        SymPoly acc = parse_symterm();
        for (;;) {
            if (accept_punct("+")) {
                SymPoly rhs = parse_symterm();
                if (acc.degree != rhs.degree) fail(lex_.peek(), "symbol is not homogeneous");
                for (int k = 0; k <= acc.degree; ++k)
                    acc.coeffs[size_t(k)] = acc.coeffs[size_t(k)] + rhs.coeffs[size_t(k)];
            } else if (lex_.peek().kind == Tok::Punct && lex_.peek().text == "-") {
                lex_.next();
                SymPoly rhs = parse_symterm();
                if (acc.degree != rhs.degree) fail(lex_.peek(), "symbol is not homogeneous");
                acc = acc - rhs;
            } else {
                return acc;
            }
        }
    }

    SymPoly parse_symterm() {
        SymPoly acc = parse_sympower();
        for (;;) {
            if (accept_punct("*")) acc = acc * parse_sympower();
            else if (lex_.peek().kind == Tok::Punct && lex_.peek().text == "/") {
                Token slash = lex_.next();
                SymPoly rhs = parse_sympower();
                if (rhs.degree != 0) fail(slash, "cannot divide by X or Y");
                acc = acc.scaled(Expr(1) / rhs.coeffs[0]);
            } else return acc;
        }
    }

    SymPoly parse_sympower() {
        SymPoly base = parse_symprimary();
        if (lex_.peek().kind == Tok::Punct && lex_.peek().text == "^") {
            lex_.next();
            int e = expect_int();
            SymPoly acc = SymPoly::constant(Expr(1));
            for (int i = 0; i < e; ++i) acc = acc * base;
            return acc;
        }
        return base;
    }

    SymPoly parse_symprimary() {
        Token t = lex_.peek();
        if (t.kind == Tok::Punct && t.text == "(") {
            lex_.next();
            SymPoly inner = parse_sympoly();
            expect_punct(")");
            return inner;
        }
        if (t.kind == Tok::Ident && t.text == "X") {
            lex_.next();
            return SymPoly::X();
        }
        if (t.kind == Tok::Ident && t.text == "Y") {
            lex_.next();
            return SymPoly::Y();
        }
        return SymPoly::constant(parse_scalar_factor());
    }

    // --- commands -----------------------------------------------------------

    Script parse_command() {
        Token head = expect_ident();
        std::string cmd = head.text;
        // hyphenated command names: factor-symbol, verify-family
        if ((cmd == "factor" || cmd == "verify") && accept_punct("-")) {
            Token tail = expect_ident();
            cmd += "-" + tail.text;
        }

        Script s;
        s.echo = cmd;
        auto echo_op = [&s](const DiffOp& L) { s.echo += " " + print_op(L); };

        if (cmd == "compose" || cmd == "adjoint" || cmd == "symbol") {
            s.kind = cmd == "compose" ? CommandKind::Compose
                     : cmd == "adjoint" ? CommandKind::Adjoint : CommandKind::Symbol;
            DiffOp L = parse_opexpr();
            s.ops.push_back(L);
            echo_op(L);
        } else if (cmd == "gauge") {
            s.kind = CommandKind::Gauge;
            DiffOp L = parse_oppower();
            Expr g = parse_scalar_factor();
            s.ops.push_back(L);
            s.scalar = g;
            echo_op(L);
            s.echo += " " + g.str();
        } else if (cmd == "apply") {
            s.kind = CommandKind::Apply;
            DiffOp L = parse_oppower();
            Expr f = parse_scalar_factor();
            s.ops.push_back(L);
            s.scalar = f;
            echo_op(L);
            s.echo += " " + f.str();
        } else if (cmd == "factor-symbol") {
            s.kind = CommandKind::FactorSymbol;
            s.sym = parse_sympoly();
            s.echo += " " + s.sym->str();
        } else if (cmd == "types") {
            s.kind = CommandKind::Types;
            s.k = expect_int();
            s.sym = parse_sympoly();
            if (lex_.peek().kind == Tok::Ident && lex_.peek().text == "admissible") {
                lex_.next();
                s.admissible_only = true;
            }
            s.echo += " " + std::to_string(s.k) + " " + s.sym->str();
            if (s.admissible_only) s.echo += " admissible";
        } else if (cmd == "verify-family" || cmd == "reducible") {
            s.kind = cmd == "reducible" ? CommandKind::Reducible : CommandKind::VerifyFamily;
            parse_family_spec(s);
            if (s.kind == CommandKind::VerifyFamily && lex_.peek().kind == Tok::Ident &&
                lex_.peek().text == "ref") {
                lex_.next();
                DiffOp ref = parse_opexpr();
                s.reference = ref;
                s.echo += " ref " + print_op(ref);
            }
        } else if (cmd == "linearize") {
            s.kind = CommandKind::Linearize;
            int n1 = expect_int();
            int n2 = expect_int();
            s.ansatz = {n1, n2};
            DiffOp L1 = parse_oppower();
            DiffOp L2 = parse_oppower();
            s.ops.push_back(L1);
            s.ops.push_back(L2);
            s.echo += " " + std::to_string(n1) + " " + std::to_string(n2) + " (" +
                      print_op(L1) + ") (" + print_op(L2) + ")";
        } else if (cmd == "factorize") {
            s.kind = CommandKind::Factorize;
            while (lex_.peek().kind == Tok::Punct && lex_.peek().text == "(") {
                lex_.next();
                s.type_parts.push_back(parse_sympoly());
                expect_punct(")");
            }
            if (s.type_parts.size() < 2) fail(lex_.peek(), "factorize needs at least two parts");
            DiffOp L = parse_opexpr();
            s.ops.push_back(L);
            for (auto& p : s.type_parts) s.echo += " (" + p.str() + ")";
            echo_op(L);
        } else {
            fail(head, "unknown command '" + cmd + "'");
        }
        accept_punct(";");
        expect_end();
        return s;
    }

    void parse_family_spec(Script& s) {
        const Token& t = lex_.peek();
        if (t.kind == Tok::Ident && t.text == "thm41") {
            lex_.next();
            expect_punct(":");
            Expr a = parse_scalar();
            expect_punct(":");
            Expr b = parse_scalar();
            s.family_name = "thm41";
            s.thm41_ab = {a, b};
            s.echo += " thm41:" + a.str() + ":" + b.str();
            return;
        }
        if (t.kind == Tok::Ident && (t.text == "dxx" || t.text == "landau" || t.text == "quartic")) {
            Token name = lex_.next();
            std::string nm = name.text;
            if (nm == "quartic") {
                expect_punct("-");
                Token tail = expect_ident();
                nm += "-" + tail.text;
            }
            s.family_name = nm;
            s.echo += " " + nm;
            return;
        }
        // inline: factor * factor * ...
        DiffOp first = parse_oppower();
        s.factors.push_back(first);
        while (accept_punct("*")) s.factors.push_back(parse_oppower());
        s.echo += " ";
        for (size_t i = 0; i < s.factors.size(); ++i) {
            if (i) s.echo += " * ";
            s.echo += "(" + print_op(s.factors[i]) + ")";
        }
    }

    const std::string& src_;
    Lexer lex_;
    std::map<std::string, DiffOp> ops_;
};

}  // namespace

Script parse_script(const std::string& source) {
    Parser p(source);
    return p.parse();
}

DiffOp parse_operator_text(const std::string& text) {
    Parser p(text);
    return p.parse_operator_only();
}

Expr parse_expression_text(const std::string& text) {
    DiffOp L = parse_operator_text(text);
    if (L.order() > 0) throw ParseError(1, 1, "expected a scalar expression");
    return L.coeff({0, 0});
}

}  // namespace lpdo
