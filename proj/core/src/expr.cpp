#include "mahler/expr.hpp"

#include <cctype>

#include "mahler/errors.hpp"

namespace mahler {

namespace {

struct EParser {
    const std::string& s;
    size_t i = 0;
    explicit EParser(const std::string& t) : s(t) {}

    void skip() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool eat(char c) {
        skip();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }

    long parse_long() {
        skip();
        bool neg = eat('-');
        skip();
        if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
            throw data_error("expected integer in expression: " + s);
        long v = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
            v = v * 10 + (s[i++] - '0');
        return neg ? -v : v;
    }

    std::string parse_ident() {
        skip();
        std::string id;
        while (i < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'))
            id += s[i++];
        return id;
    }

    Expr parse_base() {
        skip();
        if (i >= s.size()) throw data_error("unexpected end of expression: " + s);
        char c = s[i];
        if (c == '(') {
            ++i;
            Expr e = parse_expr();
            if (!eat(')')) throw data_error("missing ')' in: " + s);
            return e;
        }
        if (c == '-') {
            ++i;
            Expr e;
            e.kind = Expr::Kind::Neg;
            e.args.push_back(parse_factor());
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            Expr e;
            e.kind = Expr::Kind::Num;
            e.num = parse_long();
            return e;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::string id = parse_ident();
            if (id == "sqrt" || id == "root") {
                Expr e;
                e.kind = Expr::Kind::Root;
                if (!eat('(')) throw data_error(id + " needs '(' in: " + s);
                if (id == "sqrt") {
                    e.root = 2;
                } else {
                    e.root = int(parse_long());
                    if (!eat(',')) throw data_error("root(n, expr) needs ',' in: " + s);
                }
                e.args.push_back(parse_expr());
                if (!eat(')')) throw data_error("missing ')' in: " + s);
                return e;
            }
            Expr e;
            e.kind = Expr::Kind::Sym;
            e.sym = id;
            return e;
        }
        throw data_error(std::string("unexpected character '") + c + "' in: " + s);
    }

    Expr parse_factor() {
        Expr b = parse_base();
        skip();
        if (eat('^')) {
            Expr e;
            e.kind = Expr::Kind::Pow;
            e.ipow = parse_long();
            e.args.push_back(std::move(b));
            return e;
        }
        return b;
    }

    Expr parse_term() {
        Expr r = parse_factor();
        for (;;) {
            if (eat('*')) {
                Expr e;
                e.kind = Expr::Kind::Mul;
                e.args.push_back(std::move(r));
                e.args.push_back(parse_factor());
                r = std::move(e);
            } else if (eat('/')) {
                Expr e;
                e.kind = Expr::Kind::Div;
                e.args.push_back(std::move(r));
                e.args.push_back(parse_factor());
                r = std::move(e);
            } else {
                return r;
            }
        }
    }

    Expr parse_expr() {
        Expr r = parse_term();
        for (;;) {
            if (eat('+')) {
                Expr e;
                e.kind = Expr::Kind::Add;
                e.args.push_back(std::move(r));
                e.args.push_back(parse_term());
                r = std::move(e);
            } else if (eat('-')) {
                Expr e;
                e.kind = Expr::Kind::Sub;
                e.args.push_back(std::move(r));
                e.args.push_back(parse_term());
                r = std::move(e);
            } else {
                return r;
            }
        }
    }
};

} // namespace

Expr Expr::parse(const std::string& text) {
    EParser p(text);
    Expr e = p.parse_expr();
    p.skip();
    if (p.i != text.size()) throw data_error("trailing junk in expression: " + text);
    return e;
}

QSeries Expr::eval(const std::map<std::string, QSeries>& env) const {
    switch (kind) {
        case Kind::Num: {
            long lim = env.empty() ? 24 : env.begin()->second.lim24();
            return QSeries::constant(num, lim);
        }
        case Kind::Sym: {
            auto it = env.find(sym);
            if (it == env.end()) throw data_error("unbound symbol: " + sym);
            return it->second;
        }
        case Kind::Add:
            return args[0].eval(env) + args[1].eval(env);
        case Kind::Sub:
            return args[0].eval(env) - args[1].eval(env);
        case Kind::Mul:
            return args[0].eval(env) * args[1].eval(env);
        case Kind::Div:
            return args[0].eval(env) * args[1].eval(env).inverse();
        case Kind::Neg:
            return -args[0].eval(env);
        case Kind::Pow:
            return args[0].eval(env).pow_int(ipow);
        case Kind::Root:
            return args[0].eval(env).nth_root(root);
    }
    throw error("unreachable");
}

mpq_class Expr::eval(const std::map<std::string, mpq_class>& env) const {
    switch (kind) {
        case Kind::Num:
            return num;
        case Kind::Sym: {
            auto it = env.find(sym);
            if (it == env.end()) throw data_error("unbound symbol: " + sym);
            return it->second;
        }
        case Kind::Add:
            return args[0].eval(env) + args[1].eval(env);
        case Kind::Sub:
            return args[0].eval(env) - args[1].eval(env);
        case Kind::Mul:
            return args[0].eval(env) * args[1].eval(env);
        case Kind::Div: {
            mpq_class d = args[1].eval(env);
            if (d == 0) throw error("division by zero in expression");
            return args[0].eval(env) / d;
        }
        case Kind::Neg:
            return -args[0].eval(env);
        case Kind::Pow: {
            mpq_class b = args[0].eval(env);
            mpq_class r(1);
            long k = std::labs(ipow);
            for (long j = 0; j < k; ++j) r *= b;
            if (ipow < 0) {
                if (r == 0) throw error("division by zero in expression");
                r = 1 / r;
            }
            return r;
        }
        case Kind::Root:
            throw error("root() is not defined for rational evaluation");
    }
    throw error("unreachable");
}

} // namespace mahler
