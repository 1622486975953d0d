#include "mahler/laurent.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <unordered_map>

namespace mahler {

LaurentPoly3::LaurentPoly3(const mpz_class& c) {
    if (c != 0) terms_[{0, 0, 0}] = c;
}

LaurentPoly3 LaurentPoly3::monomial(const mpz_class& c, ExpVec e) {
    LaurentPoly3 p;
    if (c != 0) p.terms_[e] = c;
    return p;
}

mpz_class LaurentPoly3::coeff(ExpVec e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? mpz_class(0) : it->second;
}

void LaurentPoly3::add_term(ExpVec e, const mpz_class& c) {
    if (c == 0) return;
    auto [it, fresh] = terms_.emplace(e, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

LaurentPoly3 LaurentPoly3::operator+(const LaurentPoly3& o) const {
    LaurentPoly3 r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
}

LaurentPoly3 LaurentPoly3::operator-(const LaurentPoly3& o) const {
    LaurentPoly3 r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
    return r;
}

LaurentPoly3 LaurentPoly3::operator*(const LaurentPoly3& o) const {
    LaurentPoly3 r;
    mpz_class tmp;
    for (const auto& [e1, c1] : terms_)
        for (const auto& [e2, c2] : o.terms_) {
            ExpVec e{e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]};
            tmp = c1 * c2;
            r.add_term(e, tmp);
        }
    return r;
}

LaurentPoly3 LaurentPoly3::mul_monomial(const mpz_class& c, ExpVec m) const {
    LaurentPoly3 r;
    if (c == 0) return r;
    for (const auto& [e, v] : terms_)
        r.terms_[{e[0] + m[0], e[1] + m[1], e[2] + m[2]}] = v * c;
    return r;
}

LaurentPoly3 LaurentPoly3::reciprocal_vars() const {
    LaurentPoly3 r;
    for (const auto& [e, c] : terms_) r.terms_[{-e[0], -e[1], -e[2]}] = c;
    return r;
}

LaurentPoly3 LaurentPoly3::monomial_substitution(
    const std::array<std::array<int64_t, 3>, 3>& a) const {
    LaurentPoly3 r;
    for (const auto& [e, c] : terms_) {
        ExpVec f{};
        for (int j = 0; j < 3; ++j) {
            int64_t s = 0;
            for (int i = 0; i < 3; ++i) s += int64_t(e[i]) * a[i][j];
            f[j] = static_cast<int32_t>(s);
        }
        r.add_term(f, c);
    }
    return r;
}

void LaurentPoly3::exponent_range(ExpVec& lo, ExpVec& hi) const {
    lo = {0, 0, 0};
    hi = {0, 0, 0};
    bool first = true;
    for (const auto& [e, c] : terms_) {
        if (first) {
            lo = hi = e;
            first = false;
            continue;
        }
        for (int i = 0; i < 3; ++i) {
            lo[i] = std::min(lo[i], e[i]);
            hi[i] = std::max(hi[i], e[i]);
        }
    }
}

LaurentPoly3 LaurentPoly3::divide_exact(const LaurentPoly3& d) const {
    if (d.is_zero()) throw not_laurent("division by zero polynomial");
    // Shift both operands into the polynomial cone, do ordinary sparse
    // division by leading (lex-largest) term, and require zero remainder.
    ExpVec nlo, nhi, dlo, dhi;
    exponent_range(nlo, nhi);
    d.exponent_range(dlo, dhi);
    LaurentPoly3 num = mul_monomial(1, {-nlo[0], -nlo[1], -nlo[2]});
    LaurentPoly3 den = d.mul_monomial(1, {-dlo[0], -dlo[1], -dlo[2]});

    const ExpVec dlead = den.terms_.rbegin()->first;
    const mpz_class& dc = den.terms_.rbegin()->second;
    LaurentPoly3 q;
    while (!num.is_zero()) {
        const ExpVec nlead = num.terms_.rbegin()->first;
        const mpz_class& nc = num.terms_.rbegin()->second;
        ExpVec e{nlead[0] - dlead[0], nlead[1] - dlead[1], nlead[2] - dlead[2]};
        if (e[0] < 0 || e[1] < 0 || e[2] < 0 || nc % dc != 0)
            throw not_laurent("quotient is not a Laurent polynomial");
        mpz_class qc = nc / dc;
        q.add_term(e, qc);
        num = num - den.mul_monomial(qc, e);
    }
    ExpVec shift{nlo[0] - dlo[0], nlo[1] - dlo[1], nlo[2] - dlo[2]};
    return q.mul_monomial(1, shift);
}

mpz_class LaurentPoly3::evaluate_at_one() const {
    mpz_class s = 0;
    for (const auto& [e, c] : terms_) s += c;
    return s;
}

std::complex<double> LaurentPoly3::evaluate(const std::complex<double>& x1,
                                            const std::complex<double>& x2,
                                            const std::complex<double>& x3) const {
    std::complex<double> s = 0;
    auto ipow = [](std::complex<double> x, int32_t n) {
        if (n < 0) return std::pow(x, double(n));
        std::complex<double> r = 1, b = x;
        for (int32_t k = n; k > 0; k >>= 1) {
            if (k & 1) r *= b;
            b *= b;
        }
        return r;
    };
    for (const auto& [e, c] : terms_)
        s += c.get_d() * ipow(x1, e[0]) * ipow(x2, e[1]) * ipow(x3, e[2]);
    return s;
}

std::string LaurentPoly3::to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [e, c] : terms_) {
        if (!s.empty() && c > 0) s += "+";
        s += c.get_str();
        for (int i = 0; i < 3; ++i)
            if (e[i] != 0) s += "*x" + std::to_string(i + 1) + "^" + std::to_string(e[i]);
    }
    return s;
}

// ---------------------------------------------------------------------------
// Expression parser.  Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/')? factor)*     (juxtaposition means '*')
//   factor := base ('^' int)?
//   base   := int | x1|x2|x3 | '(' expr ')' | '-' factor
// ---------------------------------------------------------------------------
namespace {

struct Parser {
    const std::string& s;
    size_t i = 0;

    explicit Parser(const std::string& text) : s(text) {}

    void skip() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool peek(char c) {
        skip();
        return i < s.size() && s[i] == c;
    }
    bool eat(char c) {
        if (peek(c)) {
            ++i;
            return true;
        }
        return false;
    }

    long parse_int() {
        skip();
        bool neg = eat('-');
        skip();
        if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
            throw data_error("expected integer in polynomial expression: " + s);
        long v = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
            v = v * 10 + (s[i++] - '0');
        return neg ? -v : v;
    }

    LaurentPoly3 parse_base() {
        skip();
        if (i >= s.size()) throw data_error("unexpected end of expression: " + s);
        char c = s[i];
        if (c == '(') {
            ++i;
            LaurentPoly3 e = parse_expr();
            if (!eat(')')) throw data_error("missing ')' in: " + s);
            return e;
        }
        if (c == '-') {
            ++i;
            return LaurentPoly3(mpz_class(0)) - parse_factor();
        }
        if (c == 'x') {
            if (i + 1 >= s.size() || s[i + 1] < '1' || s[i + 1] > '3')
                throw data_error("bad variable in: " + s);
            int v = s[i + 1] - '1';
            i += 2;
            ExpVec e{0, 0, 0};
            e[v] = 1;
            return LaurentPoly3::monomial(1, e);
        }
        if (std::isdigit(static_cast<unsigned char>(c)))
            return LaurentPoly3(mpz_class(parse_int()));
        throw data_error(std::string("unexpected character '") + c + "' in: " + s);
    }

    LaurentPoly3 parse_factor() {
        LaurentPoly3 b = parse_base();
        if (eat('^')) {
            long n = parse_int();
            LaurentPoly3 r(mpz_class(1));
            LaurentPoly3 base = b;
            long k = std::labs(n);
            for (long j = 0; j < k; ++j) r = r * base;
            if (n < 0) r = LaurentPoly3(mpz_class(1)).divide_exact(r);
            return r;
        }
        return b;
    }

    bool factor_starts_here() {
        skip();
        if (i >= s.size()) return false;
        char c = s[i];
        return c == '(' || c == 'x' || std::isdigit(static_cast<unsigned char>(c));
    }

    LaurentPoly3 parse_term() {
        LaurentPoly3 r = parse_factor();
        for (;;) {
            if (eat('*')) {
                r = r * parse_factor();
            } else if (eat('/')) {
                r = r.divide_exact(parse_factor());
            } else if (factor_starts_here()) {
                r = r * parse_factor();
            } else {
                return r;
            }
        }
    }

    LaurentPoly3 parse_expr() {
        LaurentPoly3 r = parse_term();
        for (;;) {
            if (eat('+'))
                r = r + parse_term();
            else if (eat('-'))
                r = r - parse_term();
            else
                return r;
        }
    }
};

} // namespace

LaurentPoly3 LaurentPoly3::parse(const std::string& text) {
    Parser p(text);
    LaurentPoly3 r = p.parse_expr();
    p.skip();
    if (p.i != text.size()) throw data_error("trailing junk in polynomial: " + text);
    return r;
}

// ---------------------------------------------------------------------------
// Periods
// ---------------------------------------------------------------------------

namespace {

struct ExpHash {
    size_t operator()(const ExpVec& e) const {
        uint64_t h = 1469598103934665603ull;
        for (int32_t v : e) {
            h ^= static_cast<uint32_t>(v);
            h *= 1099511628211ull;
        }
        return static_cast<size_t>(h);
    }
};

using HashTerms = std::unordered_map<ExpVec, mpz_class, ExpHash>;

} // namespace

mpz_class constant_term_of_power(const LaurentPoly3& f, unsigned m) {
    if (m == 0) return 1;
    ExpVec lo, hi;
    f.exponent_range(lo, hi);

    // After r more factors, coordinate i moves by [r*lo_i, r*hi_i]; a term
    // can still reach exponent 0 only inside the box [-r*hi_i, -r*lo_i].
    auto in_box = [&](const ExpVec& e, unsigned r) {
        for (int i = 0; i < 3; ++i) {
            int64_t x = e[i];
            if (x < -int64_t(r) * hi[i] || x > -int64_t(r) * lo[i]) return false;
        }
        return true;
    };

    HashTerms cur;
    cur[{0, 0, 0}] = 1;
    mpz_class tmp;
    for (unsigned step = 0; step < m; ++step) {
        unsigned remaining = m - step - 1;
        HashTerms next;
        next.reserve(cur.size() * 2);
        for (const auto& [e1, c1] : cur)
            for (const auto& [e2, c2] : f.terms()) {
                ExpVec e{e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]};
                if (!in_box(e, remaining)) continue;
                tmp = c1 * c2;
                auto [it, fresh] = next.emplace(e, tmp);
                if (!fresh) it->second += tmp;
            }
        cur = std::move(next);
    }
    auto it = cur.find({0, 0, 0});
    return it == cur.end() ? mpz_class(0) : it->second;
}

std::vector<mpz_class> period_sequence(const LaurentPoly3& f, unsigned M) {
    // One pruned power-walk: keep the whole pruned expansion and read off
    // the constant term at each step.
    std::vector<mpz_class> b;
    b.reserve(M + 1);
    b.emplace_back(1);
    if (M == 0) return b;

    ExpVec lo, hi;
    f.exponent_range(lo, hi);
    auto in_box = [&](const ExpVec& e, unsigned r) {
        for (int i = 0; i < 3; ++i) {
            int64_t x = e[i];
            if (x < -int64_t(r) * hi[i] || x > -int64_t(r) * lo[i]) return false;
        }
        return true;
    };

    HashTerms cur;
    cur[{0, 0, 0}] = 1;
    mpz_class tmp;
    for (unsigned step = 0; step < M; ++step) {
        unsigned remaining = M - step - 1;
        HashTerms next;
        next.reserve(cur.size() * 2);
        for (const auto& [e1, c1] : cur)
            for (const auto& [e2, c2] : f.terms()) {
                ExpVec e{e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]};
                if (!in_box(e, remaining)) continue;
                tmp = c1 * c2;
                auto [it, fresh] = next.emplace(e, tmp);
                if (!fresh) it->second += tmp;
            }
        cur = std::move(next);
        auto it = cur.find({0, 0, 0});
        b.emplace_back(it == cur.end() ? mpz_class(0) : it->second);
    }
    return b;
}

// ---------------------------------------------------------------------------
// Mutations
// ---------------------------------------------------------------------------

int64_t det3(const std::array<std::array<int64_t, 3>, 3>& a) {
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
           a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

namespace {

LaurentPoly3 apply_factor(const LaurentPoly3& f, const LaurentPoly3& a) {
    // f = sum_i C_i(x1,x2) x3^i  ->  sum_i A^i C_i x3^i
    for (const auto& [e, c] : a.terms())
        if (e[2] != 0) throw not_laurent("exchange factor must not involve x3");

    std::map<int32_t, LaurentPoly3> slices;
    for (const auto& [e, c] : f.terms())
        slices[e[2]].add_term({e[0], e[1], 0}, c);

    LaurentPoly3 g;
    for (auto& [i, ci] : slices) {
        LaurentPoly3 p = ci;
        if (i >= 0)
            for (int32_t k = 0; k < i; ++k) p = p * a;
        else
            for (int32_t k = 0; k < -i; ++k) p = p.divide_exact(a);
        g = g + p.mul_monomial(1, {0, 0, i});
    }
    return g;
}

} // namespace

LaurentPoly3 apply_mutation(const LaurentPoly3& f, const Mutation& mu) {
    if (std::labs(det3(mu.pre_gl)) != 1 || std::labs(det3(mu.post_gl)) != 1)
        throw not_unimodular("mutation GL matrices must have determinant +-1");
    LaurentPoly3 g = f.monomial_substitution(mu.pre_gl);
    g = apply_factor(g, mu.factor);
    return g.monomial_substitution(mu.post_gl);
}

// ---------------------------------------------------------------------------
// Numeric Mahler measure
// ---------------------------------------------------------------------------

double mahler_numeric(const LaurentPoly3& f, std::complex<double> c, unsigned grid_n,
                      const MahlerNumericOptions& opt) {
    if (grid_n == 0) throw error("grid_n must be positive");
    ExpVec lo, hi;
    f.exponent_range(lo, hi);

    // Per-axis power tables: pw[axis][exp - lo][k] = omega^(k*exp).
    const double two_pi = 2.0 * std::acos(-1.0);
    std::array<std::vector<std::vector<std::complex<double>>>, 3> pw;
    for (int axis = 0; axis < 3; ++axis) {
        int ne = hi[axis] - lo[axis] + 1;
        pw[axis].assign(ne, std::vector<std::complex<double>>(grid_n));
        for (int e = 0; e < ne; ++e) {
            double ang = two_pi * double(e + lo[axis]) / double(grid_n);
            for (unsigned k = 0; k < grid_n; ++k)
                pw[axis][e][k] = std::polar(1.0, ang * double(k));
        }
    }

    struct Term {
        double coef;
        int e0, e1, e2;
    };
    std::vector<Term> ts;
    ts.reserve(f.term_count());
    for (const auto& [e, coef] : f.terms())
        ts.push_back({coef.get_d(), e[0] - lo[0], e[1] - lo[1], e[2] - lo[2]});

    double sum = 0.0, comp = 0.0; // Kahan
    double min_abs = std::numeric_limits<double>::infinity();
    for (unsigned k0 = 0; k0 < grid_n; ++k0)
        for (unsigned k1 = 0; k1 < grid_n; ++k1) {
            // Pre-combine the x1,x2 parts per term for the inner loop.
            for (unsigned k2 = 0; k2 < grid_n; ++k2) {
                std::complex<double> v = 0;
                for (const Term& t : ts)
                    v += t.coef * pw[0][t.e0][k0] * pw[1][t.e1][k1] * pw[2][t.e2][k2];
                double a = std::abs(v - c);
                min_abs = std::min(min_abs, a);
                if (a < opt.vanish_threshold)
                    throw near_zero_on_torus("sample with |f-c| = " + std::to_string(a) +
                                             " (c may lie inside the torus image)");
                double y = std::log(a) - comp;
                double t2 = sum + y;
                comp = (t2 - sum) - y;
                sum = t2;
            }
        }
    return sum / (double(grid_n) * double(grid_n) * double(grid_n));
}

} // namespace mahler
