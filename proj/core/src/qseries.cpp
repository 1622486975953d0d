#include "mahler/qseries.hpp"

#include <algorithm>
#include <cmath>

namespace mahler {

namespace {
const mpq_class kZero(0);
}

QSeries QSeries::constant(const mpq_class& c, long lim24) {
    if (lim24 <= 0 || c == 0) return zero(lim24);
    return QSeries(0, lim24, {c});
}

QSeries QSeries::monomial(const mpq_class& c, long exp24, long lim24) {
    if (exp24 >= lim24 || c == 0) return zero(lim24);
    return QSeries(exp24, lim24, {c});
}

QSeries QSeries::from_coeffs(long val24, long lim24, std::vector<mpq_class> c) {
    QSeries r(val24, lim24, std::move(c));
    r.normalize();
    return r;
}

void QSeries::normalize() {
    size_t lead = 0;
    while (lead < c_.size() && c_[lead] == 0) ++lead;
    if (lead > 0) {
        c_.erase(c_.begin(), c_.begin() + lead);
        val24_ += long(lead);
    }
    if (val24_ + long(c_.size()) > lim24_) c_.resize(size_t(lim24_ - val24_));
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
    if (c_.empty()) val24_ = lim24_;
}

bool QSeries::is_zero() const { return c_.empty(); }

mpq_class QSeries::coeff24(long e24) const {
    if (e24 >= lim24_) throw insufficient_truncation("coefficient beyond truncation");
    long i = e24 - val24_;
    if (i < 0 || i >= long(c_.size())) return kZero;
    return c_[size_t(i)];
}

QSeries QSeries::operator+(const QSeries& o) const {
    long lim = std::min(lim24_, o.lim24_);
    long val = std::min(val24_, o.val24_);
    val = std::min(val, lim);
    std::vector<mpq_class> c(size_t(std::max(0L, lim - val)), kZero);
    auto acc = [&](const QSeries& s) {
        for (size_t i = 0; i < s.c_.size(); ++i) {
            long e = s.val24_ + long(i);
            if (e < lim) c[size_t(e - val)] += s.c_[i];
        }
    };
    acc(*this);
    acc(o);
    QSeries r(val, lim, std::move(c));
    r.normalize();
    return r;
}

QSeries QSeries::operator-() const {
    QSeries r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
}

QSeries QSeries::operator-(const QSeries& o) const { return *this + (-o); }

QSeries QSeries::operator*(const QSeries& o) const {
    if (is_zero() || o.is_zero()) {
        // result precision: a zero series still carries its truncation
        long lim = std::min(lim24_ + o.val24_, o.lim24_ + val24_);
        return zero(lim);
    }
    long val = val24_ + o.val24_;
    long lim = std::min(lim24_ + o.val24_, o.lim24_ + val24_);
    std::vector<mpq_class> c(size_t(std::max(0L, lim - val)), kZero);
    mpq_class tmp;
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        long e1 = val24_ + long(i);
        for (size_t j = 0; j < o.c_.size(); ++j) {
            if (o.c_[j] == 0) continue;
            long e = e1 + o.val24_ + long(j);
            if (e >= lim) break;
            tmp = c_[i] * o.c_[j];
            c[size_t(e - val)] += tmp;
        }
    }
    QSeries r(val, lim, std::move(c));
    r.normalize();
    return r;
}

QSeries QSeries::scaled(const mpq_class& s) const {
    if (s == 0) return zero(lim24_);
    QSeries r = *this;
    for (auto& x : r.c_) x *= s;
    return r;
}

QSeries QSeries::shifted(long e24) const {
    QSeries r = *this;
    r.val24_ += e24;
    r.lim24_ += e24;
    return r;
}

QSeries QSeries::inverse() const {
    if (is_zero()) throw error("cannot invert the zero series");
    // this = q^v (u0 + u1 q^(1/24) + ...), relative precision n = lim - val
    long n = lim24_ - val24_;
    std::vector<mpq_class> v(size_t(n), kZero);
    std::vector<std::pair<long, const mpq_class*>> unz;
    for (size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0) unz.emplace_back(long(i), &c_[i]);
    mpq_class inv0 = 1 / c_[0];
    v[0] = inv0;
    mpq_class acc, tmp;
    for (long m = 1; m < n; ++m) {
        acc = 0;
        for (auto& [j, uj] : unz) {
            if (j > m) break;
            tmp = *uj * v[size_t(m - j)];
            acc += tmp;
        }
        if (acc != 0) v[size_t(m)] = -acc * inv0;
    }
    QSeries r(-val24_, n - val24_, std::move(v));
    r.normalize();
    return r;
}

QSeries QSeries::pow_int(long nexp) const {
    if (nexp == 0) {
        // relative precision of the unit result matches the input's
        return QSeries::constant(1, lim24_ - val24_);
    }
    const QSeries base = nexp > 0 ? *this : inverse();
    long k = std::labs(nexp);
    QSeries r = base;
    QSeries sq = base;
    --k;
    while (k > 0) {
        if (k & 1) r = r * sq;
        k >>= 1;
        if (k > 0) sq = sq * sq;
    }
    return r;
}

QSeries QSeries::nth_root(int n) const {
    if (n <= 0) throw error("nth_root needs n >= 1");
    if (is_zero()) throw error("nth_root of zero series");
    if (val24_ % n != 0) throw error("nth_root: valuation not divisible by n");
    // leading coefficient must be an exact rational n-th power
    mpz_class rn, rd;
    if (mpz_root(rn.get_mpz_t(), c_[0].get_num().get_mpz_t(), n) == 0 ||
        mpz_root(rd.get_mpz_t(), c_[0].get_den().get_mpz_t(), n) == 0)
        throw error("nth_root: leading coefficient is not an exact n-th power");
    mpq_class r0(rn, rd);
    r0.canonicalize();

    long prec = lim24_ - val24_; // relative precision
    // u = this / q^val, normalized so that u0 = 1; root by coefficientwise
    // recurrence on r^n = u.
    std::vector<mpq_class> u(size_t(prec), kZero);
    for (size_t i = 0; i < c_.size(); ++i) u[i] = c_[i] / c_[0];
    std::vector<mpq_class> r(size_t(prec), kZero);
    r[0] = 1;
    // p = r^n, maintained incrementally is messy; instead use Newton with
    // precision doubling on series of this relative length.
    auto mul_trunc = [&](const std::vector<mpq_class>& a, const std::vector<mpq_class>& b,
                         long len) {
        std::vector<mpq_class> out(size_t(len), kZero);
        mpq_class t;
        for (long i = 0; i < long(a.size()) && i < len; ++i) {
            if (a[size_t(i)] == 0) continue;
            long jmax = std::min<long>(long(b.size()), len - i);
            for (long j = 0; j < jmax; ++j) {
                if (b[size_t(j)] == 0) continue;
                t = a[size_t(i)] * b[size_t(j)];
                out[size_t(i + j)] += t;
            }
        }
        return out;
    };
    auto inv_trunc = [&](const std::vector<mpq_class>& a, long len) {
        std::vector<mpq_class> out(size_t(len), kZero);
        mpq_class i0 = 1 / a[0], acc, t;
        out[0] = i0;
        for (long m = 1; m < len; ++m) {
            acc = 0;
            for (long j = 1; j <= m && j < long(a.size()); ++j) {
                if (a[size_t(j)] == 0) continue;
                t = a[size_t(j)] * out[size_t(m - j)];
                acc += t;
            }
            if (acc != 0) out[size_t(m)] = -acc * i0;
        }
        return out;
    };

    long len = 1;
    while (len < prec) {
        long nl = std::min(prec, 2 * len);
        r.resize(size_t(nl));
        // y <- y - (y^n - u)/(n y^(n-1))
        std::vector<mpq_class> yk(r.begin(), r.begin() + nl);
        std::vector<mpq_class> ynm1(size_t(nl), kZero);
        ynm1[0] = 1;
        for (int t = 0; t < n - 1; ++t) ynm1 = mul_trunc(ynm1, yk, nl);
        std::vector<mpq_class> yn = mul_trunc(ynm1, yk, nl);
        for (long i2 = 0; i2 < nl; ++i2) yn[size_t(i2)] -= (i2 < long(u.size()) ? u[size_t(i2)] : kZero);
        std::vector<mpq_class> denom = ynm1;
        for (auto& x : denom) x *= n;
        std::vector<mpq_class> corr = mul_trunc(yn, inv_trunc(denom, nl), nl);
        for (long i2 = 0; i2 < nl; ++i2) r[size_t(i2)] -= corr[size_t(i2)];
        len = nl;
    }
    for (auto& x : r) x *= r0;
    QSeries out(val24_ / n, val24_ / n + prec, std::move(r));
    out.normalize();
    return out;
}

QSeries QSeries::dq() const {
    QSeries r = *this;
    for (size_t i = 0; i < r.c_.size(); ++i) {
        mpq_class m(r.val24_ + long(i), 24);
        m.canonicalize();
        r.c_[i] *= m;
    }
    r.normalize();
    return r;
}

QSeries QSeries::subst_qk(int k) const {
    if (k <= 0) throw error("subst_qk needs k >= 1");
    std::vector<mpq_class> c(c_.size() ? size_t((c_.size() - 1) * k + 1) : 0, kZero);
    for (size_t i = 0; i < c_.size(); ++i) c[i * k] = c_[i];
    QSeries r(val24_ * k, lim24_ * k, std::move(c));
    r.normalize();
    return r;
}

QSeries QSeries::truncated(long lim24) const {
    QSeries r = *this;
    if (lim24 < r.lim24_) {
        r.lim24_ = lim24;
        r.normalize();
    }
    return r;
}

bool QSeries::integer_coefficients() const {
    for (const auto& x : c_)
        if (x.get_den() != 1) return false;
    return true;
}

std::vector<std::pair<long, mpq_class>> QSeries::nonzero() const {
    std::vector<std::pair<long, mpq_class>> out;
    for (size_t i = 0; i < c_.size(); ++i)
        if (c_[i] != 0) out.emplace_back(val24_ + long(i), c_[i]);
    return out;
}

QSeries::EvalResult QSeries::eval(std::complex<long double> tau) const {
    EvalResult res{0.0L, 0.0L};
    const long double two_pi = 2.0L * acosl(-1.0L);
    std::complex<long double> w = std::complex<long double>(0.0L, two_pi / 24.0L) * tau;
    long double s = expl(-two_pi * tau.imag() / 24.0L); // |q|^(1/24)

    // Track coefficient growth in the trailing window to extrapolate the
    // truncated tail: |c_n| <= A g^(n - n_A) for n past the window.
    long window = std::max(240L, (lim24_ - val24_) * 3 / 10);
    long double g = 1.0L, amag = 0.0L, prev_mag = 0.0L;
    long aexp = val24_, prev_e = 0;
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        long e = val24_ + long(i);
        std::complex<long double> term =
            (long double)c_[i].get_d() * std::exp(w * (long double)e);
        res.value += term;
        long double mag = fabsl((long double)c_[i].get_d());
        if (e >= lim24_ - window) {
            if (prev_mag > 0 && mag > prev_mag)
                g = std::max(g, powl(mag / prev_mag, 1.0L / (long double)(e - prev_e)));
            if (mag > 0) {
                amag = mag;
                aexp = e;
            }
        }
        if (mag > 0) {
            prev_mag = mag;
            prev_e = e;
        }
    }
    if (amag == 0) { // nothing near the edge: assume O(1) coefficients beyond
        amag = std::max(1.0L, prev_mag);
        aexp = prev_e;
    }
    long double rho = g * s;
    if (rho >= 1.0L) {
        res.tail_bound = INFINITY;
    } else {
        // sum_{n >= lim} A g^(n-aexp) s^n = A g^(lim-aexp) s^lim / (1 - g s)
        long double lead =
            amag * expl((long double)(lim24_ - aexp) * logl(g) +
                        (long double)lim24_ * logl(s));
        res.tail_bound = lead / (1 - rho);
    }
    return res;
}

std::string QSeries::to_string(long upto24) const {
    std::string out;
    for (auto& [e, c] : nonzero()) {
        if (e >= upto24) break;
        if (!out.empty()) out += " + ";
        out += c.get_str();
        out += "*q^(" + std::to_string(e) + "/24)";
    }
    return out.empty() ? "0" : out;
}

QSeries eta_qexp(int a, long lim24) {
    if (a <= 0) throw error("eta scale must be positive");
    if (lim24 < 24) throw error("eta_qexp needs truncation >= 24 grid units");
    // q^(a/24) sum_k (-1)^k q^(a k(3k-1)/2), pentagonal numbers
    std::vector<mpq_class> c(size_t(std::max(0L, lim24 - a)), mpq_class(0));
    for (long k = 0;; k = (k <= 0) ? 1 - k : -k) { // 0, 1, -1, 2, -2, ...
        long gp = k * (3 * k - 1) / 2;
        long e = a + 24 * a * gp;
        if (e >= lim24) {
            if (k > 0) break; // pentagonal exponents grow monotonically in |k|
            continue;
        }
        c[size_t(e - a)] = (std::labs(k) % 2 == 0) ? 1 : -1;
    }
    return QSeries::from_coeffs(a, lim24, std::move(c));
}

bool series_equal(const QSeries& a, const QSeries& b, long upto24) {
    long lim = std::min(a.lim24(), b.lim24());
    if (lim < upto24 && a.lim24() < upto24 && b.lim24() < upto24)
        throw incomparable_truncation("both series truncated before comparison bound");
    long stop = std::min(upto24, lim);
    QSeries d = a - b;
    if (d.is_zero()) return true;
    return d.val24() >= stop;
}

long gamma0_index(long level) {
    long idx = level;
    long n = level;
    for (long p = 2; p * p <= n; ++p)
        if (n % p == 0) {
            idx = idx / p * (p + 1);
            while (n % p == 0) n /= p;
        }
    if (n > 1) idx = idx / n * (n + 1);
    return idx;
}

long sturm_bound(int weight, long level) {
    if (level < 1) throw error("sturm_bound: level must be >= 1");
    long idx = gamma0_index(level);
    return (weight * idx + 11) / 12;
}

std::complex<long double> eval_at_tau(const QSeries& s, std::complex<long double> tau,
                                      long double tol) {
    if (tau.imag() <= 0) throw error("eval_at_tau requires Im(tau) > 0");
    auto r = s.eval(tau);
    if (!(r.tail_bound <= tol))
        throw insufficient_truncation("estimated tail " + std::to_string((double)r.tail_bound) +
                                      " exceeds tolerance");
    return r.value;
}

QSeries eisenstein_g(int weight, int d, long lim24) {
    if (weight != 2 && weight != 4) throw error("eisenstein_g: weight must be 2 or 4");
    long nmax = (lim24 - 1) / (24 * d);
    if (nmax < 1) return QSeries::zero(lim24);
    std::vector<mpq_class> c(size_t(24 * d * nmax - 24 * d + 1), mpq_class(0));
    for (long n = 1; n <= nmax; ++n) {
        mpz_class sig = 0;
        for (long dv = 1; dv * dv <= n; ++dv)
            if (n % dv == 0) {
                long q = n / dv;
                auto p = [&](long x) {
                    mpz_class b(x);
                    return weight == 2 ? b : b * b * b;
                };
                sig += p(dv);
                if (q != dv) sig += p(q);
            }
        c[size_t(24 * d * (n - 1))] = mpq_class(sig);
    }
    return QSeries::from_coeffs(24 * d, lim24, std::move(c));
}

QSeries horner_compose(const std::vector<mpq_class>& coef, const QSeries& t) {
    if (t.val24() < 1) throw error("horner_compose requires positive valuation");
    QSeries acc = QSeries::zero(t.lim24() + t.val24());
    for (size_t i = coef.size(); i-- > 0;) {
        acc = acc * t;
        if (coef[i] != 0) acc = acc + QSeries::constant(coef[i], acc.lim24());
    }
    return acc;
}

} // namespace mahler
