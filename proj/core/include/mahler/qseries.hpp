#pragma once

#include <complex>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "mahler/errors.hpp"

namespace mahler {

/// Truncated series sum c_i q^((val24+i)/24) with exact rational
/// coefficients.  lim24 is the first unknown exponent: the series is known
/// modulo q^(lim24/24).  All arithmetic tracks lim24 so that no operation
/// ever reads past the truncation.
class QSeries {
  public:
    QSeries() : val24_(0), lim24_(0) {}
    static QSeries zero(long lim24) { return QSeries(lim24, lim24, {}); }
    static QSeries constant(const mpq_class& c, long lim24);
    static QSeries monomial(const mpq_class& c, long exp24, long lim24);
    static QSeries from_coeffs(long val24, long lim24, std::vector<mpq_class> c);

    long val24() const { return val24_; }
    long lim24() const { return lim24_; }
    bool is_zero() const;

    /// coefficient of q^(e24/24); e24 must be < lim24
    mpq_class coeff24(long e24) const;
    /// coefficient of q^n (integer exponent)
    mpq_class coeff(long n) const { return coeff24(24 * n); }

    QSeries operator+(const QSeries& o) const;
    QSeries operator-(const QSeries& o) const;
    QSeries operator*(const QSeries& o) const;
    QSeries operator-() const;
    QSeries scaled(const mpq_class& c) const;
    QSeries shifted(long e24) const; // multiply by q^(e24/24)

    QSeries inverse() const;        // leading coefficient must be nonzero
    QSeries pow_int(long n) const;  // negative n allowed
    QSeries nth_root(int n) const;  // val24 divisible by n; leading coeff an exact n-th power
    QSeries dq() const;             // q d/dq
    QSeries subst_qk(int k) const;  // q -> q^k
    QSeries truncated(long lim24) const;

    bool integer_coefficients() const;
    std::vector<std::pair<long, mpq_class>> nonzero() const; // (exp24, coeff)

    struct EvalResult {
        std::complex<long double> value;
        long double tail_bound; // estimated truncation tail, see eval_at_tau
    };
    EvalResult eval(std::complex<long double> tau) const;

    std::string to_string(long upto24) const;

  private:
    QSeries(long val24, long lim24, std::vector<mpq_class> c)
        : val24_(val24), lim24_(lim24), c_(std::move(c)) {}
    void normalize();

    long val24_;
    long lim24_;
    std::vector<mpq_class> c_;
};

/// q^(1/24) prod (1-q^(a n)) for eta(a tau); coefficients in {-1,0,1}.
QSeries eta_qexp(int scale, long lim24);

/// G_{w,d} = sum_{n>=1} sigma_{w-1}(n) q^(dn), w in {2,4}.
QSeries eisenstein_g(int weight, int d, long lim24);

/// Exact coefficient equality through min(upto24, both limits); throws
/// incomparable_truncation when neither series reaches upto24.
bool series_equal(const QSeries& a, const QSeries& b, long upto24);

/// ceil(weight * [SL2(Z) : Gamma_0(level)] / 12)
long sturm_bound(int weight, long level);
long gamma0_index(long level);

/// Evaluate sum coeffs[n] q^((val24+n)/24) at q = exp(2 pi i tau).  Throws
/// insufficient_truncation when the geometric tail estimate exceeds tol.
std::complex<long double> eval_at_tau(const QSeries& s, std::complex<long double> tau,
                                      long double tol);

/// Horner composition sum coef[m] * t^m; requires t.val24() >= 1.
QSeries horner_compose(const std::vector<mpq_class>& coef, const QSeries& t);

} // namespace mahler
