#include "mahler/modular.hpp"

#include <cmath>
#include <cstdlib>

#include "mahler/errors.hpp"

namespace mahler {

long default_trunc_q() {
    if (const char* env = std::getenv("MAHLERLAB_TRUNC"); env && *env) {
        long v = std::atol(env);
        if (v >= 24) return v;
    }
    return 200;
}

namespace {

// Fit coefficients gamma_d in series = 1 + sum_{d|N} gamma_d G_{w,d} by the
// triangular system at n = divisors of N, then verify every coefficient
// through the truncation.  Returns empty on mismatch.
std::vector<mpq_class> fit_eisenstein(const QSeries& s, int weight,
                                      const std::vector<long>& divisors, long lim24,
                                      bool* ok) {
    *ok = false;
    std::vector<mpq_class> gamma(divisors.size(), mpq_class(0));
    auto sigma = [&](long n) {
        mpz_class acc = 0;
        for (long d = 1; d * d <= n; ++d)
            if (n % d == 0) {
                auto p = [&](long x) {
                    mpz_class b(x);
                    return weight == 2 ? b : b * b * b;
                };
                acc += p(d);
                if (d != n / d) acc += p(n / d);
            }
        return acc;
    };
    if (s.coeff(0) != 1) return {};
    for (size_t i = 0; i < divisors.size(); ++i) {
        long d0 = divisors[i];
        mpq_class rhs = s.coeff(d0);
        for (size_t j = 0; j < i; ++j)
            if (d0 % divisors[j] == 0) rhs -= gamma[j] * sigma(d0 / divisors[j]);
        gamma[i] = rhs;
    }
    // full verification
    QSeries combo = QSeries::constant(1, lim24);
    for (size_t i = 0; i < divisors.size(); ++i)
        if (gamma[i] != 0)
            combo = combo + eisenstein_g(weight, int(divisors[i]), lim24).scaled(gamma[i]);
    if (!series_equal(s, combo, lim24)) return gamma; // caller inspects *ok
    *ok = true;
    return gamma;
}

} // namespace

namespace {

// u0 = sum b_m t^m for an integer series t = q + O(q^2), truncated at q^n.
// Dense mpz arrays indexed by q-power keep the big-integer arithmetic cheap.
std::vector<mpz_class> compose_periods(const std::vector<mpz_class>& b, const QSeries& t,
                                       long n) {
    std::vector<mpz_class> tv(size_t(n + 1));
    for (auto& [e24, c] : t.nonzero()) {
        if (e24 % 24 != 0 || c.get_den() != 1)
            throw data_error("mirror map is not an integer q-series");
        if (e24 / 24 <= n) tv[size_t(e24 / 24)] = c.get_num();
    }
    std::vector<mpz_class> acc(size_t(n + 1)), tpow(size_t(n + 1));
    acc[0] = b[0];
    tpow[0] = 1;
    for (long m = 1; m <= n && m < long(b.size()); ++m) {
        // tpow *= t; valuation of tpow is m, so only indices m..n matter
        std::vector<mpz_class> nt(size_t(n + 1));
        for (long i = m - 1; i <= n - 1; ++i) {
            if (tpow[size_t(i)] == 0) continue;
            for (long j = 1; i + j <= n; ++j) {
                if (tv[size_t(j)] == 0) continue;
                mpz_addmul(nt[size_t(i + j)].get_mpz_t(), tpow[size_t(i)].get_mpz_t(),
                           tv[size_t(j)].get_mpz_t());
            }
        }
        tpow = std::move(nt);
        for (long i = m; i <= n; ++i)
            if (tpow[size_t(i)] != 0)
                mpz_addmul(acc[size_t(i)].get_mpz_t(), b[size_t(m)].get_mpz_t(),
                           tpow[size_t(i)].get_mpz_t());
    }
    return acc;
}

} // namespace

FamilyContext build_family_context(const FamilyRecord& fam, long trunc_q) {
    FamilyContext ctx;
    ctx.fam = &fam;
    ctx.lim24 = 24 * trunc_q;

    ctx.haupt = fam.hauptmodul_qexp(ctx.lim24);
    ctx.mirror = ctx.haupt.inverse().truncated(ctx.lim24);
    if (ctx.mirror.val24() != 24 || ctx.mirror.coeff(1) != 1)
        throw data_error(fam.label + ": mirror map must start q + O(q^2)");

    // periods to the composition depth
    long depth = trunc_q + 2;
    std::vector<mpz_class> seed{mpz_class(1)};
    ctx.periods = extend_periods(fam.pf, seed, unsigned(depth));

    {
        auto u0v = compose_periods(ctx.periods, ctx.mirror, trunc_q - 1);
        std::vector<mpq_class> c(size_t(24 * (trunc_q - 1) + 1));
        for (long i = 0; i < long(u0v.size()); ++i)
            if (u0v[size_t(i)] != 0) c[size_t(24 * i)] = mpq_class(u0v[size_t(i)]);
        ctx.u0 = QSeries::from_coeffs(0, ctx.lim24, std::move(c));
    }

    // e = u0 * Dq t / t
    ctx.e = (ctx.u0 * ctx.mirror.dq() * ctx.mirror.inverse()).truncated(ctx.lim24);

    if (fam.has_combos) {
        auto divisors = fam.divisors();
        bool ok = false;
        ctx.e_beta = fit_eisenstein(ctx.e, 4, divisors, ctx.lim24, &ok);
        if (!ok)
            throw combo_mismatch(fam.label + ": weight-4 Eisenstein fit of e(tau) failed");
        // cross-check against the registry values: beta_d = a_d d^2
        for (size_t i = 0; i < divisors.size(); ++i) {
            mpq_class expect = fam.e_combo[i] * divisors[i] * divisors[i];
            if (ctx.e_beta[i] != expect)
                throw combo_mismatch(fam.label + ": fitted e-combo differs from registry at d=" +
                                     std::to_string(divisors[i]));
        }
        bool u0_ok = false;
        auto alpha = fit_eisenstein(ctx.u0, 2, divisors, ctx.lim24, &u0_ok);
        ctx.u0_is_eisenstein = u0_ok;
        if (u0_ok) {
            ctx.u0_alpha = alpha;
            if (fam.u0_theta)
                throw combo_mismatch(fam.label +
                                     ": registry says u0 carries a cusp form, but the "
                                     "Eisenstein fit succeeded");
            for (size_t i = 0; i < divisors.size(); ++i) {
                mpq_class expect = fam.u0_combo[i] * divisors[i];
                if (alpha[i] != expect)
                    throw combo_mismatch(fam.label +
                                         ": fitted u0-combo differs from registry at d=" +
                                         std::to_string(divisors[i]));
            }
        } else if (!fam.u0_theta) {
            throw combo_mismatch(fam.label + ": weight-2 Eisenstein fit of u0 failed");
        }
    }

    // mtilde series: sum e_n / n q^n
    {
        long nmax = (ctx.e.lim24() - 1) / 24;
        std::vector<mpq_class> c(size_t(std::max(0L, 24 * (nmax - 1) + 1)), mpq_class(0));
        for (long n = 1; n <= nmax; ++n) {
            mpq_class en = ctx.e.coeff(n);
            if (en != 0) c[size_t(24 * (n - 1))] = en / n;
        }
        ctx.mtilde = QSeries::from_coeffs(24, ctx.e.lim24(), std::move(c));
    }
    return ctx;
}

long double FamilyContext::re_mtilde(std::complex<long double> tau, long double tol) const {
    const long double two_pi = 2.0L * acosl(-1.0L);
    std::complex<long double> s = eval_at_tau(mtilde, tau, tol);
    return two_pi * tau.imag() - s.real();
}

std::complex<long double> FamilyContext::c_at(std::complex<long double> tau,
                                              long double tol) const {
    return eval_at_tau(haupt, tau, tol);
}

ModularCache::ModularCache(const Registry& reg, long trunc_q)
    : reg_(reg), trunc_q_(trunc_q > 0 ? trunc_q : default_trunc_q()) {}

const FamilyContext& ModularCache::context(const std::string& label) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(label);
    if (it == cache_.end()) {
        auto ctx = std::make_unique<FamilyContext>(
            build_family_context(reg_.family(label), trunc_q_));
        it = cache_.emplace(label, std::move(ctx)).first;
    }
    return *it->second;
}

std::complex<long double> invert_hauptmodul(const FamilyContext& ctx,
                                            std::complex<long double> target) {
    // Newton on c(q) - target, seeded at the first-order inverse q = 1/target.
    const long double two_pi = 2.0L * acosl(-1.0L);
    if (std::abs(target) < 1e-12L)
        throw tolerance_unreachable("cannot seed hauptmodul inversion at c = 0");
    std::complex<long double> q = 1.0L / target;
    QSeries dc = ctx.haupt.dq();
    auto q_to_tau = [&](std::complex<long double> qq) {
        return std::complex<long double>(std::arg(qq) / two_pi,
                                         -logl(std::abs(qq)) / two_pi);
    };
    for (int iter = 0; iter < 80; ++iter) {
        std::complex<long double> tau = q_to_tau(q);
        if (tau.imag() < 0.02L) throw tolerance_unreachable("hauptmodul inversion left H");
        std::complex<long double> f = ctx.haupt.eval(tau).value - target;
        std::complex<long double> df = dc.eval(tau).value / q; // d/dq = Dq / q
        std::complex<long double> step = f / df;
        // damping for the first iterations
        if (iter < 4 && std::abs(step) > 0.5L * std::abs(q)) step *= 0.5L;
        q -= step;
        if (std::abs(step) <= 1e-15L * std::abs(q)) {
            std::complex<long double> t = q_to_tau(q);
            std::complex<long double> res = ctx.haupt.eval(t).value - target;
            if (std::abs(res) > 1e-8L * (1 + std::abs(target)))
                throw tolerance_unreachable("hauptmodul inversion stalled");
            return t;
        }
    }
    throw tolerance_unreachable("hauptmodul inversion did not converge");
}

} // namespace mahler
