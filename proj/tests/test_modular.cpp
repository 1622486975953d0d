#include "doctest.h"

#include "mahler/modular.hpp"

using namespace mahler;

namespace {
ModularCache& cache() {
    static ModularCache c(Registry::instance(), 120); // enough for unit tests
    return c;
}
} // namespace

TEST_CASE("hauptmodul q-expansions") {
    const auto& v4 = cache().context("V4");
    // 2A McKay-Thompson: q^-1 + 104 + 4372 q + 96256 q^2 + ...
    CHECK(v4.haupt.coeff(-1) == 1);
    CHECK(v4.haupt.coeff(0) == 104);
    CHECK(v4.haupt.coeff(1) == 4372);
    CHECK(v4.haupt.coeff(2) == 96256);

    const auto& v8 = cache().context("V8");
    CHECK(v8.haupt.coeff(-1) == 1);
    CHECK(v8.haupt.coeff(0) == 24);
    CHECK(v8.haupt.integer_coefficients());

    // V2 carries j itself
    const auto& v2 = cache().context("V2");
    CHECK(v2.haupt.coeff(0) == 744);
    CHECK(v2.haupt.coeff(1) == 196884);

    // V4's h^12 has a half-integral leading exponent; the square lives on the
    // integer grid
    for (auto& [e, c] : v4.haupt.nonzero()) CHECK(e % 24 == 0);
}

TEST_CASE("mirror maps are integral with unit leading term") {
    const auto& reg = Registry::instance();
    for (const auto& fam : reg.families()) {
        if (fam.label == "B1") continue; // no Eisenstein data; not asserted
        CAPTURE(fam.label);
        const auto& ctx = cache().context(fam.label);
        CHECK(ctx.mirror.val24() == 24);
        CHECK(ctx.mirror.coeff(1) == 1);
        CHECK(ctx.mirror.integer_coefficients());
        // c(q) t(q) = 1
        QSeries prod = ctx.haupt * ctx.mirror;
        CHECK(series_equal(prod, QSeries::constant(1, prod.lim24()), prod.lim24()));
    }
}

TEST_CASE("u0 and e fits agree with the registry combos") {
    const auto& reg = Registry::instance();
    for (const auto& fam : reg.families()) {
        if (!fam.has_combos) continue;
        CAPTURE(fam.label);
        const auto& ctx = cache().context(fam.label); // build throws on mismatch
        CHECK(ctx.e_beta.size() == fam.divisors().size());
        CHECK(ctx.u0_is_eisenstein == !fam.u0_theta);
        mpq_class sum(0);
        for (auto& b : ctx.e_beta) sum += b;
        CHECK(sum == 240);
    }
}

TEST_CASE("e coefficients for V4 and V28") {
    const auto& v4 = cache().context("V4");
    CHECK(v4.e.coeff(0) == 1);
    CHECK(v4.e.coeff(1) == -80);
    CHECK(v4.e.coeff(2) == -400);
    // V28 combo: (-1,-1,1,1) over (1,2,7,14)
    const auto& reg = Registry::instance();
    const auto& v28 = reg.family("V28");
    std::vector<mpq_class> expect{-1, -1, 1, 1};
    CHECK(v28.e_combo == expect);
}

TEST_CASE("mtilde series starts with e_1") {
    const auto& v8 = cache().context("V8");
    CHECK(v8.mtilde.coeff(1) == v8.e.coeff(1));
    CHECK(v8.mtilde.coeff(2) == v8.e.coeff(2) / 2);
}

TEST_CASE("hauptmodul values at CM points") {
    const auto& v24 = cache().context("V24");
    // root of [12,6,1]
    std::complex<long double> tau(-0.25L, sqrtl(3.0L) / 12.0L);
    auto c = v24.c_at(tau);
    CHECK(std::abs(c - std::complex<long double>(4.0L, 0)) < 1e-9L);

    const auto& v4 = cache().context("V4");
    std::complex<long double> tau2(-0.25L, sqrtl(7.0L) / 4.0L);
    auto c2 = v4.c_at(tau2);
    CHECK(std::abs(c2 - std::complex<long double>(81.0L, 0)) < 1e-9L);

    // c_V4(i) = 648  (tau = i is the root of [1,0,1] scaled by the level)
    auto c3 = v4.c_at({0.0L, 1.0L});
    CHECK(std::abs(c3 - std::complex<long double>(648.0L, 0)) < 1e-9L);
}

TEST_CASE("mtilde against the t-series definition") {
    // Re mtilde(tau) = -log t - sum b_n t^n / n at t = 1/c for large c
    const auto& v4 = cache().context("V4");
    std::complex<long double> tau(0.0L, 1.0L); // c = 648
    long double lhs = v4.re_mtilde(tau);
    long double t = 1.0L / 648.0L;
    long double rhs = -logl(t);
    long double tp = 1;
    for (size_t n = 1; n < v4.periods.size(); ++n) {
        tp *= t;
        long double term = (long double)v4.periods[n].get_d() * tp / (long double)n;
        rhs -= term;
        if (std::abs(term) < 1e-25L) break;
    }
    CHECK(std::abs(lhs - rhs) < 1e-11L);
}

TEST_CASE("hauptmodul inversion near i*infinity") {
    const auto& v4 = cache().context("V4");
    auto tau = invert_hauptmodul(v4, {648.0L, 0.0L});
    CHECK(std::abs(tau - std::complex<long double>(0.0L, 1.0L)) < 1e-12L);
    auto tau2 = invert_hauptmodul(v4, {-3969.0L, 0.0L});
    auto c = v4.c_at(tau2);
    CHECK(std::abs(c - std::complex<long double>(-3969.0L, 0)) < 1e-9L);
}
