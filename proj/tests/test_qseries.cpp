#include "doctest.h"

#include "mahler/qseries.hpp"

using namespace mahler;

TEST_CASE("eta expansion, pentagonal numbers") {
    QSeries eta = eta_qexp(1, 24 * 120);
    CHECK(eta.val24() == 1);
    CHECK(eta.coeff24(1) == 1);
    CHECK(eta.coeff24(1 + 24) == -1);
    CHECK(eta.coeff24(1 + 48) == -1);
    CHECK(eta.coeff24(1 + 24 * 5) == 1);
    CHECK(eta.coeff24(1 + 24 * 7) == 1);
    CHECK(eta.coeff24(1 + 24 * 3) == 0);
    // eta^24 = q - 24 q^2 + 252 q^3 - 1472 q^4 + ... (Ramanujan tau)
    QSeries d = eta.pow_int(24);
    CHECK(d.coeff(1) == 1);
    CHECK(d.coeff(2) == -24);
    CHECK(d.coeff(3) == 252);
    CHECK(d.coeff(4) == -1472);
    CHECK(d.coeff(5) == 4830);
}

TEST_CASE("eisenstein series") {
    // E4 = 1 + 240 G_{4,1}: q-coefficient 240, q^2: 240 sigma3(2) = 2160
    QSeries g41 = eisenstein_g(4, 1, 24 * 20);
    CHECK(g41.coeff(1) == 1);
    CHECK(g41.coeff(2) == 9);
    CHECK(g41.coeff(3) == 28);
    QSeries g21 = eisenstein_g(2, 1, 24 * 20);
    CHECK(g21.coeff(2) == 3);
    CHECK(g21.coeff(4) == 7);
}

TEST_CASE("arithmetic identities") {
    long lim = 24 * 60;
    QSeries a = eta_qexp(1, lim);
    QSeries inv = a.inverse();
    QSeries one = a * inv;
    CHECK(one.coeff(0) == 1);
    CHECK(series_equal(one, QSeries::constant(1, one.lim24()), one.lim24()));

    QSeries r = a.pow_int(3).nth_root(3);
    CHECK(series_equal(r, a, r.lim24()));

    // Dq on q^(1/24): eigenvalue 1/24
    QSeries dq = a.dq();
    CHECK(dq.coeff24(1) == mpq_class(1, 24));

    QSeries sub = a.subst_qk(2);
    CHECK(sub.val24() == 2);
    CHECK(sub.coeff24(2 + 48) == -1);
}

TEST_CASE("sturm bounds") {
    CHECK(gamma0_index(84) == 192);
    CHECK(sturm_bound(3, 84) == 48);
    CHECK(sturm_bound(2, 1) == 1);
    CHECK(sturm_bound(3, 7) == 2);
    CHECK(sturm_bound(3, 112) == 48);
}

TEST_CASE("eval with tail control") {
    QSeries one = QSeries::constant(1, 24 * 50);
    auto v = eval_at_tau(one, {0.0L, 1.0L}, 1e-12L);
    CHECK(std::abs(v - std::complex<long double>(1, 0)) < 1e-15L);

    QSeries eta = eta_qexp(1, 24 * 80);
    // eta(i) = Gamma(1/4) / (2 pi^(3/4))
    long double expect = 0.7682254223260567L;
    auto e = eval_at_tau(eta, {0.0L, 1.0L}, 1e-12L);
    CHECK(std::abs(e.real() - expect) < 1e-12L);
    CHECK_THROWS_AS(eval_at_tau(eta, {0.0L, 0.001L}, 1e-12L), insufficient_truncation);
}

TEST_CASE("incomparable truncation") {
    QSeries a = QSeries::constant(1, 24);
    QSeries b = QSeries::constant(1, 24);
    CHECK_THROWS_AS(series_equal(a, b, 24 * 10), incomparable_truncation);
}
