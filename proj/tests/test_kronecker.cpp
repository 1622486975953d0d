#include "doctest.h"

#include <cmath>

#include "mahler/kronecker.hpp"
#include "mahler/theta_lfun.hpp"

using namespace mahler;

namespace {
const long double kPi = acosl(-1.0L);
const long double kEightPi3 = 8 * kPi * kPi * kPi;

ModularCache& cache() {
    static ModularCache c(Registry::instance(), 140);
    return c;
}
} // namespace

TEST_CASE("H_1(i) equals the Epstein value") {
    // at tau = i the m<->n symmetry turns H_1 into zeta_{[1,0,1]}(2)
    KroneckerSum h = h_d(1, {0.0L, 1.0L}, 1e-10L);
    LValue z = epstein_zeta2(QuadForm{1, 0, 1}, 1e-11L);
    CHECK(std::abs(h.value - z.value) < 1e-9L);
}

TEST_CASE("H_d(tau) = H_1(d tau)") {
    std::complex<long double> tau(0.3L, 0.9L);
    for (int d : {2, 3, 5}) {
        KroneckerSum a = h_d(d, tau, 1e-10L);
        KroneckerSum b = h_d(1, (long double)d * tau, 1e-10L);
        CHECK(std::abs(a.value - b.value) < 1e-9L);
    }
}

TEST_CASE("H_d real on the imaginary axis") {
    KroneckerSum h = h_d(3, {0.0L, 0.7L}, 1e-10L);
    CHECK(std::isfinite((double)h.value));
}

TEST_CASE("lattice formula vs q-series mtilde") {
    for (const char* label : {"V4", "V8", "V24", "B6b", "Q"}) {
        CAPTURE(label);
        const auto& ctx = cache().context(label);
        for (auto tau : {std::complex<long double>(0.17L, 1.05L),
                         std::complex<long double>(-0.31L, 0.85L)}) {
            long double qs = ctx.re_mtilde(tau);
            long double lat = mahler_lattice(ctx, tau, {1e-10L, false});
            CHECK(std::abs(qs - lat) < 1e-8L);
        }
    }
}

TEST_CASE("fundamental domain guard reproduces the V4 caution") {
    const auto& ctx = cache().context("V4");
    std::complex<long double> good(0.0L, 1.0L / sqrtl(2.0L));
    std::complex<long double> bad = (good - 1.0L) / 3.0L;
    // both map to c = 256
    CHECK(std::abs(ctx.c_at(good) - std::complex<long double>(256, 0)) < 1e-8L);
    CHECK(std::abs(ctx.c_at(bad) - std::complex<long double>(256, 0)) < 1e-8L);
    CHECK_NOTHROW(mahler_lattice(ctx, good, {1e-9L, false}));
    CHECK_THROWS_AS(mahler_lattice(ctx, bad, {1e-9L, false}), outside_fundamental_domain);
    // the override reproduces the out-of-domain value, which differs
    long double v_bad = mahler_lattice(ctx, bad, {1e-9L, true});
    long double v_good = mahler_lattice(ctx, good, {1e-9L, false});
    CHECK(std::abs(v_bad - v_good) > 1e-3L);
    // and each agrees with its own q-series value
    CHECK(std::abs(v_bad - ctx.re_mtilde(bad)) < 1e-8L);
}

TEST_CASE("Prop dHd instances") {
    // (Im tau/(2pi)^3) d^2 H_d(tau_Q) = (a sqrt|D|/(2pi)^3)(2L(Theta_{Q/d},3) + zeta_{Q/d}(2)/2)
    struct Inst { long a, k, c, d; };
    for (auto [a, k, c, d] : std::vector<Inst>{{14, 1, 5, 1},
                                               {14, 1, 5, 2},
                                               {14, 1, 5, 7},
                                               {14, 1, 5, 14},
                                               {4, 1, 5, 2},
                                               {4, 1, 5, 4},
                                               {6, 1, 1, 3}}) {
        CAPTURE(a); CAPTURE(k); CAPTURE(c); CAPTURE(d);
        QuadForm q{a, k * a, c};
        auto pt = cm_point(q);
        long double absD = (long double)mpz_class(-q.disc()).get_d();
        KroneckerSum h = h_d(d, pt.tau, 1e-10L);
        long double lhs = pt.tau.imag() / kEightPi3 * d * d * h.value;
        QuadForm qd{q.a / d, q.b, q.c * d};
        LValue lt = l_theta3(qd, 1e-11L);
        LValue ze = epstein_zeta2(qd, 1e-11L);
        long double rhs = (long double)a * sqrtl(absD) / kEightPi3 *
                          (2 * lt.value + 0.5L * ze.value);
        CHECK(std::abs(lhs - rhs) < 1e-7L);
    }
}

TEST_CASE("Prop deH instances") {
    // Q = [cde, b, c]: (Im/(2pi)^3)(-d^2 H_d + e^2 H_e) = (sqrt|D|/2pi)^3 L(Theta_{Q/d},3)/c
    struct Inst { long c, d, e, b; };
    for (auto [c, d, e, b] : std::vector<Inst>{{1, 2, 3, 1},
                                               {1, 3, 2, 1},
                                               {2, 2, 3, 1},
                                               {1, 2, 5, 3},
                                               {3, 1, 2, 1}}) {
        CAPTURE(c); CAPTURE(d); CAPTURE(e); CAPTURE(b);
        QuadForm q{c * d * e, b, c};
        REQUIRE(q.pos_def());
        auto pt = cm_point(q);
        long double absD = (long double)mpz_class(-q.disc()).get_d();
        KroneckerSum hd = h_d(int(d), pt.tau, 1e-11L);
        KroneckerSum he = h_d(int(e), pt.tau, 1e-11L);
        long double lhs =
            pt.tau.imag() / kEightPi3 * (-(long double)(d * d) * hd.value +
                                         (long double)(e * e) * he.value);
        QuadForm qd{q.a / d, q.b, q.c * d};
        LValue lt = l_theta3(qd, 1e-11L);
        long double rhs = powl(sqrtl(absD) / (2 * kPi), 3) * lt.value / (long double)c;
        CHECK(std::abs(lhs - rhs) < 1e-7L);
    }
}

TEST_CASE("Corollary dHd at D = -84") {
    // full character combination against 2L(f_phi,3) + L(f_phi,1),2)/2 with the
    // genus factorization for the weight-1 part
    QuadForm q{14, 14, 5};
    auto pt = cm_point(q);
    std::vector<long> delta{1, 2, 7, 14};
    std::vector<QuadForm> reps;
    for (long d : delta) reps.push_back(QuadForm{q.a / d, q.b, q.c * d});
    // phi = chi_{12,-7}: values on (Q, Q/2, Q/7, Q/14) = (-1, -1, 1, 1)
    std::vector<int> phi{-1, -1, 1, 1};
    long double lhs = 0;
    for (size_t i = 0; i < delta.size(); ++i) {
        KroneckerSum h = h_d(int(delta[i]), pt.tau, 1e-10L);
        lhs += phi[i] * (long double)(delta[i] * delta[i]) * h.value;
    }
    lhs *= pt.tau.imag() / kEightPi3;

    long double l3 = 0, l1 = 0;
    for (size_t i = 0; i < reps.size(); ++i) {
        l3 += phi[i] * l_theta3(reps[i], 1e-11L).value;
        l1 += phi[i] * epstein_zeta2(reps[i], 1e-11L).value;
    }
    // Theorem genusch: sum phi zeta = w(D) L(chi_12,2) L(chi_-7,2)
    LValue a = dirichlet_l2(mpz_class(12));
    LValue b = dirichlet_l2(mpz_class(-7));
    CHECK(std::abs(l1 - 2 * a.value * b.value) < 1e-8L);

    long double rhs = 14.0L * sqrtl(84.0L) / kEightPi3 * (2 * l3 + 0.5L * l1);
    CHECK(std::abs(lhs - rhs) < 1e-7L);
}
