#include "doctest.h"

#include <cmath>

#include "mahler/theta_lfun.hpp"

using namespace mahler;

namespace {
const long double kPi = acosl(-1.0L);
const long double kCatalan = 0.9159655941772190150546L;
}

TEST_CASE("theta series r2 and weight 3") {
    ThetaSeries t1 = theta_qexp(QuadForm{1, 0, 1}, 1, 40);
    // 1 + 4q + 4q^2 + 0q^3 + 4q^4 + 8q^5
    CHECK(t1.coeff[0] == 1);
    CHECK(t1.coeff[1] == 4);
    CHECK(t1.coeff[2] == 4);
    CHECK(t1.coeff[3] == 0);
    CHECK(t1.coeff[4] == 4);
    CHECK(t1.coeff[5] == 8);

    ThetaSeries t3 = theta_qexp(QuadForm{1, 0, 1}, 3, 40);
    CHECK(t3.coeff[1] == 0); // (m^2-n^2)/2 cancels on the four units
    // brute-force oracle for a generic form
    QuadForm q{2, 1, 3};
    ThetaSeries t = theta_qexp(q, 3, 60);
    for (long k = 0; k <= 60; ++k) {
        mpz_class acc = 0;
        for (long mm = -20; mm <= 20; ++mm)
            for (long nn = -20; nn <= 20; ++nn)
                if (q.eval(mm, nn) == k) acc += q.a * mm * mm - q.c * nn * nn;
        CHECK(t.coeff[size_t(k)] * 2 == acc);
    }
}

TEST_CASE("theta kernel of [a,ka,c] forms vanishes (Lemma ka instances)") {
    // Theta_{Q,P} = 0 for P = [0,2,k]: sum (2mn + k n^2) q^Q = 0
    for (auto [a, k, c] : std::vector<std::array<long, 3>>{
             {14, 1, 5}, {7, 2, 10}, {1, 0, 21}, {2, 1, 11}, {3, 1, 7},
             {5, 2, 13}, {1, 1, 2}, {4, 1, 5}, {2, 3, 17}, {6, 1, 7}}) {
        QuadForm q{a, k * a, c};
        REQUIRE(q.pos_def());
        long trunc = 2000;
        std::vector<mpz_class> acc(size_t(trunc + 1), mpz_class(0));
        double ad = double(a), bd = double(k * a), absD = -q.disc().get_d();
        long nmax = long(std::sqrt(4 * ad * trunc / absD)) + 2;
        for (long nn = -nmax; nn <= nmax; ++nn) {
            double mid = -bd * nn / (2 * ad);
            double half = std::sqrt(std::max(0.0, (trunc - absD * nn * nn / (4 * ad)) / ad)) + 1;
            for (long mm = long(mid - half); mm <= long(mid + half) + 1; ++mm) {
                mpz_class v = q.eval(mm, nn);
                if (v > trunc) continue;
                acc[v.get_ui()] += 2 * mm * nn + k * nn * nn;
            }
        }
        for (auto& x : acc) CHECK(x == 0);
    }
}

TEST_CASE("epstein zeta oracle: 4 zeta(2) beta(2)") {
    LValue z = epstein_zeta2(QuadForm{1, 0, 1}, 1e-10L);
    long double expect = 4.0L * (kPi * kPi / 6.0L) * kCatalan;
    CHECK(std::abs(z.value - expect) < 1e-9L);
    CHECK(z.err_bound < 1e-9L);

    // scaling: zeta_{2Q}(2) = zeta_Q(2)/4
    LValue z2 = epstein_zeta2(QuadForm{2, 0, 2}, 1e-10L);
    CHECK(std::abs(z2.value - expect / 4) < 1e-9L);
}

TEST_CASE("L(Theta,3) evaluators agree") {
    CHECK(std::abs(l_theta3(QuadForm{1, 0, 1}, 1e-10L).value) < 1e-9L);
    for (auto f : {QuadForm{1, 0, 21}, QuadForm{2, 14, 35}, QuadForm{1, 1, 2},
                   QuadForm{3, 2, 4}}) {
        CAPTURE(f.str());
        LValue a = l_theta3(f, 1e-10L);
        LValue b = l_theta3_integral(f, 1e-10L);
        CHECK(std::abs(a.value - b.value) < 1e-8L);
    }
}

TEST_CASE("dirichlet L(chi,2) values") {
    LValue cat = dirichlet_l2(mpz_class(-4));
    CHECK(std::abs(cat.value - kCatalan) < 1e-12L);
    LValue z1 = dirichlet_l2(mpz_class(1));
    CHECK(std::abs(z1.value - kPi * kPi / 6) < 1e-15L);
    // d = 4: conductor 1, Euler factor at 2
    LValue z4 = dirichlet_l2(mpz_class(4));
    CHECK(std::abs(z4.value - 0.75L * kPi * kPi / 6) < 1e-14L);
    // d = -12 = 4 * (-3): (1 - chi_{-3}(2)/4) L(chi_{-3}, 2)
    LValue zm12 = dirichlet_l2(mpz_class(-12));
    LValue zm3 = dirichlet_l2(mpz_class(-3));
    CHECK(std::abs(zm12.value - 1.25L * zm3.value) < 1e-14L);
    // odd modulus forbidden
    CHECK_THROWS_AS(dirichlet_l2(mpz_class(-5)), invalid_character_modulus);
    CHECK_THROWS_AS(dirichlet_l2(mpz_class(6)), invalid_character_modulus);
}

TEST_CASE("CM form assembly at level 84 (worked example)") {
    auto forms = assemble_cm_forms(mpz_class(-84));
    REQUIRE(forms.size() == 4);
    for (auto& g : forms) {
        CHECK(g.is_new);
        CHECK(g.qexp[1] == 1);
    }
    // q - 2q^2 - 3q^3, q - 2q^2 + 3q^3, q + 2q^2 - 3q^3, q + 2q^2 + 3q^3
    CHECK(forms[0].letter == 'a');
    CHECK(forms[0].qexp[2] == -2);
    CHECK(forms[0].qexp[3] == -3);
    CHECK(forms[1].qexp[2] == -2);
    CHECK(forms[1].qexp[3] == 3);
    CHECK(forms[2].qexp[2] == 2);
    CHECK(forms[2].qexp[3] == -3);
    CHECK(forms[3].qexp[2] == 2);
    CHECK(forms[3].qexp[3] == 3);
}

TEST_CASE("assembled form is independent of the representative") {
    // same class, two suitable shapes: [1,0,21] and [1,14,70]-type data
    ThetaSeries a = theta_qexp(QuadForm{1, 0, 21}, 3, 300);
    ThetaSeries b = theta_qexp(QuadForm{1, 14, 70}, 3, 300);
    CHECK(a.coeff == b.coeff);
    // the reversed triple carries the opposite spherical weight
    ThetaSeries c = theta_qexp(QuadForm{14, 14, 5}, 3, 300);
    ThetaSeries d = theta_qexp(QuadForm{5, 14, 14}, 3, 300);
    for (size_t k = 0; k < c.coeff.size(); ++k) CHECK(c.coeff[k] == -d.coeff[k]);
}

TEST_CASE("oldform relations via Sturm bounds") {
    // h(-28) = 1: the single induced form is Theta_[1,0,7], an oldform equal
    // to g7(tau) + 3 g7(2tau) + 8 g7(4tau)
    auto forms28 = assemble_cm_forms(mpz_class(-28));
    REQUIRE(forms28.size() == 1);
    CHECK(!forms28[0].is_new);
    auto forms7 = assemble_cm_forms(mpz_class(-7));
    long bound28 = sturm_bound(3, 28);
    for (long k = 1; k <= bound28; ++k) {
        mpz_class rhs = 0;
        for (auto [n, co] : std::vector<std::pair<long, long>>{{1, 1}, {2, 3}, {4, 8}})
            if (k % n == 0) rhs += co * forms7[0].qexp[size_t(k / n)];
        CHECK(forms28[0].qexp[size_t(k)] == rhs);
    }

    // explicit check of the 112b relation to the Sturm bound of (3,112)
    auto forms112 = assemble_cm_forms(mpz_class(-112));
    const CMForm* g112b = nullptr;
    for (auto& g : forms112)
        if (!g.is_new) g112b = &g;
    REQUIRE(g112b != nullptr);
    long bound = sturm_bound(3, 112);
    for (long k = 1; k <= bound; ++k) {
        mpz_class rhs = 0;
        for (auto [n, co] : std::vector<std::pair<long, long>>{
                 {1, 1}, {2, 3}, {4, 12}, {8, 24}, {16, 64}})
            if (k % n == 0) rhs += co * forms7[0].qexp[size_t(k / n)];
        CHECK(g112b->qexp[size_t(k)] == rhs);
    }
}

TEST_CASE("level 44 (odd class group) via partial Hecke sums") {
    // Cl(-44) = Z/3: single rational form, the oldform g11(tau) + 8 g11(4tau)
    auto forms44 = assemble_cm_forms(mpz_class(-44));
    REQUIRE(forms44.size() == 1);
    CHECK(!forms44[0].is_new);
    auto forms11 = assemble_cm_forms(mpz_class(-11));
    long bound = sturm_bound(3, 44);
    for (long k = 1; k <= bound; ++k) {
        mpz_class rhs = 0;
        for (auto [n, co] : std::vector<std::pair<long, long>>{{1, 1}, {4, 8}})
            if (k % n == 0) rhs += co * forms11[0].qexp[size_t(k / n)];
        CHECK(forms44[0].qexp[size_t(k)] == rhs);
    }
}

TEST_CASE("genus character Epstein factorization at D = -20") {
    // zeta_{[1,0,5]}(2) - zeta_{[2,2,3]}(2) = 2 L(chi_5, 2) L(chi_{-4}, 2)
    LValue za = epstein_zeta2(QuadForm{1, 0, 5}, 1e-10L);
    LValue zb = epstein_zeta2(QuadForm{2, 2, 3}, 1e-10L);
    LValue l5 = dirichlet_l2(mpz_class(5));
    LValue lm4 = dirichlet_l2(mpz_class(-4));
    CHECK(std::abs((za.value - zb.value) - 2 * l5.value * lm4.value) < 1e-8L);
}

TEST_CASE("l_pair and l_tilde plumbing") {
    LValue p = l_pair(mpz_class(4), mpz_class(-7));
    LValue a = dirichlet_l2(mpz_class(4));
    LValue b = dirichlet_l2(mpz_class(-7));
    long double scale = sqrtl(28.0L) / powl(2 * kPi, 3);
    CHECK(std::abs(p.value - scale * a.value * b.value) < 1e-15L);
    CHECK_THROWS_AS(l_pair(mpz_class(4), mpz_class(8)), error);

    LValueCache cache;
    auto c7 = cache.candidates("7");
    REQUIRE(c7.size() == 1);
    auto c36 = cache.candidates("36");
    CHECK(c36.size() == 2); // letterless with two newforms: both candidates
    auto c84d = cache.candidates("84d");
    REQUIRE(c84d.size() == 1);
    CHECK(c84d[0]->letter == 'd');
}
