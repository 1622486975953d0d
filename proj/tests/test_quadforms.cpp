#include "doctest.h"

#include <numeric>
#include <set>

#include "mahler/quadforms.hpp"

using namespace mahler;

TEST_CASE("reduction") {
    QuadForm f{1, 14, 70};
    CHECK(reduce(f) == QuadForm{1, 0, 21});
    CHECK(reduce(QuadForm{1, 0, 21}) == QuadForm{1, 0, 21});
    CHECK(reduce(f).disc() == -84);
    // [14,14,5] reduces within discriminant -84 but to a different class
    QuadForm g = reduce(QuadForm{14, 14, 5});
    CHECK(g.disc() == -84);
    CHECK(!(g == QuadForm{1, 0, 21}));
    CHECK_THROWS_AS(reduce(QuadForm{1, 0, -3}), not_positive_definite);
    // reduce is idempotent on a spread of forms
    for (long a = 1; a <= 8; ++a)
        for (long b = -8; b <= 8; ++b)
            for (long c = 1; c <= 8; ++c) {
                QuadForm q{a, b, c};
                if (!q.pos_def()) continue;
                QuadForm r = reduce(q);
                CHECK(is_reduced(r));
                CHECK(reduce(r) == r);
                CHECK(r.disc() == q.disc());
            }
}

TEST_CASE("class group of discriminant -84") {
    FormClassGroup G = class_group(mpz_class(-84));
    CHECK(G.order() == 4);
    CHECK(G.is_elementary_two());
    // the four classes of the example
    CHECK(G.index_of(QuadForm{1, 14, 70}) >= 0);
    CHECK(G.index_of(QuadForm{2, 14, 35}) >= 0);
    CHECK(G.index_of(QuadForm{7, 14, 10}) >= 0);
    CHECK(G.index_of(QuadForm{14, 14, 5}) >= 0);
    std::set<int> seen{G.index_of(QuadForm{1, 14, 70}), G.index_of(QuadForm{2, 14, 35}),
                       G.index_of(QuadForm{7, 14, 10}), G.index_of(QuadForm{14, 14, 5})};
    CHECK(seen.size() == 4);
}

TEST_CASE("small class numbers") {
    CHECK(class_group(mpz_class(-3)).order() == 1);
    CHECK(class_group(mpz_class(-20)).order() == 2);
    CHECK(class_group(mpz_class(-7)).order() == 1);
    CHECK(class_group(mpz_class(-148)).order() == 2);
    CHECK_THROWS_AS(class_group(mpz_class(-5)), invalid_discriminant);
    CHECK_THROWS_AS(class_group(mpz_class(84)), invalid_discriminant);
}

TEST_CASE("every element squares into the principal genus (table discriminants)") {
    for (long D : {-84, -20, -36, -48, -120, -132, -228, -408, -708, -795}) {
        CAPTURE(D);
        FormClassGroup G = class_group(mpz_class(D));
        CHECK(G.is_elementary_two());
    }
}

TEST_CASE("kronecker character examples") {
    CHECK(kronecker_chi(-7, 37) == 1);
    CHECK(kronecker_chi(-7, 19) == -1);
    CHECK(kronecker_chi(-7, 11) == 1);
    CHECK(kronecker_chi(-7, 5) == -1);
    CHECK(kronecker_chi(mpz_class(-84), 1) == 1);
    // complete multiplicativity spot check
    for (long n = 1; n < 40; ++n)
        for (long m = 1; m < 40; ++m)
            CHECK(kronecker_chi(21, n * m) == kronecker_chi(21, n) * kronecker_chi(21, m));
}

TEST_CASE("genus characters on Cl(-84)") {
    FormClassGroup G = class_group(mpz_class(-84));
    int i1 = G.index_of(QuadForm{1, 14, 70});
    int i2 = G.index_of(QuadForm{2, 14, 35});
    int i3 = G.index_of(QuadForm{7, 14, 10});
    int i4 = G.index_of(QuadForm{14, 14, 5});

    GenusCharacter c14 = genus_character(12, -7, G);
    CHECK(c14.values[size_t(i1)] == 1);
    CHECK(c14.values[size_t(i2)] == 1);
    CHECK(c14.values[size_t(i3)] == -1);
    CHECK(c14.values[size_t(i4)] == -1);

    GenusCharacter c21 = genus_character(21, -4, G);
    CHECK(c21.values[size_t(i1)] == 1);
    CHECK(c21.values[size_t(i2)] == -1);
    CHECK(c21.values[size_t(i3)] == -1);
    CHECK(c21.values[size_t(i4)] == 1);

    GenusCharacter c28 = genus_character(28, -3, G);
    CHECK(c28.values[size_t(i1)] == 1);
    CHECK(c28.values[size_t(i2)] == -1);
    CHECK(c28.values[size_t(i3)] == 1);
    CHECK(c28.values[size_t(i4)] == -1);

    GenusCharacter triv = genus_character(1, -84, G);
    for (int v : triv.values) CHECK(v == 1);

    // find_genus_pair inverts the assignment
    auto pair = find_genus_pair(G, c21.values);
    REQUIRE(pair.has_value());
    GenusCharacter back = genus_character(pair->first, pair->second, G);
    CHECK(back.values == c21.values);
}

TEST_CASE("cm points") {
    auto p = cm_point(QuadForm{1, 0, 1});
    CHECK(std::abs(p.tau - std::complex<long double>(0, 1)) < 1e-18L);
    auto q = cm_point(QuadForm{14, 14, 5});
    CHECK(std::abs(q.tau - std::complex<long double>(-0.5L, sqrtl(84.0L) / 28)) < 1e-18L);
    auto r = cm_point(QuadForm{12, 6, 1});
    CHECK(std::abs(r.tau - std::complex<long double>(-0.25L, sqrtl(3.0L) / 12)) < 1e-18L);
}

TEST_CASE("heegner orbits, paper examples at N = 14") {
    // D = -84: four Gamma_0(14)-classes merging into one orbit
    HeegnerOrbits o1 = heegner_orbits(mpz_class(-84), 14, 1, {2, 7, 14});
    CHECK(o1.t == 1);
    CHECK(o1.gamma0_reps.size() == 4);
    CHECK(o1.plus_orbits.size() == 1);
    // the top representative is the printed [14,14,5]
    CHECK(o1.plus_reps[0] == QuadForm{14, 14, 5});

    // D = -20: beta = +-6, single orbit
    HeegnerOrbits o2 = heegner_orbits(mpz_class(-20), 14, 1, {2, 7, 14});
    CHECK(o2.t == 2);
    CHECK(o2.gamma0_reps.size() == 4);
    CHECK(o2.plus_orbits.size() == 1);
    CHECK(o2.plus_reps[0] == QuadForm{14, 6, 1});
}

TEST_CASE("atkin-lehner matrices") {
    for (long N : {6L, 10L, 12L, 14L, 15L}) {
        for (long n = 2; n <= N; ++n) {
            if (N % n != 0 || std::gcd(n, N / n) != 1) continue;
            auto M = atkin_lehner_matrix(n, N);
            mpz_class det = M[0] * M[3] - M[1] * M[2];
            CHECK(det == n);
            CHECK(M[2] % N == 0);
            CHECK(M[0] % n == 0);
            CHECK(M[3] % n == 0);
        }
    }
}

TEST_CASE("canonical tau: V4 caution example") {
    // c(1/sqrt(-2)) = c((1/sqrt(-2) - 1)/3) = 256, but only the former lies in
    // the i*inf fundamental domain of Gamma_0^+(2)
    std::complex<long double> good(0.0L, 1.0L / sqrtl(2.0L));
    std::complex<long double> bad = (good - 1.0L) / 3.0L;
    bool moved = false;
    auto can1 = canonical_tau(good, 2, {2}, &moved);
    CHECK(!moved);
    CHECK(std::abs(can1 - good) < 1e-15L);
    auto can2 = canonical_tau(bad, 2, {2}, &moved);
    CHECK(moved);
    CHECK(can2.imag() > bad.imag() + 0.1L);
    CHECK(std::abs(can2.imag() - good.imag()) < 1e-12L);
}

TEST_CASE("order <= 2 for [a,ka,c] forms") {
    for (auto [a, k, c] : std::vector<std::array<long, 3>>{
             {14, 1, 5}, {7, 2, 10}, {5, 1, 5}, {3, 2, 7}, {4, 1, 5}}) {
        QuadForm q{a, k * a, c};
        if (gcd(q.a, q.c) != 1) continue;
        FormClassGroup G = class_group(q.disc());
        int i = G.index_of(q);
        REQUIRE(i >= 0);
        CHECK(G.table[size_t(i)][size_t(i)] == G.identity);
    }
}
