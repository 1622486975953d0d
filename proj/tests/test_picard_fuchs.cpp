#include "doctest.h"

#include "mahler/picard_fuchs.hpp"
#include "mahler/registry.hpp"

using namespace mahler;

TEST_CASE("recurrence structure") {
    // V4, signed coefficients
    D3Operator v4{-256, 0, 0, 0, -48, 0};
    auto rec = to_recurrence(v4);
    CHECK(rec.eval(0, 3) == 27);  // P_0(m) = m^3
    CHECK(rec.eval(1, 0) == -24); // (1/2) * beta1
    std::vector<mpz_class> b{1, 24, 2520, 369600, 63063000};
    auto vr = verify_periods(b, v4);
    CHECK(vr.ok);
}

TEST_CASE("all 25 families satisfy their stored operator to m = 30") {
    const auto& reg = Registry::instance();
    for (const auto& fam : reg.families()) {
        CAPTURE(fam.label);
        auto b = period_sequence(fam.poly, 30);
        auto vr = verify_periods(b, fam.pf);
        CAPTURE(vr.first_failure);
        CHECK(vr.ok);
    }
}

TEST_CASE("deliberate mismatch fails early") {
    const auto& reg = Registry::instance();
    auto b = period_sequence(reg.family("V24").poly, 20);
    auto vr = verify_periods(b, reg.family("V4").pf);
    CHECK(!vr.ok);
    CHECK(vr.first_failure >= 1);
    CHECK(vr.first_failure <= 4);
}

TEST_CASE("guess_d3 recovers table rows") {
    const auto& reg = Registry::instance();
    for (const char* label : {"V18", "Q", "V10", "B5", "V22"}) {
        CAPTURE(label);
        auto b = period_sequence(reg.family(label).poly, 14);
        auto g = guess_d3(b);
        REQUIRE(g.has_value());
        CHECK(!g->degenerate);
        CHECK(g->op == reg.family(label).pf);
    }
}

TEST_CASE("degenerate constant sequence") {
    std::vector<mpz_class> b(15, mpz_class(0));
    b[0] = 1;
    auto g = guess_d3(b);
    REQUIRE(g.has_value());
    CHECK(g->degenerate);
    CHECK(g->op.is_zero());
}

TEST_CASE("extend_periods matches direct expansion") {
    const auto& reg = Registry::instance();
    auto direct = period_sequence(reg.family("V28").poly, 12);
    auto ext = extend_periods(reg.family("V28").pf, {mpz_class(1)}, 12);
    CHECK(direct == ext);
}

TEST_CASE("B6b periods are the V12b subsequence at the recurrence level") {
    const auto& reg = Registry::instance();
    auto bb = period_sequence(reg.family("B6b").poly, 16);
    auto bv = period_sequence(reg.family("V12b").poly, 8);
    for (int k = 0; k <= 8; ++k) {
        CHECK(bb[size_t(2 * k)] == bv[size_t(k)]);
        if (k < 8) CHECK(bb[size_t(2 * k + 1)] == 0);
    }
}
