#pragma once

#include <optional>
#include <vector>

#include <gmpxx.h>

namespace mahler {

/// Coefficients of the determinantal order-3 operator
///   D^3 + t(D+1/2)(a3(D^2+D)+b1) + t^2(D+1)(a2(D+1)^2+b0)
///       + a1 t^3(D+2)(D+3/2)(D+1) + a0 t^4(D+3)(D+2)(D+1).
/// The family tables print the negated tuples; this type holds the signed
/// values as they enter the operator.
struct D3Operator {
    mpq_class a3, a2, a1, a0, b1, b0;

    bool operator==(const D3Operator& o) const = default;
    bool is_zero() const {
        return a3 == 0 && a2 == 0 && a1 == 0 && a0 == 0 && b1 == 0 && b0 == 0;
    }
};

/// Recurrence sum_{i=0}^{4} P_i(m-i) b_{m-i} = 0 with P_0(m) = m^3.
struct PeriodRecurrence {
    // coefficient polynomials P_0..P_4, each stored lowest-degree-first
    std::vector<std::vector<mpq_class>> p;

    mpq_class eval(int i, long m) const;
};

PeriodRecurrence to_recurrence(const D3Operator& op);

struct VerifyResult {
    bool ok = true;
    long first_failure = -1;
};

/// Checks the recurrence exactly on [b_0..b_M].
VerifyResult verify_periods(const std::vector<mpz_class>& b, const D3Operator& op);

struct GuessResult {
    D3Operator op;
    bool degenerate = false; // system was underdetermined (free unknowns set to 0)
};

/// Recover the operator from a period sequence by exact linear algebra over Q.
/// Uses rows m = 1..12, cross-validates on the rest; needs at least 13 terms.
/// Returns nullopt when the system is inconsistent or cross-validation fails.
std::optional<GuessResult> guess_d3(const std::vector<mpz_class>& b);

/// Extend a period sequence to length M+1 using the recurrence (exact; the
/// leading coefficient m^3 never vanishes for m >= 1).  Requires that the
/// recurrence yield integral values when seeded with b_0 = 1.
std::vector<mpz_class> extend_periods(const D3Operator& op, const std::vector<mpz_class>& seed,
                                      unsigned M);

} // namespace mahler
