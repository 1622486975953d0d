#pragma once

#include <gmpxx.h>

namespace mahler {

/// Real quadratic form p20 m^2 + p11 mn + p02 n^2 used by the lattice
/// summation core.
struct RealQuad {
    long double p20 = 0, p11 = 0, p02 = 0;
    long double eval(long double m, long double n) const {
        return p20 * m * m + p11 * m * n + p02 * n * n;
    }
};

struct LatticeSumResult {
    long double value = 0;
    long double err_bound = 0;
    long shells = 0;   // final shell count
    long points = 0;   // lattice points visited
};

/// sum over (m,n) != (0,0) of P(m,n) / B(m,n)^s for s in {2,3}, B positive
/// definite, P of degree 0 (P = constant p20... use p20=p02, p11? no: degree
/// 0 means P constant: pass p20=p02=0 and use `pconst`) or degree 2.
///
/// Rectangle shells adapted to B's axis scales; the tail beyond the last
/// shell is replaced by the exact exterior integral over the half-offset
/// rectangle (midpoint-rule pairing of unit cells with lattice points), so
/// the residual error decays like R^-4.  The returned bound is the observed
/// doubling difference plus the integral's quadrature slack.
LatticeSumResult lattice_sum(long double pconst, const RealQuad& P, const RealQuad& B,
                             int s, long double tol, long max_shells = 1 << 22);

} // namespace mahler
