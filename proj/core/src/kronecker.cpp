#include "mahler/kronecker.hpp"

#include <cmath>

#include "mahler/lattice_sum.hpp"
#include "mahler/quadforms.hpp"

namespace mahler {

KroneckerSum h_d(int d, std::complex<long double> tau, long double tol) {
    if (d < 1 || tau.imag() <= 0) throw error("h_d: need d >= 1 and Im(tau) > 0");
    long double x = tau.real(), y = tau.imag();
    long double dd = (long double)d;
    // u = d m x + n, v = d m y:
    //   numerator 3u^2 - v^2 and base u^2 + v^2 as quadratics in (m, n)
    RealQuad P{(3 * x * x - y * y) * dd * dd, 6 * x * dd, 3.0L};
    RealQuad B{(x * x + y * y) * dd * dd, 2 * x * dd, 1.0L};
    auto r = lattice_sum(0.0L, P, B, 3, tol);
    return KroneckerSum{d, tau, r.value, r.err_bound};
}

long double mahler_lattice(const FamilyContext& ctx, std::complex<long double> tau,
                           const MahlerLatticeOptions& opt) {
    const FamilyRecord& fam = *ctx.fam;
    if (!fam.has_combos)
        throw error("mahler_lattice: " + fam.label + " has no Eisenstein e-data");
    if (!opt.skip_domain_check) {
        bool moved = false;
        std::complex<long double> can = canonical_tau(tau, fam.level, fam.fricke, &moved);
        if (can.imag() > tau.imag() + 1e-9L)
            throw outside_fundamental_domain(
                fam.label + ": tau is not in the fundamental domain containing i*inf "
                            "(a translate has larger imaginary part)");
    }

    const long double two_pi = 2.0L * acosl(-1.0L);
    const long double c8pi3 = two_pi * two_pi * two_pi;
    auto divisors = fam.divisors();
    // weights a_d d^2 = beta_d; per-term tolerance split by |beta_d|
    long double wsum = 0;
    for (const auto& b : ctx.e_beta) wsum += fabsl((long double)b.get_d());
    long double acc = 0, err = 0;
    for (size_t i = 0; i < divisors.size(); ++i) {
        long double w = (long double)ctx.e_beta[i].get_d();
        if (w == 0) continue;
        long double per = opt.tol * c8pi3 / tau.imag() * (fabsl(w) / wsum) / fabsl(w);
        KroneckerSum h = h_d(int(divisors[i]), tau, per);
        acc += w * h.value;
        err += fabsl(w) * h.err_bound;
    }
    (void)err;
    return tau.imag() / c8pi3 * acc;
}

} // namespace mahler
