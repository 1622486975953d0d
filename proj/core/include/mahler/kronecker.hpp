#pragma once

#include <complex>

#include "mahler/modular.hpp"

namespace mahler {

struct KroneckerSum {
    int d = 1;
    std::complex<long double> tau;
    long double value = 0;
    long double err_bound = 0;
};

/// H_d(tau) = sum'_{m,n} 2 Re((dm tau + n)^-3 (dm conj(tau) + n)^-1)
///                      + (dm tau + n)^-2 (dm conj(tau) + n)^-2
/// which reduces to sum' (3u^2 - v^2)/(u^2 + v^2)^3 with u = dm Re(tau) + n,
/// v = dm Im(tau).  Includes the m = 0 row.
KroneckerSum h_d(int d, std::complex<long double> tau, long double tol = 1e-10L);

struct MahlerLatticeOptions {
    long double tol = 1e-10L;
    bool skip_domain_check = false; // reproduce out-of-domain evaluations deliberately
};

/// Re(mtilde) at tau via the Eisenstein-Kronecker lattice formula
///   (Im tau/(2 pi)^3) sum_{d|N} a_d d^2 H_d(tau).
/// Requires tau in the family's fundamental domain containing i*infinity
/// (max-Im rule); throws outside_fundamental_domain otherwise.
long double mahler_lattice(const FamilyContext& ctx, std::complex<long double> tau,
                           const MahlerLatticeOptions& opt = {});

} // namespace mahler
