#pragma once

#include <complex>
#include <memory>
#include <mutex>
#include <vector>

#include "mahler/registry.hpp"

namespace mahler {

/// All exact q-expansion data for one family at a fixed working truncation.
/// Built lazily and cached; everything downstream (identity verification,
/// lattice-sum cross checks, relation checks) reads from here.
struct FamilyContext {
    const FamilyRecord* fam = nullptr;
    long lim24 = 0;

    QSeries haupt;  // c(tau), simple pole in q
    QSeries mirror; // t = 1/c = q + O(q^2)
    QSeries u0;     // sum b_m t(q)^m
    QSeries e;      // u0 * Dq t / t
    QSeries mtilde; // sum_{n>=1} (e_n/n) q^n;  mtilde(tau) = -2 pi i tau - this

    std::vector<mpz_class> periods; // b_0 .. b_(lim24/24), recurrence-extended

    // Fitted Eisenstein data over ascending divisors of the level:
    //   e  = 1 + sum beta_d G_{4,d},  beta_d = a_d d^2
    //   u0 = 1 + sum alpha_d G_{2,d}, alpha_d = a'_d d
    std::vector<mpq_class> e_beta;
    std::vector<mpq_class> u0_alpha; // empty when the fit fails (theta families)
    bool u0_is_eisenstein = false;

    /// a_d d^2 for the lattice formula, indexed like divisors().
    const std::vector<mpq_class>& lattice_weights() const { return e_beta; }

    /// Re(mtilde(tau)) = 2 pi Im(tau) - Re(sum e_n/n q^n), via the q-series.
    long double re_mtilde(std::complex<long double> tau, long double tol = 1e-12L) const;

    /// c(tau) by direct series evaluation.
    std::complex<long double> c_at(std::complex<long double> tau,
                                   long double tol = 1e-12L) const;
};

class ModularCache {
  public:
    explicit ModularCache(const Registry& reg = Registry::instance(), long trunc_q = 0);

    const FamilyContext& context(const std::string& label);
    const Registry& registry() const { return reg_; }
    long trunc_q() const { return trunc_q_; }

  private:
    const Registry& reg_;
    long trunc_q_;
    std::map<std::string, std::unique_ptr<FamilyContext>> cache_;
    std::mutex mu_;
};

/// Default q-truncation (in integer q powers); MAHLERLAB_TRUNC overrides.
long default_trunc_q();

/// Build the full context for a family (exact; throws combo_mismatch when a
/// fitted Eisenstein combination fails to reproduce the series through the
/// truncation).
FamilyContext build_family_context(const FamilyRecord& fam, long trunc_q);

/// Solve tau near i*infinity with c(tau) = target by Newton iteration on q;
/// returns tau with Im > 0, Re in (-1/2, 1/2].  Throws tolerance_unreachable
/// when the iteration does not converge.
std::complex<long double> invert_hauptmodul(const FamilyContext& ctx,
                                            std::complex<long double> target);

} // namespace mahler
