#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <gmpxx.h>

#include "mahler/errors.hpp"

namespace mahler {

/// Binary quadratic form a x^2 + b xy + c y^2, written [a,b,c].
struct QuadForm {
    mpz_class a, b, c;

    mpz_class disc() const { return b * b - 4 * a * c; }
    bool pos_def() const { return a > 0 && disc() < 0; }
    bool primitive() const;
    mpz_class eval(const mpz_class& x, const mpz_class& y) const {
        return a * x * x + b * x * y + c * y * y;
    }
    QuadForm transform(const mpz_class& p, const mpz_class& q, const mpz_class& r,
                       const mpz_class& s) const; // f(px+qy, rx+sy)
    bool operator==(const QuadForm& o) const = default;
    bool operator<(const QuadForm& o) const;
    std::string str() const;
};

bool is_reduced(const QuadForm& f);
QuadForm reduce(const QuadForm& f); // throws not_positive_definite

/// Dirichlet composition of primitive forms of equal discriminant (reduced
/// output).
QuadForm compose_forms(const QuadForm& f, const QuadForm& g);

struct FormClassGroup {
    mpz_class D;
    std::vector<QuadForm> reps;           // reduced primitive forms
    std::vector<std::vector<int>> table;  // composition on rep indices
    int identity = 0;

    size_t order() const { return reps.size(); }
    int index_of(const QuadForm& f) const; // -1 when not of this discriminant
    int inverse_of(int i) const;
    bool is_elementary_two() const; // every class squares to the identity
    /// All homomorphisms Cl(D) -> {+-1}; requires is_elementary_two.
    std::vector<std::vector<int>> characters() const;
};

FormClassGroup class_group(const mpz_class& D); // throws invalid_discriminant

/// Kronecker symbol (d/n).
int kronecker_chi(const mpz_class& d, const mpz_class& n);

struct GenusCharacter {
    mpz_class d1, d2;
    std::vector<int> values; // on G.reps
};

struct GenusSearchOptions {
    long coord_bound = 200; // |x|,|y| bound for represented-prime search
    int agreeing_primes = 3;
};

/// chi_{d1,d2} evaluated via represented primes; verifies prime-independence
/// and multiplicativity.  Throws no_prime_found / not_multiplicative.
GenusCharacter genus_character(const mpz_class& d1, const mpz_class& d2,
                               const FormClassGroup& G,
                               const GenusSearchOptions& opt = {});

/// Find discriminant factorizations D = d1 d2 realizing a +-1 value vector.
std::optional<std::pair<mpz_class, mpz_class>> find_genus_pair(
    const FormClassGroup& G, const std::vector<int>& values,
    const GenusSearchOptions& opt = {});

struct CMPoint {
    QuadForm form;
    std::complex<long double> tau; // (-b + sqrt(D))/(2a)
};

CMPoint cm_point(const QuadForm& f);

/// Gamma_0(N)-classes of Heegner-type forms [aN, b, c] of discriminant D with
/// gcd(a,b,c) = 1 and gcd(N,b,ac) = m, merged under the Atkin-Lehner
/// involutions W_n for n in wset.
struct HeegnerOrbits {
    mpz_class D;
    long N = 0;
    long m = 0;
    long t = 0;                                // # beta mod 2N classes present
    std::vector<QuadForm> gamma0_reps;         // min-leading form per class
    std::vector<std::vector<size_t>> plus_orbits; // groups of gamma0 indices
    std::vector<QuadForm> plus_reps;           // max-Im form per merged orbit
};

HeegnerOrbits heegner_orbits(const mpz_class& D, long N, long m,
                             const std::vector<int>& wset);

/// All m with Q^0_{D,N,m} nonempty.
std::vector<long> heegner_m_values(const mpz_class& D, long N);

/// Integer matrix [[na, b],[Nc, nd]] of determinant n realizing W_n.
std::array<mpz_class, 4> atkin_lehner_matrix(long n, long N);

/// W_n acting on a Heegner form (result has the same discriminant).
QuadForm atkin_lehner_apply(const QuadForm& f, long n, long N);

/// Highest point of the (Gamma_0(N) + W_n, n in wset)-orbit of tau, with
/// |Re| <= 1/2.  Exact search: Im can only improve through |N c tau + d| < 1.
std::complex<long double> canonical_tau(std::complex<long double> tau, long N,
                                        const std::vector<int>& wset,
                                        bool* moved = nullptr);

long sigma0_plus(long n); // number of distinct prime factors

} // namespace mahler
