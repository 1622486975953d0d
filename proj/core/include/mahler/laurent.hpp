#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "mahler/errors.hpp"

namespace mahler {

using ExpVec = std::array<int32_t, 3>;

/// Sparse Laurent polynomial in x1,x2,x3 with exact integer coefficients.
/// Terms are kept in a sorted map keyed by exponent triple; no zero
/// coefficients are stored.
class LaurentPoly3 {
  public:
    using TermMap = std::map<ExpVec, mpz_class>;

    LaurentPoly3() = default;
    explicit LaurentPoly3(const mpz_class& c);

    static LaurentPoly3 monomial(const mpz_class& c, ExpVec e);

    /// Parse expressions like "(x1+x2+x3+1)^4/(x1*x2*x3)".
    /// Division is only allowed when exact in the Laurent ring.
    static LaurentPoly3 parse(const std::string& text);

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }
    mpz_class coeff(ExpVec e) const;
    mpz_class constant_term() const { return coeff({0, 0, 0}); }

    void add_term(ExpVec e, const mpz_class& c);

    LaurentPoly3 operator+(const LaurentPoly3& o) const;
    LaurentPoly3 operator-(const LaurentPoly3& o) const;
    LaurentPoly3 operator*(const LaurentPoly3& o) const;
    LaurentPoly3 mul_monomial(const mpz_class& c, ExpVec e) const;
    bool operator==(const LaurentPoly3& o) const { return terms_ == o.terms_; }

    /// f(x1^-1, x2^-1, x3^-1)
    LaurentPoly3 reciprocal_vars() const;
    /// Substitute x_i -> prod_j x_j^{a_ij} for a unimodular integer matrix.
    LaurentPoly3 monomial_substitution(const std::array<std::array<int64_t, 3>, 3>& a) const;
    /// Exact division; throws not_laurent when the quotient is not Laurent.
    LaurentPoly3 divide_exact(const LaurentPoly3& d) const;

    /// Per-coordinate exponent range over the support.
    void exponent_range(ExpVec& lo, ExpVec& hi) const;

    mpz_class evaluate_at_one() const; // f(1,1,1)
    std::complex<double> evaluate(const std::complex<double>& x1,
                                  const std::complex<double>& x2,
                                  const std::complex<double>& x3) const;

    std::string to_string() const;

  private:
    TermMap terms_;
};

/// Constant term of f^m, by exact repeated multiplication.  Intermediate
/// products are pruned to the exponent box that can still reach (0,0,0)
/// with the remaining factors, which is a support bound, not a truncation.
mpz_class constant_term_of_power(const LaurentPoly3& f, unsigned m);

/// [b_0, ..., b_M]
std::vector<mpz_class> period_sequence(const LaurentPoly3& f, unsigned M);

/// Mutation data: GL_3(Z) change, exchange factor A(x1,x2), GL_3(Z) change.
struct Mutation {
    std::array<std::array<int64_t, 3>, 3> pre_gl{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    LaurentPoly3 factor = LaurentPoly3(mpz_class(1));
    std::array<std::array<int64_t, 3>, 3> post_gl{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
};

int64_t det3(const std::array<std::array<int64_t, 3>, 3>& a);

/// Pull back f along pre_gl, then (x1,x2,x3) -> (x1,x2,A(x1,x2)x3), then
/// post_gl.  Throws not_unimodular / not_laurent.
LaurentPoly3 apply_mutation(const LaurentPoly3& f, const Mutation& mu);

struct MahlerNumericOptions {
    double vanish_threshold = 1e-9;
};

/// Tensor-product torus average of log|f - c| on a uniform grid with
/// grid_n points per axis.  Deterministic; accuracy is spectral away from
/// vanishing loci.  Throws near_zero_on_torus if |f-c| dips below the
/// threshold at a sample (c possibly inside the torus image).
double mahler_numeric(const LaurentPoly3& f, std::complex<double> c, unsigned grid_n,
                      const MahlerNumericOptions& opt = {});

} // namespace mahler
