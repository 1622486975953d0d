#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "mahler/qseries.hpp"
#include "mahler/quadforms.hpp"

namespace mahler {

/// Theta series attached to a positive definite form.
///   weight 1: sum q^Q(m,n)
///   weight 3: sum (a m^2 - c n^2)/2 q^Q(m,n)
struct ThetaSeries {
    QuadForm form;
    int weight = 1;
    std::vector<mpz_class> coeff; // coeff[k] of q^k, k = 0..trunc
};

ThetaSeries theta_qexp(const QuadForm& f, int weight, long trunc);

struct LValue {
    std::string kind;      // theta3 | epstein2 | dirichlet2 | newform3 | rescaled | pair
    long double value = 0;
    long double err_bound = 0;
    std::string evaluator; // shells | theta_integral | hurwitz | combination
    long shells = 0;
};

struct LTolerance {
    long double tol = 1e-10L;
};

/// L(Theta_Q, 3) by signed lattice summation with tail correction.
LValue l_theta3(const QuadForm& f, long double tol = 1e-10L);
/// Independent evaluator via Gamma(3)(2pi)^-3 L = int_0^inf Theta(it) t^2 dt.
LValue l_theta3_integral(const QuadForm& f, long double tol = 1e-10L);

/// zeta_Q(2) = sum' Q(m,n)^-2.
LValue epstein_zeta2(const QuadForm& f, long double tol = 1e-10L);

/// L(chi_d, 2) by the Hurwitz-zeta finite sum; non-fundamental d handled by
/// conductor reduction and finite Euler factors.
LValue dirichlet_l2(const mpz_class& d);

/// Weight-3 CM form assembled from class-group theta series.
struct CMForm {
    long level = 0; // |D|
    char letter = '?';
    bool is_new = true;
    std::vector<int> phi;            // character values on the reps below
    std::vector<QuadForm> reps;      // suitable [a,ka,c]/[a,kc,c] representatives
    std::vector<mpz_class> qexp;     // normalized q-expansion, q-coefficient 1
    std::string label() const { return std::to_string(level) + letter; }
};

struct AssembleOptions {
    long trunc = 400; // q-expansion length for lettering/Sturm work
};

/// All weight-3 rational-coefficient CM forms of level |D|, lettered per the
/// lexicographic convention (newforms first).  Throws
/// non_two_torsion_class_group / no_suitable_representative.
std::vector<CMForm> assemble_cm_forms(const mpz_class& D, const AssembleOptions& opt = {});

/// L(g, 3) as the signed combination of partial theta L-values.
LValue l_newform3(const CMForm& g, long double tol = 1e-10L);

/// L~(g_d, 3) = 2 sqrt(d)/(2pi)^3 L(g_d, 3).
LValue l_tilde(const CMForm& g, long double tol = 1e-10L);

/// l_{d1,d2} = sqrt(-d1 d2)/(2pi)^3 L(chi_d1, 2) L(chi_d2, 2).
LValue l_pair(const mpz_class& d1, const mpz_class& d2);

/// Thread-safe cache of assembled levels and L-values keyed by label; the
/// verifier shares one across rows.
class LValueCache {
  public:
    const std::vector<CMForm>& forms(long level);
    const CMForm& form(long level, char letter);
    /// Resolve a possibly letterless label like "84d" or "7": a letterless
    /// label with a unique newform resolves to it; otherwise every newform is
    /// a candidate (caller disambiguates numerically).
    std::vector<const CMForm*> candidates(const std::string& label);
    LValue l_tilde_cached(const CMForm& g, long double tol = 1e-10L);
    LValue l_pair_cached(const mpz_class& d1, const mpz_class& d2);

  private:
    std::mutex mu_;
    std::map<long, std::vector<CMForm>> forms_;
    std::map<std::string, LValue> lvals_;
};

/// Prop.-style oldform table: left label -> (base label, list of (scale, coef)).
struct OldformRelation {
    std::string old_label;                      // e.g. "112b"
    std::string new_label;                      // e.g. "7"
    std::vector<std::pair<int, mpz_class>> terms; // (n, coefficient) for g(n tau)
};

const std::vector<OldformRelation>& oldform_relations();

} // namespace mahler
