#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mahler/kronecker.hpp"
#include "mahler/modular.hpp"
#include "mahler/theta_lfun.hpp"

namespace mahler {

struct RhsTerm {
    mpq_class coef;
    bool is_pair = false;   // l_{d1,d2} vs L~(g,3)
    std::string form_label; // e.g. "84d", "7" (letterless)
    mpz_class d1, d2;
};

struct AlgebraicC {
    std::vector<mpz_class> minpoly; // leading first
    std::string root_sel;           // hi | lo | re | im+ | im-
};

struct IdentityRow {
    std::string family;
    QuadForm form;
    bool c_is_algebraic = false;
    mpz_class c_int;
    AlgebraicC c_alg;
    std::vector<RhsTerm> rhs;
    bool rhs_is_zero = false;
    std::string rhs_text; // verbatim, also kept for out-of-scope rows
    bool outside_k_warning = false;
    bool star = false;
    bool in_scope = true;
    std::string oos_reason;
    std::string remark;
};

enum class RowStatus { pass, fail, out_of_scope, internal_error };

struct VerificationReport {
    IdentityRow row;
    RowStatus status = RowStatus::internal_error;
    long double computed_c_re = 0, computed_c_im = 0;
    long double c_residual = 0;
    long double lhs_q = 0, lhs_lattice = 0, rhs = 0, residual = 0;
    std::string resolved_labels;
    std::string note;
};

struct VerifyOptions {
    long double identity_tol = 1e-7L;
    long double evaluator_agreement_tol = 1e-8L;
    long double lvalue_tol = 1e-10L;
    int jobs = 1;
};

struct TableSummary {
    std::vector<VerificationReport> reports;
    long total = 0, passed = 0, failed = 0, out_of_scope = 0, internal = 0;
};

class Verifier {
  public:
    explicit Verifier(const std::string& data_dir = "", long trunc_q = 0);

    const std::vector<std::string>& table_families() const { return table_order_; }
    const std::vector<IdentityRow>& table(const std::string& family) const;

    VerificationReport verify_identity(const IdentityRow& row, const VerifyOptions& opt = {});
    TableSummary verify_family(const std::string& family, const VerifyOptions& opt = {});
    TableSummary verify_all_tables(const VerifyOptions& opt = {});

    struct ModEqResult {
        std::string name;
        bool ok = false;
        long checked24 = 0;
    };
    std::vector<ModEqResult> verify_modular_equations(long upto_q = 200);

    struct RelationInstance {
        std::string name;
        mpq_class w;
        bool expect_refusal = false;
        bool refused = false;
        bool passed = false;
        long double lhs = 0, rhs = 0, residual = 0;
        std::string note;
    };
    struct RelationResult {
        std::string name;
        bool series_ok = false; // coefficientwise mtilde identity
        std::vector<RelationInstance> instances;
    };
    std::vector<RelationResult> verify_exotic_relations(long double tol = 1e-6L);

    struct SingularModuliReport {
        std::string family;
        mpz_class D;
        long m = 0;
        long degree = 0;
        std::vector<mpz_class> poly; // rounded integer coefficients, leading 1
        long double max_residual = 0;
        bool integral = false;
        bool sm_bound_ok = true; // Eq (sm) when a rational-c row uses this (D,m)
        std::string note;
    };
    std::vector<SingularModuliReport> verify_singular_moduli(const std::string& family);

    ModularCache& modular() { return modular_; }
    LValueCache& lvalues() { return lvalues_; }

  private:
    struct Relation;
    void load_tables();
    void load_modeq();
    void load_relations();

    std::string dir_;
    const Registry& reg_;
    ModularCache modular_;
    ModularCache modular_hi_; // doubled truncation for escalation
    LValueCache lvalues_;
    std::vector<std::string> table_order_;
    std::map<std::string, std::vector<IdentityRow>> tables_;

    struct ModEq {
        std::string name;
        Expr expr;
        EtaQuotientSpec y, z;
    };
    std::vector<ModEq> modeqs_;

    struct RelTerm {
        mpq_class coef;
        std::string family;
        int qpow = 1;
        Expr arg;
    };
    struct RelationData {
        std::string name;
        std::string lhs_family;
        Expr lhs_arg;
        std::vector<RelTerm> rhs;
        std::vector<mpq_class> samples;
        std::vector<std::pair<mpq_class, bool>> specials; // (w, expect_refusal)
    };
    std::vector<RelationData> relations_;
};

/// Continued-fraction rational recognition with a denominator bound.
std::optional<mpq_class> recognize_rational(long double x, long den_bound = 64,
                                            long double tol = 1e-6L);

} // namespace mahler
