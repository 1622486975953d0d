#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mahler/expr.hpp"
#include "mahler/laurent.hpp"
#include "mahler/picard_fuchs.hpp"

namespace mahler {

/// Eta-quotient prod eta(a_i tau)^(d_i), stored as (scale, exponent) pairs.
struct EtaQuotientSpec {
    std::vector<std::pair<int, int>> factors;
    QSeries qexp(long lim24) const;
};

struct FamilyRecord {
    std::string label;   // V2 .. V30, V12a, V12b, P3, Q, B1 .. B6b
    int level = 0;       // modular level N
    int index = 1;       // Fano index (1,2,3,4)
    std::vector<int> fricke; // Hall divisors n with W_n in the family's group
    LaurentPoly3 poly;
    D3Operator pf; // signed coefficients as they enter the operator
    Expr haupt;    // hauptmodul expression over the symbol "h"
    EtaQuotientSpec eta_h;
    bool has_combos = true; // false for V2 and B1 (weight-1/2 e-columns)
    // Resolved Eisenstein data over the ascending divisors of `level`:
    // e  = 1 + sum beta_d G_{4,d}   (a_d of the lattice formula = -beta_d/d^2)
    // u0 = 1 + sum alpha_d G_{2,d}
    std::vector<mpq_class> e_combo;
    std::vector<mpq_class> u0_combo; // empty when u0 carries a cusp correction
    bool u0_theta = false;           // V22, V28, V30
    bool reciprocal = false;

    std::vector<long> divisors() const;
    QSeries hauptmodul_qexp(long lim24) const;
};

class Registry {
  public:
    /// Load from the structured text data file.  `dir` empty means: use
    /// MAHLERLAB_DATA_DIR from the environment, else the compiled default.
    static const Registry& instance(const std::string& dir = "");

    const FamilyRecord& family(const std::string& label) const;
    const std::vector<FamilyRecord>& families() const { return families_; }
    const std::string& data_dir() const { return dir_; }

    /// Serialize back to the data-file format (lossless round-trip).
    std::string dump() const;

  private:
    explicit Registry(const std::string& dir);
    std::vector<FamilyRecord> families_;
    std::map<std::string, size_t> by_label_;
    std::string dir_;
    std::string raw_;
};

std::string default_data_dir();

} // namespace mahler
