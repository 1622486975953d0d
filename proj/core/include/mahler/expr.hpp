#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "mahler/qseries.hpp"

namespace mahler {

/// Tiny expression AST used by the data files: arithmetic over named
/// symbols with integer powers, plus sqrt()/root(n,) in series mode.
struct Expr {
    enum class Kind { Num, Sym, Add, Sub, Mul, Div, Neg, Pow, Root };

    Kind kind = Kind::Num;
    mpq_class num;
    std::string sym;
    long ipow = 0; // for Pow
    int root = 0;  // for Root
    std::vector<Expr> args;

    static Expr parse(const std::string& text);

    QSeries eval(const std::map<std::string, QSeries>& env) const;
    mpq_class eval(const std::map<std::string, mpq_class>& env) const;
};

} // namespace mahler
