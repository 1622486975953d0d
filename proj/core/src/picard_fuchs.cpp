#include "mahler/picard_fuchs.hpp"

#include "mahler/errors.hpp"

namespace mahler {

namespace {

// polynomial helpers on dense mpq vectors, lowest degree first
using Poly = std::vector<mpq_class>;

Poly pmul(const Poly& a, const Poly& b) {
    Poly r(a.size() + b.size() - 1, mpq_class(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

Poly padd(Poly a, const Poly& b) {
    if (a.size() < b.size()) a.resize(b.size(), mpq_class(0));
    for (size_t i = 0; i < b.size(); ++i) a[i] += b[i];
    return a;
}

Poly pscale(Poly a, const mpq_class& c) {
    for (auto& x : a) x *= c;
    return a;
}

Poly lin(const mpq_class& c0, const mpq_class& c1) { return Poly{c0, c1}; }

} // namespace

mpq_class PeriodRecurrence::eval(int i, long m) const {
    mpq_class x(m), acc(0);
    const Poly& poly = p[i];
    for (size_t k = poly.size(); k-- > 0;) acc = acc * x + poly[k];
    return acc;
}

PeriodRecurrence to_recurrence(const D3Operator& op) {
    PeriodRecurrence r;
    r.p.resize(5);
    // P_0 = D^3
    r.p[0] = Poly{0, 0, 0, 1};
    // P_1 = (D+1/2)(a3 (D^2+D) + b1)
    r.p[1] = pmul(lin(mpq_class(1, 2), 1),
                  padd(pscale(Poly{0, 1, 1}, op.a3), Poly{op.b1}));
    // P_2 = (D+1)(a2 (D+1)^2 + b0)
    r.p[2] = pmul(lin(1, 1), padd(pscale(pmul(lin(1, 1), lin(1, 1)), op.a2), Poly{op.b0}));
    // P_3 = a1 (D+2)(D+3/2)(D+1)
    r.p[3] = pscale(pmul(pmul(lin(2, 1), lin(mpq_class(3, 2), 1)), lin(1, 1)), op.a1);
    // P_4 = a0 (D+3)(D+2)(D+1)
    r.p[4] = pscale(pmul(pmul(lin(3, 1), lin(2, 1)), lin(1, 1)), op.a0);
    return r;
}

VerifyResult verify_periods(const std::vector<mpz_class>& b, const D3Operator& op) {
    PeriodRecurrence rec = to_recurrence(op);
    for (long m = 1; m < long(b.size()); ++m) {
        mpq_class s(0);
        for (int i = 0; i <= 4; ++i) {
            long idx = m - i;
            if (idx < 0) break;
            s += rec.eval(i, m - i) * mpq_class(b[idx]);
        }
        if (s != 0) return {false, m};
    }
    return {true, -1};
}

std::optional<GuessResult> guess_d3(const std::vector<mpz_class>& b) {
    if (b.size() < 13) return std::nullopt;

    // Unknowns u = (a3, b1, a2, b0, a1, a0).  Row for index m (doubled to
    // clear the half-integer nodes):
    //   (2m-1) m(m-1) b_{m-1} * a3 + (2m-1) b_{m-1} * b1
    // + 2(m-1)^3 b_{m-2} * a2 + 2(m-1) b_{m-2} * b0
    // + (m-1)(2m-3)(m-2) b_{m-3} * a1 + 2(m-1)(m-2)(m-3) b_{m-4} * a0
    // = -2 m^3 b_m
    auto make_row = [&](long m, std::vector<mpq_class>& row, mpq_class& rhs) {
        auto bm = [&](long i) { return i >= 0 ? mpq_class(b[i]) : mpq_class(0); };
        row.assign(6, mpq_class(0));
        row[0] = mpq_class((2 * m - 1) * m * (m - 1)) * bm(m - 1);
        row[1] = mpq_class(2 * m - 1) * bm(m - 1);
        row[2] = mpq_class(2 * (m - 1) * (m - 1) * (m - 1)) * bm(m - 2);
        row[3] = mpq_class(2 * (m - 1)) * bm(m - 2);
        row[4] = mpq_class((m - 1) * (2 * m - 3) * (m - 2)) * bm(m - 3);
        row[5] = mpq_class(2 * (m - 1) * (m - 2) * (m - 3)) * bm(m - 4);
        rhs = mpq_class(-2 * m * m * m) * bm(m);
    };

    const int nfit = 12;
    std::vector<std::vector<mpq_class>> a(nfit, std::vector<mpq_class>(7));
    for (long m = 1; m <= nfit; ++m) {
        std::vector<mpq_class> row;
        mpq_class rhs;
        make_row(m, row, rhs);
        for (int j = 0; j < 6; ++j) a[m - 1][j] = row[j];
        a[m - 1][6] = rhs;
    }

    // Gaussian elimination over Q with partial (nonzero) pivoting.
    int rank = 0;
    std::vector<int> pivot_col;
    for (int col = 0; col < 6 && rank < nfit; ++col) {
        int piv = -1;
        for (int r = rank; r < nfit; ++r)
            if (a[r][col] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        std::swap(a[rank], a[piv]);
        for (int r = 0; r < nfit; ++r) {
            if (r == rank || a[r][col] == 0) continue;
            mpq_class f = a[r][col] / a[rank][col];
            for (int j = col; j <= 6; ++j) a[r][j] -= f * a[rank][j];
        }
        pivot_col.push_back(col);
        ++rank;
    }
    // Inconsistency: zero row with nonzero rhs.
    for (int r = rank; r < nfit; ++r)
        if (a[r][6] != 0) return std::nullopt;

    std::vector<mpq_class> u(6, mpq_class(0)); // free unknowns -> 0
    for (int r = 0; r < rank; ++r) u[pivot_col[r]] = a[r][6] / a[r][pivot_col[r]];

    GuessResult res;
    res.op = D3Operator{u[0], u[2], u[4], u[5], u[1], u[3]};
    res.degenerate = rank < 6;

    // Cross-validate on the full input.
    if (!verify_periods(b, res.op).ok) return std::nullopt;
    return res;
}

std::vector<mpz_class> extend_periods(const D3Operator& op, const std::vector<mpz_class>& seed,
                                      unsigned M) {
    PeriodRecurrence rec = to_recurrence(op);
    std::vector<mpz_class> b = seed;
    if (b.empty()) b.emplace_back(1);
    for (long m = long(b.size()); m <= long(M); ++m) {
        mpq_class s(0);
        for (int i = 1; i <= 4; ++i) {
            long idx = m - i;
            if (idx < 0) break;
            s += rec.eval(i, m - i) * mpq_class(b[idx]);
        }
        mpq_class val = -s / rec.eval(0, m);
        val.canonicalize();
        if (val.get_den() != 1)
            throw error("recurrence produced a non-integral period at m=" + std::to_string(m));
        b.emplace_back(val.get_num());
    }
    return b;
}

} // namespace mahler
