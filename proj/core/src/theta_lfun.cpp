#include "mahler/theta_lfun.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "mahler/lattice_sum.hpp"

namespace mahler {

namespace {
const long double kPi = acosl(-1.0L);
const long double kTwoPi = 2 * kPi;
const long double kEightPi3 = 8 * kPi * kPi * kPi; // (2 pi)^3
} // namespace

ThetaSeries theta_qexp(const QuadForm& f, int weight, long trunc) {
    if (!f.pos_def()) throw not_positive_definite("theta_qexp: " + f.str());
    if (weight != 1 && weight != 3) throw error("theta_qexp: weight must be 1 or 3");
    ThetaSeries th;
    th.form = f;
    th.weight = weight;
    th.coeff.assign(size_t(trunc + 1), mpz_class(0));

    // Q(m,n) = a(m + b n/(2a))^2 + |D| n^2/(4a)
    double a = f.a.get_d(), b = f.b.get_d();
    double absD = -f.disc().get_d();
    long nmax = long(std::floor(std::sqrt(4.0 * a * double(trunc) / absD))) + 1;
    for (long n = -nmax; n <= nmax; ++n) {
        double mid = -b * double(n) / (2.0 * a);
        double half = std::sqrt(std::max(0.0, (double(trunc) - absD * double(n) * double(n) /
                                                                  (4.0 * a)) /
                                                  a)) +
                      1.0;
        long mlo = long(std::floor(mid - half)), mhi = long(std::ceil(mid + half));
        for (long m = mlo; m <= mhi; ++m) {
            mpz_class v = f.eval(m, n);
            if (v > trunc) continue;
            long k = v.get_si();
            if (weight == 1) {
                th.coeff[size_t(k)] += 1;
            } else {
                mpz_class num = f.a * m * m - f.c * n * n; // twice the spherical value
                th.coeff[size_t(k)] += num;               // divided by 2 after the loop
            }
        }
    }
    if (weight == 3) {
        for (auto& c : th.coeff) {
            if (c % 2 != 0) throw error("theta_qexp: odd spherical sum");
            c /= 2;
        }
    }
    return th;
}

LValue l_theta3(const QuadForm& f, long double tol) {
    if (!f.pos_def()) throw not_positive_definite("l_theta3: " + f.str());
    RealQuad P{0.5L * (long double)f.a.get_d(), 0.0L, -0.5L * (long double)f.c.get_d()};
    RealQuad B{(long double)f.a.get_d(), (long double)f.b.get_d(),
               (long double)f.c.get_d()};
    auto r = lattice_sum(0.0L, P, B, 3, tol);
    return LValue{"theta3", r.value, r.err_bound, "shells", r.shells};
}

LValue epstein_zeta2(const QuadForm& f, long double tol) {
    if (!f.pos_def()) throw not_positive_definite("epstein_zeta2: " + f.str());
    RealQuad P{};
    RealQuad B{(long double)f.a.get_d(), (long double)f.b.get_d(),
               (long double)f.c.get_d()};
    auto r = lattice_sum(1.0L, P, B, 2, tol);
    return LValue{"epstein2", r.value, r.err_bound, "shells", r.shells};
}

LValue l_theta3_integral(const QuadForm& f, long double tol) {
    // Gamma(3)(2pi)^-3 L(Theta,3) = int_0^inf Theta(it) t^2 dt, with Theta
    // cuspidal at both ends: e^(-2 pi a t) as t -> inf and
    // ~ t^-3 e^(-2 pi (a_min/|D|)/t) as t -> 0 by Poisson summation.
    QuadForm red = reduce(f);
    long double amin = (long double)red.a.get_d();
    long double absD = (long double)mpz_class(-f.disc()).get_d();
    long double lamstar = amin / absD;
    long double t_hi = 64.0L / (kTwoPi * amin);
    long double t_lo = kTwoPi * lamstar / 64.0L;
    long trunc = long(64.0L / (kTwoPi * t_lo)) + 2;
    ThetaSeries th = theta_qexp(f, 3, trunc);

    auto theta_at = [&](long double t) {
        long kmax = std::min<long>(trunc, long(64.0L / (kTwoPi * t)) + 1);
        long double acc = 0;
        for (long k = long(red.a.get_si()); k <= kmax; ++k) {
            if (th.coeff[size_t(k)] == 0) continue;
            acc += (long double)th.coeff[size_t(k)].get_d() * expl(-kTwoPi * k * t);
        }
        return acc;
    };
    auto integral = [&](long double h) {
        long double u0 = logl(t_lo), u1 = logl(t_hi);
        long nsteps = long((u1 - u0) / h) + 1;
        long double acc = 0;
        for (long i = 0; i <= nsteps; ++i) {
            long double u = u0 + (u1 - u0) * (long double)i / nsteps;
            long double t = expl(u);
            long double w = (i == 0 || i == nsteps) ? 0.5L : 1.0L;
            acc += w * theta_at(t) * t * t * t; // extra t from du substitution
        }
        return acc * (u1 - u0) / nsteps;
    };
    long double coarse = integral(1.0L / 12);
    long double fine = integral(1.0L / 24);
    long double value = kEightPi3 / 2 * fine;
    long double err = kEightPi3 / 2 * fabsl(fine - coarse) + 1e-18L;
    if (err > tol * 1000)
        throw tolerance_unreachable("l_theta3_integral: quadrature not converging");
    return LValue{"theta3", value, err, "theta_integral", 0};
}

namespace {

// Euler-Maclaurin Hurwitz zeta(2, x), x > 0
long double hurwitz_zeta2(long double x) {
    const int M = 40;
    long double acc = 0;
    for (int k = 0; k < M; ++k) acc += 1.0L / ((x + k) * (x + k));
    long double y = x + M;
    acc += 1.0L / y + 0.5L / (y * y);
    static const long double b2j[] = {1.0L / 6, -1.0L / 30, 1.0L / 42, -1.0L / 30,
                                      5.0L / 66, -691.0L / 2730};
    long double yp = y * y * y;
    for (long double b : b2j) {
        acc += b / yp;
        yp *= y * y;
    }
    return acc;
}

// largest f with f^2 | d and d/f^2 a fundamental discriminant (or 1)
mpz_class conductor_split(const mpz_class& d, mpz_class* d0_out) {
    mpz_class absd = abs(d);
    mpz_class best_f = 1;
    for (mpz_class f = 1; f * f <= absd; ++f) {
        if (d % (f * f) != 0) continue;
        mpz_class d0 = d / (f * f);
        bool fundamental = false;
        mpz_class r = d0 % 4;
        if (r < 0) r += 4;
        if (d0 == 1) {
            fundamental = true;
        } else if (r == 1) {
            mpz_class dd = abs(d0);
            fundamental = true;
            for (mpz_class p = 2; p * p <= dd; ++p)
                if (dd % (p * p) == 0) {
                    fundamental = false;
                    break;
                }
        } else if (r == 0) {
            mpz_class m = d0 / 4;
            mpz_class rm = m % 4;
            if (rm < 0) rm += 4;
            if (rm == 2 || rm == 3) {
                mpz_class dd = abs(m);
                fundamental = true;
                for (mpz_class p = 2; p * p <= dd; ++p)
                    if (dd % (p * p) == 0) {
                        fundamental = false;
                        break;
                    }
            }
        }
        if (fundamental) best_f = f;
    }
    *d0_out = d / (best_f * best_f);
    return best_f;
}

} // namespace

LValue dirichlet_l2(const mpz_class& d) {
    mpz_class r = d % 4;
    if (r < 0) r += 4;
    if (r == 2 || r == 3)
        throw invalid_character_modulus("dirichlet_l2: d must be 0 or 1 mod 4");

    mpz_class d0;
    mpz_class f = conductor_split(d, &d0);

    long double val;
    if (d0 == 1) {
        val = kPi * kPi / 6;
    } else {
        long q = labs(d0.get_si());
        long double acc = 0;
        for (long a2 = 1; a2 <= q; ++a2) {
            int chi = kronecker_chi(d0, a2);
            if (chi == 0) continue;
            acc += chi * hurwitz_zeta2((long double)a2 / q);
        }
        val = acc / ((long double)q * q);
    }
    // finite Euler factors for primes dividing d but not the conductor
    mpz_class ff = f;
    for (mpz_class p = 2; p * p <= ff; ++p) {
        if (ff % p != 0) continue;
        while (ff % p == 0) ff /= p;
        if (d0 % p != 0)
            val *= 1.0L - kronecker_chi(d0, p) / powl((long double)p.get_d(), 2.0L);
    }
    if (ff > 1 && d0 % ff != 0)
        val *= 1.0L - kronecker_chi(d0, ff) / powl((long double)ff.get_d(), 2.0L);
    return LValue{"dirichlet2", val, 1e-17L * fabsl(val) + 1e-20L, "hurwitz", 0};
}

const std::vector<OldformRelation>& oldform_relations() {
    static const std::vector<OldformRelation> table = {
        {"28b", "7", {{1, 1}, {2, 3}, {4, 8}}},
        {"32b", "8", {{1, 1}, {2, 2}, {4, 8}}},
        {"44a", "11", {{1, 1}, {4, 8}}},
        {"48b", "12", {{1, 1}, {4, 8}}},
        {"60a", "15b", {{1, 1}, {2, -1}, {4, 8}}},
        {"60b", "15a", {{1, 1}, {2, 1}, {4, 8}}},
        {"72b", "8", {{1, 1}, {3, 2}, {9, 27}}},
        {"96c", "24b", {{1, 1}, {2, -2}, {4, 8}}},
        {"99b", "11", {{1, 1}, {3, 5}, {9, 27}}},
        {"112b", "7", {{1, 1}, {2, 3}, {4, 12}, {8, 24}, {16, 64}}},
        {"180d", "20b", {{1, 1}, {3, 4}, {9, 27}}},
        {"192c", "12", {{1, 1}, {4, 8}, {16, 64}}},
        {"240c", "15b", {{1, 1}, {2, -1}, {4, 12}, {8, -8}, {16, 64}}},
        {"240d", "15a", {{1, 1}, {2, 1}, {4, 12}, {8, 8}, {16, 64}}},
    };
    return table;
}

namespace {

std::pair<long, char> parse_form_label(const std::string& label) {
    size_t i = 0;
    while (i < label.size() && std::isdigit(static_cast<unsigned char>(label[i]))) ++i;
    long level = std::stol(label.substr(0, i));
    char letter = i < label.size() ? label[i] : '?';
    return {level, letter};
}

// find a representative of the class of G.reps[ci] in [a,ka,c] or [a,kc,c]
// shape with gcd(a,c) = 1
QuadForm suitable_representative(const FormClassGroup& G, int ci) {
    mpz_class absD = -G.D;
    mpz_class bound_m;
    mpz_sqrt(bound_m.get_mpz_t(), absD.get_mpz_t());
    long bound = 4 * bound_m.get_si() + 4;
    for (long a = 1; a <= bound; ++a)
        for (long k = -6; k <= 6; ++k) {
            mpz_class b = mpz_class(k) * a;
            mpz_class num = b * b - G.D;
            if (num % (4 * a) != 0) continue;
            mpz_class c = num / (4 * a);
            if (c <= 0) continue;
            QuadForm q{a, b, c};
            if (gcd(q.a, q.c) != 1 || !q.primitive()) continue;
            if (G.index_of(q) == ci) return q;
        }
    // twin route: [a, kc, c] in the class is the reversed ka-form [c, kc, a];
    // in a 2-torsion group both carry the class, and the reversed triple is
    // the one whose full-lattice theta enters the partial Hecke sum
    for (long c = 1; c <= bound; ++c)
        for (long k = -6; k <= 6; ++k) {
            mpz_class b = mpz_class(k) * c;
            mpz_class num = b * b - G.D;
            if (num % (4 * c) != 0) continue;
            mpz_class a = num / (4 * c);
            if (a <= 0) continue;
            QuadForm q{a, b, mpz_class(c)};
            if (gcd(q.a, q.c) != 1 || !q.primitive()) continue;
            if (G.index_of(q) == ci) return QuadForm{q.c, q.b, q.a};
        }
    throw no_suitable_representative("class " + G.reps[size_t(ci)].str() + " of D=" +
                                     G.D.get_str());
}

} // namespace

namespace {

// Trivial-character form for an odd class group over a class-number-one
// field: the partial Hecke sums need class-specific weights lambda^2/gamma^2
// with gamma a generator of the extended ideal, summed exactly in
// Q(sqrt(d_K)).
CMForm assemble_odd_trivial(const mpz_class& D, const FormClassGroup& G, long trunc) {
    // split D = f^2 d_K
    mpz_class dK = D, f = 1;
    for (mpz_class g = 2; g * g <= -D; ++g) {
        while (dK % (g * g) == 0) {
            mpz_class cand = dK / (g * g);
            mpz_class r = cand % 4;
            if (r < 0) r += 4;
            if (r == 0 || r == 1) {
                dK = cand;
                f *= g;
            } else {
                break;
            }
        }
    }
    if (class_group(dK).order() != 1)
        throw non_two_torsion_class_group("Cl(" + D.get_str() +
                                          ") has higher torsion and h(K) > 1");

    // numbers (p + q sqrt(dK))/2 with p = q mod 2; exact mpq pairs (A, B)
    // represent A + B sqrt(dK)
    struct KNum {
        mpq_class a, b;
    };
    auto kmul = [&](const KNum& x, const KNum& y) {
        return KNum{x.a * y.a + x.b * y.b * dK, x.a * y.b + x.b * y.a};
    };

    // omega_K basis: dK = 1 mod 4 -> (1+sqrt)/2, else sqrt(dK)/2
    bool half_basis = ((dK % 4) + 4) % 4 == 1;
    auto embed = [&](const mpz_class& x, const mpz_class& y) { // x + y omega_K
        if (half_basis) return KNum{mpq_class(x) + mpq_class(y) / 2, mpq_class(y) / 2};
        return KNum{mpq_class(x), mpq_class(y) / 2};
    };
    // norm of x + y omega_K
    auto norm = [&](const mpz_class& x, const mpz_class& y) -> mpz_class {
        if (half_basis) return mpz_class(x * x + x * y + y * y * ((1 - dK) / 4));
        return mpz_class(x * x - y * y * (dK / 4));
    };

    CMForm out;
    out.level = labs(D.get_si());
    out.qexp.assign(size_t(trunc + 1), mpz_class(0));
    std::vector<mpq_class> acc_a(size_t(trunc + 1), mpq_class(0));
    std::vector<mpq_class> acc_b(size_t(trunc + 1), mpq_class(0));

    for (const auto& Q : G.reps) {
        // order ideal a = Span(aQ, (b - sqrt(D))/2), sqrt(D) = f sqrt(dK)
        // gamma: generator of a O_K, found among norm-N elements inside the
        // O_K-span of the generators
        long aQ = Q.a.get_si();
        // lattice of a O_K in the (1, omega_K) basis: generated by
        // aQ*(1,0), aQ*omega, r, r*omega with r = (b - f sqrt dK)/2
        KNum g1{mpq_class(aQ), 0};
        KNum r{mpq_class(Q.b) / 2, -mpq_class(f) / 2};
        KNum omega = half_basis ? KNum{mpq_class(1, 2), mpq_class(1, 2)}
                                : KNum{mpq_class(0), mpq_class(1, 2)};
        std::vector<KNum> gens{g1, kmul(g1, omega), r, kmul(r, omega)};
        // integer lattice in coordinates (x, y) with z = x + y omega
        auto coords = [&](const KNum& z) {
            mpq_class y = half_basis ? z.b * 2 : z.b * 2;
            mpq_class x = half_basis ? z.a - y / 2 : z.a;
            return std::pair<mpq_class, mpq_class>(x, y);
        };
        std::vector<std::array<mpz_class, 2>> rows;
        for (auto& g : gens) {
            auto [x, y] = coords(g);
            if (x.get_den() != 1 || y.get_den() != 1)
                throw error("assemble_odd_trivial: non-integral ideal coordinates");
            rows.push_back({x.get_num(), y.get_num()});
        }
        // 2x2 HNF by column... reduce rows to a basis
        // determinant = ideal norm
        auto hnf = [&]() {
            // Gaussian-style: find basis (e1, e2)
            std::vector<std::array<mpz_class, 2>> b = rows;
            // sort by |y| and eliminate
            for (;;) {
                std::sort(b.begin(), b.end(), [](auto& p, auto& q) {
                    return abs(p[1]) < abs(q[1]);
                });
                // first nonzero y
                size_t i0 = 0;
                while (i0 < b.size() && b[i0][1] == 0) ++i0;
                if (i0 == b.size()) throw error("degenerate ideal lattice");
                bool changed = false;
                for (size_t j = i0 + 1; j < b.size(); ++j) {
                    if (b[j][1] == 0) continue;
                    mpz_class q = b[j][1] / b[i0][1];
                    b[j][0] -= q * b[i0][0];
                    b[j][1] -= q * b[i0][1];
                    if (b[j][1] != 0) changed = true;
                }
                if (!changed) {
                    // rows below i0 have y = 0: reduce x by gcd
                    mpz_class gx = 0;
                    for (size_t j = 0; j < b.size(); ++j)
                        if (j != i0) gx = gcd(gx, b[j][0]);
                    return std::array<mpz_class, 4>{gx, mpz_class(0), b[i0][0], b[i0][1]};
                }
            }
        };
        auto basis = hnf();
        mpz_class det = abs(basis[0] * basis[3] - basis[1] * basis[2]);

        // gamma: element x + y omega of norm det inside the lattice
        KNum gamma{0, 0};
        bool found = false;
        long bound = 4 * long(sqrt((double)labs(det.get_si()))) + 4;
        for (long x = -bound; x <= bound && !found; ++x)
            for (long y = -bound; y <= bound && !found; ++y) {
                if (norm(x, y) != det) continue;
                // membership: solve u*basis0 + v*basis1 = (x,y) over Z
                mpz_class A = basis[0], B = basis[1], C = basis[2], Dd = basis[3];
                mpz_class dd = A * Dd - B * C;
                if (dd == 0) continue;
                mpz_class u = (mpz_class(x) * Dd - mpz_class(y) * C);
                mpz_class v = (-mpz_class(x) * B + mpz_class(y) * A);
                if (u % dd != 0 || v % dd != 0) continue;
                gamma = embed(x, y);
                found = true;
            }
        if (!found) throw error("assemble_odd_trivial: no ideal generator found");
        KNum gamma2 = kmul(gamma, gamma);
        // 1/gamma^2 = conj(gamma2)/N(gamma2)
        mpq_class ng2 = gamma2.a * gamma2.a - gamma2.b * gamma2.b * dK;
        KNum inv_g2{gamma2.a / ng2, -gamma2.b / ng2};

        // lambda = m * aQ + n * (b - sqrt(D))/2, N(lambda) = aQ * Q(m, n)
        double ad = Q.a.get_d(), bd = Q.b.get_d(), cd = Q.c.get_d();
        double absD = -(bd * bd - 4 * ad * cd);
        long nmax = long(std::sqrt(4 * ad * double(trunc) / absD)) + 2;
        for (long n = -nmax; n <= nmax; ++n) {
            double mid = -bd * n / (2 * ad);
            double half =
                std::sqrt(std::max(0.0, (double(trunc) - absD * n * n / (4 * ad)) / ad)) + 1;
            for (long m = long(mid - half); m <= long(mid + half) + 1; ++m) {
                mpz_class qv = Q.eval(m, n);
                if (qv == 0 || qv > trunc) continue;
                KNum lam{mpq_class(m) * aQ + mpq_class(Q.b) * n / 2,
                         -mpq_class(f) * n / 2};
                KNum w = kmul(kmul(lam, lam), inv_g2);
                size_t k = qv.get_ui();
                acc_a[k] += w.a;
                acc_b[k] += w.b;
            }
        }
    }
    for (long k = 0; k <= trunc; ++k) {
        acc_a[size_t(k)] /= 2; // unit count w = 2
        acc_b[size_t(k)] /= 2;
        if (acc_b[size_t(k)] != 0)
            throw error("assemble_odd_trivial: irrational coefficient at q^" +
                        std::to_string(k));
        if (acc_a[size_t(k)].get_den() != 1)
            throw error("assemble_odd_trivial: non-integral coefficient at q^" +
                        std::to_string(k));
        out.qexp[size_t(k)] = acc_a[size_t(k)].get_num();
    }
    if (out.qexp[1] != 1) throw error("assemble_odd_trivial: not normalized");
    return out;
}

} // namespace

std::vector<CMForm> assemble_cm_forms(const mpz_class& D, const AssembleOptions& opt) {
    if (D >= -4)
        throw error("assemble_cm_forms: need D < -4 (unit normalization w = 2)");
    FormClassGroup G = class_group(D);
    if (!G.is_elementary_two() && G.order() % 2 == 1) {
        // odd class group: only the trivial +-1 character; partial-sum route
        long trunc = std::max(opt.trunc, sturm_bound(3, labs(D.get_si())) + 8);
        CMForm g = assemble_odd_trivial(D, G, trunc);
        // oldform detection below needs the same loop; fall through with one form
        std::vector<CMForm> forms{std::move(g)};
        for (auto& gg : forms) {
            for (const auto& rel : oldform_relations()) {
                auto [lvl, letter] = parse_form_label(rel.old_label);
                if (lvl != gg.level) continue;
                auto [base_lvl, base_letter] = parse_form_label(rel.new_label);
                auto base_forms =
                    assemble_cm_forms(mpz_class(-base_lvl), AssembleOptions{trunc});
                const CMForm* base = nullptr;
                for (const auto& bf : base_forms)
                    if (bf.is_new && (base_letter == '?' || bf.letter == base_letter)) {
                        base = &bf;
                        break;
                    }
                if (!base) throw error("oldform table references missing form");
                bool match = true;
                long check = std::min<long>(trunc, sturm_bound(3, gg.level) + 2);
                for (long k = 1; k <= check && match; ++k) {
                    mpz_class rhs = 0;
                    for (auto& [n, coef] : rel.terms)
                        if (k % n == 0) rhs += coef * base->qexp[size_t(k / n)];
                    if (rhs != gg.qexp[size_t(k)]) match = false;
                }
                if (match) gg.is_new = false;
            }
            gg.letter = 'a';
        }
        return forms;
    }
    if (!G.is_elementary_two())
        throw non_two_torsion_class_group("Cl(" + D.get_str() + ") has higher torsion");

    long trunc = opt.trunc;
    long sturm = sturm_bound(3, labs(D.get_si()));
    trunc = std::max(trunc, sturm + 8);

    std::vector<QuadForm> reps;
    std::vector<ThetaSeries> thetas;
    for (size_t i = 0; i < G.order(); ++i) {
        QuadForm q = suitable_representative(G, int(i));
        reps.push_back(q);
        thetas.push_back(theta_qexp(q, 3, trunc));
    }

    auto chars = G.characters();
    std::vector<CMForm> forms;
    for (const auto& phi : chars) {
        CMForm g;
        g.level = labs(D.get_si());
        g.phi = phi;
        g.reps = reps;
        g.qexp.assign(size_t(trunc + 1), mpz_class(0));
        for (size_t i = 0; i < reps.size(); ++i)
            for (long k = 0; k <= trunc; ++k)
                if (thetas[i].coeff[size_t(k)] != 0)
                    g.qexp[size_t(k)] += phi[i] * thetas[i].coeff[size_t(k)];
        if (g.qexp[1] != 1)
            throw error("assemble_cm_forms: expansion is not normalized at q^1");
        forms.push_back(std::move(g));
    }

    // oldform detection via the explicit relation table
    for (auto& g : forms) {
        for (const auto& rel : oldform_relations()) {
            auto [lvl, letter] = parse_form_label(rel.old_label);
            if (lvl != g.level) continue;
            auto [base_lvl, base_letter] = parse_form_label(rel.new_label);
            auto base_forms = assemble_cm_forms(mpz_class(-base_lvl), AssembleOptions{trunc});
            const CMForm* base = nullptr;
            for (const auto& bf : base_forms)
                if (bf.is_new && (base_letter == '?' || bf.letter == base_letter)) {
                    base = &bf;
                    break;
                }
            if (!base) throw error("oldform table references missing form " + rel.new_label);
            bool match = true;
            long check = std::min<long>(trunc, sturm_bound(3, g.level) + 2);
            for (long k = 1; k <= check && match; ++k) {
                mpz_class rhs = 0;
                for (auto& [n, coef] : rel.terms)
                    if (k % n == 0) rhs += coef * base->qexp[size_t(k / n)];
                if (rhs != g.qexp[size_t(k)]) match = false;
            }
            if (match) g.is_new = false;
        }
    }

    // lettering: newforms before oldforms, then lexicographic q-expansions
    std::sort(forms.begin(), forms.end(), [](const CMForm& x, const CMForm& y) {
        if (x.is_new != y.is_new) return x.is_new;
        return x.qexp < y.qexp;
    });
    for (size_t i = 0; i < forms.size(); ++i) forms[i].letter = char('a' + i);

    // distinctness to the Sturm bound
    for (size_t i = 0; i + 1 < forms.size(); ++i)
        if (std::equal(forms[i].qexp.begin(), forms[i].qexp.begin() + sturm + 1,
                       forms[i + 1].qexp.begin()))
            throw error("assemble_cm_forms: indistinct forms at level " +
                        std::to_string(forms[i].level));
    return forms;
}

LValue l_newform3(const CMForm& g, long double tol) {
    long double per = tol / (long double)(g.reps.size() + 1);
    LValue out{"newform3", 0.0L, 0.0L, "shells", 0};
    for (size_t i = 0; i < g.reps.size(); ++i) {
        LValue li = l_theta3(g.reps[i], per);
        out.value += g.phi[i] * li.value;
        out.err_bound += li.err_bound;
        out.shells = std::max(out.shells, li.shells);
    }
    return out;
}

LValue l_tilde(const CMForm& g, long double tol) {
    long double scale = 2 * sqrtl((long double)g.level) / kEightPi3;
    LValue l = l_newform3(g, tol / scale);
    return LValue{"rescaled", scale * l.value, scale * l.err_bound, "shells", l.shells};
}

LValue l_pair(const mpz_class& d1, const mpz_class& d2) {
    if (d1 * d2 >= 0) throw error("l_pair: need d1 d2 < 0");
    LValue a = dirichlet_l2(d1);
    LValue b = dirichlet_l2(d2);
    long double scale = sqrtl((long double)mpz_class(-d1 * d2).get_d()) / kEightPi3;
    long double v = scale * a.value * b.value;
    long double err = scale * (fabsl(a.value) * b.err_bound + fabsl(b.value) * a.err_bound) +
                      1e-18L * fabsl(v);
    return LValue{"pair", v, err, "hurwitz", 0};
}

const std::vector<CMForm>& LValueCache::forms(long level) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = forms_.find(level);
    if (it == forms_.end())
        it = forms_.emplace(level, assemble_cm_forms(mpz_class(-level))).first;
    return it->second;
}

const CMForm& LValueCache::form(long level, char letter) {
    for (const auto& g : forms(level))
        if (g.letter == letter) return g;
    throw error("no form " + std::to_string(level) + std::string(1, letter));
}

std::vector<const CMForm*> LValueCache::candidates(const std::string& label) {
    auto [level, letter] = parse_form_label(label);
    const auto& fs = forms(level);
    std::vector<const CMForm*> out;
    for (const auto& g : fs) {
        if (letter != '?' && g.letter == letter) out.push_back(&g);
        if (letter == '?' && g.is_new) out.push_back(&g);
    }
    if (out.empty()) throw error("no candidate form for label " + label);
    return out;
}

LValue LValueCache::l_tilde_cached(const CMForm& g, long double tol) {
    std::string key = "Lt:" + g.label();
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = lvals_.find(key);
        if (it != lvals_.end() && it->second.err_bound <= tol) return it->second;
    }
    LValue v = l_tilde(g, tol);
    std::lock_guard<std::mutex> lock(mu_);
    lvals_[key] = v;
    return v;
}

LValue LValueCache::l_pair_cached(const mpz_class& d1, const mpz_class& d2) {
    std::string key = "l:" + d1.get_str() + "," + d2.get_str();
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = lvals_.find(key);
        if (it != lvals_.end()) return it->second;
    }
    LValue v = l_pair(d1, d2);
    std::lock_guard<std::mutex> lock(mu_);
    lvals_[key] = v;
    return v;
}

} // namespace mahler
