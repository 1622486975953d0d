#include "mahler/quadforms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace mahler {

bool QuadForm::primitive() const {
    mpz_class g = gcd(gcd(a, b), c);
    return g == 1;
}

QuadForm QuadForm::transform(const mpz_class& p, const mpz_class& q, const mpz_class& r,
                             const mpz_class& s) const {
    QuadForm out;
    out.a = eval(p, r);
    out.c = eval(q, s);
    out.b = 2 * (a * p * q + c * r * s) + b * (p * s + q * r);
    return out;
}

bool QuadForm::operator<(const QuadForm& o) const {
    if (a != o.a) return a < o.a;
    if (b != o.b) return b < o.b;
    return c < o.c;
}

std::string QuadForm::str() const {
    return "[" + a.get_str() + "," + b.get_str() + "," + c.get_str() + "]";
}

bool is_reduced(const QuadForm& f) {
    if (!(abs(f.b) <= f.a && f.a <= f.c)) return false;
    if ((abs(f.b) == f.a || f.a == f.c) && f.b < 0) return false;
    return true;
}

QuadForm reduce(const QuadForm& f) {
    if (!f.pos_def()) throw not_positive_definite("reduce: " + f.str());
    QuadForm g = f;
    for (;;) {
        // normalize: b in (-a, a]
        if (!(g.b > -g.a && g.b <= g.a)) {
            mpz_class twoa = 2 * g.a, k;
            mpz_fdiv_q(k.get_mpz_t(), mpz_class(g.a - g.b).get_mpz_t(), twoa.get_mpz_t());
            mpz_class b2 = g.b + 2 * k * g.a;
            mpz_class c2 = g.c + k * g.b + k * k * g.a;
            g.b = b2;
            g.c = c2;
        }
        if (g.a > g.c) {
            std::swap(g.a, g.c);
            g.b = -g.b;
            continue;
        }
        if (g.a == g.c && g.b < 0) g.b = -g.b;
        if (abs(g.b) == g.a && g.b < 0) g.b = -g.b;
        break;
    }
    return g;
}

QuadForm compose_forms(const QuadForm& f0, const QuadForm& g0) {
    if (f0.disc() != g0.disc()) throw error("compose: discriminants differ");
    if (!f0.primitive() || !g0.primitive()) throw error("compose: forms must be primitive");
    const mpz_class D = f0.disc();

    // Replace g by an equivalent form whose leading coefficient is coprime
    // to f.a, then align middle coefficients by CRT and multiply.
    QuadForm f = f0, g = g0;
    auto coprime_rep = [&](const QuadForm& h, const mpz_class& mod) {
        for (long r = 0; r <= 40; ++r)
            for (long x = -r; x <= r; ++x)
                for (long y = -r; y <= r; ++y) {
                    if (std::max(std::labs(x), std::labs(y)) != r) continue;
                    mpz_class gxy = gcd(mpz_class(x), mpz_class(y));
                    if (gxy != 1) continue;
                    mpz_class v = h.eval(x, y);
                    if (v <= 0 || gcd(v, mod) != 1) continue;
                    // extend (x,y) to an SL2 matrix [[x, -u],[y, v2]]
                    mpz_class gg, v2, u;
                    mpz_gcdext(gg.get_mpz_t(), v2.get_mpz_t(), u.get_mpz_t(),
                               mpz_class(x).get_mpz_t(), mpz_class(y).get_mpz_t());
                    return h.transform(x, -u, y, v2);
                }
        throw error("compose: no coprime representative found");
    };
    g = coprime_rep(g, f.a);

    // need B == f.b mod 2 f.a and B == g.b mod 2 g.a; gcd(2f.a, 2g.a) = 2 and
    // f.b == g.b mod 2 since both have discriminant D
    mpz_class m1 = 2 * f.a, m2 = 2 * g.a;
    mpz_class gg, s, t;
    mpz_gcdext(gg.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), m1.get_mpz_t(), m2.get_mpz_t());
    mpz_class diff = g.b - f.b;
    if (diff % gg != 0) throw error("compose: CRT failed");
    mpz_class lcm = m1 / gg * m2;
    mpz_class B = f.b + m1 * (s % (m2 / gg)) * (diff / gg);
    B %= lcm;
    // B now solves both congruences modulo lcm
    mpz_class A = f.a * g.a;
    mpz_class C = (B * B - D) / (4 * A);
    QuadForm result{A, B, C};
    if (result.disc() != D) throw error("compose: internal discriminant mismatch");
    return reduce(result);
}

namespace {

bool valid_discriminant(const mpz_class& D) {
    if (D >= 0) return false;
    mpz_class r = D % 4; // truncated toward zero: r in {-3,-2,-1,0}
    return r == 0 || r == -3;
}

} // namespace

FormClassGroup class_group(const mpz_class& D) {
    if (!valid_discriminant(D))
        throw invalid_discriminant("class_group: D must be negative, 0 or 1 mod 4");
    FormClassGroup G;
    G.D = D;
    // enumerate reduced primitive forms: |b| <= a <= sqrt(|D|/3)
    mpz_class amax;
    mpz_class absD = -D;
    mpz_sqrt(amax.get_mpz_t(), mpz_class(absD / 3).get_mpz_t());
    for (mpz_class a = 1; a <= amax; ++a) {
        for (mpz_class b = -a + 1; b <= a; ++b) {
            mpz_class num = b * b - D;
            if (num % (4 * a) != 0) continue;
            mpz_class c = num / (4 * a);
            if (c < a) continue;
            QuadForm f{a, b, c};
            if (!f.primitive()) continue;
            if (!is_reduced(f)) continue;
            G.reps.push_back(f);
        }
    }
    std::sort(G.reps.begin(), G.reps.end());

    G.table.assign(G.reps.size(), std::vector<int>(G.reps.size(), -1));
    auto find = [&](const QuadForm& f) {
        auto it = std::lower_bound(G.reps.begin(), G.reps.end(), f);
        if (it == G.reps.end() || !(*it == f)) throw error("class_group: closure failure");
        return int(it - G.reps.begin());
    };
    for (size_t i = 0; i < G.reps.size(); ++i)
        for (size_t j = i; j < G.reps.size(); ++j) {
            int k = find(compose_forms(G.reps[i], G.reps[j]));
            G.table[i][j] = k;
            G.table[j][i] = k;
        }

    // identity: the principal form
    QuadForm principal;
    if (D % 2 == 0)
        principal = QuadForm{1, 0, -D / 4};
    else
        principal = QuadForm{1, 1, (1 - D) / 4};
    G.identity = find(reduce(principal));

    // group sanity: identity row, inverses, associativity spot checks
    for (size_t i = 0; i < G.reps.size(); ++i) {
        if (G.table[size_t(G.identity)][i] != int(i))
            throw error("class_group: identity failure");
        QuadForm inv{G.reps[i].a, -G.reps[i].b, G.reps[i].c};
        if (G.table[i][size_t(find(reduce(inv)))] != G.identity)
            throw error("class_group: inverse failure");
    }
    for (size_t i = 0; i < G.reps.size(); ++i)
        for (size_t j = 0; j < G.reps.size(); ++j)
            for (size_t k = 0; k < G.reps.size(); ++k) {
                int ij = G.table[i][j], jk = G.table[j][k];
                if (G.table[size_t(ij)][k] != G.table[i][size_t(jk)])
                    throw error("class_group: associativity failure");
            }
    return G;
}

int FormClassGroup::index_of(const QuadForm& f) const {
    if (f.disc() != D) return -1;
    QuadForm r = reduce(f);
    auto it = std::lower_bound(reps.begin(), reps.end(), r);
    if (it == reps.end() || !(*it == r)) return -1;
    return int(it - reps.begin());
}

int FormClassGroup::inverse_of(int i) const {
    QuadForm inv{reps[size_t(i)].a, -reps[size_t(i)].b, reps[size_t(i)].c};
    return index_of(inv);
}

bool FormClassGroup::is_elementary_two() const {
    for (size_t i = 0; i < reps.size(); ++i)
        if (table[i][i] != identity) return false;
    return true;
}

std::vector<std::vector<int>> FormClassGroup::characters() const {
    if (!is_elementary_two())
        throw non_two_torsion_class_group("characters need Cl(D) = (Z/2)^g");
    // find generators greedily; track each element's coordinates
    size_t n = reps.size();
    std::vector<int> span{identity};
    std::vector<std::vector<int>> coords(n);
    coords[size_t(identity)] = {};
    std::vector<int> gens;
    while (span.size() < n) {
        int next = -1;
        for (size_t i = 0; i < n; ++i)
            if (std::find(span.begin(), span.end(), int(i)) == span.end()) {
                next = int(i);
                break;
            }
        gens.push_back(next);
        std::vector<int> grown = span;
        for (int e : span) {
            int prod = table[size_t(e)][size_t(next)];
            auto cc = coords[size_t(e)];
            cc.push_back(next);
            coords[size_t(prod)] = cc;
            grown.push_back(prod);
        }
        span = grown;
    }
    size_t g = gens.size();
    std::vector<std::vector<int>> chars;
    for (size_t mask = 0; mask < (size_t(1) << g); ++mask) {
        std::vector<int> vals(n, 1);
        for (size_t i = 0; i < n; ++i) {
            int v = 1;
            for (int gen : coords[i]) {
                size_t gi = size_t(std::find(gens.begin(), gens.end(), gen) - gens.begin());
                if (mask & (size_t(1) << gi)) v = -v;
            }
            vals[i] = v;
        }
        chars.push_back(vals);
    }
    return chars;
}

int kronecker_chi(const mpz_class& d, const mpz_class& n) {
    return mpz_kronecker(d.get_mpz_t(), n.get_mpz_t());
}

namespace {

// deterministic Miller-Rabin for values < 3.317e24
bool is_prime_det(const mpz_class& n) {
    if (n < 2) return false;
    static const long bases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (long b : bases) {
        if (n == b) return true;
        if (n % b == 0) return false;
    }
    mpz_class d = n - 1;
    unsigned long r = mpz_scan1(d.get_mpz_t(), 0);
    mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), r);
    for (long b : bases) {
        mpz_class x, base(b);
        mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (unsigned long i = 1; i < r; ++i) {
            x = x * x % n;
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

// primes represented by f, coprime to 2D, smallest first
std::vector<mpz_class> represented_primes(const QuadForm& f, const mpz_class& D, int count,
                                          long bound) {
    std::set<mpz_class> found;
    for (long r = 0; long(found.size()) < count && r <= bound; ++r)
        for (long x = -r; x <= r; ++x)
            for (long y = -r; y <= r; ++y) {
                if (std::max(std::labs(x), std::labs(y)) != r) continue;
                mpz_class v = f.eval(x, y);
                if (v < 2) continue;
                if (gcd(v, 2 * D) != 1) continue;
                if (is_prime_det(v)) found.insert(v);
            }
    return std::vector<mpz_class>(found.begin(), found.end());
}

} // namespace

GenusCharacter genus_character(const mpz_class& d1, const mpz_class& d2,
                               const FormClassGroup& G, const GenusSearchOptions& opt) {
    if (d1 * d2 != G.D) throw error("genus_character: d1 d2 != D");
    auto is_disc = [](const mpz_class& d) {
        mpz_class r = d % 4;
        if (r < 0) r += 4;
        return r == 0 || r == 1;
    };
    if (!is_disc(d1) || !is_disc(d2))
        throw invalid_discriminant("genus_character: d1, d2 must be discriminants");

    GenusCharacter chi;
    chi.d1 = d1;
    chi.d2 = d2;
    chi.values.resize(G.reps.size());
    for (size_t i = 0; i < G.reps.size(); ++i) {
        auto primes =
            represented_primes(G.reps[i], G.D, opt.agreeing_primes, opt.coord_bound);
        if (long(primes.size()) < opt.agreeing_primes)
            throw no_prime_found("genus_character: too few represented primes for " +
                                 G.reps[i].str());
        int v = 0;
        for (const auto& p : primes) {
            int v1 = kronecker_chi(d1, p);
            int v2 = kronecker_chi(d2, p);
            if (v1 == 0 || v1 != v2)
                throw not_multiplicative("genus_character: chi_d1(p) != chi_d2(p) at p=" +
                                         p.get_str());
            if (v == 0)
                v = v1;
            else if (v != v1)
                throw not_multiplicative(
                    "genus_character: representative-prime dependence for " +
                    G.reps[i].str());
        }
        chi.values[i] = v;
    }
    // homomorphism check on the composition table
    for (size_t i = 0; i < G.reps.size(); ++i)
        for (size_t j = 0; j < G.reps.size(); ++j)
            if (chi.values[size_t(G.table[i][j])] != chi.values[i] * chi.values[j])
                throw not_multiplicative("genus character is not multiplicative");
    return chi;
}

std::optional<std::pair<mpz_class, mpz_class>> find_genus_pair(
    const FormClassGroup& G, const std::vector<int>& values, const GenusSearchOptions& opt) {
    // try all factorizations D = d1 d2 into discriminants with d1 > 0
    mpz_class absD = -G.D;
    for (mpz_class d1 = 1; d1 <= absD; ++d1) {
        if (absD % d1 != 0) continue;
        mpz_class d2 = G.D / d1;
        auto is_disc = [](const mpz_class& d) {
            mpz_class r = d % 4;
            if (r < 0) r += 4;
            return r == 0 || r == 1;
        };
        if (!is_disc(d1) || !is_disc(d2)) continue;
        try {
            GenusCharacter chi = genus_character(d1, d2, G, opt);
            if (chi.values == values) return std::make_pair(d1, d2);
        } catch (const error&) {
            continue;
        }
    }
    return std::nullopt;
}

CMPoint cm_point(const QuadForm& f) {
    if (!f.pos_def()) throw not_positive_definite("cm_point: " + f.str());
    mpz_class absD = -f.disc();
    long double rb = (long double)f.b.get_d();
    long double ra = (long double)f.a.get_d();
    long double sq = sqrtl((long double)absD.get_d());
    return CMPoint{f, {-rb / (2 * ra), sq / (2 * ra)}};
}

long sigma0_plus(long n) {
    long cnt = 0;
    for (long p = 2; p * p <= n; ++p)
        if (n % p == 0) {
            ++cnt;
            while (n % p == 0) n /= p;
        }
    if (n > 1) ++cnt;
    return cnt;
}

std::array<mpz_class, 4> atkin_lehner_matrix(long n, long N) {
    if (N % n != 0 || mpz_class(gcd(mpz_class(n), mpz_class(N / n))) != 1)
        throw error("atkin_lehner_matrix: n must be a Hall divisor of N");
    // [[n s, -t],[N, n]] with n s + (N/n) t = 1 has determinant n
    mpz_class g, s, t;
    mpz_class mn(n), mq(N / n);
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), mn.get_mpz_t(), mq.get_mpz_t());
    // g = 1 = s n + t (N/n)
    return {mn * s, -t, mpz_class(N), mn};
}

QuadForm atkin_lehner_apply(const QuadForm& f, long n, long N) {
    auto M = atkin_lehner_matrix(n, N);
    // Q'(x,y) = Q(M11 x + M12 y, M21 x + M22 y)/n
    QuadForm t = f.transform(M[0], M[1], M[2], M[3]);
    if (t.a % n != 0 || t.b % n != 0 || t.c % n != 0)
        throw error("atkin_lehner_apply: transform not divisible by n");
    return QuadForm{t.a / n, t.b / n, t.c / n};
}

namespace {

// key of the Gamma_0(N)-class of a Heegner form via the GKZ bijection
struct HeegnerKey {
    mpz_class beta; // b mod 2N in [0, 2N)
    QuadForm reduced;
    bool operator<(const HeegnerKey& o) const {
        if (beta != o.beta) return beta < o.beta;
        return reduced < o.reduced;
    }
};

HeegnerKey heegner_key(const QuadForm& f, long N) {
    // f = [aN, b, c]; m2 = gcd(N,b,c); N = N1 N2 coprime with the primes of
    // m2 in N2 and everything else in N1; class key = reduce([a N1, b, c N2])
    mpz_class a = f.a / N;
    mpz_class m2 = gcd(gcd(mpz_class(N), f.b), f.c);
    long N1 = 1, N2 = 1;
    long rem = N;
    for (long p = 2; p <= rem; ++p) {
        if (rem % p != 0) continue;
        long pe = 1;
        while (rem % p == 0) {
            rem /= p;
            pe *= p;
        }
        if (m2 % p == 0)
            N2 *= pe;
        else
            N1 *= pe; // primes of m1 and primes away from m both go to N1
    }
    HeegnerKey key;
    mpz_class beta = f.b % (2 * N);
    if (beta < 0) beta += 2 * N;
    key.beta = beta;
    key.reduced = reduce(QuadForm{a * N1, f.b, f.c * N2});
    return key;
}

} // namespace

std::vector<long> heegner_m_values(const mpz_class& D, long N) {
    std::set<long> ms;
    for (long beta = 0; beta < 2 * N; ++beta) {
        mpz_class r = (mpz_class(beta) * beta - D) % (4 * N);
        if (r != 0) continue;
        // smallest forms with b == beta (mod 2N): scan a few leading coeffs
        for (long A = N; A <= 64 * N; A += N) {
            for (mpz_class b = beta - 2 * N * ((A + beta) / (2 * N) + 2); b <= A;
                 b += 2 * N) {
                if (!(b > -A && b <= A)) continue;
                mpz_class num = b * b - D;
                if (num % (4 * A) != 0) continue;
                mpz_class c = num / (4 * A);
                QuadForm f{A, b, c};
                mpz_class a = A / N;
                if (gcd(gcd(a, f.b), f.c) != 1) continue;
                long m = mpz_class(gcd(gcd(mpz_class(N), f.b), a * f.c)).get_si();
                ms.insert(m);
            }
        }
    }
    return std::vector<long>(ms.begin(), ms.end());
}

HeegnerOrbits heegner_orbits(const mpz_class& D, long N, long m,
                             const std::vector<int>& wset) {
    HeegnerOrbits out;
    out.D = D;
    out.N = N;
    out.m = m;

    FormClassGroup G = class_group(D); // validates D; h(D) = G.order()
    long hD = long(G.order());
    long per_beta = (1L << sigma0_plus(m)) * hD; // Q^0_{D,N,m,beta} class count

    mpz_class absD = -D;
    mpz_class lim;
    mpz_sqrt(lim.get_mpz_t(), absD.get_mpz_t());
    long Abound = std::max(4 * N * (lim.get_si() + 1),
                           long((N * N + absD.get_si()) / 4) + N);

    // Enumerate [A, b, c] with N | A, b normalized into (-A, A]; minimal class
    // representatives can sit at large A, so escalate the bound until every
    // beta class is either empty or complete.
    std::map<HeegnerKey, QuadForm> classes; // key -> min-leading form
    for (int round = 0;; ++round) {
        classes.clear();
        std::map<mpz_class, long> beta_count;
        for (long A = N; A <= Abound; A += N) {
            for (mpz_class b = -A + 1; b <= A; ++b) {
                mpz_class num = b * b - D;
                if (num % (4 * A) != 0) continue;
                mpz_class c = num / (4 * A);
                QuadForm f{A, b, c};
                mpz_class a = A / N;
                if (gcd(gcd(a, b), c) != 1) continue;
                mpz_class mm = gcd(gcd(mpz_class(N), b), a * c);
                if (mm != m) continue;
                HeegnerKey key = heegner_key(f, N);
                auto it = classes.find(key);
                if (it == classes.end()) {
                    classes.emplace(key, f);
                } else if (f.a < it->second.a) {
                    it->second = f;
                }
            }
        }
        beta_count.clear();
        for (auto& [k, f] : classes) ++beta_count[k.beta];
        bool complete = !classes.empty();
        for (auto& [beta, cnt] : beta_count)
            if (cnt != per_beta) complete = false;
        if (complete) {
            out.t = long(beta_count.size());
            break;
        }
        if (round == 3) {
            if (classes.empty()) throw empty_set("no Heegner forms for these (D, N, m)");
            throw error("heegner_orbits: incomplete beta classes at bound " +
                        std::to_string(Abound));
        }
        Abound *= 4;
    }

    std::vector<HeegnerKey> keys;
    for (auto& [k, f] : classes) {
        keys.push_back(k);
        out.gamma0_reps.push_back(f);
    }

    // union-find under the W_n moves
    std::vector<size_t> parent(keys.size());
    for (size_t i = 0; i < parent.size(); ++i) parent[i] = i;
    std::function<size_t(size_t)> find = [&](size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto index_of_key = [&](const HeegnerKey& k) {
        auto it = std::lower_bound(keys.begin(), keys.end(), k);
        if (it == keys.end() || k < *it) throw error("heegner_orbits: W image escaped the set");
        return size_t(it - keys.begin());
    };
    for (size_t i = 0; i < keys.size(); ++i)
        for (int n : wset) {
            if (n <= 1) continue;
            QuadForm img = atkin_lehner_apply(out.gamma0_reps[i], n, N);
            if (img.a < 0) img = QuadForm{-img.a, -img.b, -img.c}; // GL ambiguity
            size_t j = index_of_key(heegner_key(img, N));
            size_t ri = find(i), rj = find(j);
            if (ri != rj) parent[ri] = rj;
        }

    std::map<size_t, std::vector<size_t>> orbits;
    for (size_t i = 0; i < keys.size(); ++i) orbits[find(i)].push_back(i);
    for (auto& [root, members] : orbits) {
        out.plus_orbits.push_back(members);
        QuadForm best = out.gamma0_reps[members[0]];
        for (size_t idx : members)
            if (out.gamma0_reps[idx].a < best.a) best = out.gamma0_reps[idx];
        out.plus_reps.push_back(best);
    }
    return out;
}

std::complex<long double> canonical_tau(std::complex<long double> tau, long N,
                                        const std::vector<int>& wset, bool* moved) {
    if (moved) *moved = false;
    auto gamma0_max = [&](std::complex<long double> t) {
        for (int guard = 0; guard < 4000; ++guard) {
            t -= std::complex<long double>(roundl(t.real()), 0);
            // improvement requires |N c t + d| < 1, so c <= 1/(N Im t)
            long cmax = long(1.0L / ((long double)N * t.imag())) + 1;
            bool improved = false;
            for (long c = 1; c <= cmax && !improved; ++c) {
                long double x = (long double)(N * c) * t.real();
                long d0 = long(-roundl(x));
                for (long dd = d0 - 2; dd <= d0 + 2 && !improved; ++dd) {
                    if (std::gcd(std::labs(dd), N * c) != 1) continue;
                    std::complex<long double> den =
                        (long double)(N * c) * t + (long double)dd;
                    if (std::norm(den) < 1.0L - 1e-15L) {
                        // gamma = [[a, b],[Nc, d]] with a d - b N c = 1
                        mpz_class A, B, g, s, u;
                        mpz_class Nc(N * c), d(dd);
                        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), u.get_mpz_t(),
                                   d.get_mpz_t(), Nc.get_mpz_t());
                        // s d + u N c = 1 -> a = s, b = -u
                        A = s;
                        B = -u;
                        std::complex<long double> num =
                            (long double)A.get_d() * t + (long double)B.get_d();
                        t = num / den;
                        improved = true;
                    }
                }
            }
            if (!improved) return t;
        }
        throw error("canonical_tau: Gamma_0(N) reduction did not terminate");
    };

    std::complex<long double> best = gamma0_max(tau);
    bool changed = std::abs(best - tau) > 1e-12L;
    for (int guard = 0; guard < 64; ++guard) {
        bool improved = false;
        for (int n : wset) {
            if (n <= 1) continue;
            auto M = atkin_lehner_matrix(n, N);
            std::complex<long double> num =
                (long double)M[0].get_d() * best + (long double)M[1].get_d();
            std::complex<long double> den =
                (long double)M[2].get_d() * best + (long double)M[3].get_d();
            std::complex<long double> cand = gamma0_max(num / den);
            if (cand.imag() > best.imag() + 1e-12L) {
                best = cand;
                improved = true;
                changed = true;
            }
        }
        if (!improved) break;
    }
    if (moved) *moved = changed;
    return best;
}

} // namespace mahler
