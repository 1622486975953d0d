#include "mahler/verifier.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <functional>
#include <future>
#include <set>
#include <sstream>

namespace mahler {

namespace {

const long double kTwoPi = 2.0L * acosl(-1.0L);

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::stringstream ss(s);
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

mpq_class parse_q(const std::string& s) {
    mpq_class q(s);
    q.canonicalize();
    return q;
}

EtaQuotientSpec parse_eta(const std::string& s) {
    EtaQuotientSpec spec;
    for (auto& p : split(s, ',')) {
        auto ad = split(p, ':');
        if (ad.size() != 2) throw data_error("bad eta spec: " + s);
        spec.factors.emplace_back(std::stoi(ad[0]), std::stoi(ad[1]));
    }
    return spec;
}

// rhs grammar: term (+|- term)*, term = coef '*' (Lt(label) | l(d1,d2)) or a
// bare rational for the zero rhs
std::vector<RhsTerm> parse_rhs(const std::string& text, bool* is_zero) {
    *is_zero = false;
    std::string s = trim(text);
    if (s == "0") {
        *is_zero = true;
        return {};
    }
    std::vector<RhsTerm> out;
    size_t i = 0;
    auto fail = [&](const std::string& why) { throw data_error(why + " in rhs: " + text); };
    while (i < s.size()) {
        int sign = 1;
        while (i < s.size() && (s[i] == '+' || s[i] == '-' || std::isspace((unsigned char)s[i]))) {
            if (s[i] == '-') sign = -sign;
            ++i;
        }
        size_t star = s.find('*', i);
        if (star == std::string::npos) fail("missing coefficient");
        mpq_class coef = parse_q(s.substr(i, star - i));
        i = star + 1;
        RhsTerm t;
        t.coef = sign * coef;
        if (s.compare(i, 3, "Lt(") == 0) {
            size_t close = s.find(')', i);
            if (close == std::string::npos) fail("missing ')'");
            t.is_pair = false;
            t.form_label = s.substr(i + 3, close - i - 3);
            i = close + 1;
        } else if (s.compare(i, 2, "l(") == 0) {
            size_t close = s.find(')', i);
            if (close == std::string::npos) fail("missing ')'");
            auto ds = split(s.substr(i + 2, close - i - 2), ',');
            if (ds.size() != 2) fail("l() needs two discriminants");
            t.is_pair = true;
            t.d1 = mpz_class(ds[0]);
            t.d2 = mpz_class(ds[1]);
            i = close + 1;
        } else {
            fail("unknown rhs term kind");
        }
        out.push_back(t);
    }
    return out;
}

} // namespace

std::optional<mpq_class> recognize_rational(long double x, long den_bound, long double tol) {
    long double v = x;
    long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    for (int iter = 0; iter < 40; ++iter) {
        long double fl = floorl(v);
        long a = (long)fl;
        long h2 = a * h1 + h0, k2 = a * k1 + k0;
        if (k2 > den_bound) break;
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        if (fabsl(v - fl) < 1e-18L) break;
        v = 1.0L / (v - fl);
    }
    if (k1 == 0) return std::nullopt;
    mpq_class q(h1, k1);
    q.canonicalize();
    if (fabsl((long double)q.get_d() - x) <= tol) return q;
    return std::nullopt;
}

Verifier::Verifier(const std::string& data_dir, long trunc_q)
    : dir_(data_dir.empty() ? default_data_dir() : data_dir),
      reg_(Registry::instance(dir_)),
      modular_(reg_, trunc_q),
      modular_hi_(reg_, 2 * (trunc_q > 0 ? trunc_q : default_trunc_q())) {
    load_tables();
    load_modeq();
    load_relations();
}

void Verifier::load_tables() {
    std::ifstream in(dir_ + "/tables.txt");
    if (!in) throw data_error("cannot open " + dir_ + "/tables.txt");
    std::string line, family;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[' && line.back() == ']') {
            family = line.substr(1, line.size() - 2);
            table_order_.push_back(family);
            tables_[family] = {};
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos || trim(line.substr(0, eq)) != "row")
            throw data_error("bad tables line: " + line);
        auto fields = split(line.substr(eq + 1), ';');
        if (fields.size() < 3) throw data_error("row needs 3+ fields: " + line);

        IdentityRow row;
        row.family = family;
        auto abc = split(fields[0], ',');
        if (abc.size() != 3) throw data_error("bad form triple: " + line);
        row.form = QuadForm{mpz_class(abc[0]), mpz_class(abc[1]), mpz_class(abc[2])};

        std::string flags = fields.size() >= 4 ? fields[3] : "";
        for (auto& f : split(flags, ',')) {
            if (f == "K")
                row.outside_k_warning = true;
            else if (f == "star")
                row.star = true;
            else if (f == "tonew" || f.rfind("ref:", 0) == 0)
                row.remark += (row.remark.empty() ? "" : ",") + f;
            else if (f == "oosS" || f == "oosH") {
                row.in_scope = false;
                row.oos_reason += (row.oos_reason.empty() ? "" : ",") +
                                  std::string(f == "oosS" ? "special-case row"
                                                          : "non-rational-coefficient form");
            } else if (!f.empty()) {
                throw data_error("unknown flag '" + f + "' in: " + line);
            }
        }

        row.rhs_text = fields[2];
        std::string cexpr = fields[1];
        if (row.in_scope) {
            if (cexpr.rfind("alg:", 0) == 0) {
                row.c_is_algebraic = true;
                std::string body = cexpr.substr(4);
                size_t at = body.find('@');
                if (at == std::string::npos) throw data_error("alg needs selector: " + line);
                for (auto& c : split(body.substr(0, at), ','))
                    row.c_alg.minpoly.emplace_back(c);
                row.c_alg.root_sel = trim(body.substr(at + 1));
            } else {
                std::map<std::string, mpq_class> empty;
                mpq_class v = Expr::parse(cexpr).eval(empty);
                if (v.get_den() != 1) throw data_error("non-integer c: " + line);
                row.c_int = v.get_num();
            }
            row.rhs = parse_rhs(fields[2], &row.rhs_is_zero);
        }
        tables_[family].push_back(std::move(row));
    }
}

void Verifier::load_modeq() {
    std::ifstream in(dir_ + "/modeq.txt");
    if (!in) throw data_error("cannot open " + dir_ + "/modeq.txt");
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        auto fields = split(line, ';');
        if (fields.size() != 4) throw data_error("bad modeq line: " + line);
        ModEq eq;
        eq.name = fields[0];
        eq.expr = Expr::parse(fields[1]);
        auto ydef = split(fields[2], '=');
        auto zdef = split(fields[3], '=');
        if (ydef.size() != 2 || zdef.size() != 2) throw data_error("bad modeq defs: " + line);
        eq.y = parse_eta(ydef[1]);
        eq.z = parse_eta(zdef[1]);
        modeqs_.push_back(std::move(eq));
    }
}

void Verifier::load_relations() {
    std::ifstream in(dir_ + "/relations.txt");
    if (!in) throw data_error("cannot open " + dir_ + "/relations.txt");
    std::string line;
    RelationData cur;
    bool open = false;
    auto flush = [&] {
        if (open) relations_.push_back(cur);
        cur = RelationData{};
    };
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[' && line.back() == ']') {
            flush();
            open = true;
            cur.name = line.substr(1, line.size() - 2);
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos) throw data_error("bad relations line: " + line);
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key == "lhs") {
            auto parts = split(val, ':');
            if (parts.size() != 2) throw data_error("bad lhs: " + line);
            cur.lhs_family = parts[0];
            cur.lhs_arg = Expr::parse(parts[1]);
        } else if (key == "rhs") {
            for (auto& term : split(val, '|')) {
                auto parts = split(term, ':');
                if (parts.size() != 4) throw data_error("bad rhs term: " + line);
                RelTerm t;
                t.coef = parse_q(parts[0]);
                t.family = parts[1];
                t.qpow = std::stoi(parts[2]);
                t.arg = Expr::parse(parts[3]);
                cur.rhs.push_back(std::move(t));
            }
        } else if (key == "samples") {
            for (auto& v : split(val, ',')) cur.samples.push_back(parse_q(v));
        } else if (key == "special") {
            auto parts = split(val, ':');
            if (parts.size() != 2) throw data_error("bad special: " + line);
            cur.specials.emplace_back(parse_q(parts[0]), parts[1] == "refuse");
        } else {
            throw data_error("unknown relations key: " + key);
        }
    }
    flush();
}

const std::vector<IdentityRow>& Verifier::table(const std::string& family) const {
    auto it = tables_.find(family);
    if (it == tables_.end()) throw data_error("no table for family " + family);
    return it->second;
}

VerificationReport Verifier::verify_identity(const IdentityRow& row, const VerifyOptions& opt) {
    VerificationReport rep;
    rep.row = row;
    if (!row.in_scope) {
        rep.status = RowStatus::out_of_scope;
        rep.note = row.oos_reason;
        return rep;
    }
    try {
        const FamilyContext* ctx = &modular_.context(row.family);
        CMPoint pt = cm_point(row.form);

        // c(tau_Q) with one automatic precision escalation
        auto c_check = [&](const FamilyContext& c) {
            std::complex<long double> cv = c.c_at(pt.tau);
            long double resid;
            if (!row.c_is_algebraic) {
                long double expect = (long double)row.c_int.get_d();
                resid = std::abs(cv - std::complex<long double>(expect, 0));
            } else {
                // residual = |P(cv)| / |P'(cv)|, the Newton distance to a root
                std::complex<long double> p = 0, dp = 0;
                for (const auto& co : row.c_alg.minpoly) {
                    dp = dp * cv + p;
                    p = p * cv + (long double)co.get_d();
                }
                resid = std::abs(p) / std::max(std::abs(dp), 1e-30L);
            }
            return std::pair<std::complex<long double>, long double>(cv, resid);
        };
        auto [cv, c_resid] = c_check(*ctx);
        long double c_tol =
            std::max(1e-6L, 5e-15L * std::abs(cv)); // relative floor for the huge moduli
        if (c_resid > c_tol) {
            const FamilyContext& hi = modular_hi_.context(row.family);
            auto [cv2, r2] = c_check(hi);
            cv = cv2;
            c_resid = r2;
            ctx = &hi;
        }
        rep.computed_c_re = cv.real();
        rep.computed_c_im = cv.imag();
        rep.c_residual = c_resid;

        // root selector sanity for algebraic c
        if (row.c_is_algebraic) {
            const std::string& sel = row.c_alg.root_sel;
            if (sel == "im+" && cv.imag() < 0) rep.note += "[selector: expected Im>0]";
            if (sel == "im-" && cv.imag() > 0) rep.note += "[selector: expected Im<0]";
        }

        // LHS by both evaluators
        rep.lhs_q = ctx->re_mtilde(pt.tau);
        rep.lhs_lattice = mahler_lattice(*ctx, pt.tau, {opt.lvalue_tol, false});
        if (fabsl(rep.lhs_q - rep.lhs_lattice) > opt.evaluator_agreement_tol) {
            rep.status = RowStatus::internal_error;
            rep.note += "[q-series and lattice evaluators disagree: " +
                        std::to_string((double)(rep.lhs_q - rep.lhs_lattice)) + "]";
            return rep;
        }

        // RHS: resolve labels, preferring the candidate that matches
        long double fixed = 0;
        std::vector<std::pair<const RhsTerm*, std::vector<const CMForm*>>> open_terms;
        for (const auto& t : row.rhs) {
            if (t.is_pair) {
                fixed += (long double)t.coef.get_d() *
                         lvalues_.l_pair_cached(t.d1, t.d2).value;
            } else {
                auto cands = lvalues_.candidates(t.form_label);
                open_terms.emplace_back(&t, cands);
            }
        }
        // all combinations of candidates (ambiguity is rare and tiny)
        long double best = INFINITY, best_rhs = fixed;
        std::string best_labels;
        std::function<void(size_t, long double, std::string)> walk =
            [&](size_t i, long double acc, std::string labels) {
                if (i == open_terms.size()) {
                    long double resid = fabsl(rep.lhs_q - acc);
                    if (resid < best) {
                        best = resid;
                        best_rhs = acc;
                        best_labels = labels;
                    }
                    return;
                }
                for (const CMForm* g : open_terms[i].second) {
                    long double lv = lvalues_.l_tilde_cached(*g, opt.lvalue_tol).value;
                    walk(i + 1,
                         acc + (long double)open_terms[i].first->coef.get_d() * lv,
                         labels + (labels.empty() ? "" : ",") + g->label());
                }
            };
        walk(0, fixed, "");
        rep.rhs = best_rhs;
        rep.resolved_labels = best_labels;
        rep.residual = best;

        bool c_ok = c_resid <= c_tol;
        bool rhs_ok = rep.residual <= opt.identity_tol;
        rep.status = (c_ok && rhs_ok) ? RowStatus::pass : RowStatus::fail;
        if (!c_ok) rep.note += "[c mismatch]";
        if (!rhs_ok) {
            auto rec = recognize_rational(rep.lhs_q / (rep.rhs == 0 ? 1 : rep.rhs));
            if (rec && *rec != 1)
                rep.note += "[lhs/rhs ~ " + rec->get_str() + "]";
        }
    } catch (const error& e) {
        rep.status = RowStatus::internal_error;
        rep.note += std::string("[") + e.what() + "]";
    }
    return rep;
}

TableSummary Verifier::verify_family(const std::string& family, const VerifyOptions& opt) {
    TableSummary sum;
    for (const auto& row : table(family)) {
        sum.reports.push_back(verify_identity(row, opt));
        ++sum.total;
        switch (sum.reports.back().status) {
            case RowStatus::pass: ++sum.passed; break;
            case RowStatus::fail: ++sum.failed; break;
            case RowStatus::out_of_scope: ++sum.out_of_scope; break;
            case RowStatus::internal_error: ++sum.internal; break;
        }
    }
    return sum;
}

TableSummary Verifier::verify_all_tables(const VerifyOptions& opt) {
    TableSummary sum;
    std::vector<std::future<TableSummary>> futs;
    int jobs = std::max(1, opt.jobs);
    if (jobs > 1) {
        for (const auto& fam : table_order_)
            futs.push_back(std::async(std::launch::async,
                                      [this, fam, opt] { return verify_family(fam, opt); }));
        for (auto& f : futs) {
            TableSummary s = f.get();
            sum.total += s.total;
            sum.passed += s.passed;
            sum.failed += s.failed;
            sum.out_of_scope += s.out_of_scope;
            sum.internal += s.internal;
            for (auto& r : s.reports) sum.reports.push_back(std::move(r));
        }
        return sum;
    }
    for (const auto& fam : table_order_) {
        TableSummary s = verify_family(fam, opt);
        sum.total += s.total;
        sum.passed += s.passed;
        sum.failed += s.failed;
        sum.out_of_scope += s.out_of_scope;
        sum.internal += s.internal;
        for (auto& r : s.reports) sum.reports.push_back(std::move(r));
    }
    return sum;
}

std::vector<Verifier::ModEqResult> Verifier::verify_modular_equations(long upto_q) {
    std::vector<ModEqResult> out;
    long lim24 = 24 * upto_q;
    for (const auto& eq : modeqs_) {
        ModEqResult r;
        r.name = eq.name;
        std::map<std::string, QSeries> env;
        env["y"] = eq.y.qexp(lim24);
        env["z"] = eq.z.qexp(lim24);
        QSeries v = eq.expr.eval(env);
        long stop = std::min(lim24, v.lim24());
        r.ok = v.is_zero() || v.val24() >= stop;
        r.checked24 = stop;
        out.push_back(r);
    }
    return out;
}

std::vector<Verifier::RelationResult> Verifier::verify_exotic_relations(long double tol) {
    std::vector<RelationResult> out;
    for (const auto& rel : relations_) {
        RelationResult rr;
        rr.name = rel.name;

        // coefficientwise: S_lhs(q) = sum coef * S_fam(q^k)
        const FamilyContext& lctx = modular_.context(rel.lhs_family);
        QSeries acc = QSeries::zero(lctx.mtilde.lim24());
        for (const auto& t : rel.rhs) {
            const FamilyContext& c = modular_.context(t.family);
            acc = acc + c.mtilde.subst_qk(t.qpow).truncated(lctx.mtilde.lim24()).scaled(t.coef);
        }
        rr.series_ok = series_equal(acc, lctx.mtilde, std::min(acc.lim24(), lctx.mtilde.lim24()));

        auto run_instance = [&](const mpq_class& w, bool expect_refusal) {
            RelationInstance inst;
            inst.name = rel.name;
            inst.w = w;
            inst.expect_refusal = expect_refusal;
            try {
                std::map<std::string, mpq_class> env{{"w", w}};
                mpq_class lhs_arg = rel.lhs_arg.eval(env);
                std::vector<mpq_class> args;
                for (const auto& t : rel.rhs) args.push_back(t.arg.eval(env));

                // structural point candidates from every invertible term
                std::vector<std::complex<long double>> cands;
                auto add_roots = [&](std::complex<long double> qk, int k) {
                    for (int j = 0; j < k; ++j) {
                        long double ang = (std::arg(qk) + kTwoPi * j) / k;
                        long double mag = powl(std::abs(qk), 1.0L / k);
                        cands.push_back(std::polar(mag, ang));
                    }
                };
                if (std::abs((long double)lhs_arg.get_d()) > 32)
                    add_roots(std::exp(std::complex<long double>(
                                  0, kTwoPi) *
                              invert_hauptmodul(lctx, (long double)lhs_arg.get_d())),
                              1);
                for (size_t i = 0; i < rel.rhs.size(); ++i) {
                    if (std::abs((long double)args[i].get_d()) <= 32) continue;
                    const FamilyContext& c = modular_.context(rel.rhs[i].family);
                    std::complex<long double> tauk =
                        invert_hauptmodul(c, (long double)args[i].get_d());
                    add_roots(std::exp(std::complex<long double>(0, kTwoPi) * tauk),
                              rel.rhs[i].qpow);
                }

                auto q_to_tau = [&](std::complex<long double> q) {
                    return std::complex<long double>(std::arg(q) / kTwoPi,
                                                     -logl(std::abs(q)) / kTwoPi);
                };
                auto consistent = [&](std::complex<long double> q) {
                    long double scale;
                    std::complex<long double> v =
                        lctx.c_at(q_to_tau(q)) -
                        std::complex<long double>((long double)lhs_arg.get_d(), 0);
                    scale = 1 + fabsl((long double)lhs_arg.get_d());
                    if (std::abs(v) > 1e-6L * scale) return false;
                    for (size_t i = 0; i < rel.rhs.size(); ++i) {
                        const FamilyContext& c = modular_.context(rel.rhs[i].family);
                        std::complex<long double> qk = std::pow(q, rel.rhs[i].qpow);
                        std::complex<long double> d =
                            c.c_at(q_to_tau(qk)) -
                            std::complex<long double>((long double)args[i].get_d(), 0);
                        if (std::abs(d) > 1e-6L * (1 + fabsl((long double)args[i].get_d())))
                            return false;
                    }
                    return true;
                };

                std::complex<long double> qstar;
                bool found = false;
                for (auto& q : cands)
                    if (consistent(q)) {
                        qstar = q;
                        found = true;
                        break;
                    }
                if (!found) {
                    inst.refused = true;
                    inst.passed = expect_refusal;
                    inst.note = "no common structural point in the i*inf domains";
                    return inst;
                }
                inst.refused = false;
                if (expect_refusal) {
                    inst.passed = false;
                    inst.note = "expected a fundamental-domain conflict but found none";
                    return inst;
                }
                inst.lhs = lctx.re_mtilde(q_to_tau(qstar));
                long double rhs = 0;
                for (size_t i = 0; i < rel.rhs.size(); ++i) {
                    const FamilyContext& c = modular_.context(rel.rhs[i].family);
                    std::complex<long double> qk = std::pow(qstar, rel.rhs[i].qpow);
                    rhs += (long double)rel.rhs[i].coef.get_d() * c.re_mtilde(q_to_tau(qk));
                }
                inst.rhs = rhs;
                inst.residual = fabsl(inst.lhs - rhs);
                inst.passed = inst.residual <= tol;
            } catch (const error& e) {
                inst.passed = false;
                inst.note = e.what();
            }
            return inst;
        };

        for (const auto& w : rel.samples) rr.instances.push_back(run_instance(w, false));
        for (const auto& [w, refuse] : rel.specials)
            rr.instances.push_back(run_instance(w, refuse));
        out.push_back(std::move(rr));
    }
    return out;
}

std::vector<Verifier::SingularModuliReport> Verifier::verify_singular_moduli(
    const std::string& family) {
    std::vector<SingularModuliReport> out;
    const FamilyRecord& fam = reg_.family(family);
    const FamilyContext& ctx = modular_.context(family);
    long N = fam.level;

    std::set<std::pair<std::string, long>> seen; // (D, m) pairs already done
    for (const auto& row : table(family)) {
        if (!row.in_scope) continue;
        // Heegner normalization: scale the printed form so that N | leading
        mpz_class lam = mpz_class(N) / gcd(row.form.a, mpz_class(N));
        QuadForm hf{row.form.a * lam, row.form.b * lam, row.form.c * lam};
        mpz_class D = hf.disc();
        mpz_class a = hf.a / N;
        long m = mpz_class(gcd(gcd(mpz_class(N), hf.b), a * hf.c)).get_si();
        auto key = std::make_pair(D.get_str(), m);
        if (seen.count(key)) continue;
        seen.insert(key);

        SingularModuliReport rep;
        rep.family = family;
        rep.D = D;
        rep.m = m;
        try {
            HeegnerOrbits orb = heegner_orbits(D, N, m, fam.fricke);
            rep.degree = long(orb.plus_reps.size());
            // H(X) = prod (X - c(tau_rep))
            std::vector<std::complex<long double>> roots;
            for (const auto& f : orb.plus_reps) roots.push_back(ctx.c_at(cm_point(f).tau));
            std::vector<std::complex<long double>> poly{1.0L};
            for (auto& r0 : roots) {
                std::vector<std::complex<long double>> next(poly.size() + 1, 0.0L);
                for (size_t i = 0; i < poly.size(); ++i) {
                    next[i] += poly[i] * (-r0);
                    next[i + 1] += poly[i];
                }
                poly = next;
            }
            std::reverse(poly.begin(), poly.end()); // leading first
            rep.integral = true;
            for (auto& co : poly) {
                long double re = co.real();
                long double rounded = roundl(re);
                long double resid = std::max(fabsl(re - rounded), fabsl(co.imag()));
                rep.max_residual = std::max(rep.max_residual, resid);
                if (resid > std::max(1e-6L, 5e-13L * fabsl(re))) rep.integral = false;
                mpz_class ic;
                mpz_set_d(ic.get_mpz_t(), (double)rounded);
                rep.poly.push_back(ic);
            }
            if (!rep.integral)
                throw non_integral_coefficients("H_{D,N,m} rounding residual " +
                                                std::to_string((double)rep.max_residual));
            // Eq (sm) for rows with rational c: t 2^sigma0(m) h(D) <= 2^sigma0(N)
            if (!row.c_is_algebraic) {
                long lhs =
                    orb.t * (1L << sigma0_plus(m)) * long(class_group(D).order());
                rep.sm_bound_ok = lhs <= (1L << sigma0_plus(N));
                if (rep.degree != 1) {
                    rep.note += "[rational row but degree " + std::to_string(rep.degree) + "]";
                    rep.integral = false;
                }
            }
        } catch (const error& e) {
            rep.note += e.what();
            rep.integral = false;
        }
        out.push_back(std::move(rep));
    }
    return out;
}

} // namespace mahler
