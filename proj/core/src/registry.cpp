#include "mahler/registry.hpp"

#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>

#include "mahler/errors.hpp"

namespace mahler {

QSeries EtaQuotientSpec::qexp(long lim24) const {
    if (factors.empty()) throw data_error("empty eta-quotient spec");
    long rel = lim24 + 400; // relative precision headroom for later powers/roots
    QSeries r = QSeries::constant(1, rel);
    for (auto& [a, d] : factors) r = r * eta_qexp(a, rel + a).pow_int(d);
    return r;
}

std::vector<long> FamilyRecord::divisors() const {
    std::vector<long> ds;
    for (long d = 1; d <= level; ++d)
        if (level % d == 0) ds.push_back(d);
    return ds;
}

QSeries FamilyRecord::hauptmodul_qexp(long lim24) const {
    std::map<std::string, QSeries> env;
    env["h"] = eta_h.qexp(lim24);
    QSeries c = haupt.eval(env).truncated(lim24);
    if (c.val24() != -24)
        throw data_error("hauptmodul of " + label + " does not have a simple pole in q");
    if (c.lim24() < lim24)
        throw insufficient_truncation("hauptmodul of " + label + " lost precision");
    return c;
}

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    if (!s.empty() && s.back() == sep) out.push_back("");
    return out;
}

mpq_class parse_rational(const std::string& s) {
    mpq_class q(s);
    q.canonicalize();
    return q;
}

} // namespace

std::string default_data_dir() {
    if (const char* env = std::getenv("MAHLERLAB_DATA_DIR"); env && *env) return env;
#ifdef MAHLERLAB_DEFAULT_DATA_DIR
    return MAHLERLAB_DEFAULT_DATA_DIR;
#else
    return "data";
#endif
}

Registry::Registry(const std::string& dir) : dir_(dir.empty() ? default_data_dir() : dir) {
    std::ifstream in(dir_ + "/registry.txt");
    if (!in) throw data_error("cannot open " + dir_ + "/registry.txt");
    std::stringstream buf;
    buf << in.rdbuf();
    raw_ = buf.str();

    FamilyRecord cur;
    bool open = false;
    auto flush = [&] {
        if (!open) return;
        by_label_[cur.label] = families_.size();
        families_.push_back(cur);
        cur = FamilyRecord{};
    };

    std::istringstream lines(raw_);
    std::string line;
    while (std::getline(lines, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[' && line.back() == ']') {
            flush();
            open = true;
            cur.label = trim(line.substr(1, line.size() - 2));
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos) throw data_error("bad registry line: " + line);
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key == "level") {
            cur.level = std::stoi(val);
        } else if (key == "index") {
            cur.index = std::stoi(val);
        } else if (key == "fricke") {
            if (!val.empty())
                for (auto& p : split(val, ',')) cur.fricke.push_back(std::stoi(p));
        } else if (key == "poly") {
            cur.poly = LaurentPoly3::parse(val);
        } else if (key == "pf") {
            auto parts = split(val, ',');
            if (parts.size() != 6) throw data_error("pf needs 6 entries: " + line);
            cur.pf = D3Operator{parse_rational(parts[0]), parse_rational(parts[1]),
                                parse_rational(parts[2]), parse_rational(parts[3]),
                                parse_rational(parts[4]), parse_rational(parts[5])};
        } else if (key == "haupt") {
            cur.haupt = Expr::parse(val);
        } else if (key == "eta_h") {
            for (auto& p : split(val, ',')) {
                auto ad = split(p, ':');
                if (ad.size() != 2) throw data_error("bad eta_h entry: " + line);
                cur.eta_h.factors.emplace_back(std::stoi(ad[0]), std::stoi(ad[1]));
            }
        } else if (key == "e_a") {
            if (val == "none") {
                cur.has_combos = false;
            } else {
                for (auto& p : split(val, ',')) cur.e_combo.push_back(parse_rational(p));
            }
        } else if (key == "u0_a") {
            if (val == "theta") {
                cur.u0_theta = true;
            } else if (val != "none") {
                for (auto& p : split(val, ',')) cur.u0_combo.push_back(parse_rational(p));
            }
        } else if (key == "reciprocal") {
            cur.reciprocal = val == "1";
        } else {
            throw data_error("unknown registry key: " + key);
        }
    }
    flush();

    if (families_.size() != 25)
        throw data_error("registry must define 25 families, found " +
                         std::to_string(families_.size()));
    for (const auto& f : families_) {
        auto ds = f.divisors();
        if (f.has_combos) {
            if (f.e_combo.size() != ds.size())
                throw data_error(f.label + ": e_a length must match divisor count");
            mpq_class s(0);
            for (size_t i = 0; i < ds.size(); ++i)
                s += f.e_combo[i] * ds[i] * ds[i];
            if (s != 240) throw data_error(f.label + ": sum a_d d^2 != 240");
            if (!f.u0_theta) {
                if (f.u0_combo.size() != ds.size())
                    throw data_error(f.label + ": u0_a length must match divisor count");
                mpq_class t(0);
                for (size_t i = 0; i < ds.size(); ++i) t += f.u0_combo[i] * ds[i];
                if (t != -24 && t != 24)
                    throw data_error(f.label + ": sum a'_d d != +-24");
            }
        }
    }
}

const Registry& Registry::instance(const std::string& dir) {
    static std::mutex mu;
    static std::map<std::string, std::unique_ptr<Registry>> cache;
    std::lock_guard<std::mutex> lock(mu);
    std::string key = dir.empty() ? default_data_dir() : dir;
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, std::unique_ptr<Registry>(new Registry(key))).first;
    return *it->second;
}

const FamilyRecord& Registry::family(const std::string& label) const {
    auto it = by_label_.find(label);
    if (it == by_label_.end()) throw data_error("unknown family: " + label);
    return families_[it->second];
}

std::string Registry::dump() const { return raw_; }

} // namespace mahler
