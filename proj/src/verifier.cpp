#include "multibrot/verifier.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <tuple>

#include "multibrot/table_io.hpp"

namespace multibrot {

namespace {

constexpr std::array<std::string_view, 8> kChecks = {"main",     "zagier",    "ewing-schober", "levin",
                                                     "yamashita", "vanishing", "integrality",   "dadic"};

bool divides_shift(std::uint64_t d, std::uint64_t m) { return (m + 1) % (d - 1) == 0; }

Verdict finish(Verdict v) {
    v.equality_observed = v.attained.is_finite() && v.attained == v.bound;
    v.pass = verdict_holds(v);
    return v;
}

ExactRational single(std::uint64_t d, std::uint64_t m) { return b(d, m, {.vanishing_shortcut = false}).value; }

}  // namespace

bool verdict_holds(const Verdict& v) {
    if (!(v.attained <= v.bound)) return false;
    return !v.equality_predicted.has_value() || *v.equality_predicted == v.equality_observed;
}

ExtendedInt denominator_exponent(const ExactRational& x, std::uint64_t p) { return -padic_valuation(x, p); }

std::vector<Verdict> check_main(std::uint64_t d, std::uint64_t m, const ExactRational& value) {
    if (d < 2) throw DomainError("check_main: d must be >= 2");
    if (!divides_shift(d, m)) throw DomainError("check_main: requires (d-1) | (m+1)");
    const std::uint64_t a = (m + 1) / (d - 1);
    std::vector<Verdict> out;
    for (const auto& [p, t] : factorize(d)) {
        Verdict v;
        v.check = "main";
        v.d = d;
        v.m = m;
        v.p = p;
        v.bound = static_cast<std::int64_t>(factorial_valuation(a, p) + std::uint64_t{t} * a);
        v.attained = denominator_exponent(value, p);
        v.equality_predicted = (m == d - 2) || (m % p != 0);
        out.push_back(finish(std::move(v)));
    }
    return out;
}

std::vector<Verdict> check_main(std::uint64_t d, std::uint64_t m) { return check_main(d, m, single(d, m)); }

Verdict check_zagier(std::uint64_t m, const ExactRational& value) {
    Verdict v;
    v.check = "zagier";
    v.d = 2;
    v.m = m;
    v.p = 2;
    v.bound = static_cast<std::int64_t>(factorial_valuation(2 * m + 2, 2));
    v.attained = denominator_exponent(value, 2);
    v.equality_predicted = (m == 0) || (m % 2 == 1);
    return finish(std::move(v));
}

Verdict check_zagier(std::uint64_t m) { return check_zagier(m, single(2, m)); }

Verdict check_ewing_schober(std::uint64_t m, const ExactRational& value) {
    Verdict v;
    v.check = "ewing-schober";
    v.d = 2;
    v.m = m;
    v.p = 2;
    v.bound = static_cast<std::int64_t>(2 * m + 1);
    v.attained = denominator_exponent(value, 2);
    return finish(std::move(v));
}

Verdict check_ewing_schober(std::uint64_t m) { return check_ewing_schober(m, single(2, m)); }

Verdict check_levin(std::uint64_t m, const ExactRational& value) {
    if (m % 2 == 0) throw DomainError("check_levin: m must be odd");
    Verdict v;
    v.check = "levin";
    v.d = 2;
    v.m = m;
    v.p = 2;
    v.bound = static_cast<std::int64_t>(factorial_valuation(2 * m + 2, 2));
    v.attained = denominator_exponent(value, 2);
    v.equality_predicted = true;
    return finish(std::move(v));
}

Verdict check_levin(std::uint64_t m) { return check_levin(m, single(2, m)); }

std::uint64_t yamashita_bound(std::uint64_t p, std::uint64_t m) {
    if (!is_prime(p)) throw DomainError("yamashita_bound: p must be prime");
    return factorial_valuation(p * m + p, p) / (p - 1);
}

Verdict check_yamashita(std::uint64_t p, std::uint64_t m, const ExactRational& value) {
    if (!is_prime(p)) throw DomainError("check_yamashita: degree " + std::to_string(p) + " is not prime");
    Verdict v;
    v.check = "yamashita";
    v.d = p;
    v.m = m;
    v.p = p;
    v.attained = denominator_exponent(value, p);
    if (!divides_shift(p, m)) {
        v.bound = ExtendedInt::neg_infinity();
        return finish(std::move(v));
    }
    const std::uint64_t a = (m + 1) / (p - 1);
    const std::uint64_t floor_form = yamashita_bound(p, m);
    v.bound = static_cast<std::int64_t>(floor_form);
    v.equality_predicted = (m == p - 2) || (m % p != 0);
    v = finish(std::move(v));
    v.pass = v.pass && floor_form == a + factorial_valuation(a, p);
    return v;
}

Verdict check_yamashita(std::uint64_t p, std::uint64_t m) { return check_yamashita(p, m, single(p, m)); }

std::vector<Verdict> check_vanishing(std::uint64_t d, std::uint64_t m, const ExactRational& value) {
    if (d < 3) throw DomainError("check_vanishing: requires d >= 3");
    if (divides_shift(d, m)) throw DomainError("check_vanishing: requires (d-1) !| (m+1)");
    std::vector<Verdict> out;
    for (const auto& [p, t] : factorize(d)) {
        Verdict v;
        v.check = "vanishing";
        v.d = d;
        v.m = m;
        v.p = p;
        v.bound = ExtendedInt::neg_infinity();
        v.attained = denominator_exponent(value, p);
        out.push_back(finish(std::move(v)));
    }
    return out;
}

std::vector<Verdict> check_vanishing(std::uint64_t d, std::uint64_t m) {
    return check_vanishing(d, m, single(d, m));
}

std::uint64_t integrality_exponent(std::uint64_t d, std::uint64_t m) {
    if (d < 2 || !divides_shift(d, m)) throw DomainError("integrality_exponent: requires (d-1) | (m+1)");
    const std::uint64_t a = (m + 1) / (d - 1);
    std::uint64_t x = 0;
    for (const auto& [p, t] : factorize(d)) {
        const std::uint64_t num = factorial_valuation(a, p) + std::uint64_t{t} * a;
        x = std::max<std::uint64_t>(x, (num + t - 1) / t);
    }
    return x;
}

Verdict check_integrality(std::uint64_t d, std::uint64_t m, const ExactRational& value) {
    const std::uint64_t x = integrality_exponent(d, m);
    Verdict v;
    v.check = "integrality";
    v.d = d;
    v.m = m;
    v.bound = static_cast<std::int64_t>(x);
    if (sgn(value) == 0) {
        v.attained = ExtendedInt::neg_infinity();
    } else if (!is_d_adic(value, d)) {
        v.attained = ExtendedInt::infinity();
    } else {
        v.attained = static_cast<std::int64_t>(d_adic_exponent(value, d));
    }
    v = finish(std::move(v));
    const ExactRational scaled = value * ExactRational(pow_ui(d, x));
    v.pass = v.pass && scaled.get_den() == 1;
    return v;
}

Verdict check_integrality(std::uint64_t d, std::uint64_t m) { return check_integrality(d, m, single(d, m)); }

Verdict check_dadic(std::uint64_t d, std::uint64_t m, const ExactRational& value) {
    Verdict v;
    v.check = "dadic";
    v.d = d;
    v.m = m;
    v.bound = 0;
    v.attained = is_d_adic(value, d) ? 0 : 1;
    return finish(std::move(v));
}

std::span<const std::string_view> check_names() { return kChecks; }

std::vector<std::string> parse_check_list(std::string_view list) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= list.size()) {
        std::size_t comma = list.find(',', start);
        if (comma == std::string_view::npos) comma = list.size();
        const std::string_view name = list.substr(start, comma - start);
        if (!name.empty()) {
            if (std::find(kChecks.begin(), kChecks.end(), name) == kChecks.end()) {
                throw UnknownCheck("unknown check '" + std::string(name) + "'");
            }
            if (std::find(out.begin(), out.end(), name) == out.end()) out.emplace_back(name);
        }
        start = comma + 1;
    }
    return out;
}

std::vector<std::uint64_t> required_degrees(const SuiteConfig& config) {
    std::set<std::uint64_t> need;
    for (const std::string& c : config.checks) {
        if (c == "zagier" || c == "ewing-schober" || c == "levin") {
            need.insert(2);
        } else if (c == "yamashita") {
            for (std::uint64_t d : config.degrees) {
                if (is_prime(d)) need.insert(d);
            }
        } else if (c == "vanishing") {
            for (std::uint64_t d : config.degrees) {
                if (d >= 3) need.insert(d);
            }
        } else {
            need.insert(config.degrees.begin(), config.degrees.end());
        }
    }
    return {need.begin(), need.end()};
}

std::vector<Verdict> run_suite(const SuiteConfig& config, CoefficientTables* tables) {
    for (const std::string& c : config.checks) {
        if (std::find(kChecks.begin(), kChecks.end(), c) == kChecks.end()) throw UnknownCheck("unknown check '" + c + "'");
    }
    for (std::uint64_t d : config.degrees) {
        if (d < 2) throw DomainError("run_suite: degree must be >= 2");
    }
    CoefficientTables local;
    CoefficientTables& store = tables != nullptr ? *tables : local;
    for (std::uint64_t d : required_degrees(config)) {
        auto it = store.find(d);
        if (it != store.end() && it->second.size() > config.m_max) continue;
        TableOptions options;
        options.vanishing_shortcut = false;
        options.threads = config.threads;
        store[d] = coefficient_table(d, config.m_max, options);
    }
    const auto value = [&](std::uint64_t d, std::uint64_t m) -> const ExactRational& { return store.at(d).at(m).value; };
    const std::set<std::uint64_t> degrees(config.degrees.begin(), config.degrees.end());

    std::vector<Verdict> out;
    const auto append = [&](std::vector<Verdict> vs) {
        for (Verdict& v : vs) out.push_back(std::move(v));
    };
    for (const std::string& c : config.checks) {
        for (std::uint64_t m = 0; m <= config.m_max; ++m) {
            if (c == "zagier") {
                out.push_back(check_zagier(m, value(2, m)));
            } else if (c == "ewing-schober") {
                out.push_back(check_ewing_schober(m, value(2, m)));
            } else if (c == "levin") {
                if (m % 2 == 1) out.push_back(check_levin(m, value(2, m)));
            } else {
                for (std::uint64_t d : degrees) {
                    if (c == "main") {
                        if (divides_shift(d, m)) append(check_main(d, m, value(d, m)));
                    } else if (c == "yamashita") {
                        if (is_prime(d)) out.push_back(check_yamashita(d, m, value(d, m)));
                    } else if (c == "vanishing") {
                        if (d >= 3 && !divides_shift(d, m)) append(check_vanishing(d, m, value(d, m)));
                    } else if (c == "integrality") {
                        if (divides_shift(d, m)) out.push_back(check_integrality(d, m, value(d, m)));
                    } else if (c == "dadic") {
                        out.push_back(check_dadic(d, m, value(d, m)));
                    }
                }
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const Verdict& a, const Verdict& b) {
        return std::tie(a.check, a.d, a.m, a.p) < std::tie(b.check, b.d, b.m, b.p);
    });
    return out;
}

std::string format_verdict(const Verdict& v) {
    const auto flag = [](bool b) { return b ? "true" : "false"; };
    std::string out = v.check + "," + std::to_string(v.d) + "," + std::to_string(v.m) + "," + std::to_string(v.p) +
                      "," + v.bound.to_string() + "," + v.attained.to_string() + ",";
    out += v.equality_predicted ? flag(*v.equality_predicted) : "na";
    out += ",";
    out += flag(v.equality_observed);
    out += ",";
    out += flag(v.pass);
    return out;
}

std::string render_report(std::span<const Verdict> verdicts) {
    std::vector<std::string> lines;
    lines.reserve(verdicts.size());
    for (const Verdict& v : verdicts) lines.push_back(format_verdict(v));
    return render_checksummed(kReportHeader, lines);
}

}  // namespace multibrot
