#pragma once

// One predicate per valuation statement about b_{d,m}, evaluated over exact
// coefficients. A Verdict compares the attained denominator exponent
// -nu_p(b_{d,m}) (or a check-specific quantity) against a bound, and the
// observed equality against the predicted one where an equality clause exists.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "multibrot/coefficients.hpp"
#include "multibrot/exact_arith.hpp"

namespace multibrot {

inline constexpr std::string_view kReportHeader = "#multibrot-report v1";

struct Verdict {
    std::string check;
    std::uint64_t d = 0;
    std::uint64_t m = 0;
    /// Prime under test; 0 for checks about the coefficient as a whole.
    std::uint64_t p = 0;
    ExtendedInt bound;
    ExtendedInt attained;
    /// Empty when the statement makes no equality claim.
    std::optional<bool> equality_predicted;
    bool equality_observed = false;
    bool pass = false;

    friend bool operator==(const Verdict&, const Verdict&) = default;
};

/// attained <= bound, and equality_observed == *equality_predicted if set.
bool verdict_holds(const Verdict& v);

/// -nu_p(x); -inf for x == 0.
ExtendedInt denominator_exponent(const ExactRational& x, std::uint64_t p);

/// Denominator bound for (d-1) | (m+1), one verdict per prime factor of d:
/// -nu_p(b) <= nu_p(a!) + t a with equality iff m = d-2 or p !| m.
std::vector<Verdict> check_main(std::uint64_t d, std::uint64_t m, const ExactRational& value);
std::vector<Verdict> check_main(std::uint64_t d, std::uint64_t m);

/// d = 2: -nu_2(b) <= nu_2((2m+2)!) with equality iff m = 0 or m odd.
Verdict check_zagier(std::uint64_t m, const ExactRational& value);
Verdict check_zagier(std::uint64_t m);

/// d = 2: -nu_2(b) <= 2m + 1.
Verdict check_ewing_schober(std::uint64_t m, const ExactRational& value);
Verdict check_ewing_schober(std::uint64_t m);

/// d = 2, m odd: -nu_2(b) == nu_2((2m+2)!).
Verdict check_levin(std::uint64_t m, const ExactRational& value);
Verdict check_levin(std::uint64_t m);

/// Floor form of the bound at a prime degree, floor(nu_p((pm+p)!)/(p-1)).
std::uint64_t yamashita_bound(std::uint64_t p, std::uint64_t m);

/// Prime degree p. Applicable m: floor-form bound, equality iff m = p-2 or
/// p !| m; the verdict fails if the floor form differs from a + nu_p(a!).
/// Otherwise b must vanish (bound -inf).
Verdict check_yamashita(std::uint64_t p, std::uint64_t m, const ExactRational& value);
Verdict check_yamashita(std::uint64_t p, std::uint64_t m);

/// d >= 3, (d-1) !| (m+1): b is exactly zero, one verdict per prime of d.
/// The single-index overload always runs the full computation.
std::vector<Verdict> check_vanishing(std::uint64_t d, std::uint64_t m, const ExactRational& value);
std::vector<Verdict> check_vanishing(std::uint64_t d, std::uint64_t m);

/// x(m) = max_i ceil((nu_{p_i}(a!) + t_i a) / t_i).
std::uint64_t integrality_exponent(std::uint64_t d, std::uint64_t m);

/// b * d^{x(m)} is an integer. attained is the least such exponent.
Verdict check_integrality(std::uint64_t d, std::uint64_t m, const ExactRational& value);
Verdict check_integrality(std::uint64_t d, std::uint64_t m);

/// Every prime of the denominator divides d. attained 0 = clean, 1 = foreign prime.
Verdict check_dadic(std::uint64_t d, std::uint64_t m, const ExactRational& value);

/// Known check names, in canonical order.
std::span<const std::string_view> check_names();

class UnknownCheck : public DomainError {
public:
    using DomainError::DomainError;
};

/// Splits and validates a comma separated list; throws UnknownCheck.
std::vector<std::string> parse_check_list(std::string_view list);

using CoefficientTables = std::map<std::uint64_t, std::vector<CoeffRecord>>;

struct SuiteConfig {
    std::vector<std::uint64_t> degrees{2};
    std::uint64_t m_max = 0;
    std::vector<std::string> checks;
    unsigned threads = 1;
};

/// Degrees whose tables run_suite needs for this config.
std::vector<std::uint64_t> required_degrees(const SuiteConfig& config);

/// Computes (or takes from `tables`, when they cover m_max) every needed
/// table with full computation, then evaluates every check. Output is sorted
/// by (check, d, m, p).
std::vector<Verdict> run_suite(const SuiteConfig& config, CoefficientTables* tables = nullptr);

std::string format_verdict(const Verdict& v);
std::string render_report(std::span<const Verdict> verdicts);

}  // namespace multibrot
