#pragma once

// Exact rational arithmetic, p-adic valuations and generalized binomials.
//
// Rationals are GMP mpq_class values kept in canonical form (lowest terms,
// positive denominator, zero as 0/1). Every function here is pure.

#include <cstdint>
#include <compare>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace multibrot {

using BigInt = mpz_class;
using ExactRational = mpq_class;

/// Raised when an argument violates a documented precondition.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An integer extended by +inf and -inf.
///
/// The p-adic valuation lands in Z u {+inf}; negating it (the "attained"
/// denominator exponent of a zero coefficient) produces -inf. Mixing the two
/// infinities in a sum is undefined and throws.
class ExtendedInt {
public:
    enum class Kind : std::uint8_t { neg_inf, finite, pos_inf };

    constexpr ExtendedInt() = default;
    constexpr ExtendedInt(std::int64_t v) : kind_(Kind::finite), value_(v) {}  // NOLINT(google-explicit-constructor)

    static constexpr ExtendedInt infinity() { return ExtendedInt(Kind::pos_inf); }
    static constexpr ExtendedInt neg_infinity() { return ExtendedInt(Kind::neg_inf); }

    constexpr Kind kind() const { return kind_; }
    constexpr bool is_finite() const { return kind_ == Kind::finite; }
    constexpr bool is_pos_inf() const { return kind_ == Kind::pos_inf; }
    constexpr bool is_neg_inf() const { return kind_ == Kind::neg_inf; }

    /// Finite payload; throws for either infinity.
    std::int64_t value() const;

    constexpr ExtendedInt operator-() const {
        switch (kind_) {
            case Kind::pos_inf: return neg_infinity();
            case Kind::neg_inf: return infinity();
            default: return ExtendedInt(-value_);
        }
    }

    friend ExtendedInt operator+(const ExtendedInt& a, const ExtendedInt& b);
    friend ExtendedInt operator-(const ExtendedInt& a, const ExtendedInt& b) { return a + (-b); }

    friend constexpr bool operator==(const ExtendedInt& a, const ExtendedInt& b) {
        return a.kind_ == b.kind_ && (a.kind_ != Kind::finite || a.value_ == b.value_);
    }
    friend constexpr std::strong_ordering operator<=>(const ExtendedInt& a, const ExtendedInt& b) {
        if (a.kind_ != b.kind_) return a.kind_ <=> b.kind_;
        if (a.kind_ != Kind::finite) return std::strong_ordering::equal;
        return a.value_ <=> b.value_;
    }

    /// Decimal, or the literals `inf` / `neg_inf`.
    std::string to_string() const;
    static ExtendedInt parse(const std::string& text);

private:
    constexpr explicit ExtendedInt(Kind k) : kind_(k) {}

    Kind kind_ = Kind::finite;
    std::int64_t value_ = 0;
};

std::ostream& operator<<(std::ostream& os, const ExtendedInt& v);

struct PrimePower {
    std::uint64_t prime;
    std::uint32_t exponent;
    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Sorted factorization d = p_1^t_1 ... p_s^t_s with p_1 < ... < p_s.
using PrimeFactorization = std::vector<PrimePower>;

/// Deterministic trial division.
bool is_prime(std::uint64_t n);

/// Throws DomainError for d < 2.
PrimeFactorization factorize(std::uint64_t d);

/// nu_p(x); +inf iff x == 0. Throws DomainError if p is not prime.
ExtendedInt padic_valuation(const ExactRational& x, std::uint64_t p);
ExtendedInt padic_valuation(const BigInt& x, std::uint64_t p);

/// Legendre: nu_p(m!) = sum_{l>=1} floor(m / p^l).
std::uint64_t factorial_valuation(std::uint64_t m, std::uint64_t p);

/// a(a-1)...(a-j+1)/j!, and 1 for j == 0.
ExactRational binomial_general(const ExactRational& a, std::uint64_t j);

BigInt floor_rational(const ExactRational& x);
BigInt ceil_rational(const ExactRational& x);

/// Returns the value in canonical form (mpq_canonicalize on a copy).
ExactRational canonical(ExactRational x);

/// True iff every prime factor of the denominator of x divides d.
bool is_d_adic(const ExactRational& x, std::uint64_t d);

/// Smallest e >= 0 with x * d^e integral; the caller guarantees is_d_adic.
std::uint64_t d_adic_exponent(const ExactRational& x, std::uint64_t d);

BigInt factorial(std::uint64_t m);
BigInt pow_ui(std::uint64_t base, std::uint64_t exponent);

std::string to_string(const ExactRational& x);

}  // namespace multibrot
