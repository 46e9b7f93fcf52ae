#pragma once

// Parameter polynomials Q_n(z) = P_{d,z}^{on}(z) and their fractional powers
// expanded at infinity.
//
// A power Q^{m/D} of a monic degree-D polynomial is carried as
// z^m * sum_{k=0}^{K} c_k z^{-k}; the fractional exponent never appears in the
// data model because z^D is factored out first.

#include <cstdint>
#include <span>
#include <vector>

#include "multibrot/exact_arith.hpp"

namespace multibrot {

/// Dense polynomial with big-integer coefficients; index = degree.
class IntPolynomial {
public:
    IntPolynomial() = default;
    /// Trailing zero coefficients are trimmed.
    explicit IntPolynomial(std::vector<BigInt> coefficients);

    static IntPolynomial monomial(std::uint64_t degree);

    bool is_zero() const { return coeffs_.empty(); }
    /// Degree of the zero polynomial is reported as 0.
    std::uint64_t degree() const { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }
    const BigInt& leading() const;
    bool is_monic() const { return !coeffs_.empty() && coeffs_.back() == 1; }

    /// Coefficient of z^k; zero past the degree.
    BigInt coefficient(std::uint64_t k) const;
    std::span<const BigInt> coefficients() const { return coeffs_; }

    BigInt evaluate(const BigInt& z) const;

    friend IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b);
    friend IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b);
    friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;

    IntPolynomial pow(std::uint64_t e) const;

private:
    void trim();

    std::vector<BigInt> coeffs_;
};

/// Q_1 = z^d + z, Q_{k+1} = Q_k^d + z. Monic of degree d^n.
/// Throws DomainError for d < 2 or n == 0.
IntPolynomial iterate_parameter_polynomial(std::uint64_t d, std::uint64_t n);

/// z^leading_power * sum_{k=0}^{K} tail[k] z^{-k}.
struct TailSeries {
    std::int64_t leading_power = 0;
    std::vector<ExactRational> tail;

    std::uint64_t truncation_order() const { return tail.empty() ? 0 : tail.size() - 1; }
    friend bool operator==(const TailSeries&, const TailSeries&) = default;
};

/// Thrown when a coefficient outside the computed window is requested.
class SeriesWindowError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

enum class PowerMethod {
    /// sum_j C_j(alpha) u^j with u^j built incrementally.
    binomial,
    /// J.C.P. Miller recurrence k g_k = sum_i (alpha i - (k - i)) u_i g_{k-i};
    /// O(K * deg Q) instead of O(K^3).
    recurrence,
};

/// Expansion of Q^exponent at infinity, truncated to K tail terms past the
/// leading one. Q must be monic of degree D and exponent * D must be an
/// integer m, which becomes the leading power.
TailSeries rational_power_tail(const IntPolynomial& q, const ExactRational& exponent, std::uint64_t order,
                               PowerMethod method = PowerMethod::recurrence);

/// Coefficient of z^power; throws SeriesWindowError outside
/// [leading_power - K, leading_power].
ExactRational coefficient_at(const TailSeries& s, std::int64_t power);

/// Product truncated to the smaller of the two orders.
TailSeries multiply_truncated(const TailSeries& a, const TailSeries& b);

/// u_k for k = 0..D where Q(z) = z^D (1 + sum_k u_k z^{-k}); u_0 = 0.
std::vector<BigInt> tail_of_monic(const IntPolynomial& q);

}  // namespace multibrot
