#include "multibrot/series.hpp"

#include <algorithm>
#include <string>

namespace multibrot {

IntPolynomial::IntPolynomial(std::vector<BigInt> coefficients) : coeffs_(std::move(coefficients)) { trim(); }

IntPolynomial IntPolynomial::monomial(std::uint64_t degree) {
    std::vector<BigInt> c(degree + 1);
    c.back() = 1;
    return IntPolynomial(std::move(c));
}

void IntPolynomial::trim() {
    while (!coeffs_.empty() && sgn(coeffs_.back()) == 0) coeffs_.pop_back();
}

const BigInt& IntPolynomial::leading() const {
    if (coeffs_.empty()) throw DomainError("IntPolynomial: zero polynomial has no leading coefficient");
    return coeffs_.back();
}

BigInt IntPolynomial::coefficient(std::uint64_t k) const {
    return k < coeffs_.size() ? coeffs_[k] : BigInt(0);
}

BigInt IntPolynomial::evaluate(const BigInt& z) const {
    BigInt acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
    return acc;
}

IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b) {
    std::vector<BigInt> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
    for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] += b.coeffs_[i];
    return IntPolynomial(std::move(c));
}

IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<BigInt> c(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
        if (sgn(a.coeffs_[i]) == 0) continue;
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
            mpz_addmul(c[i + j].get_mpz_t(), a.coeffs_[i].get_mpz_t(), b.coeffs_[j].get_mpz_t());
        }
    }
    return IntPolynomial(std::move(c));
}

IntPolynomial IntPolynomial::pow(std::uint64_t e) const {
    IntPolynomial result = monomial(0);
    IntPolynomial base = *this;
    while (e > 0) {
        if (e & 1U) result = result * base;
        e >>= 1U;
        if (e > 0) base = base * base;
    }
    return result;
}

IntPolynomial iterate_parameter_polynomial(std::uint64_t d, std::uint64_t n) {
    if (d < 2) throw DomainError("iterate_parameter_polynomial: d must be >= 2");
    if (n == 0) throw DomainError("iterate_parameter_polynomial: n must be >= 1");
    const IntPolynomial z = IntPolynomial::monomial(1);
    IntPolynomial q = z;
    for (std::uint64_t k = 0; k < n; ++k) q = q.pow(d) + z;
    return q;
}

std::vector<BigInt> tail_of_monic(const IntPolynomial& q) {
    if (!q.is_monic()) throw DomainError("rational_power_tail: polynomial must be monic");
    const std::uint64_t deg = q.degree();
    std::vector<BigInt> u(deg + 1);
    for (std::uint64_t k = 1; k <= deg; ++k) u[k] = q.coefficient(deg - k);
    return u;
}

namespace {

std::int64_t leading_power_of(const IntPolynomial& q, const ExactRational& exponent) {
    const ExactRational lead = canonical(exponent * ExactRational(BigInt(static_cast<unsigned long>(q.degree()))));
    if (lead.get_den() != 1) {
        throw DomainError("rational_power_tail: exponent * deg Q must be an integer, got " + to_string(lead));
    }
    if (!lead.get_num().fits_slong_p()) throw DomainError("rational_power_tail: leading power out of range");
    return lead.get_num().get_si();
}

std::vector<ExactRational> power_by_binomial(std::span<const BigInt> u, const ExactRational& alpha,
                                             std::uint64_t order) {
    std::vector<ExactRational> result(order + 1);
    result[0] = 1;

    std::uint64_t lowest = 0;
    for (std::uint64_t k = 1; k < u.size(); ++k) {
        if (sgn(u[k]) != 0) {
            lowest = k;
            break;
        }
    }
    if (lowest == 0) return result;

    // power holds u^j truncated at `order`.
    std::vector<ExactRational> power(order + 1);
    power[0] = 1;
    ExactRational binom(1);
    for (std::uint64_t j = 1; j * lowest <= order; ++j) {
        std::vector<ExactRational> next(order + 1);
        for (std::uint64_t a = 0; a <= order; ++a) {
            if (sgn(power[a]) == 0) continue;
            for (std::uint64_t k = 1; k < u.size() && a + k <= order; ++k) {
                if (sgn(u[k]) == 0) continue;
                next[a + k] += power[a] * ExactRational(u[k]);
            }
        }
        power = std::move(next);
        binom *= (alpha - ExactRational(static_cast<unsigned long>(j - 1)));
        binom /= ExactRational(static_cast<unsigned long>(j));
        for (std::uint64_t k = 0; k <= order; ++k) {
            if (sgn(power[k]) != 0) result[k] += binom * power[k];
        }
    }
    return result;
}

std::vector<ExactRational> power_by_recurrence(std::span<const BigInt> u, const ExactRational& alpha,
                                               std::uint64_t order) {
    std::vector<ExactRational> g(order + 1);
    g[0] = 1;
    std::vector<std::uint64_t> support;
    for (std::uint64_t k = 1; k < u.size(); ++k) {
        if (sgn(u[k]) != 0) support.push_back(k);
    }
    ExactRational acc;
    ExactRational weight;
    ExactRational term;
    for (std::uint64_t k = 1; k <= order; ++k) {
        acc = 0;
        for (const std::uint64_t i : support) {
            if (i > k) break;
            // (alpha * i - (k - i)) * u_i * g_{k-i}
            weight = alpha * ExactRational(static_cast<unsigned long>(i));
            weight -= ExactRational(static_cast<unsigned long>(k - i));
            term = weight * g[k - i];
            term *= ExactRational(u[i]);
            acc += term;
        }
        acc /= ExactRational(static_cast<unsigned long>(k));
        g[k] = acc;
    }
    return g;
}

}  // namespace

TailSeries rational_power_tail(const IntPolynomial& q, const ExactRational& exponent, std::uint64_t order,
                               PowerMethod method) {
    const std::vector<BigInt> u = tail_of_monic(q);
    TailSeries s;
    s.leading_power = leading_power_of(q, exponent);
    const ExactRational alpha = canonical(exponent);
    s.tail = method == PowerMethod::binomial ? power_by_binomial(u, alpha, order)
                                             : power_by_recurrence(u, alpha, order);
    return s;
}

ExactRational coefficient_at(const TailSeries& s, std::int64_t power) {
    const std::int64_t lo = s.leading_power - static_cast<std::int64_t>(s.truncation_order());
    if (s.tail.empty() || power > s.leading_power || power < lo) {
        throw SeriesWindowError("coefficient_at: z^" + std::to_string(power) + " outside window [" +
                                std::to_string(lo) + ", " + std::to_string(s.leading_power) + "]");
    }
    return s.tail[static_cast<std::size_t>(s.leading_power - power)];
}

TailSeries multiply_truncated(const TailSeries& a, const TailSeries& b) {
    TailSeries out;
    out.leading_power = a.leading_power + b.leading_power;
    if (a.tail.empty() || b.tail.empty()) return out;
    const std::uint64_t order = std::min(a.truncation_order(), b.truncation_order());
    out.tail.assign(order + 1, ExactRational(0));
    for (std::uint64_t i = 0; i <= order; ++i) {
        if (sgn(a.tail[i]) == 0) continue;
        for (std::uint64_t j = 0; i + j <= order; ++j) out.tail[i + j] += a.tail[i] * b.tail[j];
    }
    return out;
}

}  // namespace multibrot
