#include "multibrot/exact_arith.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace multibrot {

std::int64_t ExtendedInt::value() const {
    if (kind_ != Kind::finite) throw DomainError("ExtendedInt: value() of an infinite quantity");
    return value_;
}

ExtendedInt operator+(const ExtendedInt& a, const ExtendedInt& b) {
    using Kind = ExtendedInt::Kind;
    if ((a.kind_ == Kind::pos_inf && b.kind_ == Kind::neg_inf) ||
        (a.kind_ == Kind::neg_inf && b.kind_ == Kind::pos_inf)) {
        throw DomainError("ExtendedInt: +inf + -inf is undefined");
    }
    if (a.kind_ != Kind::finite) return a;
    if (b.kind_ != Kind::finite) return b;
    return ExtendedInt(a.value_ + b.value_);
}

std::string ExtendedInt::to_string() const {
    switch (kind_) {
        case Kind::pos_inf: return "inf";
        case Kind::neg_inf: return "neg_inf";
        default: return std::to_string(value_);
    }
}

ExtendedInt ExtendedInt::parse(const std::string& text) {
    if (text == "inf") return infinity();
    if (text == "neg_inf") return neg_infinity();
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(text, &used);
    } catch (const std::exception&) {
        throw DomainError("ExtendedInt: cannot parse '" + text + "'");
    }
    if (used != text.size()) throw DomainError("ExtendedInt: cannot parse '" + text + "'");
    return ExtendedInt(static_cast<std::int64_t>(v));
}

std::ostream& operator<<(std::ostream& os, const ExtendedInt& v) { return os << v.to_string(); }

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::uint64_t q = 3; q <= n / q; q += 2) {
        if (n % q == 0) return false;
    }
    return true;
}

PrimeFactorization factorize(std::uint64_t d) {
    if (d < 2) throw DomainError("factorize: d must be >= 2, got " + std::to_string(d));
    PrimeFactorization out;
    for (std::uint64_t q = 2; q <= d / q; ++q) {
        if (d % q != 0) continue;
        std::uint32_t t = 0;
        while (d % q == 0) {
            d /= q;
            ++t;
        }
        out.push_back({q, t});
    }
    if (d > 1) out.push_back({d, 1});
    return out;
}

namespace {

void require_prime(std::uint64_t p) {
    if (!is_prime(p)) throw DomainError("p-adic valuation: " + std::to_string(p) + " is not prime");
}

// Exponent of p in |x| for x != 0.
std::int64_t remove_prime(const mpz_class& x, std::uint64_t p) {
    mpz_class rest;
    mpz_class prime(static_cast<unsigned long>(p));
    return static_cast<std::int64_t>(mpz_remove(rest.get_mpz_t(), x.get_mpz_t(), prime.get_mpz_t()));
}

}  // namespace

ExtendedInt padic_valuation(const BigInt& x, std::uint64_t p) {
    require_prime(p);
    if (sgn(x) == 0) return ExtendedInt::infinity();
    return remove_prime(x, p);
}

ExtendedInt padic_valuation(const ExactRational& x, std::uint64_t p) {
    require_prime(p);
    if (sgn(x) == 0) return ExtendedInt::infinity();
    const ExactRational c = canonical(x);
    return remove_prime(c.get_num(), p) - remove_prime(c.get_den(), p);
}

std::uint64_t factorial_valuation(std::uint64_t m, std::uint64_t p) {
    require_prime(p);
    std::uint64_t total = 0;
    // Dividing m by p repeatedly yields floor(m / p^l) without forming p^l.
    for (std::uint64_t q = m / p; q > 0; q /= p) total += q;
    return total;
}

ExactRational binomial_general(const ExactRational& a, std::uint64_t j) {
    ExactRational acc(1);
    for (std::uint64_t i = 0; i < j; ++i) {
        acc *= (a - ExactRational(static_cast<unsigned long>(i)));
        acc /= ExactRational(static_cast<unsigned long>(i + 1));
    }
    return acc;
}

BigInt floor_rational(const ExactRational& x) {
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return q;
}

BigInt ceil_rational(const ExactRational& x) {
    BigInt q;
    mpz_cdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return q;
}

ExactRational canonical(ExactRational x) {
    x.canonicalize();
    return x;
}

bool is_d_adic(const ExactRational& x, std::uint64_t d) {
    mpz_class den = canonical(x).get_den();
    for (const auto& [p, t] : factorize(d)) {
        mpz_class prime(static_cast<unsigned long>(p));
        mpz_remove(den.get_mpz_t(), den.get_mpz_t(), prime.get_mpz_t());
    }
    return den == 1;
}

std::uint64_t d_adic_exponent(const ExactRational& x, std::uint64_t d) {
    if (sgn(x) == 0) return 0;
    std::uint64_t e = 0;
    for (const auto& [p, t] : factorize(d)) {
        const std::int64_t need = -padic_valuation(x, p).value();
        if (need <= 0) continue;
        e = std::max<std::uint64_t>(e, (static_cast<std::uint64_t>(need) + t - 1) / t);
    }
    return e;
}

BigInt factorial(std::uint64_t m) {
    BigInt out;
    mpz_fac_ui(out.get_mpz_t(), static_cast<unsigned long>(m));
    return out;
}

BigInt pow_ui(std::uint64_t base, std::uint64_t exponent) {
    BigInt out;
    mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(base), static_cast<unsigned long>(exponent));
    return out;
}

std::string to_string(const ExactRational& x) {
    const ExactRational c = canonical(x);
    if (c.get_den() == 1) return c.get_num().get_str();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

}  // namespace multibrot
