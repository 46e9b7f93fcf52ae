#include "multibrot/coefficients.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "multibrot/parallel.hpp"
#include "multibrot/series.hpp"

namespace multibrot {

namespace {

constexpr std::uint32_t kMaxDepth = 64;
constexpr std::uint64_t kMaxExpansionDegree = std::uint64_t{1} << 22;
constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

// d^e, saturating at kSaturated.
std::uint64_t saturating_pow(std::uint64_t d, std::uint64_t e) {
    unsigned __int128 acc = 1;
    for (std::uint64_t i = 0; i < e; ++i) {
        acc *= d;
        if (acc >= kSaturated) return kSaturated;
    }
    return static_cast<std::uint64_t>(acc);
}

void require_degree(std::uint64_t d) {
    if (d < 2) throw DomainError("degree d must be >= 2, got " + std::to_string(d));
}

ExactRational special_value(std::uint64_t d) { return d == 2 ? ExactRational(-1, 2) : ExactRational(0); }

bool vanishes_by_rule(std::uint64_t d, std::uint64_t m) { return d >= 3 && (m + 1) % (d - 1) != 0; }

}  // namespace

std::string_view method_name(Method m) {
    switch (m) {
        case Method::residue: return "residue";
        case Method::combinatorial: return "combinatorial";
        case Method::special_case: return "special-case";
        case Method::cached: return "cached";
    }
    return "?";
}

std::uint64_t max_index_for_depth(std::uint64_t d, std::uint32_t n) {
    const std::uint64_t p = saturating_pow(d, std::uint64_t{n} + 1);
    return p == kSaturated ? kSaturated : p - 3;
}

std::uint32_t choose_n(std::uint64_t d, std::uint64_t m) {
    require_degree(d);
    std::uint32_t n = 1;
    while (max_index_for_depth(d, n) < m) ++n;
    return n;
}

ExactRational b_residue(std::uint64_t d, std::uint64_t m, std::uint32_t n) {
    require_degree(d);
    if (m == 0) throw DomainError("b_residue: m must be >= 1 (b_{d,0} is a special case)");
    if (n == 0) n = choose_n(d, m);
    if (m > max_index_for_depth(d, n)) {
        throw DomainError("b_residue: m = " + std::to_string(m) + " exceeds d^(n+1) - 3 for n = " + std::to_string(n));
    }
    const std::uint64_t degree = saturating_pow(d, n);
    if (degree > kMaxExpansionDegree) throw DomainError("b_residue: depth n too large to expand");

    const IntPolynomial q = iterate_parameter_polynomial(d, n);
    const ExactRational exponent(BigInt(static_cast<unsigned long>(m)), BigInt(static_cast<unsigned long>(degree)));
    const TailSeries s = rational_power_tail(q, canonical(exponent), m + 1);
    ExactRational residue = coefficient_at(s, -1);
    return -residue / ExactRational(static_cast<unsigned long>(m));
}

namespace {

struct TupleShape {
    std::uint64_t d;
    std::uint32_t n;
    std::uint64_t target;
    std::vector<std::uint64_t> weights;  // weights[k] for level k = 0..n-1
};

TupleShape make_shape(std::uint64_t d, std::uint64_t m, std::uint32_t n) {
    require_degree(d);
    if (m == 0) throw DomainError("index tuples: m must be >= 1");
    if (n == 0 || n > kMaxDepth) throw DomainError("index tuples: n must be in [1, 64]");
    if (m > max_index_for_depth(d, n)) {
        throw DomainError("index tuples: m = " + std::to_string(m) + " exceeds d^(n+1) - 3 for n = " +
                          std::to_string(n));
    }
    TupleShape shape{d, n, m + 1, {}};
    shape.weights.resize(n);
    for (std::uint32_t k = 0; k < n; ++k) {
        const std::uint64_t p = saturating_pow(d, n - k);
        shape.weights[k] = p == kSaturated ? kSaturated : p - 1;
    }
    return shape;
}

void visit_tuples(const TupleShape& shape, std::uint32_t level, std::uint64_t remaining,
                  std::vector<std::uint64_t>& tuple,
                  const std::function<void(std::span<const std::uint64_t>)>& visit) {
    const std::uint64_t w = shape.weights[level];
    if (level + 1 == shape.n) {
        if (remaining % w != 0) return;
        tuple[level] = remaining / w;
        visit(tuple);
        return;
    }
    for (std::uint64_t j = 0; j * w <= remaining; ++j) {
        tuple[level] = j;
        visit_tuples(shape, level + 1, remaining - j * w, tuple, visit);
        if (w > remaining) break;
    }
}

// Fixed lexicographic order of accumulation; prefix is the product of the
// binomials chosen by the levels above.
void accumulate_tuples(const TupleShape& shape, std::uint32_t level, std::uint64_t remaining,
                       const ExactRational& alpha, const ExactRational& prefix, ExactRational& total) {
    const std::uint64_t w = shape.weights[level];
    if (level + 1 == shape.n) {
        if (remaining % w != 0) return;
        total += prefix * binomial_general(alpha, remaining / w);
        return;
    }
    const ExactRational d(static_cast<unsigned long>(shape.d));
    ExactRational binom(1);
    for (std::uint64_t j = 0; j * w <= remaining; ++j) {
        if (j > 0) {
            binom *= alpha - ExactRational(static_cast<unsigned long>(j - 1));
            binom /= ExactRational(static_cast<unsigned long>(j));
            // C_j(alpha) = 0 implies C_{j'}(alpha) = 0 for all j' > j.
            if (sgn(binom) == 0) break;
        }
        const ExactRational next_alpha = d * (alpha - ExactRational(static_cast<unsigned long>(j)));
        accumulate_tuples(shape, level + 1, remaining - j * w, next_alpha, prefix * binom, total);
        if (w > remaining) break;
    }
}

}  // namespace

void enumerate_index_tuples(std::uint64_t d, std::uint64_t m, std::uint32_t n,
                            const std::function<void(std::span<const std::uint64_t>)>& visit) {
    const TupleShape shape = make_shape(d, m, n);
    std::vector<std::uint64_t> tuple(n, 0);
    visit_tuples(shape, 0, shape.target, tuple, visit);
}

ExactRational b_combinatorial(std::uint64_t d, std::uint64_t m, std::uint32_t n) {
    const TupleShape shape = make_shape(d, m, n);
    const ExactRational alpha(BigInt(static_cast<unsigned long>(m)), pow_ui(d, n));
    ExactRational total(0);
    accumulate_tuples(shape, 0, shape.target, canonical(alpha), ExactRational(1), total);
    return -total / ExactRational(static_cast<unsigned long>(m));
}

CoeffRecord b(std::uint64_t d, std::uint64_t m, const CoeffOptions& options) {
    require_degree(d);
    if (m == 0) return {d, 0, special_value(d), Method::special_case, 0};
    if (options.vanishing_shortcut && vanishes_by_rule(d, m)) return {d, m, ExactRational(0), Method::special_case, 0};
    const std::uint32_t n = choose_n(d, m);
    return {d, m, b_residue(d, m, n), Method::residue, n};
}

namespace {

// Truncated product a * b of integer series; b_support lists the nonzero
// indices of b in increasing order.
std::vector<BigInt> convolve_truncated(const std::vector<BigInt>& a, const std::vector<BigInt>& b,
                                       const std::vector<std::uint64_t>& b_support, std::uint64_t order,
                                       unsigned threads) {
    std::vector<BigInt> out(order + 1);
    const unsigned lanes = std::max(1U, threads);
    parallel_for(lanes, lanes, [&](std::size_t lane) {
        for (std::uint64_t k = lane; k <= order; k += lanes) {
            BigInt& acc = out[k];
            for (const std::uint64_t i : b_support) {
                if (i > k) break;
                if (sgn(a[k - i]) == 0) continue;
                mpz_addmul(acc.get_mpz_t(), a[k - i].get_mpz_t(), b[i].get_mpz_t());
            }
        }
    });
    return out;
}

// All b_{d,m}, 1 <= m <= m_max, from a single depth n valid for m_max.
//
// With G = (1 + u)^{1/d^n} (so Q_n^{1/d^n} = z G(1/z)), the residue of
// Q_n^{m/d^n} is [t^{m+1}] G(t)^m. G's coefficients are d-adic, so after the
// substitution t -> s t for a suitable s = prod p^{e_p} the series becomes
// integral and powers are plain big-integer convolutions.
std::vector<ExactRational> residue_batch(std::uint64_t d, std::uint64_t m_max, unsigned threads,
                                         std::uint32_t& n_out, TableStats* stats) {
    const std::uint32_t n = choose_n(d, m_max);
    n_out = n;
    const std::uint64_t degree = saturating_pow(d, n);
    if (degree > kMaxExpansionDegree) throw DomainError("coefficient_table: m_max too large to expand");
    const std::uint64_t order = m_max + 1;

    const IntPolynomial q = iterate_parameter_polynomial(d, n);
    const ExactRational root_exponent(BigInt(1), BigInt(static_cast<unsigned long>(degree)));
    const TailSeries root = rational_power_tail(q, root_exponent, order);
    const std::vector<ExactRational>& g = root.tail;

    BigInt scale = 1;
    for (const auto& [p, t] : factorize(d)) {
        std::uint64_t e = 0;
        for (std::uint64_t k = 1; k <= order; ++k) {
            if (sgn(g[k]) == 0) continue;
            const std::int64_t need = -padic_valuation(g[k], p).value();
            if (need > 0) e = std::max<std::uint64_t>(e, (static_cast<std::uint64_t>(need) + k - 1) / k);
        }
        scale *= pow_ui(p, e);
    }

    std::vector<BigInt> scaled(order + 1);
    std::vector<BigInt> scale_powers(order + 1);
    std::vector<std::uint64_t> support;
    scale_powers[0] = 1;
    for (std::uint64_t k = 0; k <= order; ++k) {
        if (k > 0) scale_powers[k] = scale_powers[k - 1] * scale;
        const ExactRational v = g[k] * ExactRational(scale_powers[k]);
        if (v.get_den() != 1) throw std::logic_error("residue_batch: scaled root series is not integral");
        scaled[k] = v.get_num();
        if (sgn(scaled[k]) != 0) support.push_back(k);
    }

    std::uint64_t peak = 0;
    const auto track_peak = [&](const std::vector<BigInt>& v) {
        for (const BigInt& x : v) peak = std::max<std::uint64_t>(peak, mpz_sizeinbase(x.get_mpz_t(), 2));
    };

    // G^m = G^{aL} G^r with m = aL + r: L baby powers, m_max / L giant ones,
    // and a single dot product per m for the coefficient of t^{m+1}.
    std::uint64_t step = 1;
    while (step * step < m_max) ++step;
    std::vector<std::uint64_t> unit_support{0};
    std::vector<BigInt> unit(order + 1);
    unit[0] = 1;

    std::vector<std::vector<BigInt>> baby;
    baby.reserve(step);
    baby.push_back(unit);
    for (std::uint64_t r = 1; r < step; ++r) {
        baby.push_back(convolve_truncated(baby.back(), scaled, support, order, threads));
        track_peak(baby.back());
    }
    const std::vector<BigInt> giant_step =
        step == 1 ? scaled : convolve_truncated(baby.back(), scaled, support, order, threads);
    std::vector<std::uint64_t> giant_support;
    for (std::uint64_t k = 0; k <= order; ++k) {
        if (sgn(giant_step[k]) != 0) giant_support.push_back(k);
    }

    std::vector<ExactRational> values(m_max + 1);
    std::vector<BigInt> giant = unit;
    for (std::uint64_t base = 0; base <= m_max; base += step) {
        if (base > 0) {
            giant = convolve_truncated(giant, giant_step, giant_support, order, threads);
            track_peak(giant);
        }
        const std::uint64_t count = std::min<std::uint64_t>(step, m_max + 1 - base);
        parallel_for(count, threads, [&](std::size_t r) {
            const std::uint64_t m = base + r;
            if (m == 0) return;
            // b_m = -(1/m) [t^{m+1}] G^m = -(1/m) (G~^m)_{m+1} / s^{m+1}
            BigInt acc = 0;
            const std::vector<BigInt>& low = baby[r];
            for (std::uint64_t i = 0; i <= m + 1; ++i) {
                if (sgn(giant[i]) == 0 || sgn(low[m + 1 - i]) == 0) continue;
                mpz_addmul(acc.get_mpz_t(), giant[i].get_mpz_t(), low[m + 1 - i].get_mpz_t());
            }
            BigInt den = scale_powers[m + 1] * static_cast<unsigned long>(m);
            ExactRational value(acc, den);
            value.canonicalize();
            values[m] = -value;
        });
    }
    if (stats != nullptr) stats->peak_work_bits = std::max(stats->peak_work_bits, peak);
    return values;
}

std::string mismatch_message(std::uint64_t d, std::uint64_t m, const ExactRational& a, const ExactRational& b,
                             std::string_view what) {
    return "b_{" + std::to_string(d) + "," + std::to_string(m) + "}: " + std::string(what) + " disagree (" +
           to_string(a) + " vs " + to_string(b) + ")";
}

std::vector<CoeffRecord> combinatorial_table(std::uint64_t d, std::uint64_t m_max, const TableOptions& options) {
    std::vector<CoeffRecord> out(m_max + 1);
    parallel_for(m_max + 1, options.threads, [&](std::size_t i) {
        const std::uint64_t m = i;
        if (m == 0) {
            out[i] = {d, 0, special_value(d), Method::special_case, 0};
        } else if (options.vanishing_shortcut && vanishes_by_rule(d, m)) {
            out[i] = {d, m, ExactRational(0), Method::special_case, 0};
        } else {
            const std::uint32_t n = choose_n(d, m);
            out[i] = {d, m, b_combinatorial(d, m, n), Method::combinatorial, n};
        }
    });
    return out;
}

}  // namespace

std::vector<CoeffRecord> coefficient_table(std::uint64_t d, std::uint64_t m_max, const TableOptions& options,
                                           TableStats* stats) {
    require_degree(d);
    if (options.engine == Engine::combinatorial) return combinatorial_table(d, m_max, options);

    std::vector<CoeffRecord> out;
    out.reserve(m_max + 1);
    out.push_back({d, 0, special_value(d), Method::special_case, 0});
    if (m_max == 0) return out;

    std::uint32_t n = 0;
    const std::vector<ExactRational> values = residue_batch(d, m_max, options.threads, n, stats);
    for (std::uint64_t m = 1; m <= m_max; ++m) {
        if (options.vanishing_shortcut && vanishes_by_rule(d, m)) {
            if (sgn(values[m]) != 0) throw MethodMismatch(mismatch_message(d, m, 0, values[m], "shortcut and residue"));
            out.push_back({d, m, ExactRational(0), Method::special_case, 0});
        } else {
            out.push_back({d, m, values[m], Method::residue, n});
        }
    }

    if (options.engine == Engine::both) {
        const std::vector<CoeffRecord> other = combinatorial_table(d, m_max, options);
        for (std::uint64_t m = 0; m <= m_max; ++m) {
            if (out[m].value != other[m].value) {
                throw MethodMismatch(mismatch_message(d, m, out[m].value, other[m].value, "residue and combinatorial"));
            }
        }
    }
    return out;
}

bool zero_explained(std::uint64_t d, std::uint64_t m) { return vanishes_by_rule(d, m); }

std::vector<ZeroEntry> zero_census(std::span<const CoeffRecord> records) {
    std::vector<ZeroEntry> out;
    for (const CoeffRecord& r : records) {
        if (sgn(r.value) == 0) out.push_back({r.m, zero_explained(r.d, r.m)});
    }
    return out;
}

std::vector<ZeroEntry> zero_census(std::uint64_t d, std::uint64_t m_max, unsigned threads) {
    TableOptions options;
    options.vanishing_shortcut = false;
    options.threads = threads;
    const std::vector<CoeffRecord> records = coefficient_table(d, m_max, options);
    return zero_census(records);
}

}  // namespace multibrot
