#pragma once

// Laurent coefficients b_{d,m} of Psi_d(z) = z + sum_m b_{d,m} z^{-m}.
//
// Two independent routes:
//   residue        -(1/m) [z^{-1}] Q_n(z)^{m/d^n}
//   combinatorial  -(1/m) sum over weighted index tuples of products of
//                  generalized binomials
// plus the hardcoded m = 0 values.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "multibrot/exact_arith.hpp"

namespace multibrot {

enum class Method : std::uint8_t { residue, combinatorial, special_case, cached };

std::string_view method_name(Method m);

struct CoeffRecord {
    std::uint64_t d = 2;
    std::uint64_t m = 0;
    ExactRational value;
    Method method = Method::special_case;
    /// Iteration depth n of Q_n; 0 for special cases and cached values.
    std::uint32_t n_used = 0;

    /// Identity is (d, m, value); provenance is not compared.
    friend bool operator==(const CoeffRecord& a, const CoeffRecord& b) {
        return a.d == b.d && a.m == b.m && a.value == b.value;
    }
};

/// Largest m admissible at iteration depth n: d^{n+1} - 3 (saturating).
std::uint64_t max_index_for_depth(std::uint64_t d, std::uint32_t n);

/// Smallest n >= 1 with m <= d^{n+1} - 3.
std::uint32_t choose_n(std::uint64_t d, std::uint64_t m);

/// b_{d,m} by residue extraction at depth n (0 selects choose_n). m >= 1.
ExactRational b_residue(std::uint64_t d, std::uint64_t m, std::uint32_t n = 0);

/// Calls visit(tuple) for every (j_1..j_n) with
/// sum_k (d^{n-k+1} - 1) j_k = m + 1, in lexicographic order.
void enumerate_index_tuples(std::uint64_t d, std::uint64_t m, std::uint32_t n,
                            const std::function<void(std::span<const std::uint64_t>)>& visit);

/// b_{d,m} via the combinatorial sum. Requires 1 <= m <= d^{n+1} - 3.
ExactRational b_combinatorial(std::uint64_t d, std::uint64_t m, std::uint32_t n);

struct CoeffOptions {
    /// Return 0 for d >= 3, (d-1) !| (m+1) without computing.
    bool vanishing_shortcut = true;
};

/// Dispatching entry point for a single index.
CoeffRecord b(std::uint64_t d, std::uint64_t m, const CoeffOptions& options = {});

/// Thrown when the residue and combinatorial routes (or the vanishing
/// shortcut and a full computation) disagree.
class MethodMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Engine : std::uint8_t { residue, combinatorial, both };

struct TableOptions {
    Engine engine = Engine::residue;
    bool vanishing_shortcut = true;
    unsigned threads = 1;
};

struct TableStats {
    /// Largest intermediate integer (bits) touched by the engine.
    std::uint64_t peak_work_bits = 0;
};

/// Records for m = 0..m_max, sorted by m. The residue engine shares one
/// expansion of Q_n^{1/d^n} across all m; results equal b_residue exactly.
std::vector<CoeffRecord> coefficient_table(std::uint64_t d, std::uint64_t m_max, const TableOptions& options = {},
                                           TableStats* stats = nullptr);

/// True when a zero at (d, m) is accounted for by the vanishing rule or by
/// b_{d,0} = 0 for d >= 3.
bool zero_explained(std::uint64_t d, std::uint64_t m);

struct ZeroEntry {
    std::uint64_t m;
    bool explained;
    friend bool operator==(const ZeroEntry&, const ZeroEntry&) = default;
};

std::vector<ZeroEntry> zero_census(std::uint64_t d, std::uint64_t m_max, unsigned threads = 1);
std::vector<ZeroEntry> zero_census(std::span<const CoeffRecord> records);

}  // namespace multibrot
