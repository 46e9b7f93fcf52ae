#include "multibrot/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <ostream>
#include <set>

#include "CLI11.hpp"

#include "multibrot/coefficients.hpp"
#include "multibrot/parallel.hpp"
#include "multibrot/table_io.hpp"
#include "multibrot/verifier.hpp"

namespace multibrot::cli {

namespace {

enum class Command { compute, verify, census, bench };
enum class Output { csv, json_lines };

struct RunConfig {
    Command command = Command::compute;
    std::vector<std::uint64_t> degrees{2};
    std::uint64_t m_max = 10;
    Engine method = Engine::residue;
    std::string cache_path;
    Output output = Output::csv;
    std::string checks_text;
    bool checks_given = false;
    std::vector<std::string> checks;
    unsigned threads = default_thread_count();
    unsigned threads_compare = 0;
    std::string report_path;
    bool full = false;
};

std::filesystem::path resolve_cache(const std::string& raw) {
    std::filesystem::path p(raw);
    if (p.is_relative()) {
        if (const char* dir = std::getenv(kCacheDirEnv); dir != nullptr && *dir != '\0') {
            return std::filesystem::path(dir) / p;
        }
    }
    return p;
}

std::vector<std::uint64_t> unique_sorted(std::vector<std::uint64_t> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

CoefficientTables tables_from_records(const std::vector<CoeffRecord>& records, std::uint64_t m_max) {
    std::map<std::uint64_t, std::vector<CoeffRecord>> by_degree;
    for (const CoeffRecord& r : records) by_degree[r.d].push_back(r);
    CoefficientTables out;
    for (auto& [d, rs] : by_degree) {
        // Usable only as a contiguous prefix m = 0..k with k >= m_max.
        std::size_t k = 0;
        while (k < rs.size() && rs[k].m == k) ++k;
        if (k > m_max) {
            rs.resize(m_max + 1);
            out[d] = std::move(rs);
        }
    }
    return out;
}

void merge_into_cache(const std::filesystem::path& path, const CoefficientTables& tables) {
    std::vector<CoeffRecord> merged;
    if (std::filesystem::exists(path)) {
        for (CoeffRecord& r : cache_load(path)) {
            if (tables.find(r.d) == tables.end()) merged.push_back(std::move(r));
        }
    }
    for (const auto& [d, rs] : tables) merged.insert(merged.end(), rs.begin(), rs.end());
    cache_store(path, merged);
}

std::vector<CoeffRecord> flatten(const CoefficientTables& tables) {
    std::vector<CoeffRecord> out;
    for (const auto& [d, rs] : tables) out.insert(out.end(), rs.begin(), rs.end());
    return out;
}

int cmd_compute(const RunConfig& cfg, std::ostream& out) {
    CoefficientTables tables;
    TableOptions options;
    options.engine = cfg.method;
    options.vanishing_shortcut = !cfg.full;
    options.threads = cfg.threads;
    for (std::uint64_t d : cfg.degrees) tables[d] = coefficient_table(d, cfg.m_max, options);
    if (!cfg.cache_path.empty()) {
        merge_into_cache(resolve_cache(cfg.cache_path), tables);
        return kOk;
    }
    const std::vector<CoeffRecord> records = flatten(tables);
    out << (cfg.output == Output::csv ? render_cache(records) : render_json_lines(records));
    return kOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    SuiteConfig suite;
    suite.degrees = cfg.degrees;
    suite.m_max = cfg.m_max;
    suite.checks = cfg.checks;
    suite.threads = cfg.threads;

    CoefficientTables tables;
    std::filesystem::path cache;
    if (!cfg.cache_path.empty()) {
        cache = resolve_cache(cfg.cache_path);
        if (std::filesystem::exists(cache)) tables = tables_from_records(cache_load(cache), cfg.m_max);
    }
    const std::vector<Verdict> verdicts = run_suite(suite, &tables);
    if (!cache.empty()) merge_into_cache(cache, tables);

    const std::string report = render_report(verdicts);
    if (cfg.report_path.empty()) {
        out << report;
    } else {
        write_file(cfg.report_path, report);
    }
    const auto failed = std::count_if(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return !v.pass; });
    err << "verified " << verdicts.size() << " verdicts, " << failed << " failed\n";
    for (const Verdict& v : verdicts) {
        if (!v.pass) err << "FAIL " << format_verdict(v) << "\n";
    }
    return failed == 0 ? kOk : kVerificationFailed;
}

int cmd_census(const RunConfig& cfg, std::ostream& out) {
    for (std::uint64_t d : cfg.degrees) {
        const std::vector<ZeroEntry> zeros = zero_census(d, cfg.m_max, cfg.threads);
        std::size_t explained = 0;
        for (const ZeroEntry& z : zeros) {
            out << d << "," << z.m << "," << (z.explained ? "explained" : "unexplained") << "\n";
            explained += z.explained ? 1 : 0;
        }
        out << "# d=" << d << " m_max=" << cfg.m_max << " zeros=" << zeros.size() << " explained=" << explained
            << " unexplained=" << zeros.size() - explained << "\n";
    }
    return kOk;
}

struct BenchRow {
    std::string method;
    std::uint64_t d;
    unsigned threads;
    double seconds;
    std::uint64_t value_bits;
    std::optional<std::uint64_t> work_bits;
    std::string digest;
};

BenchRow bench_once(std::uint64_t d, std::uint64_t m_max, Engine engine, unsigned threads) {
    TableOptions options;
    options.engine = engine;
    options.vanishing_shortcut = false;
    options.threads = threads;
    TableStats stats;
    const auto start = std::chrono::steady_clock::now();
    const std::vector<CoeffRecord> records = coefficient_table(d, m_max, options, &stats);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

    BenchRow row;
    row.method = engine == Engine::residue ? "residue" : "combinatorial";
    row.d = d;
    row.threads = threads;
    row.seconds = elapsed.count();
    row.value_bits = 0;
    for (const CoeffRecord& r : records) {
        row.value_bits = std::max<std::uint64_t>(row.value_bits,
                                                  mpz_sizeinbase(r.value.get_num_mpz_t(), 2) +
                                                      mpz_sizeinbase(r.value.get_den_mpz_t(), 2));
    }
    if (engine == Engine::residue) row.work_bits = stats.peak_work_bits;
    const std::vector<std::string> lines = record_lines(records);
    row.digest = payload_digest(lines);
    return row;
}

int cmd_bench(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    std::vector<Engine> engines;
    if (cfg.method == Engine::both) {
        engines = {Engine::residue, Engine::combinatorial};
    } else {
        engines = {cfg.method};
    }
    std::vector<unsigned> thread_counts{cfg.threads};
    if (cfg.threads_compare > 0 && cfg.threads_compare != cfg.threads) thread_counts.push_back(cfg.threads_compare);

    out << "method,d,m_max,threads,seconds,peak_value_bits,peak_work_bits,sha256\n";
    int status = kOk;
    for (std::uint64_t d : cfg.degrees) {
        std::string reference;
        for (Engine e : engines) {
            for (unsigned t : thread_counts) {
                const BenchRow row = bench_once(d, cfg.m_max, e, t);
                char seconds[32];
                std::snprintf(seconds, sizeof seconds, "%.6f", row.seconds);
                out << row.method << "," << row.d << "," << cfg.m_max << "," << row.threads << "," << seconds << ","
                    << row.value_bits << "," << (row.work_bits ? std::to_string(*row.work_bits) : "na") << ","
                    << row.digest << "\n";
                if (reference.empty()) {
                    reference = row.digest;
                } else if (reference != row.digest) {
                    err << "bench: digest mismatch for d = " << d << " (" << row.method << ", threads " << t << ")\n";
                    status = kVerificationFailed;
                }
            }
        }
    }
    return status;
}

void add_common(CLI::App* sub, RunConfig& cfg, std::uint64_t default_m_max) {
    cfg.m_max = default_m_max;
    sub->add_option("--d", cfg.degrees, "Degrees (comma separated)")->delimiter(',')->check(CLI::Range(2U, 1U << 20U));
    sub->add_option("--m-max", cfg.m_max, "Largest index m")->capture_default_str();
    sub->add_option("--threads", cfg.threads, "Worker threads")->check(CLI::Range(1U, 1024U));
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact Laurent coefficients of the Multibrot exterior map"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    RunConfig compute_cfg;
    RunConfig verify_cfg;
    RunConfig census_cfg;
    RunConfig bench_cfg;
    const std::map<std::string, Engine> methods{
        {"residue", Engine::residue}, {"combinatorial", Engine::combinatorial}, {"both", Engine::both}};
    const std::map<std::string, Output> outputs{{"csv", Output::csv}, {"json-lines", Output::json_lines}};

    CLI::App* compute = app.add_subcommand("compute", "Compute coefficient tables");
    add_common(compute, compute_cfg, 10);
    compute->add_option("--method", compute_cfg.method, "residue | combinatorial | both")
        ->transform(CLI::CheckedTransformer(methods, CLI::ignore_case));
    compute->add_option("--cache", compute_cfg.cache_path, "Merge results into this cache file instead of stdout");
    compute->add_option("--output", compute_cfg.output, "csv | json-lines")
        ->transform(CLI::CheckedTransformer(outputs, CLI::ignore_case));
    compute->add_flag("--full", compute_cfg.full, "Compute vanishing indices instead of using the shortcut");

    CLI::App* verify = app.add_subcommand("verify", "Run valuation checks and emit a report");
    add_common(verify, verify_cfg, 50);
    verify->add_option("--checks", verify_cfg.checks_text, "Comma separated check names (default: all)");
    verify->add_option("--cache", verify_cfg.cache_path, "Coefficient cache to read from and update");
    verify->add_option("--report", verify_cfg.report_path, "Report file (default: stdout)");

    CLI::App* census = app.add_subcommand("census", "List zero coefficients");
    add_common(census, census_cfg, 20);

    CLI::App* bench = app.add_subcommand("bench", "Time the coefficient engines");
    add_common(bench, bench_cfg, 50);
    bench_cfg.method = Engine::both;
    bench->add_option("--method", bench_cfg.method, "residue | combinatorial | both")
        ->transform(CLI::CheckedTransformer(methods, CLI::ignore_case));
    bench->add_option("--threads-compare", bench_cfg.threads_compare, "Also run with this many threads");

    std::vector<std::string> argv_storage{"multibrot"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const std::string& a : argv_storage) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*compute) {
            compute_cfg.degrees = unique_sorted(compute_cfg.degrees);
            return cmd_compute(compute_cfg, out);
        }
        if (*verify) {
            verify_cfg.degrees = unique_sorted(verify_cfg.degrees);
            verify_cfg.checks_given = verify->count("--checks") > 0;
            if (verify_cfg.checks_given) {
                verify_cfg.checks = parse_check_list(verify_cfg.checks_text);
            } else {
                verify_cfg.checks.assign(check_names().begin(), check_names().end());
            }
            return cmd_verify(verify_cfg, out, err);
        }
        if (*census) {
            census_cfg.degrees = unique_sorted(census_cfg.degrees);
            return cmd_census(census_cfg, out);
        }
        bench_cfg.degrees = unique_sorted(bench_cfg.degrees);
        return cmd_bench(bench_cfg, out, err);
    } catch (const MethodMismatch& e) {
        err << "error: " << e.what() << "\n";
        return kVerificationFailed;
    } catch (const DomainError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const FormatError& e) {
        err << "format error: " << e.what() << "\n";
        return kIoError;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << "\n";
        return kIoError;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "i/o error: " << e.what() << "\n";
        return kIoError;
    }
}

}  // namespace multibrot::cli
