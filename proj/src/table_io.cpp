#include "multibrot/table_io.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "json.hpp"

namespace multibrot {

FormatError::FormatError(std::size_t line, const std::string& what)
    : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

std::string sha256_hex(std::string_view data) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256: digest failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(kHex[digest[i] >> 4U]);
        out.push_back(kHex[digest[i] & 0xFU]);
    }
    return out;
}

std::string payload_digest(std::span<const std::string> lines) {
    std::string joined;
    for (const std::string& l : lines) {
        joined += l;
        joined += '\n';
    }
    return sha256_hex(joined);
}

std::string render_checksummed(std::string_view header, std::span<const std::string> lines) {
    std::string out(header);
    out += '\n';
    for (const std::string& l : lines) {
        out += l;
        out += '\n';
    }
    out += kChecksumPrefix;
    out += payload_digest(lines);
    out += '\n';
    return out;
}

std::vector<std::string> parse_checksummed(std::string_view text, std::string_view header) {
    if (text.empty()) return {};
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) {
            lines.emplace_back(text.substr(pos));
            break;
        }
        lines.emplace_back(text.substr(pos, eol - pos));
        pos = eol + 1;
    }
    if (lines.front() != header) throw FormatError(1, "expected header '" + std::string(header) + "'");
    if (lines.size() < 2 || !lines.back().starts_with(kChecksumPrefix)) {
        throw FormatError(lines.size(), "missing checksum trailer");
    }
    std::vector<std::string> payload(lines.begin() + 1, lines.end() - 1);
    for (std::size_t i = 0; i < payload.size(); ++i) {
        if (payload[i].empty() || payload[i].front() == '#') throw FormatError(i + 2, "unexpected line in payload");
    }
    const std::string expected = lines.back().substr(kChecksumPrefix.size());
    if (expected != payload_digest(payload)) throw FormatError(lines.size(), "checksum mismatch");
    return payload;
}

namespace {

bool is_decimal(std::string_view s, bool allow_sign) {
    if (allow_sign && !s.empty() && s.front() == '-') s.remove_prefix(1);
    if (s.empty()) return false;
    if (s.size() > 1 && s.front() == '0') return false;
    return std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::uint64_t parse_u64(std::string_view s, std::size_t line, const char* field) {
    if (!is_decimal(s, false) || s.size() > 19) throw FormatError(line, std::string("bad ") + field);
    return std::stoull(std::string(s));
}

}  // namespace

std::string format_record(const CoeffRecord& r) {
    const ExactRational v = canonical(r.value);
    return std::to_string(r.d) + "," + std::to_string(r.m) + "," + v.get_num().get_str() + "," +
           v.get_den().get_str();
}

CoeffRecord parse_record(std::string_view line, std::size_t line_number) {
    std::array<std::string_view, 4> fields;
    std::size_t count = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            if (count == fields.size()) throw FormatError(line_number, "expected 4 fields");
            fields[count++] = line.substr(start, i - start);
            start = i + 1;
        }
    }
    if (count != fields.size()) throw FormatError(line_number, "expected 4 fields");

    CoeffRecord r;
    r.d = parse_u64(fields[0], line_number, "degree");
    r.m = parse_u64(fields[1], line_number, "index");
    if (r.d < 2) throw FormatError(line_number, "degree must be >= 2");
    if (!is_decimal(fields[2], true) || fields[2] == "-0") throw FormatError(line_number, "bad numerator");
    if (!is_decimal(fields[3], false)) throw FormatError(line_number, "bad denominator");
    BigInt num(std::string(fields[2]), 10);
    BigInt den(std::string(fields[3]), 10);
    if (sgn(den) <= 0) throw FormatError(line_number, "denominator must be positive");
    BigInt g;
    mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    if (g != 1) throw FormatError(line_number, "value not in lowest terms");
    r.value = ExactRational(num, den);
    if (!is_d_adic(r.value, r.d)) throw FormatError(line_number, "denominator has a prime factor not dividing d");
    r.method = Method::cached;
    r.n_used = 0;
    return r;
}

std::vector<std::string> record_lines(std::span<const CoeffRecord> records) {
    std::vector<const CoeffRecord*> sorted;
    sorted.reserve(records.size());
    for (const CoeffRecord& r : records) sorted.push_back(&r);
    std::sort(sorted.begin(), sorted.end(),
              [](const CoeffRecord* a, const CoeffRecord* b) { return std::tie(a->d, a->m) < std::tie(b->d, b->m); });
    std::vector<std::string> lines;
    lines.reserve(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i > 0 && sorted[i - 1]->d == sorted[i]->d && sorted[i - 1]->m == sorted[i]->m) {
            throw DomainError("duplicate record for d = " + std::to_string(sorted[i]->d) +
                              ", m = " + std::to_string(sorted[i]->m));
        }
        lines.push_back(format_record(*sorted[i]));
    }
    return lines;
}

std::string render_cache(std::span<const CoeffRecord> records) {
    return render_checksummed(kCacheHeader, record_lines(records));
}

std::vector<CoeffRecord> parse_cache(std::string_view text) {
    const std::vector<std::string> lines = parse_checksummed(text, kCacheHeader);
    std::vector<CoeffRecord> out;
    out.reserve(lines.size());
    for (std::size_t i = 0; i < lines.size(); ++i) {
        CoeffRecord r = parse_record(lines[i], i + 2);
        if (!out.empty() && std::tie(out.back().d, out.back().m) >= std::tie(r.d, r.m)) {
            throw FormatError(i + 2, "records not strictly sorted by (d, m)");
        }
        out.push_back(std::move(r));
    }
    return out;
}

void cache_store(const std::filesystem::path& path, std::span<const CoeffRecord> records) {
    write_file(path, render_cache(records));
}

std::vector<CoeffRecord> cache_load(const std::filesystem::path& path) { return parse_cache(read_file(path)); }

std::string render_json_lines(std::span<const CoeffRecord> records) {
    std::string out;
    for (const CoeffRecord& r : records) {
        const ExactRational v = canonical(r.value);
        nlohmann::ordered_json j;
        j["d"] = r.d;
        j["m"] = r.m;
        j["numerator"] = v.get_num().get_str();
        j["denominator"] = v.get_den().get_str();
        j["method"] = method_name(r.method);
        j["n"] = r.n_used;
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("read failed: " + path.string());
    return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw IoError("write failed: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot replace " + path.string() + ": " + ec.message());
}

}  // namespace multibrot
