#pragma once

// Checksummed line-oriented text files.
//
//   #<header>
//   payload line 1
//   ...
//   #sha256:<hex of sha256 over every payload line followed by '\n'>
//
// Coefficient caches use header "multibrot-coeffs v1" and payload lines
// `d,m,numerator,denominator`, sorted by (d, m).

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "multibrot/coefficients.hpp"

namespace multibrot {

inline constexpr std::string_view kCacheHeader = "#multibrot-coeffs v1";
inline constexpr std::string_view kChecksumPrefix = "#sha256:";

/// Malformed content; line() is 1-based, 0 when not tied to a line.
class FormatError : public std::runtime_error {
public:
    FormatError(std::size_t line, const std::string& what);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string sha256_hex(std::string_view data);

/// Hex digest of the payload lines as they appear in a checksummed file.
std::string payload_digest(std::span<const std::string> lines);

/// Complete file text: header, payload, checksum trailer.
std::string render_checksummed(std::string_view header, std::span<const std::string> lines);

/// Inverse of render_checksummed. Completely empty input yields no lines.
std::vector<std::string> parse_checksummed(std::string_view text, std::string_view header);

std::string format_record(const CoeffRecord& r);
CoeffRecord parse_record(std::string_view line, std::size_t line_number);

/// Records sorted by (d, m); duplicates are rejected.
std::vector<std::string> record_lines(std::span<const CoeffRecord> records);

std::string render_cache(std::span<const CoeffRecord> records);
std::vector<CoeffRecord> parse_cache(std::string_view text);

void cache_store(const std::filesystem::path& path, std::span<const CoeffRecord> records);
std::vector<CoeffRecord> cache_load(const std::filesystem::path& path);

/// One JSON object per record.
std::string render_json_lines(std::span<const CoeffRecord> records);

std::string read_file(const std::filesystem::path& path);
/// Writes atomically via a sibling temporary file.
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace multibrot
