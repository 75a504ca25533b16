#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pco/signal.hpp"

/*
 * CSV artifacts. Every file: one header row, data rows, one trailing
 * comment line "# key=value ..." recording at least the config hash and
 * seed. Doubles are printed with %.17g so outputs are byte-reproducible
 * and round-trip exactly.
 */

namespace pco::csv {

std::string format_double(double v);

// FNV-1a 64-bit, used as the config fingerprint in metadata lines.
std::uint64_t fnv1a(std::string_view s);
std::string hash_hex(std::uint64_t h);

using Meta = std::vector<std::pair<std::string, std::string>>;

class Table {
public:
    explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}

    void row(std::vector<std::string> cells);
    void meta(std::string key, std::string value);

    std::string str() const;
    void save(const std::string& path) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
    Meta meta_;
};

// Coefficient files use columns (j, k, value). Metadata keys survive the
// round trip; unlisted coordinates read as zero and the result is marked
// as a truncation (exact_tail = false).
void write_coeffs(const std::string& path, const SignalSequence& v, const Meta& meta);
SignalSequence read_coeffs(const std::string& path, Meta* meta_out = nullptr);

// Regression samples use columns (i, x), i = 1..n in order.
std::vector<double> read_samples(const std::string& path);

// Lookup helper for parsed metadata; empty string when absent.
std::string meta_value(const Meta& meta, const std::string& key);

} // namespace pco::csv
