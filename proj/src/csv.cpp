#include "pco/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace pco::csv {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void Table::row(std::vector<std::string> cells) {
    if (cells.size() != header_.size())
        throw config_error("csv row width " + std::to_string(cells.size()) +
                           " does not match header width " + std::to_string(header_.size()));
    rows_.push_back(std::move(cells));
}

void Table::meta(std::string key, std::string value) {
    meta_.emplace_back(std::move(key), std::move(value));
}

std::string Table::str() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < header_.size(); ++i)
        out << (i ? "," : "") << header_[i];
    out << '\n';
    for (const auto& r : rows_) {
        for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
        out << '\n';
    }
    out << '#';
    for (const auto& [k, v] : meta_) out << ' ' << k << '=' << v;
    out << '\n';
    return out.str();
}

void Table::save(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw config_error("cannot open '" + path + "' for writing");
    f << str();
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

Meta parse_meta_line(const std::string& line) {
    Meta meta;
    std::istringstream in(line.substr(1));
    std::string tok;
    while (in >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        meta.emplace_back(tok.substr(0, eq), tok.substr(eq + 1));
    }
    return meta;
}

double parse_double(const std::string& s, const std::string& path) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw config_error("'" + path + "': bad numeric field '" + s + "'");
    }
}

long parse_int(const std::string& s, const std::string& path) {
    try {
        std::size_t pos = 0;
        const long v = std::stol(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw config_error("'" + path + "': bad integer field '" + s + "'");
    }
}

} // namespace

std::string meta_value(const Meta& meta, const std::string& key) {
    for (const auto& [k, v] : meta)
        if (k == key) return v;
    return "";
}

void write_coeffs(const std::string& path, const SignalSequence& v, const Meta& meta) {
    Table t({"j", "k", "value"});
    for (int j = -1; j <= v.max_level(); ++j) {
        const auto lev = v.level(j);
        for (std::size_t k = 0; k < lev.size(); ++k)
            t.row({std::to_string(j), std::to_string(k), format_double(lev[k])});
    }
    for (const auto& [k, val] : meta) t.meta(k, val);
    t.save(path);
}

SignalSequence read_coeffs(const std::string& path, Meta* meta_out) {
    std::ifstream f(path);
    if (!f) throw config_error("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(f, line)) throw config_error("'" + path + "': empty file");
    if (split_line(line) != std::vector<std::string>{"j", "k", "value"})
        throw config_error("'" + path + "': expected header j,k,value");

    struct Row {
        int j, k;
        double value;
    };
    std::vector<Row> rows;
    int max_level = -1;
    Meta meta;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            meta = parse_meta_line(line);
            continue;
        }
        const auto cells = split_line(line);
        if (cells.size() != 3) throw config_error("'" + path + "': expected 3 columns");
        Row r{static_cast<int>(parse_int(cells[0], path)),
              static_cast<int>(parse_int(cells[1], path)), parse_double(cells[2], path)};
        if (!valid_index({r.j, r.k}))
            throw config_error("'" + path + "': invalid index (" + cells[0] + "," + cells[1] +
                               ")");
        max_level = std::max(max_level, r.j);
        rows.push_back(r);
    }
    SignalSequence v(std::max(max_level, -1), false);
    for (const auto& r : rows) v.set({r.j, r.k}, r.value);
    if (meta_out) *meta_out = std::move(meta);
    return v;
}

std::vector<double> read_samples(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw config_error("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(f, line)) throw config_error("'" + path + "': empty file");
    if (split_line(line) != std::vector<std::string>{"i", "x"})
        throw config_error("'" + path + "': expected header i,x");
    std::vector<double> out;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto cells = split_line(line);
        if (cells.size() != 2) throw config_error("'" + path + "': expected 2 columns");
        const long i = parse_int(cells[0], path);
        if (i != static_cast<long>(out.size()) + 1)
            throw config_error("'" + path + "': sample indices must run 1..n in order");
        out.push_back(parse_double(cells[1], path));
    }
    if (out.empty()) throw config_error("'" + path + "': no samples");
    return out;
}

} // namespace pco::csv
