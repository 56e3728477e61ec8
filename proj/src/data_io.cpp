#include "drm/data_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "drm/errors.hpp"

namespace drm {

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string(), 0);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r' || s[b] == '"')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r' || s[e - 1] == '"')) --e;
    return std::string(s.substr(b, e - b));
}

bool parse_double(const std::string& field, double& out) {
    if (field.empty()) return false;
    const char* first = field.data();
    const char* last = first + field.size();
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last && std::isfinite(out);
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        out.push_back(trim(std::string_view(line).substr(start, pos == std::string::npos ? std::string::npos : pos - start)));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

std::vector<std::pair<std::size_t, std::string>> content_lines(const std::string& text) {
    std::vector<std::pair<std::size_t, std::string>> out;
    std::istringstream in(text);
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        out.emplace_back(row, line);
    }
    return out;
}

}  // namespace

std::vector<double> parse_series_csv(const std::string& text) {
    const auto lines = content_lines(text);
    std::vector<double> values;
    for (std::size_t k = 0; k < lines.size(); ++k) {
        const auto& [row, line] = lines[k];
        const std::string field = trim(line);
        double v = 0.0;
        if (field.find(',') != std::string::npos) {
            throw ParseError("row " + std::to_string(row) + ": expected a single column", row);
        }
        if (parse_double(field, v)) {
            values.push_back(v);
        } else if (k != 0) {
            throw ParseError("row " + std::to_string(row) + ": '" + field + "' is not a number", row);
        }
    }
    if (values.empty()) throw ParseError("series file contains no data rows", 0);
    return values;
}

EmpiricalSample load_series_csv(const std::filesystem::path& path) {
    try {
        return EmpiricalSample(parse_series_csv(read_file(path)));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what(), e.row);
    }
}

void write_series_csv(const std::filesystem::path& path, const std::vector<double>& values, const std::string& header) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write " + path.string(), 0);
    if (!header.empty()) out << header << '\n';
    out << std::setprecision(17);
    for (double v : values) out << v << '\n';
}

PricePanel parse_price_panel_csv(const std::string& text) {
    const auto lines = content_lines(text);
    if (lines.empty()) throw ParseError("price panel is empty", 0);
    const auto head = split(lines[0].second, ',');
    if (head.size() < 2) throw ParseError("price panel header needs a date column and at least one ticker", lines[0].first);
    PricePanel panel;
    panel.tickers.assign(head.begin() + 1, head.end());
    panel.prices.assign(panel.tickers.size(), {});
    for (std::size_t k = 1; k < lines.size(); ++k) {
        const auto& [row, line] = lines[k];
        const auto fields = split(line, ',');
        if (fields.size() != head.size()) {
            throw ParseError("row " + std::to_string(row) + ": expected " + std::to_string(head.size()) + " fields", row);
        }
        panel.dates.push_back(fields[0]);
        for (std::size_t t = 0; t < panel.tickers.size(); ++t) {
            double v = 0.0;
            if (!parse_double(fields[t + 1], v) || !(v > 0.0)) {
                throw ParseError("row " + std::to_string(row) + " (" + panel.tickers[t] + ", " + fields[0] + "): '" +
                                     fields[t + 1] + "' is not a positive price",
                                 row);
            }
            panel.prices[t].push_back(v);
        }
    }
    if (panel.dates.empty()) throw ParseError("price panel contains no data rows", 0);
    return panel;
}

PricePanel load_price_panel_csv(const std::filesystem::path& path) {
    try {
        return parse_price_panel_csv(read_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what(), e.row);
    }
}

std::vector<double> prices_to_portfolio_returns(const PricePanel& panel, double scale, Rebalance mode) {
    const std::size_t k = panel.tickers.size();
    const std::size_t t = panel.dates.size();
    if (k == 0 || t < 2) throw DomainError("need at least one ticker and two dates to form returns");
    for (std::size_t j = 0; j < k; ++j) {
        if (panel.prices[j].size() != t) throw DomainError("price row for " + panel.tickers[j] + " has the wrong length");
        for (std::size_t d = 0; d < t; ++d) {
            if (!(panel.prices[j][d] > 0.0)) {
                throw DomainError("nonpositive price for " + panel.tickers[j] + " on " + panel.dates[d]);
            }
        }
    }
    std::vector<double> out;
    out.reserve(t - 1);
    for (std::size_t d = 1; d < t; ++d) {
        if (mode == Rebalance::Monthly) {
            double s = 0.0;
            for (std::size_t j = 0; j < k; ++j) s += panel.prices[j][d] / panel.prices[j][d - 1] - 1.0;
            out.push_back(scale * s / static_cast<double>(k));
        } else {
            double now = 0.0, before = 0.0;
            for (std::size_t j = 0; j < k; ++j) {
                now += panel.prices[j][d] / panel.prices[j][0];
                before += panel.prices[j][d - 1] / panel.prices[j][0];
            }
            out.push_back(scale * (now / before - 1.0));
        }
    }
    return out;
}

}  // namespace drm
