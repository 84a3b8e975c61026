#include "dig/series.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace dig {

namespace {

std::string trim(const std::string& s) {
    auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

[[noreturn]] void cell_error(std::size_t line_no, const std::string& column, const std::string& what) {
    throw std::invalid_argument("csv line " + std::to_string(line_no) + ", column '" + column +
                                "': " + what);
}

std::int64_t parse_count(const std::string& text, std::size_t line_no, const std::string& column) {
    if (text.empty()) cell_error(line_no, column, "empty cell");
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec == std::errc() && ptr == text.data() + text.size()) return value;
    // Fall back to real-valued cells: loop detectors occasionally report
    // averaged flows.  Floor keeps counts integral.
    double real = 0.0;
    std::size_t pos = 0;
    try {
        real = std::stod(text, &pos);
    } catch (const std::invalid_argument&) {
        cell_error(line_no, column, "not a number: '" + text + "'");
    } catch (const std::out_of_range&) {
        cell_error(line_no, column, "value out of range");
    }
    if (pos != text.size()) cell_error(line_no, column, "not a number: '" + text + "'");
    if (!std::isfinite(real)) cell_error(line_no, column, "non-finite value");
    return static_cast<std::int64_t>(std::floor(real));
}

}  // namespace

void validate(const FlowSeries& series) {
    if (series.node_id.empty()) throw std::invalid_argument("flow series has empty node id");
    if (series.samples.empty())
        throw std::invalid_argument("flow series '" + series.node_id + "' has no samples");
    if (series.period_seconds <= 0)
        throw std::invalid_argument("flow series '" + series.node_id + "' has non-positive period");
    for (std::size_t i = 0; i < series.samples.size(); ++i) {
        if (series.samples[i] < 0)
            throw std::invalid_argument("flow series '" + series.node_id + "' sample " +
                                        std::to_string(i) + " is negative");
    }
}

std::vector<FlowSeries> ingest_csv(std::istream& in, const IngestOptions& options) {
    std::string line;
    std::size_t line_no = 0;

    // Header row names the sensors.
    do {
        if (!std::getline(in, line)) throw std::invalid_argument("csv input is empty");
        ++line_no;
        line = trim(line);
    } while (line.empty());

    // First column is the timestamp column whatever its label; the
    // canonical name written by export_csv is "timestamp".
    auto header = split_fields(line);
    if (header.size() < 2)
        throw std::invalid_argument("csv header needs a timestamp column and at least one sensor");
    if (header.front().empty())
        throw std::invalid_argument("csv header has an empty timestamp column name");

    std::vector<std::string> ids(header.begin() + 1, header.end());
    std::set<std::string> seen;
    for (const auto& id : ids) {
        if (id.empty()) throw std::invalid_argument("csv header has an empty sensor id");
        if (!seen.insert(id).second)
            throw std::invalid_argument("csv header repeats sensor id '" + id + "'");
    }

    std::vector<FlowSeries> result(ids.size());
    for (std::size_t c = 0; c < ids.size(); ++c) result[c].node_id = ids[c];

    std::vector<std::int64_t> timestamps;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty()) continue;
        auto fields = split_fields(line);
        if (fields.size() != header.size())
            throw std::invalid_argument("csv line " + std::to_string(line_no) + ": expected " +
                                        std::to_string(header.size()) + " fields, got " +
                                        std::to_string(fields.size()));
        std::int64_t ts = parse_count(fields[0], line_no, "timestamp");
        if (!timestamps.empty() && ts <= timestamps.back())
            throw std::invalid_argument("csv line " + std::to_string(line_no) +
                                        ": timestamp not increasing");
        timestamps.push_back(ts);
        for (std::size_t c = 0; c < ids.size(); ++c) {
            std::int64_t value = parse_count(fields[c + 1], line_no, ids[c]);
            if (value < 0) cell_error(line_no, ids[c], "negative count");
            result[c].samples.push_back(value);
        }
    }

    if (timestamps.empty()) throw std::invalid_argument("csv has a header but no data rows");

    int period;
    if (options.period_seconds) {
        period = *options.period_seconds;
        if (period <= 0) throw std::invalid_argument("period override must be positive");
    } else if (timestamps.size() >= 2) {
        std::int64_t diff = timestamps[1] - timestamps[0];
        if (diff <= 0 || diff > std::numeric_limits<int>::max())
            throw std::invalid_argument("cannot infer sampling period from timestamps");
        period = static_cast<int>(diff);
    } else {
        period = 300;
    }

    // Timestamps must form a regular grid; a gap means missing data and
    // the caller has to resolve that upstream, not us.
    for (std::size_t i = 1; i < timestamps.size(); ++i) {
        if (timestamps[i] - timestamps[i - 1] != period)
            throw std::invalid_argument("csv timestamps are not evenly spaced at row " +
                                        std::to_string(i + 1) + " (period " +
                                        std::to_string(period) + "s)");
    }

    for (auto& series : result) {
        series.period_seconds = period;
        validate(series);
    }
    return result;
}

void export_csv(std::span<const FlowSeries> series, std::ostream& out) {
    if (series.empty()) throw std::invalid_argument("nothing to export");
    std::size_t n = series.front().size();
    int period = series.front().period_seconds;
    for (const auto& s : series) {
        validate(s);
        if (s.size() != n) throw std::invalid_argument("series lengths differ in export");
        if (s.period_seconds != period) throw std::invalid_argument("series periods differ in export");
    }
    out << "timestamp";
    for (const auto& s : series) out << ',' << s.node_id;
    out << '\n';
    for (std::size_t i = 0; i < n; ++i) {
        out << static_cast<std::int64_t>(i) * period;
        for (const auto& s : series) out << ',' << s.samples[i];
        out << '\n';
    }
}

QuantizerSpec fit_quantizer(const FlowSeries& series, int levels, QuantizerStrategy strategy) {
    validate(series);
    if (levels < 2) throw std::invalid_argument("quantizer needs at least 2 levels");

    QuantizerSpec spec;
    spec.levels = levels;
    spec.strategy = strategy;

    if (strategy == QuantizerStrategy::equal_width) {
        auto [min_it, max_it] = std::minmax_element(series.samples.begin(), series.samples.end());
        double lo = static_cast<double>(*min_it);
        double hi = static_cast<double>(*max_it);
        if (lo == hi) {
            // Constant series: place the edges above the value so all
            // samples land in bin 0 rather than failing.
            for (int i = 1; i < levels; ++i) spec.bin_edges.push_back(lo + i);
            return spec;
        }
        double width = (hi - lo) / levels;
        for (int i = 1; i < levels; ++i) spec.bin_edges.push_back(lo + i * width);
        return spec;
    }

    // equal_frequency: order statistics at the i/levels quantiles.
    if (series.samples.size() < static_cast<std::size_t>(levels))
        throw std::invalid_argument("too few samples for " + std::to_string(levels) +
                                    " equal-frequency bins");
    std::vector<std::int64_t> sorted = series.samples;
    std::sort(sorted.begin(), sorted.end());
    std::size_t n = sorted.size();
    for (int i = 1; i < levels; ++i) {
        std::size_t rank = (n * static_cast<std::size_t>(i)) / static_cast<std::size_t>(levels);
        if (rank == 0) rank = 1;
        spec.bin_edges.push_back(static_cast<double>(sorted[rank - 1]));
    }
    for (std::size_t i = 1; i < spec.bin_edges.size(); ++i) {
        if (spec.bin_edges[i] <= spec.bin_edges[i - 1])
            throw std::invalid_argument(
                "equal-frequency edges are not strictly increasing for '" + series.node_id +
                "'; the data is too concentrated for " + std::to_string(levels) + " bins");
    }
    // Bins are right-closed, so an edge at the maximum leaves the top bin
    // empty; together with the strict increase above this guarantees every
    // bin is reachable on the data the quantizer was fit on.
    if (spec.bin_edges.back() >= static_cast<double>(sorted.back()))
        throw std::invalid_argument("equal-frequency top edge reaches the maximum of '" +
                                    series.node_id + "'; the data is too concentrated for " +
                                    std::to_string(levels) + " bins");
    return spec;
}

QuantizedSeries quantize(const FlowSeries& series, const QuantizerSpec& spec) {
    validate(series);
    if (spec.levels < 2) throw std::invalid_argument("quantizer spec has fewer than 2 levels");
    if (spec.bin_edges.size() != static_cast<std::size_t>(spec.levels - 1))
        throw std::invalid_argument("quantizer spec needs levels-1 bin edges");
    for (std::size_t i = 1; i < spec.bin_edges.size(); ++i) {
        if (spec.bin_edges[i] <= spec.bin_edges[i - 1])
            throw std::invalid_argument("quantizer bin edges must be strictly increasing");
    }

    QuantizedSeries out;
    out.node_id = series.node_id;
    out.spec = spec;
    out.symbols.reserve(series.size());
    for (std::int64_t raw : series.samples) {
        double value = static_cast<double>(raw);
        // Right-closed bins: value == edge stays in the lower bin, so the
        // symbol is the number of edges strictly below the value.
        auto it = std::lower_bound(spec.bin_edges.begin(), spec.bin_edges.end(), value);
        int symbol = static_cast<int>(std::distance(spec.bin_edges.begin(), it));
        out.symbols.push_back(symbol);
    }
    return out;
}

std::uint64_t combine_symbols(std::span<const int> symbols, std::span<const int> sizes) {
    if (symbols.size() != sizes.size())
        throw std::invalid_argument("symbol/alphabet-size count mismatch");
    if (symbols.empty()) return 0;
    std::uint64_t combined = 0;
    std::uint64_t place = 1;
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        if (sizes[i] <= 0) throw std::invalid_argument("alphabet size must be positive");
        if (symbols[i] < 0 || symbols[i] >= sizes[i])
            throw std::invalid_argument("symbol " + std::to_string(symbols[i]) +
                                        " outside alphabet of size " + std::to_string(sizes[i]));
        std::uint64_t size = static_cast<std::uint64_t>(sizes[i]);
        if (place > std::numeric_limits<std::uint64_t>::max() / size)
            throw std::overflow_error("combined alphabet exceeds 64 bits");
        combined += static_cast<std::uint64_t>(symbols[i]) * place;
        place *= size;
    }
    return combined;
}

std::vector<int> split_symbols(std::uint64_t combined, std::span<const int> sizes) {
    std::vector<int> symbols;
    symbols.reserve(sizes.size());
    for (int size : sizes) {
        if (size <= 0) throw std::invalid_argument("alphabet size must be positive");
        std::uint64_t s = static_cast<std::uint64_t>(size);
        symbols.push_back(static_cast<int>(combined % s));
        combined /= s;
    }
    if (combined != 0) throw std::invalid_argument("combined symbol outside alphabet product");
    return symbols;
}

std::uint64_t alphabet_product(std::span<const int> sizes) {
    std::uint64_t product = 1;
    for (int size : sizes) {
        if (size <= 0) throw std::invalid_argument("alphabet size must be positive");
        std::uint64_t s = static_cast<std::uint64_t>(size);
        if (product > std::numeric_limits<std::uint64_t>::max() / s)
            throw std::overflow_error("alphabet product exceeds 64 bits");
        product *= s;
    }
    return product;
}

}  // namespace dig
