#ifndef DIG_SERIES_HPP
#define DIG_SERIES_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dig {

/// One sensor's vehicle counts at a fixed sampling period.
struct FlowSeries {
    std::string node_id;
    std::vector<std::int64_t> samples;  // vehicles per interval, >= 0
    int period_seconds = 300;

    std::size_t size() const { return samples.size(); }
};

/// Throws std::invalid_argument if the series violates its invariants
/// (empty id, no samples, negative counts, non-positive period).
void validate(const FlowSeries& series);

enum class QuantizerStrategy { equal_width, equal_frequency };

/// Thresholds mapping raw counts onto {0..levels-1}.  Bins are
/// right-closed: a value equal to an edge falls in the lower bin.
struct QuantizerSpec {
    int levels = 2;
    QuantizerStrategy strategy = QuantizerStrategy::equal_width;
    std::vector<double> bin_edges;  // strictly increasing, levels-1 entries
};

struct QuantizedSeries {
    std::string node_id;
    std::vector<int> symbols;  // each in [0, spec.levels)
    QuantizerSpec spec;

    std::size_t size() const { return symbols.size(); }
};

struct IngestOptions {
    /// Sampling period override; when absent the period is inferred from
    /// the first two timestamps.
    std::optional<int> period_seconds;
};

/// Parse the standard CSV layout: header `timestamp,<id1>,<id2>,...`,
/// integer timestamps in seconds, one row per interval.  Real-valued
/// cells are floored.  Missing or malformed cells and non-increasing
/// timestamps are hard errors naming the offending row/column; gaps are
/// never imputed.
std::vector<FlowSeries> ingest_csv(std::istream& in, const IngestOptions& options = {});

/// Write the same CSV layout the ingester reads, timestamps 0, p, 2p, ...
/// All series must share one length and period.
void export_csv(std::span<const FlowSeries> series, std::ostream& out);

/// Fit bin edges for `levels` bins over the series.
///   equal_width:     edges split [min, max] into equal bins; a constant
///                    series gets unit-spaced edges above the constant so
///                    every sample maps to symbol 0.
///   equal_frequency: edges at the i*(100/levels)-th percentiles (order
///                    statistics); requires enough distinct mass that the
///                    edges come out strictly increasing.
QuantizerSpec fit_quantizer(const FlowSeries& series, int levels, QuantizerStrategy strategy);

/// Symbol = number of edges strictly below the sample value.
QuantizedSeries quantize(const FlowSeries& series, const QuantizerSpec& spec);

/// Mixed-radix packing of a symbol tuple, first symbol least significant:
/// w = s0 + size0*(s1 + size1*(s2 + ...)).  For a pair this is the
/// super-symbol |X|*y + x.  Bijective with split_symbols.
std::uint64_t combine_symbols(std::span<const int> symbols, std::span<const int> sizes);

std::vector<int> split_symbols(std::uint64_t combined, std::span<const int> sizes);

/// Product of alphabet sizes, guarding against uint64 overflow.
std::uint64_t alphabet_product(std::span<const int> sizes);

}  // namespace dig

#endif  // DIG_SERIES_HPP
