#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "histat/corpus.hpp"

namespace histat::corpus {

/// Renders annual proportion series as a self-contained SVG: one polyline
/// per series (split at undefined years), a legend, dashed vertical lines
/// at the significant years, and labelled axes. Byte-deterministic for
/// identical inputs.
std::string render_chart(const std::vector<AnnualSeries>& series,
                         const std::vector<int>& significant_years);

/// render_chart written to a file; throws DataError on an unwritable path.
void emit_chart(const std::vector<AnnualSeries>& series, const std::vector<int>& significant_years,
                const std::filesystem::path& output);

}  // namespace histat::corpus
