#ifndef RMODE_TABLE_RENDER_HPP
#define RMODE_TABLE_RENDER_HPP

#include <string>
#include <vector>

namespace rmode {

// Plain-text 2x2-style summary table: one row per tone, one column per
// analysis window. Cells are printed with %.6g, which keeps integer-meter
// RMS values and sub-millidecibel SNR means exact.
struct SummaryTable {
    std::string title;
    std::vector<std::string> column_labels; // window labels
    std::vector<std::string> row_labels;    // CW1, CW2
    std::vector<std::vector<double>> cells; // [row][col]
};

std::string render_table(const SummaryTable& table);

std::string fmt_cell(double v); // %.6g

} // namespace rmode

#endif
