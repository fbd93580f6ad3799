#include "rmode/table_render.hpp"

#include <cstdio>

#include "rmode/errors.hpp"

namespace rmode {

std::string fmt_cell(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string render_table(const SummaryTable& table) {
    if (table.cells.size() != table.row_labels.size())
        throw ConfigError("render_table: row count mismatch");
    for (const auto& row : table.cells)
        if (row.size() != table.column_labels.size())
            throw ConfigError("render_table: column count mismatch");

    std::vector<std::vector<std::string>> text(table.cells.size());
    std::vector<std::size_t> widths(table.column_labels.size());
    for (std::size_t c = 0; c < table.column_labels.size(); ++c)
        widths[c] = table.column_labels[c].size();
    std::size_t row_width = 0;
    for (const auto& r : table.row_labels) row_width = std::max(row_width, r.size());

    for (std::size_t r = 0; r < table.cells.size(); ++r) {
        for (std::size_t c = 0; c < table.cells[r].size(); ++c) {
            std::string cell = fmt_cell(table.cells[r][c]);
            widths[c] = std::max(widths[c], cell.size());
            text[r].push_back(std::move(cell));
        }
    }

    std::string out = table.title + "\n";
    out += std::string(row_width, ' ');
    for (std::size_t c = 0; c < table.column_labels.size(); ++c) {
        out += "  ";
        out += std::string(widths[c] - table.column_labels[c].size(), ' ');
        out += table.column_labels[c];
    }
    out += '\n';
    for (std::size_t r = 0; r < text.size(); ++r) {
        out += table.row_labels[r];
        out += std::string(row_width - table.row_labels[r].size(), ' ');
        for (std::size_t c = 0; c < text[r].size(); ++c) {
            out += "  ";
            out += std::string(widths[c] - text[r][c].size(), ' ');
            out += text[r][c];
        }
        out += '\n';
    }
    return out;
}

} // namespace rmode
