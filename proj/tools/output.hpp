#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace glancing::cli {

using Json = nlohmann::ordered_json;
using Cell = std::variant<std::int64_t, double, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    void add(std::vector<Cell> row);
};

// 17 significant digits in scientific notation; "nan", "inf", "-inf" otherwise.
std::string format_double(double v);

void write_csv(std::ostream& os, const Table& t);
Json table_json(const Table& t);

// Whitespace-separated columns.  Blocks are separated by a blank line and
// may carry their own comment line, which gnuplot reads as separate indices.
struct PlotData {
    std::string figure;                  // file suffix
    std::vector<std::string> comments;   // written as "# ..." before the column line
    std::vector<std::string> columns;
    struct Block {
        std::string label;
        std::vector<std::vector<double>> rows;
    };
    std::vector<Block> blocks;
    std::size_t size() const;
};

// Throws std::invalid_argument on an empty record list, before touching the file.
void emit_plotdata(const PlotData& p, const std::string& path);

// One acceptance band.  Missing bounds are open; disabled bands (too few
// points for a fit, say) are listed but never fail.
struct Band {
    std::string name;
    double value = 0.0;
    std::optional<double> lo, hi;
    bool enabled = true;
    std::string note;
    bool pass() const;
};
Json band_json(const Band& b);

// Writes text to path, creating parent directories.
void write_file(const std::string& path, const std::string& text);

}  // namespace glancing::cli
