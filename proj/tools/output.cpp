#include "output.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace glancing::cli {

void Table::add(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw std::logic_error("Table::add: row width does not match the header");
    rows.push_back(std::move(row));
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

std::string cell_text(const Cell& c) {
    if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
    if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
    return csv_field(std::get<std::string>(c));
}

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

void write_csv(std::ostream& os, const Table& t) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_field(t.columns[i]);
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_text(row[i]);
        os << '\n';
    }
}

Json table_json(const Table& t) {
    Json arr = Json::array();
    for (const auto& row : t.rows) {
        Json o = Json::object();
        for (std::size_t i = 0; i < row.size(); ++i) {
            const auto& c = row[i];
            if (const auto* v = std::get_if<std::int64_t>(&c))
                o[t.columns[i]] = *v;
            else if (const auto* d = std::get_if<double>(&c))
                o[t.columns[i]] = number(*d);
            else
                o[t.columns[i]] = std::get<std::string>(c);
        }
        arr.push_back(std::move(o));
    }
    return arr;
}

std::size_t PlotData::size() const {
    std::size_t n = 0;
    for (const auto& b : blocks) n += b.rows.size();
    return n;
}

void emit_plotdata(const PlotData& p, const std::string& path) {
    if (p.size() == 0) throw std::invalid_argument("emit_plotdata: no records for figure '" + p.figure + "'");
    std::ostringstream os;
    for (const auto& c : p.comments) os << "# " << c << '\n';
    os << "#";
    for (const auto& c : p.columns) os << ' ' << c;
    os << '\n';
    bool first = true;
    for (const auto& b : p.blocks) {
        if (b.rows.empty()) continue;
        if (!first) os << "\n\n";
        first = false;
        if (!b.label.empty()) os << "# " << b.label << '\n';
        for (const auto& r : b.rows) {
            for (std::size_t i = 0; i < r.size(); ++i) os << (i ? " " : "") << format_double(r[i]);
            os << '\n';
        }
    }
    write_file(path, os.str());
}

bool Band::pass() const {
    if (!enabled) return true;
    if (std::isnan(value)) return false;
    if (lo && value < *lo) return false;
    if (hi && value > *hi) return false;
    return true;
}

Json band_json(const Band& b) {
    Json o = Json::object();
    o["name"] = b.name;
    o["value"] = number(b.value);
    o["lo"] = b.lo ? number(*b.lo) : Json(nullptr);
    o["hi"] = b.hi ? number(*b.hi) : Json(nullptr);
    o["enabled"] = b.enabled;
    o["pass"] = b.pass();
    if (!b.note.empty()) o["note"] = b.note;
    return o;
}

void write_file(const std::string& path, const std::string& text) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    f << text;
    if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace glancing::cli
