#ifndef SEQSTAT_TOOLS_OUTPUT_HPP
#define SEQSTAT_TOOLS_OUTPUT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace seqstat::cli {

using json = nlohmann::ordered_json;

// A CSV layout: exact header plus a version tag recorded in the manifest.
struct CsvSchema {
    std::string id;
    int version = 1;
    std::vector<std::string> columns;
    std::string tag() const { return id + "/" + std::to_string(version); }
};

const CsvSchema& gen_schema();
const CsvSchema& gaps_schema();
const CsvSchema& expsum_schema();
const CsvSchema& kt_schema();
const CsvSchema& trend_schema();
const std::vector<const CsvSchema*>& all_schemas();

// RFC-4180 writing and reading. Numbers are written with %.17g.
std::string csv_field(const std::string& s);
std::string csv_number(double x);
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

struct CsvTable {
    const CsvSchema* schema = nullptr;
    std::vector<std::vector<double>> rows; // numeric columns; non-numeric cells are NaN
    std::vector<std::vector<std::string>> raw;
};

// Throws UsageError naming the first column that does not fit any schema,
// or when there are no data rows.
CsvTable read_table(const std::string& path);

std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t v);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& bytes);
std::string join_path(const std::string& dir, const std::string& name);

// Deterministic line/bar chart.
struct PlotSeries {
    std::string label;
    std::vector<double> x, y;
    bool bars = false;
    std::string color = "#1f77b4";
};

std::string render_svg(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                       const std::vector<PlotSeries>& series);

// gnuplot script drawing the same picture from the CSV file.
std::string gnuplot_script(const CsvSchema& schema, const std::string& csv_name, const std::string& svg_name);

}

#endif
