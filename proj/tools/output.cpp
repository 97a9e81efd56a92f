#include "output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "seqstat/error.hpp"

namespace seqstat::cli {

const CsvSchema& gen_schema() {
    static const CsvSchema s{"gen", 1, {"n", "omega", "frac"}};
    return s;
}

const CsvSchema& gaps_schema() {
    static const CsvSchema s{"gaps", 1, {"bin_left", "bin_right", "count", "density", "exp_ref"}};
    return s;
}

const CsvSchema& expsum_schema() {
    static const CsvSchema s{"expsum", 1, {"s", "exact_re", "exact_im", "b_re", "b_im", "bb_re", "bb_im"}};
    return s;
}

const CsvSchema& kt_schema() {
    static const CsvSchema s{"kt", 1, {"box", "seed", "samples", "positive", "min_ratio", "max_ratio"}};
    return s;
}

const CsvSchema& trend_schema() {
    static const CsvSchema s{"detm", 1, {"m", "h_min", "det", "leading", "ratio", "product_ratio"}};
    return s;
}

const std::vector<const CsvSchema*>& all_schemas() {
    static const std::vector<const CsvSchema*> v = {&gen_schema(), &gaps_schema(), &expsum_schema(), &kt_schema(),
                                                    &trend_schema()};
    return v;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

std::string csv_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
            any = true;
        } else if (c == ',') {
            row.push_back(field);
            field.clear();
            any = true;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
                ++i;
            }
            if (any || !field.empty()) {
                row.push_back(field);
                rows.push_back(row);
            }
            row.clear();
            field.clear();
            any = false;
        } else {
            field += c;
            any = true;
        }
    }
    if (any || !field.empty()) {
        row.push_back(field);
        rows.push_back(row);
    }
    return rows;
}

CsvTable read_table(const std::string& path) {
    auto rows = parse_csv(read_file(path));
    if (rows.empty()) {
        throw UsageError(path + ": empty file");
    }
    const auto& header = rows[0];
    const CsvSchema* match = nullptr;
    for (const CsvSchema* s : all_schemas()) {
        if (header == s->columns) {
            match = s;
            break;
        }
    }
    if (!match) {
        // Name the first column that departs from the closest schema.
        const CsvSchema* best = nullptr;
        std::size_t best_len = 0;
        for (const CsvSchema* s : all_schemas()) {
            std::size_t k = 0;
            while (k < header.size() && k < s->columns.size() && header[k] == s->columns[k]) {
                ++k;
            }
            if (!best || k > best_len) {
                best = s;
                best_len = k;
            }
        }
        std::string col = best_len < header.size() ? header[best_len] : "(missing " + best->columns[best_len] + ")";
        throw UsageError(path + ": column " + std::to_string(best_len + 1) + " '" + col +
                         "' does not match schema " + best->tag());
    }
    CsvTable t;
    t.schema = match;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != header.size()) {
            throw UsageError(path + ": row " + std::to_string(r + 1) + " has " + std::to_string(rows[r].size()) +
                             " fields, expected " + std::to_string(header.size()));
        }
        std::vector<double> v;
        for (const std::string& cell : rows[r]) {
            char* end = nullptr;
            double x = std::strtod(cell.c_str(), &end);
            v.push_back(end && *end == '\0' && !cell.empty() ? x : NAN);
        }
        t.rows.push_back(std::move(v));
        t.raw.push_back(rows[r]);
    }
    if (t.rows.empty()) {
        throw UsageError(path + ": no data rows");
    }
    return t;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw UsageError("cannot read " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw UsageError("cannot write " + path);
    }
    out << bytes;
}

std::string join_path(const std::string& dir, const std::string& name) {
    if (dir.empty() || dir == ".") {
        return name;
    }
    return dir.back() == '/' ? dir + name : dir + "/" + name;
}

namespace {

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

std::string tick_label(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

}

std::string render_svg(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                       const std::vector<PlotSeries>& series) {
    const double W = 640, H = 420, L = 70, R = 20, T = 40, B = 50;
    double x0 = INFINITY, x1 = -INFINITY, y0 = 0.0, y1 = -INFINITY;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
                continue;
            }
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, s.y[i]);
            y1 = std::max(y1, s.y[i]);
        }
    }
    if (!(x1 > x0)) {
        x1 = x0 + 1.0;
    }
    if (!(y1 > y0)) {
        y1 = y0 + 1.0;
    }
    y1 += 0.05 * (y1 - y0);
    auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
    auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
      << ' ' << H << "\" font-family=\"DejaVu Sans\" font-size=\"12\">\n";
    o << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    o << "<text x=\"" << fmt(W / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" << escape_xml(title)
      << "</text>\n";
    o << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
      << "\" stroke=\"black\"/>\n";
    o << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        double xv = x0 + (x1 - x0) * i / 5.0, yv = y0 + (y1 - y0) * i / 5.0;
        o << "<text x=\"" << fmt(px(xv)) << "\" y=\"" << fmt(H - B + 16) << "\" text-anchor=\"middle\">"
          << tick_label(xv) << "</text>\n";
        o << "<text x=\"" << fmt(L - 6) << "\" y=\"" << fmt(py(yv) + 4) << "\" text-anchor=\"end\">" << tick_label(yv)
          << "</text>\n";
    }
    o << "<text x=\"" << fmt((L + W - R) / 2) << "\" y=\"" << fmt(H - 12) << "\" text-anchor=\"middle\">"
      << escape_xml(xlabel) << "</text>\n";
    o << "<text x=\"16\" y=\"" << fmt((T + H - B) / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << fmt((T + H - B) / 2) << ")\">" << escape_xml(ylabel) << "</text>\n";
    int legend = 0;
    for (const auto& s : series) {
        if (s.bars && s.x.size() >= 2) {
            double w = (s.x[1] - s.x[0]) * (W - L - R) / (x1 - x0);
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                double top = py(std::max(s.y[i], 0.0));
                o << "<rect x=\"" << fmt(px(s.x[i]) - w / 2) << "\" y=\"" << fmt(top) << "\" width=\"" << fmt(w)
                  << "\" height=\"" << fmt(py(0.0) - top) << "\" fill=\"" << s.color
                  << "\" fill-opacity=\"0.5\" stroke=\"" << s.color << "\"/>\n";
            }
        } else {
            o << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) {
                    o << (i ? " " : "") << fmt(px(s.x[i])) << ',' << fmt(py(s.y[i]));
                }
            }
            o << "\"/>\n";
        }
        double ly = T + 8 + 16 * legend++;
        o << "<rect x=\"" << fmt(W - R - 150) << "\" y=\"" << fmt(ly - 8) << "\" width=\"12\" height=\"8\" fill=\""
          << s.color << "\"/>\n";
        o << "<text x=\"" << fmt(W - R - 132) << "\" y=\"" << fmt(ly) << "\">" << escape_xml(s.label) << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

std::string gnuplot_script(const CsvSchema& schema, const std::string& csv_name, const std::string& svg_name) {
    std::ostringstream o;
    o << "set terminal svg size 640,420 font 'DejaVu Sans,12'\n";
    o << "set output '" << svg_name << "'\n";
    o << "set datafile separator ','\n";
    o << "set key top right\n";
    if (schema.id == "gaps") {
        o << "set xlabel 's'\nset ylabel 'density'\n";
        o << "set style fill transparent solid 0.5\n";
        o << "plot '" << csv_name << "' skip 1 using (($1+$2)/2):4:($2-$1) with boxes title 'gaps', \\\n";
        o << "     exp(-x) with lines title 'exp(-s)'\n";
    } else if (schema.id == "expsum") {
        o << "set xlabel 's'\nset ylabel 'Re'\n";
        o << "plot '" << csv_name << "' skip 1 using 1:2 with lines title 'exact', \\\n";
        o << "     '' skip 1 using 1:4 with lines title 'B', \\\n";
        o << "     '' skip 1 using 1:6 with lines title 'BB'\n";
    } else if (schema.id == "detm") {
        o << "set xlabel 'h_min'\nset ylabel 'ratio'\nset logscale x\n";
        o << "plot '" << csv_name << "' skip 1 using 2:5 with linespoints title 'det M / leading'\n";
    } else {
        o << "plot '" << csv_name << "' skip 1 using 1:2 with lines title '" << schema.columns[1] << "'\n";
    }
    return o.str();
}

}
