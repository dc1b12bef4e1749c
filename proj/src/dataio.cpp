#include "eou/dataio.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <sstream>
#include <vector>

namespace eou {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',' || c == ' ' || c == '\t' || c == '\r') {
            if (!cur.empty()) {
                out.push_back(cur);
                cur.clear();
            }
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

double parse_num(const std::string& s, int line_no) {
    size_t pos = 0;
    double v;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw validation_error("unparseable field '" + s + "' at line " +
                               std::to_string(line_no));
    }
    if (pos != s.size())
        throw validation_error("unparseable field '" + s + "' at line " +
                               std::to_string(line_no));
    return v;
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

ComplexSeries ingest_eop(std::istream& raw, const EopFormat& fmt) {
    double scale = fmt.unit == AngleUnit::arcsec ? 1000.0 : 1.0;
    int max_col =
        std::max({fmt.columns[0], fmt.columns[1], fmt.columns[2]});

    std::vector<double> epochs;
    ComplexSeries out;
    std::string line;
    int line_no = 0;
    while (std::getline(raw, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        auto fields = split_fields(line);
        if (fields.empty()) continue;
        if (static_cast<int>(fields.size()) <= max_col)
            throw validation_error("too few columns at line " +
                                   std::to_string(line_no));
        double epoch = parse_num(fields[fmt.columns[0]], line_no);
        double x = parse_num(fields[fmt.columns[1]], line_no) * scale;
        double y = parse_num(fields[fmt.columns[2]], line_no) * scale;
        if (!epochs.empty() && epoch <= epochs.back())
            throw validation_error("epochs not strictly increasing at line " +
                                   std::to_string(line_no));
        epochs.push_back(epoch);
        out.values.emplace_back(x, y);
    }
    if (epochs.size() < 2)
        throw validation_error("ingest_eop: need at least 2 records");

    double spacing = epochs[1] - epochs[0];
    for (size_t k = 1; k < epochs.size(); ++k) {
        double gap = epochs[k] - epochs[k - 1];
        if (std::abs(gap - spacing) > 1e-6)
            throw validation_error(
                "non-uniform spacing: gap of " + format_double(gap) +
                " years between epochs " + format_double(epochs[k - 1]) +
                " and " + format_double(epochs[k]));
    }
    out.delta = spacing;
    out.t0 = epochs.front();
    return out;
}

void write_series_csv(const ComplexSeries& series, const std::string& path) {
    std::ostringstream os;
    os << "t,x,y\n";
    for (size_t k = 0; k < series.values.size(); ++k) {
        double t = series.t0 + static_cast<double>(k) * series.delta;
        os << format_double(t) << ',' << format_double(series.values[k].real())
           << ',' << format_double(series.values[k].imag()) << '\n';
    }
    write_text(os.str(), path);
}

ComplexSeries read_series_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open " + path);
    std::string header;
    std::getline(in, header);
    EopFormat fmt;
    return ingest_eop(in, fmt);
}

void write_text(const std::string& text, const std::string& path) {
    // Atomic write: temp file in the same directory, then rename.
    std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open " + tmp.string());
        os << text;
        if (!os) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, target);
}

} // namespace eou
