#pragma once

#include <array>
#include <iosfwd>
#include <string>

#include "eou/sampling.hpp"

namespace eou {

enum class AngleUnit { arcsec, mas };

struct EopFormat {
    std::array<int, 3> columns{0, 1, 2}; // epoch, x, y column positions
    AngleUnit unit = AngleUnit::mas;
};

// Parses delimited (whitespace or comma) polar-motion records into x + iy
// (milliarcseconds) on a uniform epoch grid. Comment lines start with '#'.
// Non-uniform spacing or an unparseable row is rejected with the offending
// location in the message.
ComplexSeries ingest_eop(std::istream& raw, const EopFormat& fmt = {});

// CSV writers; 17-significant-digit floats so re-reading is bit-exact.
void write_series_csv(const ComplexSeries& series, const std::string& path);
ComplexSeries read_series_csv(const std::string& path);

void write_text(const std::string& text, const std::string& path);

std::string format_double(double v); // %.17g

} // namespace eou
