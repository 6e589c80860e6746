#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kronsbl {

using CsvRow = std::vector<std::string>;

/// Shortest round-trip text for a double ("nan", "inf", "-inf" for
/// non-finite values).
std::string format_double(double v);
double parse_double(const std::string& s);

/// RFC 4180 style: fields containing a comma, quote or newline are quoted.
void write_csv(std::ostream& out, const CsvRow& header, const std::vector<CsvRow>& rows);
std::vector<CsvRow> read_csv(std::istream& in);

}  // namespace kronsbl
