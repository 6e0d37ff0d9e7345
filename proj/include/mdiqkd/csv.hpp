#ifndef MDIQKD_CSV_HPP
#define MDIQKD_CSV_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace mdiqkd {

// 17 significant digits: parses back to the identical double.
std::string csv_number(double v);

void csv_write_row(std::ostream& os, const std::vector<std::string>& cells);

// Splits one line on commas; no quoting support (none of our fields need it).
std::vector<std::string> csv_split(const std::string& line);

}  // namespace mdiqkd

#endif  // MDIQKD_CSV_HPP
