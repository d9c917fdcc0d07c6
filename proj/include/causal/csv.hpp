#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace causal {

// RFC 4180 table reader: quoted fields, embedded commas/quotes/newlines, CRLF
// line endings. All records must have the same field count (DataError otherwise).
std::vector<std::vector<std::string>> read_csv_table(std::istream& in);

// Writes one record, quoting exactly the fields that need it. Terminates with '\n'.
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace causal
