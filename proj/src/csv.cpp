#include "causal/csv.hpp"

#include <istream>
#include <ostream>

#include "causal/errors.hpp"

namespace causal {

std::vector<std::vector<std::string>> read_csv_table(std::istream& in) {
    std::vector<std::vector<std::string>> table;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;  // distinguishes a trailing empty line from an empty field
    char c;
    while (in.get(c)) {
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    field += '"';
                } else {
                    in_quotes = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        switch (c) {
        case '"':
            if (!field.empty())
                throw DataError("csv: quote inside unquoted field");
            in_quotes = true;
            field_started = true;
            break;
        case ',':
            record.push_back(field);
            field.clear();
            field_started = true;
            break;
        case '\r':
            if (in.peek() == '\n')
                break;  // swallow the CR of a CRLF pair; LF handles the record
            [[fallthrough]];
        case '\n':
            if (field_started || !field.empty() || !record.empty()) {
                record.push_back(field);
                table.push_back(record);
            }
            record.clear();
            field.clear();
            field_started = false;
            break;
        default:
            field += c;
            field_started = true;
        }
    }
    if (in_quotes)
        throw DataError("csv: unterminated quoted field");
    if (field_started || !field.empty() || !record.empty()) {
        record.push_back(field);
        table.push_back(record);
    }
    for (const auto& r : table)
        if (r.size() != table.front().size())
            throw DataError("csv: inconsistent field count");
    return table;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i)
            out << ',';
        const std::string& f = fields[i];
        if (f.find_first_of(",\"\r\n") != std::string::npos) {
            out << '"';
            for (char c : f) {
                if (c == '"')
                    out << '"';
                out << c;
            }
            out << '"';
        } else {
            out << f;
        }
    }
    out << '\n';
}

}  // namespace causal
