#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace vslicer {

/// One self-describing output record. Parameter values are kept in their
/// canonical text form so that rows re-serialize byte-identically.
struct ResultRow {
    std::string experiment;
    std::map<std::string, std::string> parameters;
    double estimate = 0.0;
    double std_error = 0.0;
    double predictor = 0.0;  // NaN where no closed form applies

    ResultRow& set(const std::string& name, double value);
    ResultRow& set(const std::string& name, std::int64_t value);
    ResultRow& set(const std::string& name, int value) { return set(name, static_cast<std::int64_t>(value)); }
    ResultRow& set(const std::string& name, std::uint64_t value);
    ResultRow& set(const std::string& name, const std::string& value);
    ResultRow& set(const std::string& name, const char* value) { return set(name, std::string(value)); }
    ResultRow& set(const std::string& name, bool value) = delete;

    bool operator==(const ResultRow&) const;
};

enum class OutputFormat { csv, json };

/// Shortest round-trip text for a double; "inf", "-inf" and "nan" for non-finite values.
std::string format_number(double x);
double parse_number(const std::string& text);

/// Columns: experiment, the union of parameter names in sorted order, then
/// estimate, std_error, predictor. Absent parameters are empty cells.
void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_csv(std::istream& in);

/// An array of row objects {experiment, parameters, estimate, std_error, predictor}.
void write_json(std::ostream& out, const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_json(std::istream& in);

void write_rows(std::ostream& out, const std::vector<ResultRow>& rows, OutputFormat format);
std::vector<ResultRow> read_rows(std::istream& in, OutputFormat format);

}  // namespace vslicer
