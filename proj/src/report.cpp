#include "vslicer/report.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "vslicer/errors.hpp"

namespace vslicer {

namespace {

bool is_integer_text(const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = s[0] == '-' ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') return false;
    }
    return true;
}

bool is_finite_number_text(const std::string& s) {
    if (s.empty()) return false;
    double x = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    return res.ec == std::errc() && res.ptr == s.data() + s.size() && std::isfinite(x);
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::vector<std::string> csv_split(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            cells.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted) throw InputError("csv: unterminated quoted cell");
    cells.push_back(std::move(cur));
    return cells;
}

nlohmann::ordered_json number_json(double x) {
    if (std::isfinite(x)) return x;
    return format_number(x);
}

double json_number(const nlohmann::json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return parse_number(j.get<std::string>());
    throw InputError("json: expected a number");
}

}  // namespace

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

double parse_number(const std::string& text) {
    if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (text == "inf") return std::numeric_limits<double>::infinity();
    if (text == "-inf") return -std::numeric_limits<double>::infinity();
    double x = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), x);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        throw InputError("cannot parse number '" + text + "'");
    }
    return x;
}

ResultRow& ResultRow::set(const std::string& name, double value) {
    parameters[name] = format_number(value);
    return *this;
}

ResultRow& ResultRow::set(const std::string& name, std::int64_t value) {
    parameters[name] = std::to_string(value);
    return *this;
}

ResultRow& ResultRow::set(const std::string& name, std::uint64_t value) {
    parameters[name] = std::to_string(value);
    return *this;
}

ResultRow& ResultRow::set(const std::string& name, const std::string& value) {
    if (value.empty()) throw InputError("ResultRow: empty parameter value for '" + name + "'");
    parameters[name] = value;
    return *this;
}

bool ResultRow::operator==(const ResultRow& o) const {
    auto same = [](double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; };
    return experiment == o.experiment && parameters == o.parameters && same(estimate, o.estimate) &&
           same(std_error, o.std_error) && same(predictor, o.predictor);
}

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
    std::set<std::string> names;
    for (const ResultRow& r : rows) {
        for (const auto& [k, v] : r.parameters) names.insert(k);
    }
    out << "experiment";
    for (const std::string& n : names) out << ',' << csv_escape(n);
    out << ",estimate,std_error,predictor\n";
    for (const ResultRow& r : rows) {
        out << csv_escape(r.experiment);
        for (const std::string& n : names) {
            out << ',';
            const auto it = r.parameters.find(n);
            if (it != r.parameters.end()) out << csv_escape(it->second);
        }
        out << ',' << format_number(r.estimate) << ',' << format_number(r.std_error) << ','
            << format_number(r.predictor) << '\n';
    }
}

std::vector<ResultRow> read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw InputError("csv: missing header");
    const std::vector<std::string> header = csv_split(line);
    if (header.size() < 4 || header.front() != "experiment" || header[header.size() - 3] != "estimate" ||
        header[header.size() - 2] != "std_error" || header.back() != "predictor") {
        throw InputError("csv: unexpected header");
    }
    std::vector<ResultRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::vector<std::string> cells = csv_split(line);
        if (cells.size() != header.size()) throw InputError("csv: row has the wrong number of cells");
        ResultRow r;
        r.experiment = cells.front();
        for (std::size_t i = 1; i + 3 < cells.size(); ++i) {
            if (!cells[i].empty()) r.parameters[header[i]] = cells[i];
        }
        r.estimate = parse_number(cells[cells.size() - 3]);
        r.std_error = parse_number(cells[cells.size() - 2]);
        r.predictor = parse_number(cells.back());
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_json(std::ostream& out, const std::vector<ResultRow>& rows) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const ResultRow& r : rows) {
        nlohmann::ordered_json params = nlohmann::ordered_json::object();
        for (const auto& [k, v] : r.parameters) {
            std::int64_t i64 = 0;
            std::uint64_t u64 = 0;
            if (is_integer_text(v) && std::from_chars(v.data(), v.data() + v.size(), i64).ec == std::errc{} &&
                std::to_string(i64) == v) {
                params[k] = i64;
            } else if (is_integer_text(v) && std::from_chars(v.data(), v.data() + v.size(), u64).ec == std::errc{} &&
                       std::to_string(u64) == v) {
                params[k] = u64;
            } else if (is_finite_number_text(v) && format_number(parse_number(v)) == v) {
                params[k] = parse_number(v);
            } else {
                params[k] = v;
            }
        }
        nlohmann::ordered_json row;
        row["experiment"] = r.experiment;
        row["parameters"] = std::move(params);
        row["estimate"] = number_json(r.estimate);
        row["std_error"] = number_json(r.std_error);
        row["predictor"] = number_json(r.predictor);
        arr.push_back(std::move(row));
    }
    out << arr.dump(2) << '\n';
}

std::vector<ResultRow> read_json(std::istream& in) {
    nlohmann::json arr;
    try {
        in >> arr;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("json: ") + e.what());
    }
    if (!arr.is_array()) throw InputError("json: expected an array of rows");
    std::vector<ResultRow> rows;
    try {
        for (const auto& j : arr) {
            ResultRow r;
            r.experiment = j.at("experiment").get<std::string>();
            for (const auto& [k, v] : j.at("parameters").items()) {
                if (v.is_number_unsigned()) {
                    r.parameters[k] = std::to_string(v.get<std::uint64_t>());
                } else if (v.is_number_integer()) {
                    r.parameters[k] = std::to_string(v.get<std::int64_t>());
                } else if (v.is_number()) {
                    r.parameters[k] = format_number(v.get<double>());
                } else {
                    r.parameters[k] = v.get<std::string>();
                }
            }
            r.estimate = json_number(j.at("estimate"));
            r.std_error = json_number(j.at("std_error"));
            r.predictor = json_number(j.at("predictor"));
            rows.push_back(std::move(r));
        }
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("json: malformed row: ") + e.what());
    }
    return rows;
}

void write_rows(std::ostream& out, const std::vector<ResultRow>& rows, OutputFormat format) {
    if (format == OutputFormat::csv) {
        write_csv(out, rows);
    } else {
        write_json(out, rows);
    }
}

std::vector<ResultRow> read_rows(std::istream& in, OutputFormat format) {
    return format == OutputFormat::csv ? read_csv(in) : read_json(in);
}

}  // namespace vslicer
