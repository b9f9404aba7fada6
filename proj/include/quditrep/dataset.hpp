#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "quditrep/errors.hpp"

namespace quditrep {

inline constexpr const char* kDatasetSchema = "quditrep.dataset/1";

/// Doubles in CSV output carry 17 significant digits so that every value
/// round-trips exactly.
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Tabular result set with a metadata block. Cells are JSON scalars
/// (number, string, bool, or null for not-applicable).
struct Dataset {
    std::vector<std::string> columns;
    std::vector<std::vector<nlohmann::json>> rows;
    nlohmann::json meta = nlohmann::json::object();

    void add_row(std::vector<nlohmann::json> row) {
        if (row.size() != columns.size()) {
            throw ValidationError("dataset row width does not match column count");
        }
        rows.push_back(std::move(row));
    }
};

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline std::string format_cell_csv(const nlohmann::json& cell) {
    if (cell.is_null()) return "";
    if (cell.is_string()) return csv_escape(cell.get<std::string>());
    if (cell.is_boolean()) return cell.get<bool>() ? "true" : "false";
    if (cell.is_number_float()) return format_double(cell.get<double>());
    return cell.dump();
}

/// CSV layout: comment lines with the schema tag and the meta block, one
/// header row, then one line per data row.
inline void write_csv(std::ostream& os, const Dataset& ds) {
    os << "# " << kDatasetSchema << "\n";
    os << "# meta " << ds.meta.dump() << "\n";
    for (std::size_t i = 0; i < ds.columns.size(); ++i) {
        if (i) os << ',';
        os << csv_escape(ds.columns[i]);
    }
    os << '\n';
    for (const auto& row : ds.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            os << format_cell_csv(row[i]);
        }
        os << '\n';
    }
}

inline void write_json(std::ostream& os, const Dataset& ds) {
    nlohmann::json doc;
    doc["schema"] = kDatasetSchema;
    doc["meta"] = ds.meta;
    doc["columns"] = ds.columns;
    doc["rows"] = ds.rows;
    os << doc.dump(2) << '\n';
}

inline void write_dataset(std::ostream& os, const Dataset& ds, const std::string& format) {
    if (format == "csv") {
        write_csv(os, ds);
    } else if (format == "json") {
        write_json(os, ds);
    } else {
        throw ValidationError("unknown output format '" + format + "' (expected csv or json)");
    }
}

}  // namespace quditrep
