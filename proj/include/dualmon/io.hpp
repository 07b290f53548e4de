#pragma once

// =============================================================================
// Config-file parsing and deterministic CSV / JSON table output.
// =============================================================================
// Floats are always written with 12 significant digits, so identical inputs
// produce byte-identical files.
// =============================================================================

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dualmon/circuit.hpp"
#include "dualmon/errors.hpp"

namespace dualmon {

/// One named column of a rectangular table.
struct Column {
    std::string name;
    std::vector<double> values;
};

/// Fixed 12-significant-digit float formatting.
[[nodiscard]] inline std::string format_value(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

inline void write_csv(const std::filesystem::path& path, const std::vector<Column>& columns) {
    if (columns.empty()) throw std::invalid_argument("write_csv: no columns");
    const std::size_t rows = columns.front().values.size();
    for (const auto& c : columns)
        if (c.values.size() != rows) throw std::invalid_argument("write_csv: ragged columns");
    std::ofstream out(path);
    if (!out) throw config_error("cannot open output file: " + path.string());
    for (std::size_t j = 0; j < columns.size(); ++j)
        out << (j ? "," : "") << columns[j].name;
    out << '\n';
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < columns.size(); ++j)
            out << (j ? "," : "") << format_value(columns[j].values[i]);
        out << '\n';
    }
    if (!out) throw config_error("write failed: " + path.string());
}

/// Same table as JSON: {"columns": [names...], "rows": [[...], ...]}.
inline void write_json_table(const std::filesystem::path& path, const std::vector<Column>& columns) {
    if (columns.empty()) throw std::invalid_argument("write_json_table: no columns");
    const std::size_t rows = columns.front().values.size();
    nlohmann::json j;
    for (const auto& c : columns) j["columns"].push_back(c.name);
    j["rows"] = nlohmann::json::array();
    for (std::size_t i = 0; i < rows; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (const auto& c : columns) row.push_back(c.values[i]);
        j["rows"].push_back(row);
    }
    std::ofstream out(path);
    if (!out) throw config_error("cannot open output file: " + path.string());
    out << j.dump(1) << '\n';
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot open output file: " + path.string());
    out << j.dump(1) << '\n';
}

inline void write_text(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot open output file: " + path.string());
    out << content;
}

// -----------------------------------------------------------------------------
// Parameter config files
// -----------------------------------------------------------------------------
// Plain key-value text: one `KEY = VALUE` (or `KEY VALUE`) pair per line,
// '#' starts a comment. Recognised keys: E_Q, E_J, E_C, E_L, in E_ref units.
// Unknown keys are errors. Keys not present keep the supplied defaults.
// -----------------------------------------------------------------------------

[[nodiscard]] inline CircuitParams parse_params(std::istream& in, CircuitParams defaults = {}) {
    CircuitParams params = defaults;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        for (auto& ch : line)
            if (ch == '=' || ch == '\t') ch = ' ';
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;  // blank line
        std::string value;
        if (!(ls >> value))
            throw config_error("config line " + std::to_string(lineno) + ": missing value for '" + key + "'");
        std::string extra;
        if (ls >> extra)
            throw config_error("config line " + std::to_string(lineno) + ": trailing content '" + extra + "'");
        double parsed = 0.0;
        try {
            std::size_t used = 0;
            parsed = std::stod(value, &used);
            if (used != value.size()) throw std::invalid_argument(value);
        } catch (const std::exception&) {
            throw config_error("config line " + std::to_string(lineno) + ": cannot parse value '" + value + "'");
        }
        if (key == "E_Q") params.E_Q = parsed;
        else if (key == "E_J") params.E_J = parsed;
        else if (key == "E_C") params.E_C = parsed;
        else if (key == "E_L") params.E_L = parsed;
        else throw config_error("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    return params;
}

[[nodiscard]] inline CircuitParams load_params(const std::filesystem::path& path,
                                               CircuitParams defaults = {}) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path.string());
    return parse_params(in, defaults);
}

[[nodiscard]] inline nlohmann::json params_json(const CircuitParams& p) {
    return {{"E_Q", p.E_Q}, {"E_J", p.E_J}, {"E_C", p.E_C}, {"E_L", p.E_L},
            {"regime_ok", p.regime_ok()}};
}

}  // namespace dualmon
