#pragma once

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>

#include "biphoton/core.hpp"
#include "biphoton/errors.hpp"

// Config-file grammar: one `key = "value"` pair per line, `#` starts a
// comment, blank lines allowed. Keys: R, L, w0, w1, wg, phi, lambda_p,
// n_p. Lengths take a um or mm suffix, angles a deg suffix, n_p is a bare
// number. Unknown or duplicate keys are hard errors; there is no silent
// typo acceptance.

namespace biphoton {

namespace detail {

inline bool parse_number(std::string_view text, double& out, std::size_t& consumed) {
    const std::string buf(text);
    char* end = nullptr;
    out = std::strtod(buf.c_str(), &end);
    consumed = static_cast<std::size_t>(end - buf.c_str());
    return consumed > 0;
}

enum class ValueKind { length, angle, bare };

inline double parse_value(const std::string& origin, int line, int column,
                          const std::string& key, std::string_view raw, ValueKind kind) {
    double number = 0;
    std::size_t consumed = 0;
    if (!parse_number(raw, number, consumed))
        throw parse_error(origin, line, column, "value of \"" + key + "\" is not a number");
    const std::string_view suffix = raw.substr(consumed);
    switch (kind) {
    case ValueKind::length:
        if (suffix == "um")
            return number;
        if (suffix == "mm")
            return number * 1000.0;
        throw parse_error(origin, line, column,
                          "value of \"" + key + "\" needs a um or mm suffix");
    case ValueKind::angle:
        if (suffix == "deg")
            return deg_to_rad(number);
        throw parse_error(origin, line, column, "value of \"" + key + "\" needs a deg suffix");
    case ValueKind::bare:
        if (suffix.empty())
            return number;
        throw parse_error(origin, line, column, "value of \"" + key + "\" must be a bare number");
    }
    throw parse_error(origin, line, column, "unreachable");
}

} // namespace detail

inline ExperimentConfig parse_config_text(std::string_view text,
                                          const std::string& origin = "<config>") {
    struct Key {
        detail::ValueKind kind;
        bool required;
    };
    static const std::map<std::string, Key, std::less<>> known = {
        {"R", {detail::ValueKind::length, true}},   {"L", {detail::ValueKind::length, true}},
        {"w0", {detail::ValueKind::length, true}},  {"w1", {detail::ValueKind::length, true}},
        {"wg", {detail::ValueKind::length, true}},  {"phi", {detail::ValueKind::angle, true}},
        {"lambda_p", {detail::ValueKind::length, false}},
        {"n_p", {detail::ValueKind::bare, false}},
    };

    std::map<std::string, double> values;
    std::istringstream stream{std::string(text)};
    std::string raw_line;
    int line_no = 0;
    while (std::getline(stream, raw_line)) {
        ++line_no;
        std::string_view line = raw_line;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);

        std::size_t pos = 0;
        auto skip_ws = [&] {
            while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos])))
                ++pos;
        };
        skip_ws();
        if (pos == line.size())
            continue;

        const std::size_t key_start = pos;
        while (pos < line.size() &&
               (std::isalnum(static_cast<unsigned char>(line[pos])) || line[pos] == '_'))
            ++pos;
        const std::string key{line.substr(key_start, pos - key_start)};
        const int key_col = static_cast<int>(key_start) + 1;
        if (key.empty())
            throw parse_error(origin, line_no, key_col, "expected a key");

        const auto it = known.find(key);
        if (it == known.end())
            throw parse_error(origin, line_no, key_col, "unknown key \"" + key + "\"");
        if (values.count(key))
            throw parse_error(origin, line_no, key_col, "duplicate key \"" + key + "\"");

        skip_ws();
        if (pos == line.size() || line[pos] != '=')
            throw parse_error(origin, line_no, static_cast<int>(pos) + 1, "expected '='");
        ++pos;
        skip_ws();
        if (pos == line.size() || line[pos] != '"')
            throw parse_error(origin, line_no, static_cast<int>(pos) + 1,
                              "expected a quoted value");
        const std::size_t value_start = ++pos;
        const std::size_t close = line.find('"', value_start);
        if (close == std::string_view::npos)
            throw parse_error(origin, line_no, static_cast<int>(value_start) + 1,
                              "unterminated quoted value");
        const std::string_view raw_value = line.substr(value_start, close - value_start);
        pos = close + 1;
        skip_ws();
        if (pos != line.size())
            throw parse_error(origin, line_no, static_cast<int>(pos) + 1,
                              "trailing characters after value");

        values[key] = detail::parse_value(origin, line_no, static_cast<int>(value_start) + 1, key,
                                          raw_value, it->second.kind);
    }

    for (const auto& [key, info] : known)
        if (info.required && !values.count(key))
            throw parse_error(origin, line_no, 1, "missing required key \"" + key + "\"");

    ExperimentConfig config;
    config.cloud_transverse_size = values.at("R");
    config.cloud_length = values.at("L");
    config.pump_waist = values.at("w0");
    config.detection_filter_width = values.at("w1");
    config.herald_mode_waist = values.at("wg");
    config.emission_angle = values.at("phi");
    if (values.count("lambda_p"))
        config.pump_wavelength = values.at("lambda_p");
    if (values.count("n_p"))
        config.refractive_index = values.at("n_p");
    config.validate();
    return config;
}

inline ExperimentConfig parse_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw io_error("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad())
        throw io_error("error reading config file: " + path);
    return parse_config_text(buffer.str(), path);
}

inline std::string format_number(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

/// Renders a config in the file grammar (lengths in um, angle in deg).
inline std::string format_config(const ExperimentConfig& config) {
    std::ostringstream out;
    out << "R = \"" << format_number(config.cloud_transverse_size) << "um\"\n"
        << "L = \"" << format_number(config.cloud_length) << "um\"\n"
        << "w0 = \"" << format_number(config.pump_waist) << "um\"\n"
        << "w1 = \"" << format_number(config.detection_filter_width) << "um\"\n"
        << "wg = \"" << format_number(config.herald_mode_waist) << "um\"\n"
        << "phi = \"" << format_number(rad_to_deg(config.emission_angle)) << "deg\"\n"
        << "lambda_p = \"" << format_number(config.pump_wavelength) << "um\"\n"
        << "n_p = \"" << format_number(config.refractive_index) << "\"\n";
    return out.str();
}

/// Built-in presets named after the parameter regimes of the reference
/// geometries: fig2/fig3 share the small cloud with a narrow pump, fig4
/// the large cloud with a wide pump.
inline ExperimentConfig preset(std::string_view name) {
    ExperimentConfig config;
    if (name == "fig2") {
        config.cloud_transverse_size = 400;
        config.cloud_length = 2000;
        config.pump_waist = 100;
        config.detection_filter_width = 100;
        config.herald_mode_waist = 500;
        config.emission_angle = 0;
    } else if (name == "fig3") {
        config.cloud_transverse_size = 400;
        config.cloud_length = 2000;
        config.pump_waist = 100;
        config.detection_filter_width = 100;
        config.herald_mode_waist = 500;
        config.emission_angle = deg_to_rad(90);
    } else if (name == "fig4") {
        config.cloud_transverse_size = 1000;
        config.cloud_length = 200;
        config.pump_waist = 500;
        config.detection_filter_width = 100;
        config.herald_mode_waist = 500;
        config.emission_angle = 0;
    } else {
        throw invalid_config("unknown preset \"" + std::string(name) +
                             "\" (expected fig2, fig3 or fig4)");
    }
    config.validate();
    return config;
}

inline std::string preset_text(std::string_view name) {
    const auto config = preset(name); // validates the name
    std::string header;
    if (name == "fig2")
        header = "# fig2: OAM spectra vs emission angle (2 mm cloud, 100 um pump waist)\n";
    else if (name == "fig3")
        header = "# fig3: OAM weight vs cloud length at transverse emission\n"
                 "# (sweep L with --var length; repeat at phi = 0/30/60 deg for the full family)\n";
    else
        header = "# fig4: Schmidt number vs emission angle (1 mm cloud radius, 500 um pump waist)\n";
    return header + format_config(config);
}

} // namespace biphoton
