#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dxa/core.hpp"
#include "dxa/errors.hpp"
#include "dxa/fluctuation.hpp"
#include "dxa/scaling.hpp"

namespace dxa {

enum class HeaderMode { Auto, Skip, Keep };

/// Where to find one series inside a delimited text file.
struct ColumnSpec {
    std::string path;
    std::size_t column = 0;
    char delimiter = ',';
    HeaderMode header = HeaderMode::Auto;
};

enum class CurveFormat { Json, Csv };

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

/// Field `column` of a delimited line, or nullopt when the line is too short.
inline std::optional<std::string_view> field_at(std::string_view line, char delim,
                                                std::size_t column) {
    std::size_t begin = 0;
    for (std::size_t c = 0;; ++c) {
        const std::size_t end = line.find(delim, begin);
        if (c == column)
            return trim(line.substr(begin, end == std::string_view::npos ? end : end - begin));
        if (end == std::string_view::npos)
            return std::nullopt;
        begin = end + 1;
    }
}

/// Locale-independent decimal parse of a full field (scientific notation
/// accepted, nothing left over).
inline std::optional<double> parse_double(std::string_view field) {
    if (!field.empty() && field.front() == '+')
        field.remove_prefix(1);
    if (field.empty())
        return std::nullopt;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        return std::nullopt;
    return value;
}

/// 17 significant digits: enough to reproduce any double exactly on re-read.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace detail

/// Parse one column of a delimited text file as a time series. Blank lines
/// are ignored (but counted in reported row numbers). In Auto header mode
/// the first non-blank row is skipped iff its target field is not a number;
/// a skipped header field becomes the series label.
inline TimeSeries read_series(const ColumnSpec& spec) {
    std::ifstream in(spec.path);
    if (!in)
        throw IoError("cannot open " + spec.path);

    std::vector<double> samples;
    std::string label;
    std::string line;
    std::size_t row = 0;
    bool first_data_row = true;
    while (std::getline(in, line)) {
        ++row;
        if (detail::trim(line).empty())
            continue;
        const auto field = detail::field_at(line, spec.delimiter, spec.column);
        const auto value = field ? detail::parse_double(*field) : std::nullopt;

        if (first_data_row) {
            first_data_row = false;
            const bool treat_as_header =
                spec.header == HeaderMode::Skip || (spec.header == HeaderMode::Auto && !value);
            if (treat_as_header) {
                if (field)
                    label = std::string(*field);
                continue;
            }
        }
        if (!field)
            throw ParseError(row, "missing column " + std::to_string(spec.column) + " in " +
                                      spec.path);
        if (!value)
            throw ParseError(row, "cannot parse '" + std::string(*field) + "' as a number");
        if (!std::isfinite(*value))
            throw ParseError(row, "non-finite value '" + std::string(*field) + "'");
        samples.push_back(*value);
    }
    if (samples.empty())
        throw InvalidInput("no data rows in " + spec.path);
    return TimeSeries(std::move(samples), std::move(label));
}

/// Write series as delimited columns (all must have equal length). The
/// header row carries the labels; empty labels fall back to y0, y1, ...
inline void write_series_csv(std::ostream& out, const std::vector<const TimeSeries*>& series,
                             char delimiter = ',') {
    if (series.empty())
        throw InvalidInput("nothing to write");
    const std::size_t n = series.front()->size();
    for (const auto* s : series)
        if (s->size() != n)
            throw InvalidInput("columns must have equal length");

    for (std::size_t c = 0; c < series.size(); ++c) {
        if (c)
            out << delimiter;
        const auto& label = series[c]->label();
        if (label.empty())
            out << "y" << c;
        else
            out << label;
    }
    out << "\n";
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < series.size(); ++c) {
            if (c)
                out << delimiter;
            out << detail::format_double((*series[c])[i]);
        }
        out << "\n";
    }
}

inline void write_series_csv(const std::string& path, const std::vector<const TimeSeries*>& series,
                             char delimiter = ',') {
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot open " + path + " for writing");
    write_series_csv(out, series, delimiter);
    if (!out)
        throw IoError("write failed: " + path);
}

inline void write_correlation_csv(std::ostream& out, const CorrelationFunction& corr) {
    out << "lag,value\n";
    for (std::size_t i = 0; i < corr.lags.size(); ++i)
        out << corr.lags[i] << "," << detail::format_double(corr.values[i]) << "\n";
}

namespace detail {

inline nlohmann::json fit_to_json(const PowerLawFit& fit) {
    return {{"exponent", fit.exponent},
            {"amplitude", fit.amplitude},
            {"stderr", fit.exponent_stderr},
            {"r_squared", fit.r_squared},
            {"range", {fit.n_lo, fit.n_hi}},
            {"negative_fraction", fit.negative_fraction}};
}

} // namespace detail

/// Persist a fluctuation curve. JSON carries the whole object (kind, length,
/// scales, f2, f_signed, optional fit, parameter provenance); CSV is a plain
/// scale,f2,f_signed table for external plotting.
inline void write_curve(const FluctuationCurve& curve, const PowerLawFit* fit,
                        const std::string& path, CurveFormat format,
                        const std::map<std::string, std::string>& params = {}) {
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot open " + path + " for writing");

    if (format == CurveFormat::Csv) {
        out << "scale,f2,f_signed\n";
        for (std::size_t i = 0; i < curve.grid.size(); ++i)
            out << curve.grid.scales[i] << "," << detail::format_double(curve.f2[i]) << ","
                << detail::format_double(curve.f_signed[i]) << "\n";
    } else {
        nlohmann::json j{{"kind", to_string(curve.kind)},
                         {"series_length", curve.series_length},
                         {"scales", curve.grid.scales},
                         {"f2", curve.f2},
                         {"f_signed", curve.f_signed},
                         {"params", params}};
        if (fit)
            j["fit"] = detail::fit_to_json(*fit);
        out << j.dump(2) << "\n";
    }
    if (!out)
        throw IoError("write failed: " + path);
}

struct CurveFile {
    FluctuationCurve curve;
    std::optional<PowerLawFit> fit;
    std::map<std::string, std::string> params;
};

/// Read back a JSON curve file written by write_curve.
inline CurveFile read_curve(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(1, std::string("not a JSON curve file: ") + e.what());
    }

    CurveFile file;
    try {
        const std::string kind = j.at("kind").get<std::string>();
        file.curve.kind = kind == "DFA" ? CurveKind::DFA : CurveKind::DXA;
        file.curve.series_length = j.at("series_length").get<std::size_t>();
        file.curve.grid.scales = j.at("scales").get<std::vector<std::size_t>>();
        file.curve.f2 = j.at("f2").get<std::vector<double>>();
        file.curve.f_signed = j.at("f_signed").get<std::vector<double>>();
        if (j.contains("params"))
            file.params = j.at("params").get<std::map<std::string, std::string>>();
        if (j.contains("fit")) {
            const auto& jf = j.at("fit");
            PowerLawFit fit;
            fit.exponent = jf.at("exponent").get<double>();
            fit.amplitude = jf.at("amplitude").get<double>();
            fit.exponent_stderr = jf.at("stderr").get<double>();
            fit.r_squared = jf.at("r_squared").get<double>();
            fit.n_lo = jf.at("range").at(0).get<std::size_t>();
            fit.n_hi = jf.at("range").at(1).get<std::size_t>();
            fit.negative_fraction = jf.at("negative_fraction").get<double>();
            file.fit = fit;
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(1, std::string("malformed curve file: ") + e.what());
    }
    if (file.curve.f2.size() != file.curve.grid.size() ||
        file.curve.f_signed.size() != file.curve.grid.size())
        throw InvalidInput("curve arrays have mismatched lengths");
    return file;
}

} // namespace dxa
