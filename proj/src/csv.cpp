#include "gascatter/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

#ifndef GASCATTER_VERSION
#define GASCATTER_VERSION "0.0.0"
#endif

namespace gascatter {

std::string format_double(double v)
{
    if (v == 0.0) return "0";  // folds -0 into 0
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
    return {buf, ptr};
}

std::string format_label(double v)
{
    if (v == 0.0) return "0";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) throw std::runtime_error("format_label: conversion failed");
    return {buf, ptr};
}

std::uint64_t content_hash(std::string_view data)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

const char* tool_version() { return GASCATTER_VERSION; }

std::uint64_t RunManifest::hash() const
{
    std::string all = command + '\n' + config;
    for (const auto& [k, v] : extra) all += k + '=' + v + '\n';
    return content_hash(all);
}

void RunManifest::write(std::ostream& out) const
{
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(hash()));
    out << "# tool: gascatter " << tool_version() << '\n';
    out << "# command: " << command << '\n';
    std::istringstream lines(config);
    for (std::string l; std::getline(lines, l);) {
        const auto eq = l.find(" = ");
        if (eq == std::string::npos) continue;
        out << "# " << l.substr(0, eq) << ": " << l.substr(eq + 3) << '\n';
    }
    for (const auto& [k, v] : extra) out << "# " << k << ": " << v << '\n';
    out << "# input_hash: " << hex << '\n';
}

void write_flag_summary(std::ostream& out, std::span<const SpectrumRow> rows)
{
    std::size_t singular = 0;
    std::size_t closed = 0;
    for (const auto& r : rows) {
        singular += r.flags.near_singular ? 1 : 0;
        closed += r.flags.closed_channel ? 1 : 0;
    }
    if (singular > 0) out << "# flagged_near_singular: " << singular << '\n';
    if (closed > 0) out << "# flagged_closed_channel: " << closed << '\n';
    for (const auto& r : rows) {
        if (!r.flags.any()) continue;
        out << "# flagged_row: delta_over_gamma=" << format_double(r.delta_over_gamma)
            << (r.flags.near_singular ? " near_singular" : "")
            << (r.flags.closed_channel ? " closed_channel" : "") << '\n';
    }
}

void write_spectrum_csv(std::ostream& out, const RunManifest& manifest,
                        std::span<const SpectrumRow> rows)
{
    manifest.write(out);
    write_flag_summary(out, rows);
    out << kSpectrumHeader << '\n';
    for (const auto& r : rows) {
        out << format_double(r.delta_over_gamma) << ',' << format_double(r.T) << ','
            << format_double(r.R) << ',' << format_double(r.Tc) << ',' << format_double(r.T_b) << ','
            << format_double(r.R_b) << ',' << format_double(r.Tc_b) << ',' << format_double(r.I1)
            << ',' << format_double(r.I2) << '\n';
    }
}

void write_contrast_csv(std::ostream& out, const RunManifest& manifest,
                        std::span<const SpectrumRow> rows)
{
    manifest.write(out);
    write_flag_summary(out, rows);
    out << kContrastHeader << '\n';
    for (const auto& r : rows) {
        out << format_double(r.delta_over_gamma) << ',' << format_double(r.Tc) << ','
            << format_double(r.Tc_b) << ',' << format_double(r.I1) << ',' << format_double(r.I2)
            << '\n';
    }
}

void write_contrast_scan_csv(std::ostream& out, const RunManifest& manifest,
                             std::span<const double> phi_plus_over_pi,
                             std::span<const std::vector<SpectrumRow>> sweeps)
{
    if (sweeps.empty() || sweeps.size() != phi_plus_over_pi.size()) {
        throw std::invalid_argument("contrast scan: one sweep per phi_+ value required");
    }
    const std::size_t n = sweeps.front().size();
    for (const auto& s : sweeps) {
        if (s.size() != n) throw std::invalid_argument("contrast scan: sweeps differ in length");
    }
    manifest.write(out);
    for (const auto& s : sweeps) write_flag_summary(out, s);
    out << "delta_over_gamma";
    for (double p : phi_plus_over_pi) out << ",I2@phi_plus=" << format_label(p);
    out << '\n';
    for (std::size_t i = 0; i < n; ++i) {
        out << format_double(sweeps.front()[i].delta_over_gamma);
        for (const auto& s : sweeps) out << ',' << format_double(s[i].I2);
        out << '\n';
    }
}

}  // namespace gascatter
