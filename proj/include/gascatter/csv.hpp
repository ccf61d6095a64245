// CSV output with an embedded run manifest.
//
// Numbers are written with 17 significant digits in the shortest of fixed or
// scientific notation, so identical inputs produce identical bytes.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gascatter/analysis.hpp"

namespace gascatter {

[[nodiscard]] std::string format_double(double v);
/// Shortest round-trip form, for column labels.
[[nodiscard]] std::string format_label(double v);

/// 64-bit FNV-1a.
[[nodiscard]] std::uint64_t content_hash(std::string_view data);

struct RunManifest {
    std::string command;
    std::string config;  // SystemConfig::canonical()
    std::vector<std::pair<std::string, std::string>> extra;

    /// Hash over the command plus every config line.
    [[nodiscard]] std::uint64_t hash() const;
    /// `# key: value` lines, the config expanded one parameter per line.
    void write(std::ostream& out) const;
};

[[nodiscard]] const char* tool_version();

inline constexpr std::string_view kSpectrumHeader = "delta_over_gamma,T,R,Tc,T_b,R_b,Tc_b,I1,I2";
inline constexpr std::string_view kContrastHeader = "delta_over_gamma,Tc,Tc_b,I1,I2";

/// Comment lines listing flagged rows (near-singular or closed channel), if any.
void write_flag_summary(std::ostream& out, std::span<const SpectrumRow> rows);

void write_spectrum_csv(std::ostream& out, const RunManifest& manifest,
                        std::span<const SpectrumRow> rows);
void write_contrast_csv(std::ostream& out, const RunManifest& manifest,
                        std::span<const SpectrumRow> rows);

/// One I2 column per phi_+ value; every sweep must share the same grid.
void write_contrast_scan_csv(std::ostream& out, const RunManifest& manifest,
                             std::span<const double> phi_plus_over_pi,
                             std::span<const std::vector<SpectrumRow>> sweeps);

}  // namespace gascatter
