#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gascatter/analysis.hpp"

namespace gascatter {

namespace {

constexpr double kFlatTolerance = 1e-12;

// Crossing of `level` between samples i and j (adjacent), linear interpolation.
double crossing(std::span<const double> x, std::span<const double> y, std::size_t i, std::size_t j,
                double level)
{
    const double dy = y[j] - y[i];
    if (dy == 0.0) return x[i];
    return x[i] + (level - y[i]) * (x[j] - x[i]) / dy;
}

// Peaks of y (maxima). Plateaus count once, located at their centre.
std::vector<Feature> find_peaks(std::span<const double> x, std::span<const double> y,
                                double min_prominence)
{
    std::vector<Feature> out;
    const std::size_t n = y.size();
    std::size_t i = 1;
    while (i + 1 < n) {
        if (!(y[i] > y[i - 1])) {
            ++i;
            continue;
        }
        std::size_t end = i;
        while (end + 1 < n && y[end + 1] == y[i]) ++end;
        if (end + 1 >= n || !(y[end + 1] < y[i])) {
            i = end + 1;
            continue;
        }
        const std::size_t mid = (i + end) / 2;
        const double top = y[i];

        // Prominence: drop to the higher of the two bases, each base being the
        // lowest point before the curve climbs above the peak again.
        double left_base = top;
        std::size_t l = i;
        while (l > 0 && y[l - 1] <= top) {
            --l;
            left_base = std::min(left_base, y[l]);
        }
        double right_base = top;
        std::size_t r = end;
        while (r + 1 < n && y[r + 1] <= top) {
            ++r;
            right_base = std::min(right_base, y[r]);
        }
        const double prominence = top - std::max(left_base, right_base);
        if (prominence >= min_prominence) {
            Feature f;
            f.location = x[mid];
            f.value = top;
            f.prominence = prominence;
            if (i == end) {
                // Parabola through the three samples around the maximum.
                const double ym = y[i - 1], y0 = y[i], yp = y[i + 1];
                const double denom = ym - 2.0 * y0 + yp;
                const double h = x[i + 1] - x[i];
                const double hl = x[i] - x[i - 1];
                if (denom != 0.0 && std::abs(h - hl) <= 1e-9 * std::abs(h)) {
                    const double shift = 0.5 * (ym - yp) / denom;
                    if (std::abs(shift) <= 1.0) {
                        f.location = x[i] + shift * h;
                        f.value = y0 - 0.25 * (ym - yp) * shift;
                    }
                }
            }
            const double half = top - 0.5 * prominence;
            std::size_t a = i;
            while (a > 0 && y[a - 1] > half) --a;
            const double left = a > 0 ? crossing(x, y, a - 1, a, half) : x.front();
            std::size_t b = end;
            while (b + 1 < n && y[b + 1] > half) ++b;
            const double right = b + 1 < n ? crossing(x, y, b, b + 1, half) : x.back();
            f.width = right - left;
            out.push_back(f);
        }
        i = end + 1;
    }
    return out;
}

}  // namespace

const char* to_string(Coefficient c)
{
    switch (c) {
    case Coefficient::T: return "T";
    case Coefficient::R: return "R";
    case Coefficient::Tc: return "Tc";
    case Coefficient::T_b: return "T_b";
    case Coefficient::R_b: return "R_b";
    case Coefficient::Tc_b: return "Tc_b";
    case Coefficient::I1: return "I1";
    case Coefficient::I2: return "I2";
    }
    return "?";
}

std::optional<Coefficient> coefficient_from_string(std::string_view name)
{
    for (Coefficient c : {Coefficient::T, Coefficient::R, Coefficient::Tc, Coefficient::T_b,
                          Coefficient::R_b, Coefficient::Tc_b, Coefficient::I1, Coefficient::I2}) {
        if (name == to_string(c)) return c;
    }
    return std::nullopt;
}

double coefficient_value(const SpectrumRow& row, Coefficient c)
{
    switch (c) {
    case Coefficient::T: return row.T;
    case Coefficient::R: return row.R;
    case Coefficient::Tc: return row.Tc;
    case Coefficient::T_b: return row.T_b;
    case Coefficient::R_b: return row.R_b;
    case Coefficient::Tc_b: return row.Tc_b;
    case Coefficient::I1: return row.I1;
    case Coefficient::I2: return row.I2;
    }
    return 0.0;
}

FeatureSet extract_features(std::span<const SpectrumRow> rows, Coefficient coefficient,
                            double min_prominence)
{
    if (rows.size() < 3) throw std::invalid_argument("feature extraction needs at least 3 rows");
    std::vector<double> x(rows.size());
    std::vector<double> y(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        x[i] = rows[i].delta_over_gamma;
        y[i] = coefficient_value(rows[i], coefficient);
    }
    FeatureSet out;
    const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
    if (*hi - *lo <= kFlatTolerance) return out;

    const bool contrast = coefficient == Coefficient::I1 || coefficient == Coefficient::I2;
    const double floor = contrast ? -1.0 : 0.0;

    out.peaks = find_peaks(x, y, min_prominence);
    std::vector<double> neg(y.size());
    std::transform(y.begin(), y.end(), neg.begin(), [](double v) { return -v; });
    out.dips = find_peaks(x, neg, min_prominence);
    for (auto& f : out.dips) f.value = -f.value;

    for (auto* set : {&out.peaks, &out.dips}) {
        for (auto& f : *set) f.value = std::clamp(f.value, floor, 1.0);
    }
    return out;
}

}  // namespace gascatter
