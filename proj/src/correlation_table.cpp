#include "pairedval/lroc.hpp"

#include <algorithm>
#include <cmath>

namespace pairedval {

namespace {

// Correlation between two correlated area estimates, indexed by the average
// rating correlation (rows, 0.02 .. 0.90) and the average area (columns,
// 0.700 .. 0.975). Produced by tools/gen_correlation_table.py.
constexpr double kGrid[45][12] = {
    {0.02, 0.02, 0.02, 0.02, 0.02, 0.02, 0.02, 0.01, 0.01, 0.01, 0.01, 0.01},  // 0.02
    {0.04, 0.04, 0.04, 0.03, 0.03, 0.03, 0.03, 0.03, 0.03, 0.03, 0.02, 0.02},  // 0.04
    {0.05, 0.05, 0.05, 0.05, 0.05, 0.05, 0.05, 0.04, 0.04, 0.04, 0.03, 0.03},  // 0.06
    {0.07, 0.07, 0.07, 0.07, 0.07, 0.07, 0.06, 0.06, 0.06, 0.05, 0.05, 0.04},  // 0.08
    {0.09, 0.09, 0.09, 0.09, 0.08, 0.08, 0.08, 0.08, 0.07, 0.07, 0.06, 0.05},  // 0.10
    {0.11, 0.11, 0.11, 0.10, 0.10, 0.10, 0.10, 0.09, 0.09, 0.08, 0.07, 0.06},  // 0.12
    {0.13, 0.13, 0.12, 0.12, 0.12, 0.12, 0.11, 0.11, 0.10, 0.09, 0.08, 0.07},  // 0.14
    {0.15, 0.14, 0.14, 0.14, 0.14, 0.13, 0.13, 0.12, 0.12, 0.11, 0.10, 0.08},  // 0.16
    {0.17, 0.16, 0.16, 0.16, 0.15, 0.15, 0.15, 0.14, 0.13, 0.12, 0.11, 0.09},  // 0.18
    {0.18, 0.18, 0.18, 0.18, 0.17, 0.17, 0.16, 0.16, 0.15, 0.14, 0.13, 0.10},  // 0.20
    {0.20, 0.20, 0.20, 0.19, 0.19, 0.19, 0.18, 0.17, 0.17, 0.15, 0.14, 0.12},  // 0.22
    {0.22, 0.22, 0.22, 0.21, 0.21, 0.20, 0.20, 0.19, 0.18, 0.17, 0.15, 0.13},  // 0.24
    {0.24, 0.24, 0.23, 0.23, 0.23, 0.22, 0.21, 0.21, 0.20, 0.19, 0.17, 0.14},  // 0.26
    {0.26, 0.26, 0.25, 0.25, 0.24, 0.24, 0.23, 0.22, 0.21, 0.20, 0.18, 0.16},  // 0.28
    {0.28, 0.27, 0.27, 0.27, 0.26, 0.26, 0.25, 0.24, 0.23, 0.22, 0.20, 0.17},  // 0.30
    {0.30, 0.29, 0.29, 0.29, 0.28, 0.28, 0.27, 0.26, 0.25, 0.24, 0.22, 0.18},  // 0.32
    {0.32, 0.31, 0.31, 0.30, 0.30, 0.29, 0.29, 0.28, 0.27, 0.25, 0.23, 0.20},  // 0.34
    {0.34, 0.33, 0.33, 0.32, 0.32, 0.31, 0.31, 0.30, 0.28, 0.27, 0.25, 0.21},  // 0.36
    {0.35, 0.35, 0.35, 0.34, 0.34, 0.33, 0.32, 0.31, 0.30, 0.29, 0.27, 0.23},  // 0.38
    {0.37, 0.37, 0.37, 0.36, 0.36, 0.35, 0.34, 0.33, 0.32, 0.31, 0.28, 0.25},  // 0.40
    {0.39, 0.39, 0.39, 0.38, 0.38, 0.37, 0.36, 0.35, 0.34, 0.32, 0.30, 0.26},  // 0.42
    {0.41, 0.41, 0.41, 0.40, 0.40, 0.39, 0.38, 0.37, 0.36, 0.34, 0.32, 0.28},  // 0.44
    {0.43, 0.43, 0.42, 0.42, 0.41, 0.41, 0.40, 0.39, 0.38, 0.36, 0.34, 0.30},  // 0.46
    {0.45, 0.45, 0.44, 0.44, 0.43, 0.43, 0.42, 0.41, 0.40, 0.38, 0.36, 0.32},  // 0.48
    {0.47, 0.47, 0.46, 0.46, 0.45, 0.45, 0.44, 0.43, 0.42, 0.40, 0.38, 0.33},  // 0.50
    {0.49, 0.49, 0.48, 0.48, 0.47, 0.47, 0.46, 0.45, 0.44, 0.42, 0.40, 0.35},  // 0.52
    {0.51, 0.51, 0.50, 0.50, 0.49, 0.49, 0.48, 0.47, 0.46, 0.44, 0.42, 0.37},  // 0.54
    {0.53, 0.53, 0.52, 0.52, 0.51, 0.51, 0.50, 0.49, 0.48, 0.46, 0.44, 0.39},  // 0.56
    {0.55, 0.55, 0.54, 0.54, 0.53, 0.53, 0.52, 0.51, 0.50, 0.48, 0.46, 0.42},  // 0.58
    {0.57, 0.57, 0.56, 0.56, 0.55, 0.55, 0.54, 0.53, 0.52, 0.50, 0.48, 0.44},  // 0.60
    {0.59, 0.59, 0.58, 0.58, 0.58, 0.57, 0.56, 0.55, 0.54, 0.52, 0.50, 0.46},  // 0.62
    {0.61, 0.61, 0.61, 0.60, 0.60, 0.59, 0.58, 0.57, 0.56, 0.55, 0.52, 0.48},  // 0.64
    {0.63, 0.63, 0.63, 0.62, 0.62, 0.61, 0.60, 0.59, 0.58, 0.57, 0.54, 0.50},  // 0.66
    {0.65, 0.65, 0.65, 0.64, 0.64, 0.63, 0.63, 0.62, 0.61, 0.59, 0.57, 0.53},  // 0.68
    {0.67, 0.67, 0.67, 0.66, 0.66, 0.65, 0.65, 0.64, 0.63, 0.61, 0.59, 0.55},  // 0.70
    {0.69, 0.69, 0.69, 0.68, 0.68, 0.68, 0.67, 0.66, 0.65, 0.64, 0.61, 0.58},  // 0.72
    {0.72, 0.71, 0.71, 0.71, 0.70, 0.70, 0.69, 0.68, 0.67, 0.66, 0.64, 0.60},  // 0.74
    {0.74, 0.73, 0.73, 0.73, 0.72, 0.72, 0.71, 0.71, 0.70, 0.68, 0.66, 0.63},  // 0.76
    {0.76, 0.76, 0.75, 0.75, 0.75, 0.74, 0.74, 0.73, 0.72, 0.71, 0.69, 0.66},  // 0.78
    {0.78, 0.78, 0.77, 0.77, 0.77, 0.76, 0.76, 0.75, 0.74, 0.73, 0.71, 0.68},  // 0.80
    {0.80, 0.80, 0.80, 0.79, 0.79, 0.79, 0.78, 0.78, 0.77, 0.76, 0.74, 0.71},  // 0.82
    {0.82, 0.82, 0.82, 0.82, 0.81, 0.81, 0.80, 0.80, 0.79, 0.78, 0.77, 0.74},  // 0.84
    {0.84, 0.84, 0.84, 0.84, 0.84, 0.83, 0.83, 0.82, 0.82, 0.81, 0.79, 0.77},  // 0.86
    {0.87, 0.86, 0.86, 0.86, 0.86, 0.86, 0.85, 0.85, 0.84, 0.83, 0.82, 0.80},  // 0.88
    {0.89, 0.89, 0.88, 0.88, 0.88, 0.88, 0.88, 0.87, 0.87, 0.86, 0.85, 0.83},  // 0.90
};

}  // namespace

std::span<const double> CorrelationTable::areas() {
    static constexpr double kAreas[12] = {0.700, 0.725, 0.750, 0.775, 0.800, 0.825,
                                          0.850, 0.875, 0.900, 0.925, 0.950, 0.975};
    return kAreas;
}

std::span<const double> CorrelationTable::correlations() {
    static const auto rows = [] {
        std::array<double, 45> r{};
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = 0.02 * static_cast<double>(i + 1);
        return r;
    }();
    return rows;
}

double CorrelationTable::cell(std::size_t row, std::size_t column) { return kGrid[row][column]; }

double CorrelationTable::interpolate(double avg_correlation, double avg_area) {
    if (avg_correlation <= 0.0) return 0.0;
    if (avg_correlation >= 1.0) return 1.0;

    const auto a = areas();
    const double area = std::clamp(avg_area, a.front(), a.back());
    std::size_t col = std::min<std::size_t>(
        static_cast<std::size_t>((area - a.front()) / 0.025), a.size() - 2);
    const double ta = std::clamp((area - a[col]) / 0.025, 0.0, 1.0);

    // Rows are extended by r = 0 (all zeros) below and r = 1 (all ones) above.
    auto value = [](std::size_t row, std::size_t c) {
        if (row == 0) return 0.0;
        if (row == 46) return 1.0;
        return kGrid[row - 1][c];
    };
    auto level = [](std::size_t row) {
        if (row == 46) return 1.0;
        return 0.02 * static_cast<double>(row);
    };
    std::size_t row = std::min<std::size_t>(static_cast<std::size_t>(avg_correlation / 0.02), 45);
    while (row > 0 && level(row) > avg_correlation) --row;
    while (row < 45 && level(row + 1) <= avg_correlation) ++row;
    const double tr = std::clamp((avg_correlation - level(row)) / (level(row + 1) - level(row)), 0.0, 1.0);

    const double lower = (1.0 - ta) * value(row, col) + ta * value(row, col + 1);
    const double upper = (1.0 - ta) * value(row + 1, col) + ta * value(row + 1, col + 1);
    return (1.0 - tr) * lower + tr * upper;
}

}  // namespace pairedval
