#pragma once

#include <string>
#include <vector>

#include "snls/field.hpp"

namespace snls {

// W(x, xi) = int f(x - v eps/2) conj f(x + v eps/2) e^{i xi v} dv / 2pi, n = 1.
// Rows are grid points (optionally every `stride`-th), columns the semiclassical
// frequencies xi_j = j pi eps / L, j in [-N, N).
struct WignerTable {
    double eps = 0.0;
    std::vector<double> x, xi;
    double dx = 0.0;   // row spacing (grid dx times stride)
    double dxi = 0.0;
    std::vector<double> w;  // row-major, x.size() * xi.size()

    std::size_t rows() const { return x.size(); }
    std::size_t cols() const { return xi.size(); }
    double at(std::size_t i, std::size_t j) const { return w[i * xi.size() + j]; }
    double total_mass() const;               // sum W dx dxi
    double abs_mass() const;                 // sum |W| dx dxi
    std::vector<double> x_marginal() const;  // sum_xi W dxi per row
    std::vector<double> xi_marginal() const; // sum_x W dx per column

    std::string to_csv() const;
    // "SWIG" | u16 version | u32 rows | u32 cols | f64 eps | f64 x0 | f64 dx | f64 xi0 | f64 dxi | f64 values ...
    std::string encode() const;
    static WignerTable decode(const std::string& bytes);
};

WignerTable wigner_transform(const Field& f, double eps, std::size_t stride = 1);

// Fraction of the (signed) W mass with |x - y - a xi| <= width, clamped to [0, 1].
double tube_mass(const WignerTable& w, double y, double a, double width);
// Fraction with |xi - x cot t - y| <= width for t in (0, pi); |x - y| <= width for t = 0.
double harmonic_tube_mass(const WignerTable& w, double y, double t, double width);

enum class ScreenMode { free, harmonic };

struct ScreenPeak {
    double y = 0.0;
    double param = 0.0;  // a (free) or t (harmonic)
    double fraction = 0.0;
};

struct ScreenReport {
    ScreenMode mode = ScreenMode::free;
    double width = 0.0;
    double max_fraction = 0.0;
    ScreenPeak argmax;
    std::vector<ScreenPeak> peaks;  // separated maxima of the scan above 0.25, at most max_tubes
    std::string verdict;            // "concentrated" (>= 0.9), "disjoint" (<= 0.2), "inconclusive"
    // greedy cover by disjoint tubes, each adding at least min_tube of the mass
    std::vector<ScreenPeak> tubes;
    double captured = 0.0;
};

struct ScreenOptions {
    double width_factor = 10.0;  // width = factor * sqrt(eps)
    std::size_t y_samples = 161;
    std::size_t param_samples = 81;
    std::size_t max_rows = 256;
    std::size_t max_tubes = 8;
    double min_tube = 0.2;
};

// Free mode scans a in [-T, 0]: a datum focusing at (t_j, x_j) sits on the line a = -t_j, y = x_j.
// Harmonic mode scans t in {0} and [pi - T, pi): focus time t_j sits on t = pi - t_j.
ScreenReport singularity_screen(const Field& f, double eps, double T, ScreenMode mode, const ScreenOptions& opt = {});
ScreenReport singularity_screen(const WignerTable& w, double T, ScreenMode mode, const ScreenOptions& opt = {});

std::string to_string(ScreenMode m);

}  // namespace snls
