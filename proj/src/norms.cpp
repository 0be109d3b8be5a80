#include "snls/norms.hpp"

#include <cmath>

#include "snls/fft.hpp"

namespace snls {

double norm_lr(const Field& f, double r) {
    f.require(Space::physical, "norm_lr");
    if (!(r >= 2.0)) throw Error("norm_lr: need r >= 2");
    if (std::isinf(r)) {
        double m = 0.0;
        for (const auto& z : f.values()) m = std::max(m, std::abs(z));
        return m;
    }
    // scale by the max modulus so large r does not overflow
    double m = 0.0;
    for (const auto& z : f.values()) m = std::max(m, std::abs(z));
    if (m == 0.0) return 0.0;
    double s = 0.0;
    const double half = 0.5 * r;
    if (half == std::floor(half) && half <= 32.0) {
        const int k = static_cast<int>(half);
        const double inv2 = 1.0 / (m * m);
        for (const auto& z : f.values()) {
            const double w = std::norm(z) * inv2;
            double p = 1.0;
            for (int j = 0; j < k; ++j) p *= w;
            s += p;
        }
    } else {
        for (const auto& z : f.values()) s += std::pow(std::abs(z) / m, r);
    }
    return m * std::pow(s * f.grid().cell(), 1.0 / r);
}

double norm_l2(const Field& f) { return norm_lr(f, 2.0); }

double mass(const Field& f) {
    f.require(Space::physical, "mass");
    double s = 0.0;
    for (const auto& z : f.values()) s += std::norm(z);
    return s * f.grid().cell();
}

double grad_norm_eps(const Field& f, double eps) {
    f.require(Space::physical, "grad_norm_eps");
    // Plancherel: ||grad f||^2 = sum |xi|^2 |fhat|^2 dxi
    Field h = to_spectral(f);
    double s = 0.0;
    for_each_mode(f.grid(), [&](std::size_t i, double k0, double k1) { s += (k0 * k0 + k1 * k1) * std::norm(h[i]); });
    return eps * std::sqrt(s * h.grid().cell());
}

double norm_h1_eps(const Field& f, double eps) { return norm_l2(f) + grad_norm_eps(f, eps); }

double norm_l2sigma_eps(const Field& f, double eps, double sigma, int n) {
    const double r = 2.0 * sigma + 2.0;
    return std::pow(eps, n * sigma / r) * norm_lr(f, r);
}

double moment_norm(const Field& f, const std::vector<double>& center) {
    f.require(Space::physical, "moment_norm");
    const double c0 = center.empty() ? 0.0 : center[0];
    const double c1 = center.size() > 1 ? center[1] : 0.0;
    const bool two = f.grid().dim() == 2;
    double s = 0.0;
    for_each_point(f.grid(), [&](std::size_t i, double x0, double x1) {
        double r2 = (x0 - c0) * (x0 - c0);
        if (two) r2 += (x1 - c1) * (x1 - c1);
        s += r2 * std::norm(f[i]);
    });
    return std::sqrt(s * f.grid().cell());
}

cplx inner(const Field& f, const Field& g) {
    f.require_same_grid(g, "inner");
    cplx s{};
    for (std::size_t i = 0; i < f.size(); ++i) s += std::conj(f[i]) * g[i];
    return s * f.grid().cell();
}

std::vector<double> centroid(const Field& f) {
    f.require(Space::physical, "centroid");
    std::vector<double> c(f.grid().dim(), 0.0);
    double m = 0.0;
    for_each_point(f.grid(), [&](std::size_t i, double x0, double x1) {
        const double w = std::norm(f[i]);
        m += w;
        c[0] += w * x0;
        if (c.size() > 1) c[1] += w * x1;
    });
    if (m > 0)
        for (auto& v : c) v /= m;
    return c;
}

double mass_in_window(const Field& f, double window) {
    f.require(Space::physical, "mass_in_window");
    const Grid& g = f.grid();
    double in = 0.0, all = 0.0;
    for_each_point(g, [&](std::size_t i, double x0, double x1) {
        const double w = std::norm(f[i]);
        all += w;
        bool inside = std::abs(x0) <= 0.5 * window * g.extent(0);
        if (g.dim() == 2) inside = inside && std::abs(x1) <= 0.5 * window * g.extent(1);
        if (inside) in += w;
    });
    return all > 0 ? in / all : 1.0;
}

double support_radius(const Field& f, double rel) {
    double m = 0.0;
    for (const auto& z : f.values()) m = std::max(m, std::abs(z));
    double R = 0.0;
    if (m == 0.0) return R;
    const bool two = f.grid().dim() == 2;
    for_each_point(f.grid(), [&](std::size_t i, double x0, double x1) {
        if (std::abs(f[i]) > rel * m) R = std::max(R, two ? std::max(std::abs(x0), std::abs(x1)) : std::abs(x0));
    });
    return R;
}

}  // namespace snls
