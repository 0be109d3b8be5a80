#include "snls/propagators.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "snls/fft.hpp"
#include "snls/norms.hpp"

namespace snls {

namespace {

constexpr double kPi = std::numbers::pi;

void chirp(cvec& v, const Grid& g, double coeff) {
    // v *= exp(i coeff |x|^2)
    for_each_point(g, [&](std::size_t i, double x0, double x1) { v[i] *= std::polar(1.0, coeff * (x0 * x0 + x1 * x1)); });
}

// Kernel form, valid for sin t bounded away from zero:
// (2 i pi eps sin t)^{-n/2} e^{i|x|^2 cot/(2eps)} sum_y e^{-i x.y/(eps sin t)} e^{i|y|^2 cot/(2eps)} f(y) dy^n
cvec mehler_kernel(const cvec& f, const Grid& g, double eps, double t) {
    const double s = std::sin(t), c = std::cos(t);
    const double cot = c / s;
    const int n = g.dim();
    cvec v = f;
    if (std::abs(cot) > 1e-15) chirp(v, g, cot / (2.0 * eps));
    std::vector<double> alpha(n);
    for (int a = 0; a < n; ++a) alpha[a] = g.dx(a) * g.dx(a) / (eps * s);
    v = scaled_dft(v, g, alpha);
    if (std::abs(cot) > 1e-15) chirp(v, g, cot / (2.0 * eps));
    // principal branch of (2 i pi eps s)^{-n/2}
    const cplx pref = std::pow(cplx(0.0, 2.0 * kPi * eps * s), -0.5 * n) * g.cell();
    for (auto& z : v) z *= pref;
    return v;
}

}  // namespace

Field apply(const PropagatorSpec& p, const Field& f) {
    return p.kind == PropagatorKind::free ? free_propagate(f, p.eps, p.t) : mehler_propagate(f, p.eps, p.t);
}

Field free_propagate(const Field& f, double eps, double t) {
    f.require(Space::physical, "free_propagate");
    if (t == 0.0) return f;
    Field h = to_spectral(f);
    const double c = -0.5 * eps * t;
    for_each_mode(f.grid(), [&](std::size_t i, double k0, double k1) { h[i] *= std::polar(1.0, c * (k0 * k0 + k1 * k1)); });
    Field out = to_physical(h);
    return Field(f.grid_ptr(), std::move(out.values()));
}

bool mehler_compatible(const Grid& g, double eps) {
    for (int a = 0; a < g.dim(); ++a) {
        const double r = g.extent(a) * g.extent(a) / (2.0 * kPi * eps * static_cast<double>(g.points(a)));
        if (std::abs(r - 1.0) > 1e-12) return false;
    }
    return true;
}

double mehler_compatible_extent(std::size_t N, double eps) { return std::sqrt(2.0 * kPi * eps * static_cast<double>(N)); }

void check_mehler_resolution(const Field& f, double eps) {
    const Grid& g = f.grid();
    const double Rx = support_radius(f, 1e-10);
    const double Rk = support_radius(to_spectral(f), 1e-10);
    const double rho = std::hypot(Rx, eps * Rk);
    for (int a = 0; a < g.dim(); ++a) {
        const double nyq = kPi * static_cast<double>(g.points(a)) / g.extent(a);
        // output images repeat with period 2 pi eps sin t / dx, worst case sin t = 1/sqrt 2
        const double period = 2.0 * kPi * eps * std::sin(kPi / 4.0) / g.dx(a);
        if (!(nyq > 1.5 * rho / eps) || !(rho < 0.5 * period)) {
            std::ostringstream os;
            os << "mehler_propagate: resolution rule violated (phase-space radius " << rho << ", axis " << a
               << ": pi N/L = " << nyq << ", image period " << period << ")";
            throw Error(os.str());
        }
    }
}

Field mehler_propagate(const Field& f, double eps, double t) {
    f.require(Space::physical, "mehler_propagate");
    if (t == 0.0) return f;
    check_mehler_resolution(f, eps);
    const Grid& g = f.grid();
    const int n = g.dim();
    const long k = std::lround((t - 0.5 * kPi) / (0.5 * kPi));
    const double tp = t - static_cast<double>(k) * 0.5 * kPi;
    cvec v = mehler_kernel(f.values(), g, eps, tp);
    // Q^k with Q^4 = (-1)^n
    long a = k >= 0 ? k / 4 : -((-k + 3) / 4);
    const long b = k - 4 * a;
    for (long j = 0; j < b; ++j) v = mehler_kernel(v, g, eps, 0.5 * kPi);
    if ((a * n) % 2 != 0)
        for (auto& z : v) z = -z;
    return Field(f.grid_ptr(), std::move(v));
}

Field dispersive_profile(const Field& V0, double t) {
    V0.require(Space::physical, "dispersive_profile");
    if (t == 0.0) throw Error("dispersive_profile: t must be nonzero");
    const Grid& g = V0.grid();
    const int n = g.dim();
    std::vector<double> alpha(n);
    for (int a = 0; a < n; ++a) alpha[a] = g.dx(a) * g.dx(a) / t;
    cvec v = scaled_dft(V0.values(), g, alpha);
    // (2 i pi)^{-n/2} dx^n, then t^{-n/2} with the i^n rule for t < 0
    cplx pref = std::pow(2.0 * kPi, -0.5 * n) * std::polar(1.0, -kPi * n / 4.0) * g.cell();
    pref *= std::pow(std::abs(t), -0.5 * n);
    if (t < 0) pref *= std::pow(cplx(0.0, 1.0), n);
    for (auto& z : v) z *= pref;
    chirp(v, g, 1.0 / (2.0 * t));
    return Field(V0.grid_ptr(), std::move(v));
}

Field caustic_approximant(const QuadraticDatum& d, double eps, double t, FocusSide side, const Profile& g,
                          const GridPtr& grid, double floor) {
    if (floor < 0) floor = eps;
    const double tj = d.t_j;
    if (side == FocusSide::pre && !(t < tj)) throw Error("caustic_approximant: pre-focus branch needs t < t_j");
    if (side == FocusSide::post && !(t > tj)) throw Error("caustic_approximant: post-focus branch needs t > t_j");
    if (std::abs(t - tj) < floor) throw Error("caustic_approximant: |t - t_j| below validity floor");
    const int n = grid->dim();
    const auto xj = point_or_origin(d.x_j, n);
    const double D = 1.0 - t / tj;
    cplx amp = std::pow(std::abs(D), -0.5 * n);
    if (side == FocusSide::post) amp *= std::polar(1.0, -kPi * n / 2.0);
    Field out = g.sample(grid, 1.0 / D, xj);
    const double c = 1.0 / (2.0 * eps * (t - tj));
    for_each_point(*grid, [&](std::size_t i, double x0, double x1) {
        double r2 = (x0 - xj[0]) * (x0 - xj[0]);
        if (n == 2) r2 += (x1 - xj[1]) * (x1 - xj[1]);
        out[i] *= amp * std::polar(1.0, c * r2);
    });
    return out;
}

}  // namespace snls
