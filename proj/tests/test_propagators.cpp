#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "snls/fft.hpp"
#include "snls/norms.hpp"
#include "snls/propagators.hpp"

using namespace snls;
using std::numbers::pi;
using namespace std::complex_literals;

namespace {

double max_diff(const Field& a, const Field& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_CASE("free propagator") {
    const auto g = make_grid_1d(128, 4096);
    const Field f = Field::from_function(g, [](double x, double) { return std::exp(-x * x / 2); });
    CHECK(max_diff(free_propagate(f, 0.1, 0.0), f) < 1e-14);

    SUBCASE("plane wave") {
        const double eps = 0.1, t = 0.7, k0 = 2 * pi * 5 / 128;
        const Field pw = Field::from_function(g, [&](double x, double) { return std::polar(1.0, k0 * x); });
        Field expect = pw;
        expect *= std::polar(1.0, -eps * t * k0 * k0 / 2);
        CHECK(max_diff(free_propagate(pw, eps, t), expect) < 1e-12);
    }
    SUBCASE("Gaussian at eps = 1") {
        for (double t : {0.5, 2.0, 5.0}) {
            const Field exact = Field::from_function(g, [&](double x, double) {
                const cplx a = 1.0 + 1i * t;
                return std::pow(a, -0.5) * std::exp(-x * x / (2.0 * a));
            });
            CHECK(max_diff(free_propagate(f, 1.0, t), exact) < 1e-10);
        }
    }
}

TEST_CASE("Mehler propagator") {
    const double eps = 0.05;
    const std::size_t N = 1024;
    const auto g = make_grid_1d(mehler_compatible_extent(N, eps), N);
    CHECK(mehler_compatible(*g, eps));

    SUBCASE("eigenstate") {
        const Field v0 = Field::from_function(g, [&](double x, double) { return std::exp(-x * x / (2 * eps)); });
        for (double t : {0.3, 1.1, 2.9}) {
            Field expect = v0;
            expect *= std::polar(1.0, -t / 2);
            CHECK(max_diff(mehler_propagate(v0, eps, t), expect) < 1e-10);
        }
    }
    SUBCASE("2 pi period up to sign") {
        const Field f = Field::from_function(g, [&](double x, double) {
            return std::exp(-(x - 0.7) * (x - 0.7)) * std::polar(1.0, 0.4 * x / eps);
        });
        Field back = mehler_propagate(f, eps, 2 * pi);
        back *= -1.0;
        CHECK(max_diff(back, f) < 1e-10);
    }
    SUBCASE("quarter period against brute-force quadrature") {
        const auto gs = make_grid_1d(mehler_compatible_extent(256, 0.2), 256);
        const Field f = Field::from_function(gs, [](double x, double) { return std::exp(-x * x) * (1.0 + 0.3 * x); });
        const Field u = mehler_propagate(f, 0.2, pi / 2);
        // U(pi/2) f(x) = (2 pi i eps)^{-1/2} int e^{-i x y / eps} f(y) dy
        const cplx pref = std::pow(2.0 * pi * 1i * 0.2, -0.5);
        double err = 0.0;
        for (std::size_t i = 0; i < 256; ++i) {
            cplx s = 0.0;
            for (std::size_t j = 0; j < 256; ++j)
                s += std::exp(-1i * gs->x(0)[i] * gs->x(0)[j] / 0.2) * f[j] * gs->dx(0);
            err = std::max(err, std::abs(pref * s - u[i]));
        }
        CHECK(err < 1e-8);
    }
    SUBCASE("group property at generic times") {
        const Field f = Field::from_function(g, [&](double x, double) { return std::exp(-x * x / 0.5); });
        CHECK(max_diff(mehler_propagate(mehler_propagate(f, eps, 0.37), eps, 1.21), mehler_propagate(f, eps, 1.58)) <
              1e-10);
        CHECK(norm_l2(mehler_propagate(f, eps, 0.9)) == doctest::Approx(norm_l2(f)).epsilon(1e-12).scale(0));
    }
    SUBCASE("resolution check") {
        const Field chirp = Field::from_function(g, [&](double x, double) { return std::polar(1.0, 40 * x * x / eps); });
        CHECK_THROWS_AS(check_mehler_resolution(chirp, eps), Error);
    }
}

TEST_CASE("dispersive profile") {
    const auto g = make_grid_1d(1600, 16384);
    const Field V0 = Field::from_function(g, [](double x, double) { return std::exp(-x * x / 2); });
    // Gaussian: both sides closed form; the gap closes like 1/t
    std::vector<double> gaps;
    for (double t : {5.0, 10.0, 20.0}) gaps.push_back(norm_l2(free_propagate(V0, 1.0, t) - dispersive_profile(V0, t)));
    CHECK(gaps[1] < gaps[0]);
    CHECK(gaps[2] < gaps[1]);
    CHECK(norm_l2(free_propagate(V0, 1.0, 50) - dispersive_profile(V0, 50)) < 0.05);

    // negative times: i^n |t|^{-n/2}
    const Field a = dispersive_profile(V0, -10), b = dispersive_profile(V0, 10);
    for (std::size_t i = 0; i < a.size(); i += 1001) CHECK(std::abs(std::abs(a[i]) - std::abs(b[i])) < 1e-12);
}

TEST_CASE("caustic approximant") {
    const auto g = make_grid_1d(32, 4096);
    QuadraticDatum d;
    d.profile = Profile::unit_gaussian(1);
    d.t_j = 1.0;
    const double eps = 0.04;
    const Field datum = quadratic_datum(d, eps, g);
    CHECK(max_diff(caustic_approximant(d, eps, 0.0, FocusSide::pre, d.profile, g), datum) < 1e-12);
    const Field half = caustic_approximant(d, eps, 0.5, FocusSide::pre, d.profile, g);
    CHECK(norm_lr(half, kInf) == doctest::Approx(std::sqrt(2.0) * norm_lr(datum, kInf)).epsilon(1e-6).scale(0));
    CHECK_THROWS_AS(caustic_approximant(d, eps, 0.5, FocusSide::post, d.profile, g), Error);

    // linear flow approaches the pre-focus branch as eps shrinks
    std::vector<double> err;
    for (double e : {0.08, 0.04, 0.02}) {
        const auto gg = make_grid_1d(32, 8192);
        const Field v = free_propagate(quadratic_datum(d, e, gg), e, 0.5);
        err.push_back(norm_h1_eps(v - caustic_approximant(d, e, 0.5, FocusSide::pre, d.profile, gg), e));
    }
    CHECK(err[1] < err[0]);
    CHECK(err[2] < err[1]);
}
