#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "snls/norms.hpp"
#include "snls/propagators.hpp"
#include "snls/scattering.hpp"
#include "snls/solver.hpp"

using namespace snls;
using std::numbers::pi;

namespace {

double max_diff(const Field& a, const Field& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

Params params(double eps, Potential pot = Potential::none) {
    Params p;
    p.n = 1;
    p.sigma = 3;
    p.eps = eps;
    p.potential = pot;
    return p;
}

Field gaussian(const GridPtr& g, double amp, double width = 1.0) {
    return Field::from_function(g, [&](double x, double) { return amp * std::exp(-x * x / (2 * width * width)); });
}

}  // namespace

TEST_CASE("Strang step on plane waves is exact") {
    const auto g = make_grid_1d(16, 256);
    const double eps = 0.1, c = 0.8, dt = 0.001, k0 = 2 * pi * 3 / 16;
    const Field pw = Field::from_function(g, [&](double x, double) { return std::polar(c, k0 * x); });
    const Params p = params(eps);
    // kinetic and phase flows commute here, so one step equals the exact solution
    const double w = eps * k0 * k0 / 2 + std::pow(eps, p.n * p.sigma - 1) * std::pow(c, 2 * p.sigma);
    Field expect = pw;
    expect *= std::polar(1.0, -w * dt);
    CHECK(max_diff(strang_step(pw, dt, p), expect) < 1e-14);
    CHECK(norm_lr(strang_step(Field(g), dt, p), kInf) == 0.0);
}

TEST_CASE("linear limit and zero data") {
    const auto g = make_grid_1d(32, 2048);
    const double eps = 0.05;
    const Params p = params(eps);
    SolveConfig c;
    c.t1 = 1.0;
    c.snapshot_stride = 40;
    c.coupling = 0.0;
    const Field u0 = quadratic_datum({Profile::unit_gaussian(1), 2.0, {}}, eps, g);
    const Trajectory tr = solve(u0, p, c);
    for (std::size_t k = 0; k < tr.snapshots.size(); ++k)
        CHECK(max_diff(tr.snapshots[k], free_propagate(u0, eps, tr.times[k])) < 1e-9);

    const Trajectory z = solve(Field(g), p, SolveConfig{});
    CHECK(norm_lr(z.snapshots.back(), kInf) == 0.0);
}

TEST_CASE("time step bound") {
    const auto g = make_grid_1d(32, 512);
    SolveConfig c;
    c.dt = 0.01;
    CHECK_THROWS_AS(solve(gaussian(g, 1), params(0.05), c), Error);
    c.allow_large_dt = true;
    CHECK_NOTHROW(solve(gaussian(g, 1), params(0.05), c));
}

TEST_CASE("second-order self-convergence") {
    // eps = 1 keeps the splitting error far above roundoff
    const auto g = make_grid_1d(64, 1024);
    const Field u0 = gaussian(g, 1.0);
    const Params p = params(1.0);
    std::vector<Field> finals;
    for (double dt : {0.04, 0.02, 0.01, 0.005}) {
        SolveConfig c;
        c.dt = dt;
        c.allow_large_dt = true;
        c.t1 = 1.0;
        finals.push_back(solve(u0, p, c).snapshots.back());
    }
    const double d1 = norm_l2(finals[0] - finals[1]), d2 = norm_l2(finals[1] - finals[2]),
                 d3 = norm_l2(finals[2] - finals[3]);
    CHECK(d1 / d2 == doctest::Approx(4.0).epsilon(0.1).scale(0));
    CHECK(d2 / d3 == doctest::Approx(4.0).epsilon(0.1).scale(0));
}

TEST_CASE("conservation") {
    SUBCASE("eps = 1, small Gaussian, long run") {
        const auto g = make_grid_1d(256, 2048);
        SolveConfig c;
        c.t1 = 10.0;
        c.mass_monitor = false;
        const auto r = conservation_report(solve(gaussian(g, 0.5), params(1.0), c));
        CHECK(r.energy_drift < 1e-6);
        CHECK(r.mass_drift < 1e-10);
    }
    SUBCASE("linear runs") {
        const double eps = 0.05;
        const auto g = make_grid_1d(mehler_compatible_extent(1024, eps), 1024);
        const Field u0 = Field::from_function(g, [&](double x, double) {
            return std::exp(-(x - 1) * (x - 1)) * std::polar(1.0, 0.5 * x / eps);
        });
        SolveConfig c;
        c.t1 = 2.0;
        for (auto pot : {Potential::none, Potential::harmonic}) {
            const auto r = conservation_report(linear_trajectory(u0, params(eps, pot), c));
            CHECK(r.mass_drift < 1e-10);
            CHECK(r.energy_drift < 1e-10);
        }
        // harmonic linear energy by hand: 1/2 ||eps grad v||^2 + 1/2 ||x v||^2
        const Trajectory tr = linear_trajectory(u0, params(eps, Potential::harmonic), c);
        const auto energy = [&](const Field& v) {
            const double gn = grad_norm_eps(v, eps), xm = moment_norm(v);
            return 0.5 * gn * gn + 0.5 * xm * xm;
        };
        CHECK(std::abs(energy(tr.snapshots.back()) - energy(u0)) < 1e-8 * energy(u0));
    }
}

TEST_CASE("focusing datum peaks at the focus") {
    const double eps = 0.04;
    QuadraticDatum d{Profile::unit_gaussian(1), 1.0, {}};
    const auto g = make_grid_1d(32, quadratic_points(d, eps, 32));
    SolveConfig c;
    c.t1 = 2.0;
    const Trajectory tr = solve(quadratic_datum(d, eps, g), params(eps), c);
    const auto& t = tr.diagnostics.times();
    const auto& linf = tr.diagnostics.channel("linf");
    const auto k = static_cast<std::size_t>(std::max_element(linf.begin(), linf.end()) - linf.begin());
    CHECK(std::abs(t[k] - 1.0) <= 5 * eps);
    // records near the focus are at most eps/5 apart
    for (std::size_t i = 1; i < t.size(); ++i) CHECK(t[i] - t[i - 1] <= 0.2 * eps * (1 + 1e-9));
}

TEST_CASE("schedule and diagnostics plumbing") {
    const auto g = make_grid_1d(32, 512);
    SolveConfig c;
    c.t1 = 0.5;
    c.snapshot_stride = 10;
    c.channels.emplace_back("probe", [](const Field& u, double) { return norm_l2(u); });
    const Trajectory tr = solve(gaussian(g, 1), params(0.1), c);
    CHECK(tr.times.front() == 0.0);
    CHECK(tr.times.back() == doctest::Approx(0.5).scale(0));
    CHECK(tr.diagnostics.has("probe"));
    CHECK(tr.diagnostics.to_csv().rfind("t,", 0) == 0);
    const Schedule s = make_schedule(params(0.1), c);
    CHECK(s.dt <= 0.01 * 0.1 * (1 + 1e-12));
    CHECK(s.time(s.steps) == doctest::Approx(0.5).scale(0));
}
