#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "snls/fft.hpp"
#include "snls/norms.hpp"
#include "snls/propagators.hpp"
#include "snls/scattering.hpp"

using namespace snls;
using std::numbers::pi;

namespace {

double max_diff(const Field& a, const Field& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_CASE("profiles") {
    const auto g = make_grid_1d(32, 1024);
    const Profile u = Profile::unit_gaussian(1);
    CHECK(norm_l2(u.sample(g)) == doctest::Approx(1.0).epsilon(1e-12).scale(0));
    GaussianDesc d;
    d.width = 0.5;
    d.center = {1.0};
    d.momentum = {2.0};
    const Profile p = Profile::gaussian(1, d);
    CHECK(std::abs(p.eval(1.0)) == doctest::Approx(1.0).scale(0));
    CHECK(p.width() == 0.5);
    // sampled profiles interpolate back to the analytic one
    const Profile s = Profile::from_samples(u.sample(make_grid_1d(24, 512)));
    CHECK(std::abs(s.eval(0.3) - u.eval(0.3)) < 1e-6);
    CHECK(std::abs(s.eval(30.0)) == 0.0);
    CHECK(p.describe() != u.describe());
}

TEST_CASE("WKB data") {
    const auto g = make_grid_1d(32, 4096);
    const double eps = 0.05;
    const Profile f = Profile::unit_gaussian(1);
    CHECK(max_diff(wkb_datum(f, [](double, double) { return 0.0; }, eps, g), f.sample(g)) == 0.0);

    // phi = p x moves the spectrum to p/eps
    const double p0 = 0.5;
    const Field m = wkb_datum(f, [&](double x, double) { return p0 * x; }, eps, g);
    const Field mh = to_spectral(m);
    std::size_t k = 0;
    for (std::size_t i = 0; i < mh.size(); ++i)
        if (std::abs(mh[i]) > std::abs(mh[k])) k = i;
    CHECK(mh.grid().x(0)[k] == doctest::Approx(p0 / eps).epsilon(0.01).scale(0));

    // phi = -x^2/2 is the quadratic datum with t_j = 1, x_j = 0
    const Field w = wkb_datum(f, [](double x, double) { return -x * x / 2; }, eps, g);
    CHECK(max_diff(w, quadratic_datum({f, 1.0, {}}, eps, g)) < 1e-14);
}

TEST_CASE("quadratic data") {
    const Profile f = Profile::unit_gaussian(1);
    const double eps = 0.04;
    QuadraticDatum d{f, 1.0, {}};
    CHECK_THROWS_AS(quadratic_datum({f, 0.0, {}}, eps, make_grid_1d(32, 4096)), Error);
    CHECK_THROWS_AS(quadratic_datum({f, -1.0, {}}, eps, make_grid_1d(32, 4096)), Error);
    // a coarse grid cannot carry the chirp
    CHECK_THROWS_AS(quadratic_datum(d, eps, make_grid_1d(32, 256)), Error);

    const auto g = make_grid_1d(32, quadratic_points(d, eps, 32));
    const Field u0 = quadratic_datum(d, eps, g);
    double best = 0.0, t_best = 0.0;
    for (double t = 0.5; t <= 1.5; t += eps / 5) {
        const double m = norm_lr(free_propagate(u0, eps, t), kInf);
        if (m > best) {
            best = m;
            t_best = t;
        }
    }
    CHECK(std::abs(t_best - 1.0) <= eps);
    // the same construction at larger eps is a weaker chirp
    CHECK(datum_wavenumber(f.sample(g), [](double x, double) { return -x * x / 2; }, 0.08, 1.0) <
          datum_wavenumber(f.sample(g), [](double x, double) { return -x * x / 2; }, 0.04, 1.0));
}

TEST_CASE("harmonic quadratic data") {
    const Profile f = Profile::unit_gaussian(1);
    const double eps = 0.04;
    const std::size_t N = 2048;
    const auto g = make_grid_1d(mehler_compatible_extent(N, eps), N);
    // cot(pi/2) = 0: no chirp left
    const Field flat = harmonic_quadratic_datum({f, pi / 2, {}}, eps, g);
    CHECK(max_diff(flat, f.sample(g)) < 1e-12);
    CHECK_THROWS_AS(harmonic_quadratic_datum({f, 0.0, {}}, eps, g), Error);
    CHECK_THROWS_AS(harmonic_quadratic_datum({f, 1e-300, {}}, eps, g), Error);

    const Field u0 = harmonic_quadratic_datum({f, 1.0, {}}, eps, g);
    double best = 0.0, t_best = 0.0;
    for (double t = 0.5; t <= 1.5; t += eps / 5) {
        const double m = norm_lr(mehler_propagate(u0, eps, t), kInf);
        if (m > best) {
            best = m;
            t_best = t;
        }
    }
    CHECK(std::abs(t_best - 1.0) <= eps);
}

TEST_CASE("sums of data") {
    const auto g = make_grid_1d(32, 8192);
    const double eps = 0.04;
    const Profile f = Profile::unit_gaussian(1);
    QuadraticDatum a{f, 1.0, {-2.0}}, b{f, 1.5, {2.0}};
    const Field fa = quadratic_datum(a, eps, g), fb = quadratic_datum(b, eps, g);
    const SummedData one = sum_data({fa}, std::nullopt, {a});
    CHECK(max_diff(one.total, fa) == 0.0);
    const SummedData two = sum_data({fa, fb}, std::nullopt, {a, b});
    CHECK(max_diff(two.total, fa + fb) == 0.0);
    CHECK(two.foci.size() == 2);
    CHECK_THROWS_AS(sum_data({fa, fa}, std::nullopt, {a, a}), Error);
    const SummedData rem = sum_data({fa}, f.sample(g), {a});
    CHECK(rem.has_remainder);
}

TEST_CASE("resolution rule") {
    const auto g = make_grid_1d(32, 1024);
    CHECK_NOTHROW(check_resolution(*g, 60.0, "test"));
    CHECK_THROWS_AS(check_resolution(*g, 80.0, "test"), Error);  // pi 1024/32 = 100.5 < 1.5 * 80
    CHECK(point_or_origin({}, 2) == std::vector<double>{0.0, 0.0});
}
