#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "snls/diagnostics.hpp"
#include "snls/norms.hpp"
#include "snls/propagators.hpp"
#include "snls/scattering.hpp"

using namespace snls;
using std::numbers::pi;

namespace {

Params params(double eps, double sigma = 3, Potential pot = Potential::none) {
    Params p;
    p.n = 1;
    p.sigma = sigma;
    p.eps = eps;
    p.potential = pot;
    return p;
}

// linear flow of sum_j quadratic data, records every eps/5
Trajectory linear_run(const std::vector<QuadraticDatum>& data, double eps, double t1) {
    std::size_t N = 256;
    for (const auto& d : data) N = std::max(N, quadratic_points(d, eps, 32));
    const auto g = make_grid_1d(32, N);
    Field u0(g);
    for (const auto& d : data) u0 += quadratic_datum(d, eps, g);
    SolveConfig c;
    c.t1 = t1;
    c.channels.emplace_back(lr_channel_name(8), lr_channel(8));
    for (auto& ch : centroid_channels(1)) c.channels.push_back(ch);
    return linear_trajectory(u0, params(eps), c);
}

// ||fhat||_8^8 for fhat = pi^{-1/4} e^{-k^2/2}: pi^{-2} int e^{-4k^2} dk
const double kGaussFhat8 = 0.5 * std::pow(pi, -1.5);

}  // namespace

TEST_CASE("trend helpers") {
    CHECK(trend_decreasing({4, 3, 2, 1}));
    CHECK(trend_decreasing({4, 3, 3.05, 1}));
    CHECK_FALSE(trend_decreasing({4, 3, 3.5, 1}));
    CHECK_FALSE(trend_decreasing({1, 0.999, 0.998, 0.997}));  // no net drop
    CHECK_FALSE(trend_decreasing({4, 5, 6}));
    CHECK(trend_non_decreasing({1, 1, 1.2, 1.19}));
    CHECK_FALSE(trend_non_decreasing({1, 0.5}));
    CHECK(strictly_decreasing({3, 2, 1}));
    CHECK_FALSE(strictly_decreasing({3, 3, 1}));
}

TEST_CASE("linearizability functional") {
    const auto g = make_grid_1d(32, 1024);
    SolveConfig c;
    c.t1 = 1.0;
    CHECK(linearizability_functional(linear_trajectory(Field(g), params(0.05), c), params(0.05)) == 0.0);

    // Schwartz data: eps^{n sigma} ||v||^8 ~ eps^3
    std::vector<double> vals;
    for (double eps : {0.08, 0.04}) {
        const Field u0 = Profile::unit_gaussian(1).sample(g);
        vals.push_back(linearizability_functional(linear_trajectory(u0, params(eps), c), params(eps)));
    }
    CHECK(vals[1] / vals[0] < 0.9);
    CHECK(vals[1] / vals[0] == doctest::Approx(0.125).epsilon(0.05).scale(0));

    // focusing datum: tends to ||fhat||_8^8 t_j^{-n sigma}
    const QuadraticDatum d{Profile::unit_gaussian(1), 1.0, {}};
    const Trajectory v = linear_run({d}, 0.01, 2.0);
    CHECK(linearizability_functional(v, params(0.01), {1.0}) == doctest::Approx(kGaussFhat8).epsilon(0.15).scale(0));
}

TEST_CASE("dichotomy bookkeeping") {
    std::vector<VerdictRow> lin(3), non(3);
    for (int i = 0; i < 3; ++i) {
        const double s = std::pow(0.5, i);
        lin[i].functional = s;
        lin[i].sup_h1 = s;
        lin[i].sup_l2 = s;
        non[i].functional = 0.09;
        non[i].sup_h1 = 0.3;
        non[i].sup_l2 = 0.16;
    }
    const DichotomyTrend a = dichotomy_trend(lin), b = dichotomy_trend(non);
    CHECK(a.functional_decreasing);
    CHECK(a.distance_decreasing);
    CHECK(a.consistent);
    CHECK_FALSE(b.functional_decreasing);
    CHECK(b.l2_non_decreasing);
    CHECK(b.consistent);
    lin[2].sup_h1 = 2.0;
    CHECK_FALSE(dichotomy_trend(lin).consistent);
}

TEST_CASE("Galilean operator on focusing data") {
    // J(0) applied to f e^{-i x^2/(2 eps t_j)} is -i t_j f', so the norm is t_j / sqrt 2
    for (double eps : {0.05, 0.02}) {
        const auto g = make_grid_1d(32, 8192);
        const QuadraticDatum d{Profile::unit_gaussian(1), 1.5, {}};
        const Field u0 = quadratic_datum(d, eps, g);
        CHECK(galilean_norm(u0, eps, 0.0, 1.5) == doctest::Approx(1.5 / std::sqrt(2.0)).epsilon(1e-6).scale(0));
        // commutes with the free flow
        CHECK(galilean_norm(free_propagate(u0, eps, 0.8), eps, 0.8, 1.5) ==
              doctest::Approx(1.5 / std::sqrt(2.0)).epsilon(1e-6).scale(0));
    }
}

TEST_CASE("A and B operators") {
    const double eps = 0.05;
    const auto g = make_grid_1d(32, 2048);
    const Field u = Field::from_function(g, [&](double x, double) {
        return std::exp(-(x - 1) * (x - 1)) * std::polar(1.0, 0.3 * x / eps);
    });
    Field xu = u;
    for (std::size_t i = 0; i < xu.size(); ++i) xu[i] *= g->x(0)[i];
    SUBCASE("t = 0: B is x") {
        const ABImages im = ab_operators(u, eps, 0.0);
        CHECK(norm_l2(im.B[0] - xu) < 1e-12);
        CHECK(norm_l2(im.A[0]) == doctest::Approx(grad_norm_eps(u, eps)).epsilon(1e-10).scale(0));
    }
    SUBCASE("t = pi/2: A is x") {
        const ABImages im = ab_operators(u, eps, pi / 2);
        CHECK(norm_l2(im.A[0] - xu) < 1e-10);
        CHECK(norm_l2(im.B[0]) == doctest::Approx(grad_norm_eps(u, eps)).epsilon(1e-10).scale(0));
    }
    for (double t : {0.3, 1.0, 2.5}) CHECK(ab_identity_residual(u, eps, t) < 1e-10);
}

TEST_CASE("concentration detection") {
    const double eps = 0.04;
    SUBCASE("Schwartz data") {
        const auto g = make_grid_1d(32, 1024);
        SolveConfig c;
        c.t1 = 2.0;
        const Trajectory v = linear_trajectory(Profile::unit_gaussian(1).sample(g), params(eps), c);
        CHECK(concentration_detect(v, params(eps), kGaussFhat8).empty());
    }
    SUBCASE("one focus") {
        const Trajectory v = linear_run({{Profile::unit_gaussian(1), 1.0, {1.5}}}, eps, 2.0);
        const auto det = concentration_detect(v, params(eps), kGaussFhat8);
        REQUIRE(det.size() == 1);
        CHECK(std::abs(det[0].t - 1.0) < 5 * eps);
        CHECK(det[0].x[0] == doctest::Approx(1.5).epsilon(0.05).scale(0));
    }
    SUBCASE("two foci") {
        const Trajectory v =
            linear_run({{Profile::unit_gaussian(1), 1.0, {-2.0}}, {Profile::unit_gaussian(1), 1.5, {2.0}}}, eps, 2.0);
        const auto det = concentration_detect(v, params(eps), kGaussFhat8 / 1.5);
        REQUIRE(det.size() == 2);
        CHECK(std::abs(det[0].t - 1.0) < 5 * eps);
        CHECK(std::abs(det[1].t - 1.5) < 5 * eps);
    }
}

TEST_CASE("decay of L^8 norm near a focus") {
    const double eps = 0.01;
    const Trajectory v = linear_run({{Profile::unit_gaussian(1), 1.0, {}}}, eps, 1.6);
    const DecayFit f = decay_fit(v, 8, 1.0, eps);
    CHECK(f.samples > 10);
    CHECK(f.slope == doctest::Approx(delta_exponent(8, 1)).epsilon(0.1).scale(0));
}

TEST_CASE("orthogonality splitting") {
    const std::vector<Profile> two{Profile::unit_gaussian(1), Profile::unit_gaussian(1)};
    const double eps = 0.01;
    const SplitReport far = orthogonality_split_check(two, {{0.0}, {100 * eps}}, eps, 3);
    CHECK(far.gap < 0.01);
    CHECK(far.rhs == doctest::Approx(2 * kGaussFhat8).epsilon(1e-8).scale(0));  // ||f||_8 = ||fhat||_8 for Gaussians
    const SplitReport same = orthogonality_split_check(two, {{0.0}, {0.0}}, eps, 3);
    CHECK(same.gap == doctest::Approx(127.0).epsilon(1e-8).scale(0));  // 2^8 / 2 - 1
    CHECK_THROWS_AS(orthogonality_split_check(two, {{0.0}}, eps, 3), Error);

    std::mt19937 rng(5);
    std::normal_distribution<double> d;
    double worst = 0.0;
    for (int i = 0; i < 2000; ++i) {
        const cplx z1{d(rng), d(rng)}, z2{d(rng), d(rng)};
        worst = std::max(worst, nonlinearity_split_ratio(z1, z2, 3));
    }
    CHECK(worst < std::pow(2.0, 7));
    CHECK(nonlinearity_split_ratio({1, 0}, {0, 0}, 3) == 0.0);
}

TEST_CASE("exponents") {
    CHECK(delta_exponent(8, 1) == doctest::Approx(3.0 / 8).scale(0));
    CHECK(delta_exponent(INFINITY, 1) == 0.5);
    CHECK(admissible_check(8, 4, 1));
    CHECK(admissible_check(4, INFINITY, 1));
    CHECK(admissible_check(4, 4, 2));
    CHECK_FALSE(admissible_check(4, 8, 1));
    CHECK_FALSE(admissible_check(2, INFINITY, 2));
    CHECK(theta2_formula(1, 3) == doctest::Approx(8.0 / 21).scale(0));
    CHECK(theta2_formula(2, 2) == doctest::Approx(3.0 / 5).scale(0));
    CHECK_THROWS_AS(exponent_set(1, 2.0), Error);
    CHECK_THROWS_AS(exponent_set(2, 1.0), Error);

    // every produced tuple satisfies the relations it was built from
    for (int n : {1, 2}) {
        for (int i = 1; i <= 20; ++i) {
            const double sigma = 2.0 / n + (4.0 - 2.0 / n) * i / 20.0;
            CAPTURE(n);
            CAPTURE(sigma);
            const ExponentSet e = exponent_set(n, sigma);
            CHECK_NOTHROW(e.verify());
            CHECK(admissible_check(e.q, e.r, n));
            CHECK(e.theta1 > 0.0);
            CHECK(e.gamma > 0.0);
            CHECK(e.theta2 == doctest::Approx(theta2_formula(n, sigma)).scale(0));
        }
    }
}
