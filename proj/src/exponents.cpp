#include "snls/exponents.hpp"

#include <fmt/format.h>

#include <cmath>

#include "snls/grid.hpp"

namespace snls {

double delta_exponent(double r, int n) {
    if (!(r >= 2.0)) throw Error("delta_exponent: need r >= 2");
    if (std::isinf(r)) return 0.5 * n;
    return n * (0.5 - 1.0 / r);
}

bool admissible_check(double q, double r, int n) {
    if (!(r >= 2.0)) return false;
    if (std::isinf(r) && n != 1) return false;
    if (n != 1 && n != 2) return false;
    const double lhs = std::isinf(q) ? 0.0 : 2.0 / q;
    return std::abs(lhs - delta_exponent(r, n)) <= 1e-12;
}

double theta2_formula(int n, double sigma) {
    return (2.0 * sigma + 2.0) * (n * sigma - 2.0) / (n * sigma * (2.0 * sigma + 1.0));
}

namespace {
double conj_inv(double p) { return 1.0 - 1.0 / p; }  // 1/p'
}  // namespace

void ExponentSet::verify() const {
    const auto fail = [&](const std::string& what) {
        throw Error(fmt::format("exponent set (n={}, sigma={}) fails: {} [q={}, r={}, s={}, k={}]", n, sigma, what, q,
                                r, s, k));
    };
    if (!(sigma > 2.0 / n)) fail("sigma > 2/n");
    if (!admissible_check(q, r, n)) fail("(q, r) admissible");
    if (std::abs(conj_inv(r) - (1.0 / r + 2.0 * sigma / s)) > 1e-12) fail("1/r' = 1/r + 2 sigma/s");
    if (std::abs(conj_inv(q) - (1.0 / q + 2.0 * sigma / k)) > 1e-12) fail("1/q' = 1/q + 2 sigma/k");
    if (!(s >= 2.0)) fail("s >= 2");
    const double ds = delta_exponent(s, n);
    if (!(0.0 < 2.0 / k && 2.0 / k < ds && ds < 1.0)) fail("0 < 2/k < delta(s) < 1");
    if (!(theta1 > 0.0 && theta1 < 1.0)) fail("theta1 in (0,1)");
    if (!(theta2 > 0.0 && theta2 < 1.0)) fail("theta2 in (0,1)");
    if (!(gamma > 0.0)) fail("gamma > 0");
    const double d2 = delta_exponent(2.0 * sigma + 2.0, n);
    if (std::abs(theta1 - (ds - 2.0 / k) / d2) > 1e-12) fail("theta1 formula");
    if (std::abs(gamma - 2.0 * sigma * theta1 * (1.0 - d2)) > 1e-12) fail("gamma formula");
}

ExponentSet exponent_set(int n, double sigma) {
    if (n != 1 && n != 2) throw Error("exponent_set: n must be 1 or 2");
    if (!(sigma > 2.0 / n))
        throw Error(fmt::format("exponent_set: sigma = {} <= 2/n = {}; gamma > 0 fails at and below the "
                                "L^2-critical power, refusing",
                                sigma, 2.0 / n));
    const double d2 = delta_exponent(2.0 * sigma + 2.0, n);
    ExponentSet e;
    e.n = n;
    e.sigma = sigma;
    e.theta2 = theta2_formula(n, sigma);
    for (int i = 1; i <= 200000; ++i) {
        const double r = 2.0 + 0.01 * i;
        const double dr = delta_exponent(r, n);
        if (dr >= 1.0) break;
        const double q = 2.0 / dr;
        if (!(q > 2.0)) continue;
        const double s = 2.0 * sigma * r / (r - 2.0);
        const double k = 2.0 * sigma * q / (q - 2.0);
        if (!(s >= 2.0)) continue;
        const double ds = delta_exponent(s, n);
        if (!(0.0 < 2.0 / k && 2.0 / k < ds && ds < 1.0)) continue;
        e.q = q;
        e.r = r;
        e.s = s;
        e.k = k;
        e.theta1 = (ds - 2.0 / k) / d2;
        e.gamma = 2.0 * sigma * e.theta1 * (1.0 - d2);
        e.verify();
        return e;
    }
    throw Error(fmt::format("exponent_set: no feasible (q, r, s, k) found for n = {}, sigma = {}", n, sigma));
}

}  // namespace snls
