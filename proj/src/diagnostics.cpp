#include "snls/diagnostics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "snls/fft.hpp"
#include "snls/norms.hpp"

namespace snls {

// ---- trends ----

bool trend_decreasing(const std::vector<double>& v, double tol, int allowed) {
    if (v.size() < 2) return false;
    int bad = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i] < v[i - 1]) continue;
        if (v[i] > v[i - 1] * (1.0 + tol)) return false;
        ++bad;
    }
    // a flat series with tiny downward steps is not a decrease
    return bad <= allowed && v.back() < v.front() * (1.0 - tol);
}

bool trend_non_decreasing(const std::vector<double>& v, double tol, int allowed) {
    if (v.size() < 2) return false;
    int bad = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i] >= v[i - 1]) continue;
        if (v[i] < v[i - 1] * (1.0 - tol)) return false;
        ++bad;
    }
    return bad <= allowed;
}

bool strictly_decreasing(const std::vector<double>& v) { return trend_decreasing(v, 0.0, 0); }

// ---- linearizability ----

void check_stride_rule(const Trajectory& tr, double eps, const std::vector<double>& focus_times) {
    const auto& t = tr.diagnostics.times();
    for (double tf : focus_times) {
        for (std::size_t i = 1; i < t.size(); ++i) {
            const bool near = std::abs(t[i] - tf) <= 20 * eps || std::abs(t[i - 1] - tf) <= 20 * eps ||
                              (t[i - 1] < tf && t[i] > tf);
            if (near && t[i] - t[i - 1] > 0.2 * eps * (1 + 1e-9))
                throw Error(fmt::format("record spacing {} exceeds eps/5 = {} near focus t = {}", t[i] - t[i - 1],
                                        0.2 * eps, tf));
        }
    }
}

namespace {
double functional_value(double l2s, const Params& p) { return std::pow(l2s, 2.0 * p.sigma + 2.0); }
}  // namespace

double linearizability_functional(const Trajectory& v_tr, const Params& p, const std::vector<double>& focus_times) {
    check_stride_rule(v_tr, p.eps, focus_times);
    if (v_tr.diagnostics.size() == 0) throw Error("linearizability_functional: empty trajectory");
    double best = 0.0;
    for (double l : v_tr.diagnostics.channel("l2sigma_eps")) best = std::max(best, functional_value(l, p));
    return best;
}

VerdictRow linearizability_verdict(const Trajectory& u_tr, const Trajectory& v_tr, const Params& p,
                                   const std::vector<double>& focus_times) {
    if (u_tr.times.size() != v_tr.times.size()) throw Error("linearizability_verdict: snapshot counts differ");
    for (std::size_t i = 0; i < u_tr.times.size(); ++i)
        if (std::abs(u_tr.times[i] - v_tr.times[i]) > 1e-12 * std::max(1.0, std::abs(u_tr.times[i])))
            throw Error(fmt::format("linearizability_verdict: time grids differ at index {}", i));
    VerdictRow r;
    r.eps = p.eps;
    r.functional = linearizability_functional(v_tr, p, focus_times);
    const bool harmonic = p.potential == Potential::harmonic;
    for (std::size_t i = 0; i < u_tr.snapshots.size(); ++i) {
        const Field d = u_tr.snapshots[i] - v_tr.snapshots[i];
        const double l2 = norm_l2(d);
        const double g = grad_norm_eps(d, p.eps);
        const double m = harmonic ? moment_norm(d) : 0.0;
        r.sup_l2 = std::max(r.sup_l2, l2);
        r.sup_grad = std::max(r.sup_grad, g);
        r.sup_moment = std::max(r.sup_moment, m);
        r.sup_h1 = std::max(r.sup_h1, l2 + g + m);
    }
    return r;
}

DichotomyTrend dichotomy_trend(const std::vector<VerdictRow>& rows) {
    DichotomyTrend d;
    std::vector<VerdictRow> sorted = rows;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.eps > b.eps; });
    std::vector<double> f, h, l;
    for (const auto& r : sorted) {
        f.push_back(r.functional);
        h.push_back(r.sup_h1);
        l.push_back(r.sup_l2);
    }
    d.functional_decreasing = trend_decreasing(f);
    d.distance_decreasing = trend_decreasing(h);
    d.l2_non_decreasing = trend_non_decreasing(l);
    d.consistent = d.functional_decreasing == d.distance_decreasing;
    d.summary = d.functional_decreasing && d.distance_decreasing ? "linearizable"
                : (!d.functional_decreasing && !d.distance_decreasing) ? "nonlinear"
                                                                        : "inconsistent";
    return d;
}

// ---- norms in time ----

std::string lr_channel_name(double r) { return std::isinf(r) ? "lr:inf" : fmt::format("lr:{}", r); }

Channel lr_channel(double r) {
    return [r](const Field& u, double) { return norm_lr(u, r); };
}

namespace {

std::vector<double> lr_series(const Trajectory& tr, double r, std::vector<double>& times) {
    const auto& d = tr.diagnostics;
    if (d.has(lr_channel_name(r))) {
        times = d.times();
        return d.channel(lr_channel_name(r));
    }
    if (r == 2.0 && d.has("mass")) {
        times = d.times();
        std::vector<double> out;
        for (double m : d.channel("mass")) out.push_back(std::sqrt(m));
        return out;
    }
    if (std::isinf(r) && d.has("linf")) {
        times = d.times();
        return d.channel("linf");
    }
    times = tr.times;
    std::vector<double> out;
    for (const auto& s : tr.snapshots) out.push_back(norm_lr(s, r));
    return out;
}

}  // namespace

double spacetime_norm(const Trajectory& tr, double q, double r) {
    std::vector<double> t;
    const auto v = lr_series(tr, r, t);
    if (v.empty()) throw Error("spacetime_norm: empty trajectory");
    if (std::isinf(q)) return *std::max_element(v.begin(), v.end());
    if (v.size() == 1) return 0.0;
    double acc = 0.0;
    for (std::size_t i = 1; i < v.size(); ++i)
        acc += 0.5 * (t[i] - t[i - 1]) * (std::pow(v[i], q) + std::pow(v[i - 1], q));
    return std::pow(acc, 1.0 / q);
}

DecayFit decay_fit(const Trajectory& tr, double r, double t_focus, double eps) {
    std::vector<double> t;
    const auto v = lr_series(tr, r, t);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double d = std::abs(t[i] - t_focus);
        if (d < 5 * eps || d > 0.5 * t_focus || !(v[i] > 0)) continue;
        const double x = std::log(1.0 / (d + eps)), y = std::log(v[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 4) throw Error(fmt::format("decay_fit: only {} samples in the fit window", n));
    DecayFit f;
    f.samples = n;
    const double dn = static_cast<double>(n);
    const double den = dn * sxx - sx * sx;
    if (!(std::abs(den) > 0)) throw Error("decay_fit: degenerate window");
    f.slope = (dn * sxy - sx * sy) / den;
    f.intercept = (sy - f.slope * sx) / dn;
    return f;
}

// ---- operators ----

double galilean_norm(const Field& u, double eps, double t, double t_j, const std::vector<double>& x_j) {
    u.require(Space::physical, "galilean_norm");
    const int n = u.grid().dim();
    const auto c = point_or_origin(x_j, n);
    double acc = 0.0;
    for (int a = 0; a < n; ++a) {
        const Field g = gradient(u, a);
        for_each_point(u.grid(), [&](std::size_t i, double x0, double x1) {
            const double x = (a == 0 ? x0 : x1) - c[a];
            acc += std::norm(x / eps * u[i] + cplx(0, t - t_j) * g[i]);
        });
    }
    return std::sqrt(acc * u.grid().cell());
}

ABImages ab_operators(const Field& u, double eps, double t) {
    u.require(Space::physical, "ab_operators");
    ABImages out;
    const double s = std::sin(t), c = std::cos(t);
    for (int a = 0; a < u.grid().dim(); ++a) {
        const Field g = gradient(u, a);
        Field A(u.grid_ptr()), B(u.grid_ptr());
        for_each_point(u.grid(), [&](std::size_t i, double x0, double x1) {
            const double x = a == 0 ? x0 : x1;
            A[i] = x * s * u[i] - cplx(0, eps * c) * g[i];
            B[i] = x * c * u[i] + cplx(0, eps * s) * g[i];
        });
        out.A.push_back(std::move(A));
        out.B.push_back(std::move(B));
    }
    return out;
}

double ab_identity_residual(const Field& u, double eps, double t) {
    const auto ab = ab_operators(u, eps, t);
    const int n = u.grid().dim();
    std::vector<Field> grads;
    for (int a = 0; a < n; ++a) grads.push_back(gradient(u, a));
    double res = 0.0, ref = 0.0;
    for_each_point(u.grid(), [&](std::size_t i, double x0, double x1) {
        double lhs = 0.0, rhs = (x0 * x0 + x1 * x1) * std::norm(u[i]);
        for (int a = 0; a < n; ++a) {
            lhs += std::norm(ab.A[a][i]) + std::norm(ab.B[a][i]);
            rhs += eps * eps * std::norm(grads[a][i]);
        }
        res += std::abs(lhs - rhs);
        ref += rhs;
    });
    return ref > 0 ? res / ref : res;
}

// ---- concentration ----

std::vector<std::pair<std::string, Channel>> centroid_channels(int dim) {
    std::vector<std::pair<std::string, Channel>> out;
    for (int a = 0; a < dim; ++a)
        out.emplace_back(fmt::format("centroid_x{}", a), [a](const Field& u, double) { return centroid(u)[a]; });
    return out;
}

std::vector<Detection> concentration_detect(const Trajectory& v_tr, const Params& p, double reference,
                                            double tau_fraction) {
    const auto& d = v_tr.diagnostics;
    const auto& t = d.times();
    const auto& l = d.channel("l2sigma_eps");
    const double tau = tau_fraction * reference;
    std::vector<double> f;
    for (double x : l) f.push_back(functional_value(x, p));
    std::vector<Detection> out;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] <= tau) continue;
        const bool left = i == 0 || f[i] > f[i - 1];
        const bool right = i + 1 == f.size() || f[i] >= f[i + 1];
        // endpoints only count when the window clips a genuine rise
        if (!left || !right || i == 0 || i + 1 == f.size()) continue;
        const double spacing = std::max(t[i] - t[i - 1], t[i + 1] - t[i]);
        if (spacing > 0.2 * p.eps * (1 + 1e-9))
            throw Error(fmt::format("concentration_detect: record spacing {} near peak t = {} exceeds eps/5; re-run "
                                    "with a finer record stride",
                                    spacing, t[i]));
        Detection det;
        det.t = t[i];
        det.strength = f[i];
        for (int a = 0; a < p.n; ++a) {
            const std::string name = fmt::format("centroid_x{}", a);
            det.x.push_back(d.has(name) ? d.channel(name)[i] : 0.0);
        }
        out.push_back(std::move(det));
    }
    return out;
}

// ---- splitting ----

SplitReport orthogonality_split_check(const std::vector<Profile>& profiles, const std::vector<std::vector<double>>& cores,
                                      double eps, double sigma) {
    if (profiles.empty() || profiles.size() != cores.size())
        throw Error("orthogonality_split_check: need one core per profile");
    const int n = profiles.front().dim();
    const double r = 2.0 * sigma + 2.0;
    // rescaled variable y = x / eps; the eps powers cancel exactly
    std::vector<double> lo(n, 0.0), hi(n, 0.0);
    double w = 0.0;
    for (std::size_t j = 0; j < profiles.size(); ++j) {
        const auto c = point_or_origin(cores[j], n);
        w = std::max(w, profiles[j].width());
        for (int a = 0; a < n; ++a) {
            lo[a] = std::min(lo[a], c[a] / eps);
            hi[a] = std::max(hi[a], c[a] / eps);
        }
    }
    const double pad = 14.0 * std::max(w, 1.0);
    const double h = 0.05 * std::min(w, 1.0);
    std::vector<double> L(n);
    std::vector<std::size_t> N(n);
    std::vector<double> mid(n);
    for (int a = 0; a < n; ++a) {
        L[a] = hi[a] - lo[a] + 2 * pad;
        std::size_t m = 8;
        while (L[a] / static_cast<double>(m) > h) m *= 2;
        if (n == 2 && m > 4096) throw Error("orthogonality_split_check: window overflow");
        if (m > (1u << 22)) throw Error("orthogonality_split_check: window overflow");
        N[a] = m;
        mid[a] = 0.5 * (hi[a] + lo[a]);
    }
    const auto g = make_grid(n, L, N);
    Field sum(g);
    SplitReport rep;
    for (std::size_t j = 0; j < profiles.size(); ++j) {
        auto c = point_or_origin(cores[j], n);
        for (int a = 0; a < n; ++a) c[a] = c[a] / eps - mid[a];
        const Field part = profiles[j].sample(g, 1.0, c);
        const double tail = 1.0 - mass_in_window(part, 1.0 - 2.0 * (pad / 2.0) / L[0]);
        if (tail > 1e-8) throw Error("orthogonality_split_check: profile tail leaves the window");
        rep.rhs += std::pow(norm_lr(part, r), r);
        sum += part;
    }
    rep.lhs = std::pow(norm_lr(sum, r), r);
    rep.gap = std::abs(rep.lhs - rep.rhs) / rep.rhs;
    return rep;
}

double nonlinearity_split_ratio(cplx z1, cplx z2, double sigma) {
    const auto g = [sigma](cplx z) { return std::pow(std::abs(z), 2.0 * sigma) * z; };
    const double num = std::abs(g(z1 + z2) - g(z1) - g(z2));
    const double a = std::abs(z1), b = std::abs(z2);
    const double den = std::pow(a, 2.0 * sigma) * b + std::pow(b, 2.0 * sigma) * a;
    return den > 0 ? num / den : 0.0;
}

}  // namespace snls
