#include "snls/harness/experiments.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <mutex>
#include <numbers>
#include <random>
#include <thread>

#include "snls/diagnostics.hpp"
#include "snls/exponents.hpp"
#include "snls/fft.hpp"
#include "snls/norms.hpp"
#include "snls/propagators.hpp"
#include "snls/snapshot.hpp"

namespace snls::harness {

using nlohmann::json;
namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kDecayR = 8.0;  // Lebesgue index of the dispersive decay fit

std::string eps_tag(double eps) { return fmt::format("eps_{}", eps); }

bool harmonic(const Scenario& s) { return s.params.potential == Potential::harmonic; }

Params params_at(const Scenario& s, double eps) {
    Params p = s.params;
    p.eps = eps;
    return p;
}

SolveConfig base_config(const Scenario& s, double eps) {
    SolveConfig c;
    c.t0 = 0.0;
    c.t1 = s.params.T;
    const double dt = c.default_step(eps);
    c.snapshot_stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(s.snapshot_spacing / dt)));
    const auto [q, r] = admissible_pair(s.params.n);
    (void)q;
    c.channels.emplace_back(lr_channel_name(r), lr_channel(r));
    if (r != kDecayR) c.channels.emplace_back(lr_channel_name(kDecayR), lr_channel(kDecayR));
    for (auto& ch : centroid_channels(s.params.n)) c.channels.push_back(std::move(ch));
    return c;
}

// ||fhat||^{2 sigma + 2}_{L^{2 sigma + 2}} of an eps-independent profile
double fhat_norm_power(const Profile& f, double sigma, int n) {
    const auto g = make_grid(n, std::vector<double>(n, 64.0), std::vector<std::size_t>(n, n == 1 ? 4096 : 256));
    const double r = 2.0 * sigma + 2.0;
    const Field fh = to_spectral(f.sample(g));
    return std::pow(norm_lr(Field(fh.grid_ptr(), fh.values()), r), r);
}

std::vector<double> column(const std::vector<VerdictRow>& rows, double VerdictRow::*m) {
    std::vector<double> v;
    for (const auto& r : rows) v.push_back(r.*m);
    return v;
}

json verdict_json(const VerdictRow& r) {
    return {{"eps", r.eps},           {"functional", r.functional}, {"sup_l2", r.sup_l2},
            {"sup_grad", r.sup_grad}, {"sup_moment", r.sup_moment}, {"sup_h1", r.sup_h1}};
}

json screen_json(const ScreenReport& r) {
    json peaks = json::array();
    for (const auto& p : r.peaks) peaks.push_back({{"y", p.y}, {"param", p.param}, {"fraction", p.fraction}});
    json tubes = json::array();
    for (const auto& p : r.tubes) tubes.push_back({{"y", p.y}, {"param", p.param}, {"fraction", p.fraction}});
    return {{"mode", to_string(r.mode)},
            {"width", r.width},
            {"max_fraction", r.max_fraction},
            {"argmax", {{"y", r.argmax.y}, {"param", r.argmax.param}}},
            {"verdict", r.verdict},
            {"peaks", peaks},
            {"tubes", tubes},
            {"captured", r.captured}};
}

std::string short_num(double v) { return fmt::format("{:.4g}", v); }

std::string join(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + short_num(v[i]);
    return s;
}

}  // namespace

std::pair<double, double> admissible_pair(int n) {
    const auto qr = n == 1 ? std::pair{8.0, 4.0} : std::pair{4.0, 4.0};
    if (!admissible_check(qr.first, qr.second, n)) throw Error("admissible_pair: inconsistent table");
    return qr;
}

void parallel_indices(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = std::min<std::size_t>(std::max(1, threads), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex m;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next++) < count;) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(m);
                    if (!err) err = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

// ---- data and grids ----

Field data_item(const Scenario& s, const DataSpec& d, double eps, const GridPtr& g) {
    const int n = s.params.n;
    switch (d.kind) {
        case DataKind::gaussian: {
            Field f = Profile::gaussian(n, d.profile).sample(g);
            double k = 6.0 / d.profile.width;
            for (double p : point_or_origin(d.profile.momentum, n)) k += std::abs(p);
            check_resolution(*g, k, "gaussian datum");
            return f;
        }
        case DataKind::quadratic: return quadratic_datum(d.quadratic(n), eps, g);
        case DataKind::harmonic_quadratic: return harmonic_quadratic_datum(d.quadratic(n), eps, g);
    }
    throw Error("unreachable data kind");
}

Field scenario_datum(const Scenario& s, double eps, const GridPtr& g) {
    std::vector<Field> parts;
    std::vector<QuadraticDatum> foci;
    for (const auto& d : s.data) {
        parts.push_back(data_item(s, d, eps, g));
        if (d.kind != DataKind::gaussian) foci.push_back(d.quadratic(s.params.n));
    }
    std::optional<Field> rem;
    if (s.remainder) rem = data_item(s, *s.remainder, eps, g);
    return sum_data(parts, rem, foci).total;
}

GridPtr scenario_grid(const Scenario& s, double eps) {
    const int n = s.params.n;
    const auto grid_of = [&](std::size_t N) {
        return make_grid(n, std::vector<double>(n, s.L), std::vector<std::size_t>(n, N));
    };
    if (s.N != 0) return grid_of(s.N);
    const std::size_t cap = n == 1 ? (1u << 16) : 1024;
    for (std::size_t N = n == 1 ? 256 : 64; N <= cap; N *= 2) {
        const auto g = grid_of(N);
        try {
            const Field u0 = scenario_datum(s, eps, g);
            if (harmonic(s)) check_mehler_resolution(u0, eps);
            return g;
        } catch (const Error&) {
            // not resolved yet
        }
    }
    throw Error(fmt::format("scenario '{}': no admissible grid up to N = {} at eps = {}", s.name, cap, eps));
}

std::vector<double> scenario_foci(const Scenario& s) {
    std::vector<double> f;
    bool smooth = false;
    for (const auto& d : s.data) {
        if (d.kind == DataKind::gaussian) smooth = true;
        else
            for (double t = d.t_j; t <= s.params.T; t += harmonic(s) ? kPi : 1e300) f.push_back(t);
    }
    if (s.remainder) smooth = true;
    // non-oscillating data refocus at odd multiples of pi/2 in the trap
    if (harmonic(s) && smooth)
        for (double t = 0.5 * kPi; t <= s.params.T; t += kPi) f.push_back(t);
    std::sort(f.begin(), f.end());
    return f;
}

bool expected_linearizable(const Scenario& s) { return scenario_foci(s).empty(); }

// ---- simulate ----

Bundle simulate_experiment(const Scenario& s) {
    Bundle b;
    b.name = s.name;
    b.kind = "simulate";
    std::vector<json> rows(s.eps_sweep.size());
    std::vector<std::vector<std::pair<std::string, std::string>>> files(s.eps_sweep.size());
    parallel_indices(s.eps_sweep.size(), s.threads, [&](std::size_t i) {
        const double eps = s.eps_sweep[i];
        const auto g = scenario_grid(s, eps);
        const Field u0 = scenario_datum(s, eps, g);
        const Params p = params_at(s, eps);
        SolveConfig c = base_config(s, eps);
        const Trajectory tr = solve(u0, p, c);
        const auto cr = conservation_report(tr);
        rows[i] = {{"eps", eps}, {"N", g->points(0)}, {"dt", tr.dt}, {"mass_drift", cr.mass_drift},
                   {"energy_drift", cr.energy_drift}};
        files[i].emplace_back(eps_tag(eps) + "/diagnostics.csv", tr.diagnostics.to_csv());
        if (s.emit_snapshots)
            for (std::size_t k = 0; k < tr.snapshots.size(); ++k)
                files[i].emplace_back(fmt::format("{}/snap_{:05d}.snls", eps_tag(eps), k),
                                      encode_snapshot(tr.snapshots[k], eps, tr.times[k]));
    });
    b.report["runs"] = rows;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (auto& f : files[i]) b.files.push_back(std::move(f));
        b.check(fmt::format("mass conservation at eps = {}", s.eps_sweep[i]), "conservation of mass",
                rows[i]["mass_drift"].get<double>() <= 1e-10, short_num(rows[i]["mass_drift"].get<double>()));
        b.check(fmt::format("energy conservation at eps = {}", s.eps_sweep[i]), "conservation of nonlinear energy",
                rows[i]["energy_drift"].get<double>() <= 1e-6, short_num(rows[i]["energy_drift"].get<double>()));
    }
    return b;
}

// ---- linearizability ----

namespace {

struct LinRow {
    VerdictRow verdict;
    std::size_t N = 0;
    double strichartz = 0.0;  // eps^{1/q} ||v||_{L^q L^r}
    bool has_fit = false;
    DecayFit fit, fit_u;
    double mass_drift = 0, energy_drift = 0, lin_mass_drift = 0, lin_energy_drift = 0;
    bool has_screen = false;
    ScreenReport screen;
    std::vector<Detection> detections;
    std::vector<std::pair<std::string, std::string>> files;
};

}  // namespace

Bundle linearizability_experiment(const Scenario& s) {
    Bundle b;
    b.name = s.name;
    b.kind = "linearizability";
    const int n = s.params.n;
    const auto [q, r] = admissible_pair(n);
    const auto foci = scenario_foci(s);
    std::size_t quadratic_items = 0;
    const DataSpec* single = nullptr;
    for (const auto& d : s.data)
        if (d.kind != DataKind::gaussian) {
            ++quadratic_items;
            single = &d;
        }
    const bool one_focus = quadratic_items == 1 && s.data.size() == 1 && !s.remainder;
    // reference value: t_j^{-n sigma} ||fhat||^{2 sigma + 2} for one free focus
    double reference = fhat_norm_power(Profile::gaussian(n, s.data.front().profile), s.params.sigma, n);
    if (one_focus && !harmonic(s)) reference *= std::pow(single->t_j, -n * s.params.sigma);

    std::vector<LinRow> rows(s.eps_sweep.size());
    parallel_indices(s.eps_sweep.size(), s.threads, [&](std::size_t i) {
        const double eps = s.eps_sweep[i];
        const auto g = scenario_grid(s, eps);
        const Field u0 = scenario_datum(s, eps, g);
        const Params p = params_at(s, eps);
        const SolveConfig c = base_config(s, eps);
        const Trajectory v = linear_trajectory(u0, p, c);
        const Trajectory u = solve(u0, p, c);
        LinRow& row = rows[i];
        row.N = g->points(0);
        row.verdict = linearizability_verdict(u, v, p, foci);
        row.strichartz = std::pow(eps, 1.0 / q) * spacetime_norm(v, q, r);
        const auto cu = conservation_report(u), cv = conservation_report(v);
        row.mass_drift = cu.mass_drift;
        row.energy_drift = cu.energy_drift;
        row.lin_mass_drift = cv.mass_drift;
        row.lin_energy_drift = cv.energy_drift;
        if (one_focus && !harmonic(s) && s.params.T >= 1.5 * single->t_j) {
            row.has_fit = true;
            row.fit = decay_fit(v, kDecayR, single->t_j, eps);
            row.fit_u = decay_fit(u, kDecayR, single->t_j, eps);
        }
        row.detections = concentration_detect(v, p, reference);
        if (s.wigner && n == 1) {
            row.has_screen = true;
            row.screen = singularity_screen(u0, eps, s.params.T, harmonic(s) ? ScreenMode::harmonic : ScreenMode::free);
        }
        row.files.emplace_back(eps_tag(eps) + "/nonlinear.csv", u.diagnostics.to_csv());
        row.files.emplace_back(eps_tag(eps) + "/linear.csv", v.diagnostics.to_csv());
        if (s.emit_snapshots) {
            row.files.emplace_back(eps_tag(eps) + "/u_final.snls", encode_snapshot(u.snapshots.back(), eps, s.params.T));
            row.files.emplace_back(eps_tag(eps) + "/v_final.snls", encode_snapshot(v.snapshots.back(), eps, s.params.T));
        }
    });

    std::vector<VerdictRow> vr;
    json jr = json::array();
    for (auto& row : rows) {
        vr.push_back(row.verdict);
        json j = verdict_json(row.verdict);
        j["N"] = row.N;
        j["strichartz"] = row.strichartz;
        j["mass_drift"] = row.mass_drift;
        j["energy_drift"] = row.energy_drift;
        j["linear_mass_drift"] = row.lin_mass_drift;
        j["linear_energy_drift"] = row.lin_energy_drift;
        if (row.has_fit) {
            j["decay_fit"] = {{"slope", row.fit.slope}, {"samples", row.fit.samples}, {"slope_nonlinear", row.fit_u.slope}};
        }
        json det = json::array();
        for (const auto& d : row.detections) det.push_back({{"t", d.t}, {"x", d.x}, {"strength", d.strength}});
        j["detections"] = det;
        if (row.has_screen) j["screen"] = screen_json(row.screen);
        jr.push_back(j);
        for (auto& f : row.files) b.files.push_back(std::move(f));
    }
    const DichotomyTrend trend = dichotomy_trend(vr);
    const bool expect_lin = expected_linearizable(s);
    b.report["rows"] = jr;
    b.report["foci"] = foci;
    b.report["reference_functional"] = reference;
    b.report["expected"] = expect_lin ? "linearizable" : "nonlinear";
    b.report["trend"] = {{"functional_decreasing", trend.functional_decreasing},
                         {"distance_decreasing", trend.distance_decreasing},
                         {"l2_non_decreasing", trend.l2_non_decreasing},
                         {"consistent", trend.consistent},
                         {"summary", trend.summary}};

    const auto fcol = column(vr, &VerdictRow::functional), hcol = column(vr, &VerdictRow::sup_h1),
               lcol = column(vr, &VerdictRow::sup_l2);
    const std::string ref = harmonic(s) ? "trap linearizability equivalence" : "free linearizability equivalence";
    b.check("dichotomy consistent", ref, trend.consistent,
            fmt::format("functional [{}], sup H1_eps [{}]", join(fcol), join(hcol)));
    if (expect_lin) {
        b.check("functional decreasing", ref, trend_decreasing(fcol, s.tol.trend, s.tol.violations), join(fcol));
        b.check("H1_eps distance decreasing", ref, trend_decreasing(hcol, s.tol.trend, s.tol.violations), join(hcol));
    } else {
        b.check("L2 distance non-decreasing", ref, trend_non_decreasing(lcol, s.tol.trend, s.tol.violations),
                join(lcol));
        if (one_focus && !harmonic(s)) {
            const double last = fcol.back();
            b.check("functional near its focal limit", "focal limit of the linear functional",
                    std::abs(last - reference) <= s.tol.functional_band * reference,
                    fmt::format("{} vs {}", short_num(last), short_num(reference)));
        }
    }
    if (rows.back().has_fit) {
        const double target = delta_exponent(kDecayR, n);
        b.check(fmt::format("dispersive decay exponent in L^{}", kDecayR), "linear decay away from the focus",
                std::abs(rows.back().fit.slope - target) <= 0.1 * target,
                fmt::format("slope {} vs {}", short_num(rows.back().fit.slope), short_num(target)));
    }
    {
        std::vector<double> st;
        for (const auto& row : rows) st.push_back(row.strichartz);
        const double hi = *std::max_element(st.begin(), st.end()), lo = *std::min_element(st.begin(), st.end());
        if (expect_lin)
            b.check("scaled Strichartz norm decreasing", "Strichartz sharpness", trend_decreasing(st, s.tol.trend,
                                                                                                  s.tol.violations),
                    join(st));
        else if (!harmonic(s))
            b.check("scaled Strichartz norm stable", "Strichartz sharpness", hi <= 2.0 * lo, join(st));
    }
    if (rows.front().has_screen) {
        std::vector<double> sm;
        for (const auto& row : rows) sm.push_back(row.screen.captured);
        const bool screen_dec = trend_decreasing(sm, s.tol.trend, s.tol.violations) && sm.back() < 0.95 * sm.front();
        const bool verdict_lin = trend.functional_decreasing && trend.distance_decreasing;
        b.report["screen_decreasing"] = screen_dec;
        b.check("screen agrees with verdict", "Wigner singularity criterion", screen_dec == verdict_lin,
                fmt::format("screen captured [{}]", join(sm)));
    }

    // one trend file per channel
    const auto trend_file = [&](const std::string& name, auto value) {
        PlotFile pf{"trend_" + name, {"eps", name}, {}};
        for (const auto& row : rows) pf.rows.push_back({row.verdict.eps, value(row)});
        b.plots.push_back(std::move(pf));
    };
    trend_file("functional", [](const LinRow& r) { return r.verdict.functional; });
    trend_file("sup_l2", [](const LinRow& r) { return r.verdict.sup_l2; });
    trend_file("sup_h1", [](const LinRow& r) { return r.verdict.sup_h1; });
    trend_file("strichartz", [](const LinRow& r) { return r.strichartz; });
    if (rows.front().has_screen) trend_file("screen", [](const LinRow& r) { return r.screen.captured; });
    return b;
}

// ---- superposition ----

Bundle superposition_experiment(const Scenario& s) {
    Bundle b;
    b.name = s.name;
    b.kind = "superposition";
    const int n = s.params.n;
    struct Row {
        double eps = 0, defect = 0, defect_h1 = 0;
        std::size_t N = 0;
    };
    std::vector<Row> rows(s.eps_sweep.size());
    parallel_indices(s.eps_sweep.size(), s.threads, [&](std::size_t i) {
        const double eps = s.eps_sweep[i];
        const auto g = scenario_grid(s, eps);
        const Params p = params_at(s, eps);
        SolveConfig c = base_config(s, eps);
        c.channels.clear();
        const Field u0 = scenario_datum(s, eps, g);
        const Trajectory u = solve(u0, p, c);
        std::vector<Trajectory> parts;
        for (const auto& d : s.data) parts.push_back(solve(data_item(s, d, eps, g), p, c));
        std::optional<Trajectory> rem;
        if (s.remainder) rem = linear_trajectory(data_item(s, *s.remainder, eps, g), p, c);
        Row& row = rows[i];
        row.eps = eps;
        row.N = g->points(0);
        for (std::size_t k = 0; k < u.snapshots.size(); ++k) {
            Field d = u.snapshots[k];
            for (const auto& v : parts) d -= v.snapshots[k];
            if (rem) d -= rem->snapshots[k];
            row.defect = std::max(row.defect, norm_l2(d));
            if (!rem) row.defect_h1 = std::max(row.defect_h1, norm_h1_eps(d, eps) + (harmonic(s) ? moment_norm(d) : 0.0));
        }
    });
    json jr = json::array();
    std::vector<double> dcol, hcol;
    for (const auto& r : rows) {
        json j = {{"eps", r.eps}, {"N", r.N}, {"defect_l2", r.defect}};
        if (!s.remainder) j["defect_h1"] = r.defect_h1;
        jr.push_back(j);
        dcol.push_back(r.defect);
        hcol.push_back(r.defect_h1);
    }
    b.report["rows"] = jr;
    b.report["J"] = s.data.size();
    b.report["remainder"] = s.remainder ? "schwartz" : "zero";
    const std::string ref = harmonic(s) ? "trap superposition of focusing data" : "superposition of focusing data";
    if (s.data.size() == 1 && !s.remainder) {
        b.check("single datum defect vanishes", ref, *std::max_element(dcol.begin(), dcol.end()) <= 1e-12, join(dcol));
    } else {
        b.check("defect decreasing", ref, trend_decreasing(dcol, s.tol.trend, s.tol.violations), join(dcol));
        if (!s.remainder) b.report["defect_h1_trend_decreasing"] = trend_decreasing(hcol, s.tol.trend, s.tol.violations);
    }
    (void)n;
    PlotFile pf{"defect", {"eps", "defect_l2", "defect_h1"}, {}};
    for (const auto& r : rows) pf.rows.push_back({r.eps, r.defect, r.defect_h1});
    b.plots.push_back(std::move(pf));
    return b;
}

// ---- caustic ----

Bundle caustic_experiment(const Scenario& s) {
    Bundle b;
    b.name = s.name;
    b.kind = "caustic";
    const QuadraticDatum d = s.data.front().quadratic(s.params.n);
    CausticOptions opt;
    opt.L = s.L;
    opt.scatter = s.scatter;
    const auto rep = caustic_crossing_report(d, s.params, s.eps_sweep, opt);
    json jr = json::array();
    PlotFile pf{"caustic", {"eps", "pre_error", "post_error", "post_error_control", "extract_error"}, {}};
    for (const auto& r : rep.rows) {
        jr.push_back({{"eps", r.eps},
                      {"N", r.N},
                      {"pre_error", r.pre_error},
                      {"post_error", r.post_error},
                      {"post_error_control", r.post_error_control},
                      {"extract_error", r.extract_error}});
        pf.rows.push_back({r.eps, r.pre_error, r.post_error, r.post_error_control, r.extract_error});
    }
    b.report["rows"] = jr;
    b.report["z_gap"] = rep.z_gap;
    b.plots.push_back(std::move(pf));
    const auto& last = rep.rows.back();
    std::vector<double> pre, post, control;
    for (const auto& r : rep.rows) {
        pre.push_back(r.pre_error);
        post.push_back(r.post_error);
        control.push_back(r.post_error_control);
    }
    b.check("extracted profile matches Z f", "caustic crossing through the scattering operator",
            last.extract_error <= 0.05, short_num(last.extract_error));
    b.check("post-focus error decreasing with Z f", "caustic crossing through the scattering operator",
            rep.post_decreasing, join(post));
    b.check("control with g = f does not converge", "nonlinear effect at the caustic", rep.control_non_decreasing,
            join(control));
    b.check("pre-focus error decreasing", "linear behaviour before the focus", rep.pre_decreasing, join(pre));
    return b;
}

// ---- Wigner screen ----

Bundle wigner_experiment(const Scenario& s) {
    Bundle b;
    b.name = s.name;
    b.kind = "wigner_screen";
    if (s.params.n != 1) throw Error("wigner_screen scenarios need n = 1");
    std::vector<ScreenReport> reps(s.eps_sweep.size());
    std::vector<WignerTable> tables(s.eps_sweep.size());
    parallel_indices(s.eps_sweep.size(), s.threads, [&](std::size_t i) {
        const double eps = s.eps_sweep[i];
        const auto g = scenario_grid(s, eps);
        const Field u0 = scenario_datum(s, eps, g);
        const std::size_t stride = std::max<std::size_t>(1, g->points(0) / 256);
        tables[i] = wigner_transform(u0, eps, stride);
        reps[i] = singularity_screen(tables[i], s.params.T, harmonic(s) ? ScreenMode::harmonic : ScreenMode::free);
    });
    json jr = json::array();
    std::vector<double> sm;
    for (std::size_t i = 0; i < reps.size(); ++i) {
        json j = screen_json(reps[i]);
        j["eps"] = s.eps_sweep[i];
        j["total_mass"] = tables[i].total_mass();
        jr.push_back(j);
        sm.push_back(reps[i].captured);
        b.heatmaps.emplace_back(fmt::format("wigner_{}", eps_tag(s.eps_sweep[i])), tables[i]);
        if (s.emit_snapshots) b.files.emplace_back(eps_tag(s.eps_sweep[i]) + "/wigner.swig", tables[i].encode());
    }
    b.report["rows"] = jr;
    const bool dec = trend_decreasing(sm, s.tol.trend, s.tol.violations) && sm.back() < 0.95 * sm.front();
    b.report["screen_decreasing"] = dec;
    b.check("screen direction matches the data class", "Wigner singularity criterion", dec == expected_linearizable(s),
            join(sm));
    return b;
}

// ---- scattering ----

Bundle scattering_experiment(const Scenario& s) {
    Bundle b;
    b.name = s.name;
    b.kind = "scattering";
    ScatterConfig cfg = s.scatter;
    cfg.n = s.params.n;
    cfg.sigma = s.params.sigma;
    const auto ref = make_grid(cfg.n, std::vector<double>(cfg.n, 24.0),
                               std::vector<std::size_t>(cfg.n, cfg.n == 1 ? 2048 : 128));
    json jr = json::array();
    for (std::size_t i = 0; i < s.data.size(); ++i) {
        const Profile f = Profile::gaussian(cfg.n, s.data[i].profile);
        const Profile z = z_operator(f, cfg);
        const double gap = last_scatter_gap();
        const double nz = norm_l2(z.samples()), nf = norm_l2(f.sample(std::make_shared<const Grid>(z.samples().grid())));
        ScatterConfig quick = cfg;
        quick.check_doubling = false;
        quick.cache_dir.clear();
        const Profile z_unit = z_operator(f, quick, FourierConstant::unitary);
        const Profile z_phased = z_operator(f, quick, FourierConstant::phased);
        const double conv = profile_distance(z_phased, z_unit, ref);
        jr.push_back({{"profile", f.describe()},
                      {"gap", gap},
                      {"isometry_error", std::abs(nz - nf) / nf},
                      {"distance_to_identity", profile_distance(z, f, ref)},
                      {"convention_gap", conv}});
        b.check(fmt::format("Z isometry [{}]", i), "scattering operator preserves mass", std::abs(nz - nf) <= 1e-6 * nf,
                short_num(std::abs(nz - nf) / nf));
        b.check(fmt::format("horizon doubling [{}]", i), "existence of the scattering limit", gap <= cfg.tolerance,
                short_num(gap));
        b.check(fmt::format("Fourier constant independence [{}]", i), "gauge equivariance of the scattering operator",
                conv <= 1e-8, short_num(conv));
    }
    b.report["profiles"] = jr;
    return b;
}

// ---- harmonic suite ----

namespace {

// Random Gaussian-windowed WKB superposition, eps-scaled momenta.
Field random_packet(std::mt19937_64& rng, const GridPtr& g, double eps) {
    std::uniform_real_distribution<double> pos(-1.5, 1.5), mom(-1.0, 1.0), wid(0.5, 0.8), ph(0, 2 * kPi);
    Field f(g);
    for (int k = 0; k < 3; ++k) {
        const double a = pos(rng), p = mom(rng), w = wid(rng), th = ph(rng);
        for_each_point(*g, [&](std::size_t i, double x0, double) {
            f[i] += std::polar(1.0, th + p * x0 / eps) * std::exp(-(x0 - a) * (x0 - a) / (2 * w * w));
        });
    }
    f *= 1.0 / norm_l2(f);
    return f;
}

// smallest compatible grid with L >= min_L that passes the trap resolution check
GridPtr lens_grid(double eps, double min_L, const std::function<Field(const GridPtr&)>& make) {
    for (std::size_t N = 256; N <= (1u << 16); N *= 2) {
        const double L = mehler_compatible_extent(N, eps);
        if (L < min_L) continue;
        auto g = make_grid_1d(L, N);
        try {
            check_mehler_resolution(make(g), eps);
            return g;
        } catch (const Error&) {
        }
    }
    throw Error("lens grid: no admissible size");
}

// u(t, y) = (1 + s^2)^{n/4} e^{-i s |y|^2 / (2 eps)} w(s, y sqrt(1 + s^2)), s = tan t
Field inverse_lens(const Field& w, double eps, double t) {
    const double s = std::tan(t), lam = std::sqrt(1 + s * s);
    Field out = resample_scaled(w, lam, std::vector<double>(w.grid().dim(), 0.0));
    const int n = w.grid().dim();
    const double amp = std::pow(1 + s * s, n / 4.0);
    for_each_point(w.grid(), [&](std::size_t i, double x0, double x1) {
        out[i] *= amp * std::polar(1.0, -s * (x0 * x0 + x1 * x1) / (2 * eps));
    });
    return out;
}

}  // namespace

Bundle harmonic_suite(const Scenario& s) {
    Bundle b;
    b.name = s.name;
    b.kind = "harmonic_lens";
    if (s.params.n != 1) throw Error("harmonic_lens scenarios are implemented for n = 1");
    std::mt19937_64 rng(s.seed);
    json jr = json::array();
    double lens_worst = 0.0, period_worst = 0.0, ab_worst = 0.0, ground_worst = 0.0, nl_worst = 0.0;
    for (double eps : s.eps_sweep) {
        std::mt19937_64 local = rng;
        const auto make = [&](const GridPtr& g) {
            std::mt19937_64 r2 = local;
            return random_packet(r2, g, eps);
        };
        const auto g = lens_grid(eps, 16.0, make);
        const Field f = make(g);
        rng.discard(12);

        double lens = 0.0;
        for (double t : {0.25, 0.5, 0.7}) {
            const Field a = mehler_propagate(f, eps, t);
            const Field w = free_propagate(f, eps, std::tan(t));
            lens = std::max(lens, norm_l2(a - inverse_lens(w, eps, t)));
        }
        Field back = mehler_propagate(f, eps, 2 * kPi);
        back *= -1.0;  // (-1)^n
        const double period = norm_l2(back - f);
        double ab = 0.0;
        for (double t : {0.0, 0.4, kPi / 2, 2.5}) ab = std::max(ab, ab_identity_residual(f, eps, t));

        // eigenstate: v(t) = e^{-i n t/2} v0
        const Field v0 = Field::from_function(g, [&](double x, double) {
            return std::pow(kPi * eps, -0.25) * std::exp(-x * x / (2 * eps));
        });
        Field rot = mehler_propagate(v0, eps, 1.3);
        rot *= std::polar(1.0, 0.5 * 1.3);
        const double ground = norm_l2(rot - v0);

        // nonlinear lens: trap NLS to t vs transformed free NLS to tan t with (1 + s^2)^{n sigma/2 - 1}
        Params p = params_at(s, eps);
        const double tn = 0.5;
        Field amp = f;
        amp *= std::pow(eps, -0.5 * p.n) * 0.5;  // focal-size amplitude so the nonlinearity is felt
        SolveConfig ch;
        ch.t1 = tn;
        ch.mass_monitor = false;
        ch.record_stride = 1000000;
        const Field uh = solve(amp, p, ch).snapshots.back();
        Params pf = p;
        pf.potential = Potential::none;
        SolveConfig cf = ch;
        cf.t1 = std::tan(tn);
        const double e = p.n * p.sigma / 2.0 - 1.0;
        cf.coupling_t = [e](double s_) { return std::pow(1 + s_ * s_, e); };
        const Field uf = solve(amp, pf, cf).snapshots.back();
        const double nl = norm_l2(uh - inverse_lens(uf, eps, tn)) / norm_l2(uh);

        lens_worst = std::max(lens_worst, lens);
        period_worst = std::max(period_worst, period);
        ab_worst = std::max(ab_worst, ab);
        ground_worst = std::max(ground_worst, ground);
        nl_worst = std::max(nl_worst, nl);
        jr.push_back({{"eps", eps},
                      {"N", g->points(0)},
                      {"L", g->extent(0)},
                      {"lens_linear", lens},
                      {"period_2pi", period},
                      {"ab_identity", ab},
                      {"eigenstate", ground},
                      {"lens_nonlinear_relative", nl}});
    }
    b.report["rows"] = jr;
    b.check("linear lens cross-check", "lens transform", lens_worst <= s.tol.lens, short_num(lens_worst));
    b.check("2 pi periodicity up to (-1)^n", "trap propagator", period_worst <= 1e-10, short_num(period_worst));
    b.check("A/B pointwise identity", "pointwise identity for the A and B fields", ab_worst <= 1e-10,
            short_num(ab_worst));
    b.check("eigenstate rotation", "trap propagator", ground_worst <= 1e-10, short_num(ground_worst));
    b.report["lens_nonlinear_worst"] = nl_worst;

    // refocusing over [0, 2 pi] for the first harmonic quadratic datum
    for (const auto& d : s.data) {
        if (d.kind != DataKind::harmonic_quadratic) continue;
        const double eps = s.eps_sweep.front();
        Scenario one = s;
        one.data = {d};
        one.remainder.reset();
        one.params.T = 2 * kPi;
        const auto g = scenario_grid(one, eps);
        const Field u0 = scenario_datum(one, eps, g);
        SolveConfig c;
        c.t1 = 2 * kPi;
        const Params p = params_at(one, eps);
        const Trajectory v = linear_trajectory(u0, p, c);
        const double ref = fhat_norm_power(Profile::gaussian(1, d.profile), p.sigma, 1);
        const auto det = concentration_detect(v, p, ref, 0.05);
        bool ok = !det.empty();
        json jd = json::array();
        for (const auto& x : det) {
            const double m = std::fmod(x.t, kPi);
            const double dist = std::min(std::abs(m - std::fmod(d.t_j, kPi)), kPi - std::abs(m - std::fmod(d.t_j, kPi)));
            ok = ok && dist <= 5 * eps;
            jd.push_back({{"t", x.t}, {"strength", x.strength}});
        }
        b.report["refocusing"] = {{"eps", eps}, {"t_j", d.t_j}, {"detections", jd}};
        b.check("refocusing period pi", "focus recurrence in the trap", ok && det.size() >= 2,
                fmt::format("{} detections", det.size()));
        break;
    }
    return b;
}

// ---- dispatch ----

Bundle run_scenario(const Scenario& s) {
    s.validate();
    Bundle b;
    switch (s.kind) {
        case ExperimentKind::simulate: b = simulate_experiment(s); break;
        case ExperimentKind::linearizability: b = linearizability_experiment(s); break;
        case ExperimentKind::superposition: b = superposition_experiment(s); break;
        case ExperimentKind::caustic: b = caustic_experiment(s); break;
        case ExperimentKind::wigner_screen: b = wigner_experiment(s); break;
        case ExperimentKind::harmonic_lens: b = harmonic_suite(s); break;
        case ExperimentKind::scattering: b = scattering_experiment(s); break;
    }
    b.report["scenario"] = json::parse(scenario_to_json(s));
    if (!s.output_dir.empty()) write_bundle(b, s.output_dir);
    return b;
}

// ---- standard suite ----

namespace {

DataSpec gauss(double width = 1.0, std::vector<double> center = {}) {
    DataSpec d;
    d.kind = DataKind::gaussian;
    d.profile.width = width;
    d.profile.center = std::move(center);
    d.profile.amplitude = std::pow(kPi, -0.25) / std::sqrt(width);
    return d;
}

DataSpec quad(double tj, double xj, DataKind k = DataKind::quadratic) {
    DataSpec d = gauss();
    d.kind = k;
    d.t_j = tj;
    d.x_j = {xj};
    d.profile.center = {xj};
    return d;
}

Scenario base(const std::string& name, ExperimentKind k, double T) {
    Scenario s;
    s.name = name;
    s.kind = k;
    s.params.n = 1;
    s.params.sigma = 3.0;
    s.params.T = T;
    s.L = 32.0;
    s.eps_sweep = {0.08, 0.04, 0.02, 0.01};
    return s;
}

}  // namespace

std::vector<Scenario> standard_suite() {
    std::vector<Scenario> v;
    {
        auto s = base("schwartz", ExperimentKind::linearizability, 2.0);
        s.data = {gauss()};
        v.push_back(s);
    }
    {
        auto s = base("quadratic", ExperimentKind::linearizability, 2.0);
        s.data = {quad(1.0, 0.0)};
        v.push_back(s);
    }
    {
        auto s = base("two_focus", ExperimentKind::linearizability, 2.0);
        s.data = {quad(1.0, -2.0), quad(1.5, 2.0)};
        v.push_back(s);
    }
    {
        // the trap refocuses non-oscillating data at pi/2; stay well before it
        auto s = base("harmonic_schwartz", ExperimentKind::linearizability, 0.5);
        s.params.potential = Potential::harmonic;
        s.data = {gauss()};
        v.push_back(s);
    }
    {
        auto s = base("harmonic_quadratic", ExperimentKind::linearizability, 1.4);
        s.params.potential = Potential::harmonic;
        s.data = {quad(1.0, 0.0, DataKind::harmonic_quadratic)};
        v.push_back(s);
    }
    {
        auto s = base("superposition", ExperimentKind::superposition, 2.0);
        s.data = {quad(1.0, -2.0), quad(1.5, 2.0)};
        v.push_back(s);
    }
    {
        auto s = base("superposition_remainder", ExperimentKind::superposition, 2.0);
        s.data = {quad(1.0, -2.0), quad(1.5, 2.0)};
        s.remainder = gauss(1.0, {0.0});
        v.push_back(s);
    }
    {
        auto s = base("harmonic_superposition", ExperimentKind::superposition, 1.45);
        s.params.potential = Potential::harmonic;
        s.data = {quad(1.0, -2.0, DataKind::harmonic_quadratic), quad(1.3, 2.0, DataKind::harmonic_quadratic)};
        v.push_back(s);
    }
    return v;
}

Scenario standard_scenario(const std::string& name) {
    for (auto& s : standard_suite())
        if (s.name == name) return s;
    if (name == "caustic") {
        auto s = base("caustic", ExperimentKind::caustic, 2.0);
        s.data = {quad(1.0, 0.0)};
        return s;
    }
    if (name == "harmonic_lens") {
        auto s = base("harmonic_lens", ExperimentKind::harmonic_lens, 1.0);
        s.params.potential = Potential::harmonic;
        s.eps_sweep = {0.08, 0.04, 0.02};
        s.data = {quad(1.0, 0.0, DataKind::harmonic_quadratic)};
        return s;
    }
    if (name == "scattering") {
        auto s = base("scattering", ExperimentKind::scattering, 1.0);
        s.eps_sweep = {1.0};
        s.data = {gauss()};
        return s;
    }
    throw Error("unknown standard scenario '" + name + "'");
}

}  // namespace snls::harness
