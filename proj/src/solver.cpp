#include "snls/solver.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "snls/fft.hpp"
#include "snls/norms.hpp"
#include "snls/snapshot.hpp"

namespace snls {

// ---- DiagnosticSeries ----

const std::vector<double>& DiagnosticSeries::channel(const std::string& name) const {
    auto it = data_.find(name);
    if (it == data_.end()) throw Error("diagnostics: no channel '" + name + "'");
    return it->second;
}

void DiagnosticSeries::push(double t, const std::vector<std::pair<std::string, double>>& values) {
    if (t_.empty() && names_.empty()) {
        for (const auto& [k, v] : values) {
            names_.push_back(k);
            data_[k];
        }
    }
    if (values.size() != names_.size()) throw Error("diagnostics: channel set changed between rows");
    if (!t_.empty() && !(t > t_.back())) throw Error("diagnostics: times must increase");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i].first != names_[i]) throw Error("diagnostics: channel order changed");
        data_[names_[i]].push_back(values[i].second);
    }
    t_.push_back(t);
}

void DiagnosticSeries::add_channel(const std::string& name, std::vector<double> values) {
    if (values.size() != t_.size()) throw Error("diagnostics: channel length mismatch for '" + name + "'");
    if (!data_.count(name)) names_.push_back(name);
    data_[name] = std::move(values);
}

std::string DiagnosticSeries::csv_header() const {
    std::string s = "t";
    for (const auto& n : names_) s += "," + n;
    return s + "\n";
}

std::string DiagnosticSeries::csv_row(std::size_t i) const {
    std::string s = fmt::format("{}", t_[i]);
    for (const auto& n : names_) s += fmt::format(",{}", data_.at(n)[i]);
    return s + "\n";
}

std::string DiagnosticSeries::to_csv() const {
    std::string s = csv_header();
    for (std::size_t i = 0; i < t_.size(); ++i) s += csv_row(i);
    return s;
}

// ---- energies ----

double linear_energy(const Field& u, const Params& p) {
    const double g = grad_norm_eps(u, p.eps);
    double e = 0.5 * g * g;
    if (p.potential == Potential::harmonic) {
        const double m = moment_norm(u);
        e += 0.5 * m * m;
    }
    return e;
}

double nonlinear_energy(const Field& u, const Params& p, double coupling) {
    double e = linear_energy(u, p);
    if (coupling != 0.0) {
        const double r = 2.0 * p.sigma + 2.0;
        e += coupling * std::pow(p.eps, p.n * p.sigma) / (p.sigma + 1.0) * std::pow(norm_lr(u, r), r);
    }
    return e;
}

// ---- schedule ----

double Schedule::time(std::size_t s) const { return t0 + static_cast<double>(s) * dt; }

Schedule make_schedule(const Params& p, const SolveConfig& cfg) {
    if (!(cfg.t1 > cfg.t0)) throw Error("solve: need t1 > t0");
    const double bound = cfg.dt_factor * p.eps;
    double dt = cfg.dt > 0 ? cfg.dt : cfg.default_step(p.eps);
    if (dt > bound * (1.0 + 1e-12) && !cfg.allow_large_dt)
        throw Error(fmt::format("solve: dt = {} exceeds {} * eps = {}", dt, cfg.dt_factor, bound));
    Schedule s;
    s.t0 = cfg.t0;
    const double span = cfg.t1 - cfg.t0;
    s.steps = static_cast<std::size_t>(std::ceil(span / dt - 1e-9));
    if (s.steps == 0) s.steps = 1;
    s.dt = span / static_cast<double>(s.steps);
    std::size_t rs = cfg.record_stride;
    if (rs == 0) rs = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(0.2 * p.eps / s.dt + 1e-9)));
    for (std::size_t k = 0; k <= s.steps; k += rs) s.records.push_back(k);
    if (s.records.back() != s.steps) s.records.push_back(s.steps);
    if (cfg.snapshot_stride == 0) {
        s.snapshots = {0, s.steps};
    } else {
        for (std::size_t k = 0; k <= s.steps; k += cfg.snapshot_stride) s.snapshots.push_back(k);
        if (s.snapshots.back() != s.steps) s.snapshots.push_back(s.steps);
    }
    return s;
}

// ---- split-step kernel ----

namespace {

class Stepper {
public:
    Stepper(const Grid& g, const Params& p, double dt, int sign, double coupling,
            std::function<double(double)> coupling_t)
        : g_(g), p_(p), sign_(sign), coupling_(coupling), coupling_t_(std::move(coupling_t)) {
        for (int a = 0; a < g.dim(); ++a) shape_.push_back(g.points(a));
        // kinetic multiplier in raw FFT order, normalisation folded in
        std::vector<std::vector<cplx>> axis(g.dim());
        for (int a = 0; a < g.dim(); ++a) {
            const std::size_t N = g.points(a);
            axis[a].resize(N);
            for (std::size_t j = 0; j < N; ++j) {
                const double k = (j < N / 2 ? static_cast<double>(j) : static_cast<double>(j) - static_cast<double>(N)) *
                                 2.0 * std::numbers::pi / g.extent(a);
                axis[a][j] = std::polar(1.0 / static_cast<double>(N), -0.5 * p.eps * dt * k * k);
            }
        }
        K_.resize(g.size());
        if (g.dim() == 1) {
            K_ = axis[0];
        } else {
            const std::size_t n1 = g.points(1);
            for (std::size_t i = 0; i < g.points(0); ++i)
                for (std::size_t j = 0; j < n1; ++j) K_[i * n1 + j] = axis[0][i] * axis[1][j];
        }
        if (p.potential == Potential::harmonic) {
            V_.resize(g.size());
            for_each_point(g, [&](std::size_t i, double x0, double x1) { V_[i] = 0.5 * (x0 * x0 + x1 * x1); });
        }
        nl_ = sign_ * coupling_ * std::pow(p.eps, p.n * p.sigma);
        isig_ = (p.sigma == std::floor(p.sigma) && p.sigma <= 16) ? static_cast<int>(p.sigma) : -1;
    }

    // u *= exp(-i (h/eps)(V + c eps^{n sigma} |u|^{2 sigma}))
    void phase(cvec& u, double h, double t) const {
        const double c = nl_ * (coupling_t_ ? coupling_t_(t) : 1.0);
        const double f = -h / p_.eps;
        const bool pot = !V_.empty();
        if (c == 0.0 && !pot) return;
        for (std::size_t i = 0; i < u.size(); ++i) {
            double w = 0.0;
            if (c != 0.0) {
                const double a2 = std::norm(u[i]);
                double pw;
                if (isig_ >= 0) {
                    pw = 1.0;
                    for (int k = 0; k < isig_; ++k) pw *= a2;
                } else {
                    pw = std::pow(a2, p_.sigma);
                }
                w = c * pw;
            }
            if (pot) w += V_[i];
            u[i] *= std::polar(1.0, f * w);
        }
    }

    void kinetic(cvec& u) const {
        fft_inplace(u.data(), shape_, -1);
        for (std::size_t i = 0; i < u.size(); ++i) u[i] *= K_[i];
        fft_inplace(u.data(), shape_, +1);
    }

private:
    const Grid& g_;
    Params p_;
    int sign_;
    double coupling_;
    std::function<double(double)> coupling_t_;
    std::vector<std::size_t> shape_;
    cvec K_;
    std::vector<double> V_;
    double nl_;
    int isig_;
};

double max_modulus(const cvec& u) {
    double m = 0.0;
    for (const auto& z : u) m = std::max(m, std::abs(z));
    return m;
}

std::vector<std::pair<std::string, double>> standard_row(const Field& u, const Params& p, double coupling,
                                                         double t, const SolveConfig& cfg) {
    std::vector<std::pair<std::string, double>> row;
    row.emplace_back("mass", mass(u));
    row.emplace_back("energy", nonlinear_energy(u, p, coupling * (cfg.coupling_t ? cfg.coupling_t(t) : 1.0)));
    row.emplace_back("linf", norm_lr(u, kInf));
    row.emplace_back("l2sigma_eps", norm_l2sigma_eps(u, p.eps, p.sigma, p.n));
    for (const auto& [name, fn] : cfg.channels) row.emplace_back(name, fn(u, t));
    return row;
}

class CsvStream {
public:
    explicit CsvStream(const std::string& path) : path_(path) {
        if (path_.empty()) return;
        tmp_ = path_ + ".partial";
        os_.open(tmp_, std::ios::trunc);
        if (!os_) throw Error("cannot open " + tmp_);
    }
    void row(const DiagnosticSeries& d) {
        if (path_.empty()) return;
        if (d.size() == 1) os_ << d.csv_header();
        os_ << d.csv_row(d.size() - 1);
        os_.flush();
    }
    void finish() {
        if (path_.empty()) return;
        os_.close();
        std::rename(tmp_.c_str(), path_.c_str());
    }

private:
    std::string path_, tmp_;
    std::ofstream os_;
};

}  // namespace

Field strang_step(const Field& u, double dt, const Params& p) {
    u.require(Space::physical, "strang_step");
    Stepper st(u.grid(), p, dt, +1, 1.0, {});
    cvec v = u.values();
    st.phase(v, 0.5 * dt, 0.0);
    st.kinetic(v);
    st.phase(v, 0.5 * dt, dt);
    for (const auto& z : v)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw Error("strang_step: non-finite value");
    return Field(u.grid_ptr(), std::move(v));
}

Trajectory solve(const Field& u0, const Params& p, const SolveConfig& cfg) {
    u0.require(Space::physical, "solve");
    if (u0.grid().dim() != p.n) throw Error("solve: grid dimension differs from n");
    const Schedule sch = make_schedule(p, cfg);
    Trajectory tr;
    tr.params = p;
    tr.dt = sch.dt;
    Stepper st(u0.grid(), p, sch.dt, cfg.nonlinearity_sign, cfg.coupling, cfg.coupling_t);
    const double guard = cfg.blowup_factor * std::pow(p.eps, -0.5 * p.n) * max_modulus(u0.values());
    CsvStream csv(cfg.csv_path);

    std::size_t ri = 0, si = 0;
    cvec v = u0.values();
    const auto observe = [&](std::size_t step) {
        const double t = sch.time(step);
        const bool rec = ri < sch.records.size() && sch.records[ri] == step;
        const bool snap = si < sch.snapshots.size() && sch.snapshots[si] == step;
        if (!rec && !snap) return;
        Field u(u0.grid_ptr(), v);
        if (rec) {
            const double m = max_modulus(v);
            if (!std::isfinite(m))
                throw Error(fmt::format("solve: non-finite values at t = {} (step {})", t, step));
            if (guard > 0 && m > guard)
                throw Error(fmt::format("solve: blow-up guard tripped at t = {}: max|u| = {} > {}", t, m, guard));
            if (cfg.mass_monitor) {
                const double w = mass_in_window(u, 0.5);
                if (w < 1.0 - cfg.mass_window_tol)
                    throw Error(fmt::format("solve: mass left the central half-window at t = {} (inside fraction {})",
                                            t, w));
            }
            tr.diagnostics.push(t, standard_row(u, p, cfg.coupling * cfg.nonlinearity_sign, t, cfg));
            csv.row(tr.diagnostics);
            ++ri;
        }
        if (snap) {
            if (cfg.on_snapshot) cfg.on_snapshot(u, t);
            if (cfg.store_snapshots) {
                tr.times.push_back(t);
                tr.snapshots.push_back(std::move(u));
            }
            ++si;
        }
    };

    observe(0);
    st.phase(v, 0.5 * sch.dt, sch.time(0));
    for (std::size_t s = 1; s <= sch.steps; ++s) {
        st.kinetic(v);
        const double t = sch.time(s);
        const bool stop = (ri < sch.records.size() && sch.records[ri] == s) ||
                          (si < sch.snapshots.size() && sch.snapshots[si] == s) || s == sch.steps;
        if (stop) {
            st.phase(v, 0.5 * sch.dt, t);
            observe(s);
            if (s != sch.steps) st.phase(v, 0.5 * sch.dt, t);
        } else {
            st.phase(v, sch.dt, t);  // two half steps fuse: |u| is unchanged by the phase
        }
    }
    csv.finish();
    return tr;
}

Trajectory linear_trajectory(const Field& u0, const Params& p, const SolveConfig& cfg) {
    u0.require(Space::physical, "linear_trajectory");
    const Schedule sch = make_schedule(p, cfg);
    Trajectory tr;
    tr.params = p;
    tr.dt = sch.dt;
    SolveConfig lin = cfg;
    lin.coupling = 0.0;
    lin.coupling_t = {};
    CsvStream csv(cfg.csv_path);
    if (p.potential == Potential::harmonic) check_mehler_resolution(u0, p.eps);
    std::size_t si = 0;
    std::vector<std::size_t> steps = sch.records;
    for (auto s : sch.snapshots) steps.push_back(s);
    std::sort(steps.begin(), steps.end());
    steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
    std::size_t ri = 0;
    for (auto s : steps) {
        const double t = sch.time(s);
        Field u = p.potential == Potential::harmonic ? mehler_propagate(u0, p.eps, t - cfg.t0)
                                                     : free_propagate(u0, p.eps, t - cfg.t0);
        if (ri < sch.records.size() && sch.records[ri] == s) {
            tr.diagnostics.push(t, standard_row(u, p, 0.0, t, lin));
            csv.row(tr.diagnostics);
            ++ri;
        }
        if (si < sch.snapshots.size() && sch.snapshots[si] == s) {
            if (cfg.on_snapshot) cfg.on_snapshot(u, t);
            if (cfg.store_snapshots) {
                tr.times.push_back(t);
                tr.snapshots.push_back(std::move(u));
            }
            ++si;
        }
    }
    csv.finish();
    return tr;
}

ConservationReport conservation_report(const Trajectory& tr) {
    ConservationReport r;
    const auto& d = tr.diagnostics;
    if (d.size() == 0 || !d.has("mass") || !d.has("energy")) throw Error("conservation_report: diagnostics missing");
    r.t = d.times();
    r.mass = d.channel("mass");
    r.energy = d.channel("energy");
    const double m0 = r.mass.front(), e0 = r.energy.front();
    for (std::size_t i = 0; i < r.t.size(); ++i) {
        r.mass_drift = std::max(r.mass_drift, std::abs(r.mass[i] - m0) / std::abs(m0));
        r.energy_drift = std::max(r.energy_drift, std::abs(r.energy[i] - e0) / std::abs(e0));
    }
    return r;
}

std::string ConservationReport::to_csv() const {
    std::string s = "t,mass,energy\n";
    for (std::size_t i = 0; i < t.size(); ++i) s += fmt::format("{},{},{}\n", t[i], mass[i], energy[i]);
    return s;
}

}  // namespace snls
