#include "snls/scattering.hpp"

#include <fmt/format.h>
#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numbers>
#include <optional>
#include <sstream>

#include "snls/diagnostics.hpp"
#include "snls/fft.hpp"
#include "snls/norms.hpp"
#include "snls/propagators.hpp"
#include "snls/snapshot.hpp"

namespace snls {

namespace {
constexpr double kPi = std::numbers::pi;
thread_local double g_last_gap = 0.0;
std::mutex g_cache_mutex;
}  // namespace

void ScatterConfig::validate() const {
    if (n != 1 && n != 2) throw Error("scatter: n must be 1 or 2");
    if (!(sigma > 2.0 / n)) throw Error("scatter: sigma <= 2/n is the long-range case, not supported");
    if (!(T_s > 0)) throw Error("scatter: T_s must be positive");
    if (!(dt > 0) || dt > 0.05) throw Error("scatter: dt must lie in (0, 0.05]");
    if (!(tolerance > 0)) throw Error("scatter: tolerance must be positive");
    if (!(L > 0) || !is_pow2(N)) throw Error("scatter: need L > 0 and N a power of two");
}

std::string ScatterConfig::describe() const {
    return fmt::format("n={};sigma={};T_s={};dt={};tol={};doubling={};coupling={};L={};N={}", n, sigma, T_s, dt,
                       tolerance, check_doubling ? 1 : 0, coupling, L, N);
}

std::string config_hash(const std::string& key) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(key.data(), key.size(), md, &len, EVP_sha256(), nullptr) != 1) throw Error("sha256 failed");
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", md[i]);
    return hex;
}

namespace {

Field scatter_once(const Field& f, const ScatterConfig& cfg, double T, double& mass_err) {
    Params p;
    p.n = cfg.n;
    p.sigma = cfg.sigma;
    p.eps = 1.0;
    p.T = 2 * T;
    if (cfg.coupling == 0.0) {
        mass_err = 0.0;
        return f;
    }
    SolveConfig sc;
    sc.dt = cfg.dt;
    sc.dt_factor = std::max(0.01, cfg.dt);
    sc.t0 = -T;
    sc.t1 = T;
    sc.record_stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::round(1.0 / cfg.dt)));
    sc.coupling = cfg.coupling;
    sc.blowup_factor = cfg.blowup_factor;
    const Field start = free_propagate(f, 1.0, -T);
    Trajectory tr = solve(start, p, sc);
    const Field& end = tr.snapshots.back();
    const double m0 = mass(f);
    mass_err = m0 > 0 ? std::abs(mass(end) - m0) / m0 : 0.0;
    return free_propagate(end, 1.0, -T);
}

}  // namespace

ScatterResult scatter_field(const Field& f, const ScatterConfig& cfg) {
    cfg.validate();
    f.require(Space::physical, "scatter_field");
    ScatterResult r;
    if (mass(f) == 0.0) {
        r.field = f;
        return r;
    }
    double m1 = 0.0;
    Field a = scatter_once(f, cfg, cfg.T_s, m1);
    if (!cfg.check_doubling) {
        r.field = std::move(a);
        r.mass_error = m1;
        return r;
    }
    double m2 = 0.0;
    Field b = scatter_once(f, cfg, 2 * cfg.T_s, m2);
    r.gap = norm_l2(a - b) / norm_l2(b);
    r.mass_error = m2;
    if (r.gap > cfg.tolerance)
        throw Error(fmt::format("scatter: horizon doubling gap {} exceeds tolerance {} (T_s = {})", r.gap,
                                cfg.tolerance, cfg.T_s));
    r.field = std::move(b);
    return r;
}

Profile scatter_forward(const Profile& f, const ScatterConfig& cfg) {
    cfg.validate();
    const auto g = make_grid(cfg.n, std::vector<double>(cfg.n, cfg.L), std::vector<std::size_t>(cfg.n, cfg.N));
    auto r = scatter_field(f.sample(g), cfg);
    g_last_gap = r.gap;
    return Profile::from_samples(std::move(r.field));
}

double last_scatter_gap() { return g_last_gap; }

namespace {

std::string cache_key(const Profile& f, const ScatterConfig& cfg, FourierConstant c) {
    return "Z|" + f.describe() + "|" + cfg.describe() + (c == FourierConstant::phased ? "|phased" : "|unitary");
}

// index.tsv: <hash>\t<key>\t<file>, one line per entry, appended only
std::optional<Profile> cache_lookup(const std::string& dir, const std::string& key) {
    std::lock_guard lock(g_cache_mutex);
    const auto idx = std::filesystem::path(dir) / "index.tsv";
    std::ifstream in(idx);
    if (!in) return std::nullopt;
    const std::string h = config_hash(key);
    std::string line;
    while (std::getline(in, line)) {
        const auto a = line.find('\t');
        const auto b = line.rfind('\t');
        if (a == std::string::npos || b == a) continue;
        if (line.substr(0, a) != h) continue;
        if (line.substr(a + 1, b - a - 1) != key) continue;  // exact key match, not just the hash
        const auto snap = read_snapshot((std::filesystem::path(dir) / line.substr(b + 1)).string());
        return Profile::from_samples(snap.field);
    }
    return std::nullopt;
}

void cache_store(const std::string& dir, const std::string& key, const Field& f) {
    std::lock_guard lock(g_cache_mutex);
    std::filesystem::create_directories(dir);
    const std::string h = config_hash(key);
    const std::string file = h + ".snls";
    write_snapshot((std::filesystem::path(dir) / file).string(), f, 1.0, 0.0);
    std::ofstream out(std::filesystem::path(dir) / "index.tsv", std::ios::app);
    out << h << '\t' << key << '\t' << file << '\n';
    if (!out) throw Error("z cache: cannot append to index");
}

}  // namespace

Profile z_operator(const Profile& f, const ScatterConfig& cfg, FourierConstant c) {
    cfg.validate();
    const std::string key = cache_key(f, cfg, c);
    if (!cfg.cache_dir.empty())
        if (auto hit = cache_lookup(cfg.cache_dir, key)) return *hit;

    const auto g = make_grid(cfg.n, std::vector<double>(cfg.n, cfg.L), std::vector<std::size_t>(cfg.n, cfg.N));
    const auto d = std::make_shared<const Grid>(g->dual());
    Field fhat(d, f.sample(d).values(), Space::spectral);
    const Field phys = c == FourierConstant::unitary ? to_physical(fhat) : to_physical_alt(fhat);
    auto r = scatter_field(phys, cfg);
    g_last_gap = r.gap;
    const Field out = c == FourierConstant::unitary ? to_spectral(r.field) : to_spectral_alt(r.field);
    Field z(d, out.values(), Space::physical);
    if (!cfg.cache_dir.empty()) cache_store(cfg.cache_dir, key, z);
    return Profile::from_samples(std::move(z));
}

Profile extract_post_focus_profile(const Field& v, const QuadraticDatum& d, double t, const Params& p) {
    v.require(Space::physical, "extract_post_focus_profile");
    const double tj = d.t_j;
    if (!(t > tj + std::max(10 * p.eps, 0.1 * tj)))
        throw Error(fmt::format("extract_post_focus_profile: t = {} too close to (or before) the focus t_j = {}", t, tj));
    const int n = v.grid().dim();
    const auto xj = point_or_origin(d.x_j, n);
    const double lam = 1.0 - t / tj;
    const cplx amp = std::pow(std::abs(lam), 0.5 * n) * std::polar(1.0, kPi * n / 2.0);
    const double c = -1.0 / (2.0 * p.eps * (t - tj));
    Field w = v;
    for_each_point(v.grid(), [&](std::size_t i, double x0, double x1) {
        double r2 = (x0 - xj[0]) * (x0 - xj[0]);
        if (n == 2) r2 += (x1 - xj[1]) * (x1 - xj[1]);
        w[i] *= amp * std::polar(1.0, c * r2);
    });
    std::vector<double> shift(n);
    for (int a = 0; a < n; ++a) shift[a] = -xj[a] / lam;
    return Profile::from_samples(resample_scaled(w, lam, shift));
}

Profile extract_post_focus_profile(const Trajectory& tr, const QuadraticDatum& d, double t, const Params& p) {
    for (std::size_t i = 0; i < tr.times.size(); ++i)
        if (std::abs(tr.times[i] - t) <= 1e-9 * std::max(1.0, std::abs(t)))
            return extract_post_focus_profile(tr.snapshots[i], d, t, p);
    throw Error(fmt::format("extract_post_focus_profile: no snapshot at t = {}", t));
}

double profile_distance(const Profile& a, const Profile& b, const GridPtr& g) {
    const Field fa = a.sample(g), fb = b.sample(g);
    return norm_l2(fa - fb) / norm_l2(fb);
}

std::size_t quadratic_points(const QuadraticDatum& d, double eps, double L, int n) {
    const auto probe = make_grid(n, std::vector<double>(n, L), std::vector<std::size_t>(n, n == 1 ? 4096 : 256));
    const auto xj = point_or_origin(d.x_j, n);
    const double tj = d.t_j;
    const auto phi = [&](double x0, double x1) {
        double r2 = (x0 - xj[0]) * (x0 - xj[0]);
        if (n == 2) r2 += (x1 - xj[1]) * (x1 - xj[1]);
        return -r2 / (2.0 * tj);
    };
    const Field env = d.profile.sample(probe);
    return min_admissible_points(L, datum_wavenumber(env, phi, eps, d.profile.width()));
}

CausticReport caustic_crossing_report(const QuadraticDatum& d, const Params& p, const std::vector<double>& eps_sweep,
                                      const CausticOptions& opt) {
    CausticReport rep;
    ScatterConfig sc = opt.scatter;
    sc.n = p.n;
    sc.sigma = p.sigma;
    sc.coupling = opt.coupling;
    const Profile zf = z_operator(d.profile, sc);
    rep.z_gap = last_scatter_gap();
    const double t_pre = opt.pre_time_fraction * d.t_j, t_post = opt.post_time_factor * d.t_j;
    const auto ref = make_grid(p.n, std::vector<double>(p.n, 24.0), std::vector<std::size_t>(p.n, p.n == 1 ? 2048 : 128));

    for (double eps : eps_sweep) {
        Params q = p;
        q.eps = eps;
        q.T = t_post;
        const std::size_t N = quadratic_points(d, eps, opt.L, p.n);
        const auto g = make_grid(p.n, std::vector<double>(p.n, opt.L), std::vector<std::size_t>(p.n, N));
        const Field u0 = quadratic_datum(d, eps, g);

        SolveConfig c1;
        c1.t0 = 0.0;
        c1.t1 = t_pre;
        c1.coupling = opt.coupling;
        c1.record_stride = 1000000;
        const Field u_pre = solve(u0, q, c1).snapshots.back();
        SolveConfig c2 = c1;
        c2.t0 = t_pre;
        c2.t1 = t_post;
        const Field u_post = solve(u_pre, q, c2).snapshots.back();

        CausticRow row;
        row.eps = eps;
        row.N = N;
        const Field a_pre = caustic_approximant(d, eps, t_pre, FocusSide::pre, d.profile, g);
        row.pre_error = norm_h1_eps(u_pre - a_pre, eps) / norm_h1_eps(a_pre, eps);
        const Field a_post = caustic_approximant(d, eps, t_post, FocusSide::post, zf, g);
        row.post_error = norm_l2(u_post - a_post) / norm_l2(a_post);
        const Field a_ctrl = caustic_approximant(d, eps, t_post, FocusSide::post, d.profile, g);
        row.post_error_control = norm_l2(u_post - a_ctrl) / norm_l2(a_ctrl);
        row.extract_error = profile_distance(extract_post_focus_profile(u_post, d, t_post, q), zf, ref);
        rep.rows.push_back(row);
    }
    std::vector<double> pre, post, ctrl;
    for (const auto& r : rep.rows) {
        pre.push_back(r.pre_error);
        post.push_back(r.post_error);
        ctrl.push_back(r.post_error_control);
    }
    // rows follow the sweep order; trends are read with eps decreasing
    std::vector<std::size_t> order(rep.rows.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return rep.rows[a].eps > rep.rows[b].eps; });
    const auto pick = [&](const std::vector<double>& v) {
        std::vector<double> o;
        for (auto i : order) o.push_back(v[i]);
        return o;
    };
    rep.pre_decreasing = trend_decreasing(pick(pre));
    rep.post_decreasing = trend_decreasing(pick(post));
    rep.control_non_decreasing = trend_non_decreasing(pick(ctrl));
    return rep;
}

}  // namespace snls
