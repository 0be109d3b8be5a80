#include "snls/wigner.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>

#include "snls/fft.hpp"
#include "snls/snapshot.hpp"

namespace snls {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr std::uint16_t kWignerVersion = 1;

// trigonometric interpolation onto the half-step grid
cvec upsample2(const cvec& f) {
    const std::size_t N = f.size();
    cvec F = f;
    fft_inplace(F.data(), {N}, -1);
    cvec G(2 * N, cplx(0.0, 0.0));
    for (std::size_t k = 0; k < N / 2; ++k) G[k] = F[k];
    for (std::size_t k = N / 2 + 1; k < N; ++k) G[k + N] = F[k];
    // split the Nyquist mode so real data stay real
    G[N / 2] = 0.5 * F[N / 2];
    G[N + N / 2] = 0.5 * F[N / 2];
    fft_inplace(G.data(), {2 * N}, +1);
    for (auto& z : G) z /= static_cast<double>(N);
    return G;
}
}  // namespace

double WignerTable::total_mass() const {
    double s = 0.0;
    for (double v : w) s += v;
    return s * dx * dxi;
}

double WignerTable::abs_mass() const {
    double s = 0.0;
    for (double v : w) s += std::abs(v);
    return s * dx * dxi;
}

std::vector<double> WignerTable::x_marginal() const {
    std::vector<double> m(rows(), 0.0);
    for (std::size_t i = 0; i < rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < cols(); ++j) s += at(i, j);
        m[i] = s * dxi;
    }
    return m;
}

std::vector<double> WignerTable::xi_marginal() const {
    std::vector<double> m(cols(), 0.0);
    for (std::size_t i = 0; i < rows(); ++i)
        for (std::size_t j = 0; j < cols(); ++j) m[j] += at(i, j);
    for (auto& v : m) v *= dx;
    return m;
}

std::string WignerTable::to_csv() const {
    std::string s = "x,xi,W\n";
    s.reserve(32 * w.size());
    for (std::size_t i = 0; i < rows(); ++i)
        for (std::size_t j = 0; j < cols(); ++j) s += fmt::format("{},{},{}\n", x[i], xi[j], at(i, j));
    return s;
}

std::string WignerTable::encode() const {
    std::string out;
    out.reserve(64 + 8 * w.size());
    out.append("SWIG", 4);
    put_u16(out, kWignerVersion);
    put_u32(out, static_cast<std::uint32_t>(rows()));
    put_u32(out, static_cast<std::uint32_t>(cols()));
    put_f64(out, eps);
    put_f64(out, x.empty() ? 0.0 : x.front());
    put_f64(out, dx);
    put_f64(out, xi.empty() ? 0.0 : xi.front());
    put_f64(out, dxi);
    for (double v : w) put_f64(out, v);
    return out;
}

WignerTable WignerTable::decode(const std::string& bytes) {
    ByteReader r(bytes);
    r.magic("SWIG");
    const auto ver = r.u16();
    if (ver != kWignerVersion) throw Error(fmt::format("SWIG: unsupported version {}", ver));
    WignerTable t;
    const std::size_t nr = r.u32(), nc = r.u32();
    t.eps = r.f64();
    const double x0 = r.f64();
    t.dx = r.f64();
    const double k0 = r.f64();
    t.dxi = r.f64();
    for (std::size_t i = 0; i < nr; ++i) t.x.push_back(x0 + static_cast<double>(i) * t.dx);
    for (std::size_t j = 0; j < nc; ++j) t.xi.push_back(k0 + static_cast<double>(j) * t.dxi);
    t.w.resize(nr * nc);
    for (auto& v : t.w) v = r.f64();
    if (!r.done()) throw Error("SWIG: trailing bytes");
    return t;
}

WignerTable wigner_transform(const Field& f, double eps, std::size_t stride) {
    f.require(Space::physical, "wigner_transform");
    const Grid& g = f.grid();
    if (g.dim() != 1) throw Error("wigner_transform: only n = 1 tables are supported");
    if (stride == 0) throw Error("wigner_transform: stride must be positive");
    const std::size_t N = g.points(0), M = 2 * N;
    const double dx = g.dx(0), L = g.extent(0);
    const cvec h = upsample2(f.values());

    WignerTable t;
    t.eps = eps;
    t.dx = dx * static_cast<double>(stride);
    t.dxi = kPi * eps / L;
    for (std::size_t j = 0; j < M; ++j) t.xi.push_back((static_cast<double>(j) - static_cast<double>(N)) * t.dxi);
    for (std::size_t i = 0; i < N; i += stride) t.x.push_back(g.x(0)[i]);
    t.w.assign(t.x.size() * M, 0.0);

    const double scale = dx / eps / (2.0 * kPi);
    cvec c(M);
    double wmax = 0.0, imax = 0.0;
    std::size_t row = 0;
    for (std::size_t i = 0; i < N; i += stride, ++row) {
        const std::size_t centre = 2 * i;
        // lag index l stands for s = l (l < N) or l - M; pairs leaving the box are dropped,
        // a periodic wrap would put a ghost at the midpoint between f and its image
        for (std::size_t l = 0; l < M; ++l) {
            const auto s = static_cast<std::ptrdiff_t>(l) - (l < N ? 0 : static_cast<std::ptrdiff_t>(M));
            const auto a = static_cast<std::ptrdiff_t>(centre) - s, b = static_cast<std::ptrdiff_t>(centre) + s;
            const bool inside = l != N && a >= 0 && b >= 0 && a < static_cast<std::ptrdiff_t>(M) &&
                                b < static_cast<std::ptrdiff_t>(M);
            c[l] = inside ? h[a] * std::conj(h[b]) : cplx{};
        }
        fft_inplace(c.data(), {M}, +1);
        double* out = &t.w[row * M];
        for (std::size_t j = 0; j < M; ++j) {
            const cplx z = scale * c[(j + N) % M];
            out[j] = z.real();
            wmax = std::max(wmax, std::abs(z.real()));
            imax = std::max(imax, std::abs(z.imag()));
        }
    }
    if (imax > 1e-10 * std::max(wmax, 1e-300))
        throw Error(fmt::format("wigner_transform: imaginary residue {} relative to {} (aliasing?)", imax, wmax));
    return t;
}

namespace {

template <class Dist>
double tube_fraction(const WignerTable& w, double width, Dist dist) {
    if (!(width > 0)) throw Error("tube mass: width must be positive");
    if (width < 0.5 * std::min(w.dx, w.dxi)) throw Error("tube mass: width below the grid cell");
    double in = 0.0, all = 0.0;
    for (std::size_t i = 0; i < w.rows(); ++i)
        for (std::size_t j = 0; j < w.cols(); ++j) {
            const double a = w.at(i, j);
            all += a;
            if (dist(w.x[i], w.xi[j]) <= width) in += a;
        }
    return all > 0 ? std::clamp(in / all, 0.0, 1.0) : 0.0;
}

}  // namespace

double tube_mass(const WignerTable& w, double y, double a, double width) {
    return tube_fraction(w, width, [&](double x, double k) { return std::abs(x - y - a * k); });
}

double harmonic_tube_mass(const WignerTable& w, double y, double t, double width) {
    if (!(t >= 0.0 && t < kPi)) throw Error("harmonic_tube_mass: t must lie in [0, pi)");
    if (t == 0.0) return tube_fraction(w, width, [&](double x, double) { return std::abs(x - y); });
    const double ct = std::cos(t) / std::sin(t);
    return tube_fraction(w, width, [&](double x, double k) { return std::abs(k - x * ct - y); });
}

std::string to_string(ScreenMode m) { return m == ScreenMode::free ? "free" : "harmonic"; }

namespace {

struct Cell {
    double x, xi, m;
};

double tube_coordinate(ScreenMode mode, double prm, const Cell& c) {
    if (mode == ScreenMode::free) return c.x - prm * c.xi;
    if (prm == 0.0) return c.x;
    return c.xi - c.x * std::cos(prm) / std::sin(prm);
}

// best single tube over the given cells (fraction of `total`), by histogram + prefix sums
ScreenPeak best_tube(const std::vector<Cell>& cells, const std::vector<double>& params, ScreenMode mode, double width,
                     double total) {
    ScreenPeak best;
    if (cells.empty()) return best;
    const double bw = width / 8.0;
    for (double prm : params) {
        double zmin = 1e300, zmax = -1e300;
        for (const auto& c : cells) {
            const double v = tube_coordinate(mode, prm, c);
            zmin = std::min(zmin, v);
            zmax = std::max(zmax, v);
        }
        const auto nb = static_cast<std::size_t>(std::ceil((zmax - zmin) / bw)) + 1;
        std::vector<double> prefix(nb + 1, 0.0);
        for (const auto& c : cells)
            prefix[std::min(static_cast<std::size_t>((tube_coordinate(mode, prm, c) - zmin) / bw), nb - 1) + 1] += c.m;
        for (std::size_t b = 0; b < nb; ++b) prefix[b + 1] += prefix[b];
        for (std::size_t b = 0; b < nb; ++b) {
            const std::size_t lo = b > 8 ? b - 8 : 0, hi = std::min(nb, b + 8);
            const double f = (prefix[hi] - prefix[lo]) / total;
            if (f > best.fraction) best = {zmin + static_cast<double>(b) * bw, prm, f};
        }
    }
    return best;
}

}  // namespace

ScreenReport singularity_screen(const WignerTable& w, double T, ScreenMode mode, const ScreenOptions& opt) {
    ScreenReport rep;
    rep.mode = mode;
    rep.width = opt.width_factor * std::sqrt(w.eps);
    const double width = rep.width;

    // signed mass: interference terms between separated pieces oscillate on scale eps and
    // cancel inside a tube, while |W| would count them as concentrated mass
    double wmax = 0.0, total = 0.0;
    for (double v : w.w) wmax = std::max(wmax, std::abs(v));
    std::vector<Cell> cells;
    for (std::size_t i = 0; i < w.rows(); ++i)
        for (std::size_t j = 0; j < w.cols(); ++j) {
            const double m = w.at(i, j);
            total += m;
            if (std::abs(m) > 1e-12 * wmax) cells.push_back({w.x[i], w.xi[j], m});
        }
    if (!(total > 0)) {
        rep.verdict = "disjoint";
        return rep;
    }

    std::vector<double> params;
    const std::size_t P = std::max<std::size_t>(2, opt.param_samples);
    if (mode == ScreenMode::free) {
        for (std::size_t p = 0; p < P; ++p) params.push_back(-T + T * static_cast<double>(p) / static_cast<double>(P - 1));
    } else {
        params.push_back(0.0);
        const double lo = std::max(kPi - T, 1e-3);
        for (std::size_t p = 0; p < P; ++p) {
            const double t = lo + (kPi - 1e-3 - lo) * static_cast<double>(p) / static_cast<double>(P - 1);
            if (t > 0 && t < kPi) params.push_back(t);
        }
    }

    // full scan: every (param, y) window on a y lattice of width/8
    std::vector<ScreenPeak> scan;
    const double bw = width / 8.0;
    for (double prm : params) {
        double zmin = 1e300, zmax = -1e300;
        for (const auto& c : cells) {
            const double v = tube_coordinate(mode, prm, c);
            zmin = std::min(zmin, v);
            zmax = std::max(zmax, v);
        }
        const auto nb = static_cast<std::size_t>(std::ceil((zmax - zmin) / bw)) + 1;
        std::vector<double> prefix(nb + 1, 0.0);
        for (const auto& c : cells)
            prefix[std::min(static_cast<std::size_t>((tube_coordinate(mode, prm, c) - zmin) / bw), nb - 1) + 1] += c.m;
        for (std::size_t k = 0; k < nb; ++k) prefix[k + 1] += prefix[k];
        for (std::size_t k = 0; k < nb; ++k) {
            const std::size_t lo = k > 8 ? k - 8 : 0, hi = std::min(nb, k + 8);
            scan.push_back({zmin + static_cast<double>(k) * bw, prm, (prefix[hi] - prefix[lo]) / total});
        }
    }
    for (const auto& s : scan)
        if (s.fraction > rep.max_fraction) {
            rep.max_fraction = s.fraction;
            rep.argmax = s;
        }

    // peaks: non-maximum suppression over the scan; the t = 0 row of the harmonic scan is
    // its own family
    std::vector<ScreenPeak> cand;
    for (const auto& s : scan)
        if (s.fraction >= 0.25) cand.push_back(s);
    std::sort(cand.begin(), cand.end(), [](const auto& a, const auto& b) { return a.fraction > b.fraction; });
    const double param_sep = 0.25 * std::max(T, 1e-3);
    for (const auto& c : cand) {
        if (rep.peaks.size() >= opt.max_tubes) break;
        const bool clash = std::any_of(rep.peaks.begin(), rep.peaks.end(), [&](const ScreenPeak& q) {
            if ((q.param == 0.0) != (c.param == 0.0) && mode == ScreenMode::harmonic) return false;
            return std::abs(q.y - c.y) <= 2 * width && std::abs(q.param - c.param) <= param_sep;
        });
        if (!clash) rep.peaks.push_back(c);
    }

    // greedy cover: several foci split the mass between tubes, so take the best tube, drop
    // its cells, and repeat while a tube still holds min_tube of the mass
    std::vector<Cell> rest = cells;
    for (std::size_t k = 0; k < opt.max_tubes && !rest.empty(); ++k) {
        ScreenPeak t = best_tube(rest, params, mode, width, total);
        double removed = 0.0;
        std::erase_if(rest, [&](const Cell& c) {
            const bool in = std::abs(tube_coordinate(mode, t.param, c) - t.y) <= width;
            if (in) removed += c.m;
            return in;
        });
        t.fraction = removed / total;
        if (t.fraction < opt.min_tube) break;
        rep.tubes.push_back(t);
        rep.captured += t.fraction;
    }

    rep.verdict = rep.max_fraction >= 0.9 ? "concentrated" : rep.max_fraction <= 0.2 ? "disjoint" : "inconclusive";
    return rep;
}

ScreenReport singularity_screen(const Field& f, double eps, double T, ScreenMode mode, const ScreenOptions& opt) {
    const std::size_t N = f.grid().points(0);
    const std::size_t stride = std::max<std::size_t>(1, N / std::max<std::size_t>(1, opt.max_rows));
    return singularity_screen(wigner_transform(f, eps, stride), T, mode, opt);
}

}  // namespace snls
