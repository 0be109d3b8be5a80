#include "snls/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

namespace snls {

namespace {

struct PlanKey {
    std::vector<std::size_t> shape;
    int sign;
    bool operator<(const PlanKey& o) const { return std::tie(shape, sign) < std::tie(o.shape, o.sign); }
};

std::mutex plan_mutex;
std::map<PlanKey, fftw_plan>& plan_cache() {
    static std::map<PlanKey, fftw_plan> cache;
    return cache;
}

fftw_plan get_plan(const std::vector<std::size_t>& shape, int sign) {
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto& cache = plan_cache();
    PlanKey key{shape, sign};
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::size_t total = 1;
    std::vector<int> n(shape.size());
    for (std::size_t i = 0; i < shape.size(); ++i) {
        n[i] = static_cast<int>(shape[i]);
        total *= shape[i];
    }
    // ESTIMATE keeps the plan (and therefore the bits) independent of timing noise
    auto* buf = fftw_alloc_complex(total);
    fftw_plan p = fftw_plan_dft(static_cast<int>(n.size()), n.data(), buf, buf,
                                sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
    if (!p) throw Error("fftw: plan creation failed");
    cache.emplace(key, p);
    return p;
}

std::vector<std::size_t> shape_of(const Grid& g) {
    std::vector<std::size_t> s;
    for (int a = 0; a < g.dim(); ++a) s.push_back(g.points(a));
    return s;
}

// (-1)^(m0 + m1) on the grid layout
void alternate(cvec& v, const Grid& g) {
    if (g.dim() == 1) {
        for (std::size_t m = 1; m < v.size(); m += 2) v[m] = -v[m];
    } else {
        const std::size_t n0 = g.points(0), n1 = g.points(1);
        for (std::size_t i = 0; i < n0; ++i)
            for (std::size_t j = 0; j < n1; ++j)
                if ((i + j) & 1) v[i * n1 + j] = -v[i * n1 + j];
    }
}

double pow_n(double base, int n) { return n == 1 ? base : base * base; }

void apply_lines(cvec& data, const Grid& g, int axis, const std::function<void(cvec&)>& op) {
    if (g.dim() == 1) {
        op(data);
        return;
    }
    const std::size_t n0 = g.points(0), n1 = g.points(1);
    if (axis == 1) {
        cvec line(n1);
        for (std::size_t i = 0; i < n0; ++i) {
            std::copy(data.begin() + i * n1, data.begin() + (i + 1) * n1, line.begin());
            op(line);
            std::copy(line.begin(), line.end(), data.begin() + i * n1);
        }
    } else {
        cvec line(n0);
        for (std::size_t j = 0; j < n1; ++j) {
            for (std::size_t i = 0; i < n0; ++i) line[i] = data[i * n1 + j];
            op(line);
            for (std::size_t i = 0; i < n0; ++i) data[i * n1 + j] = line[i];
        }
    }
}

// centered-index chirp-z along one line
void bluestein_line(cvec& a, double alpha) {
    const std::size_t N = a.size();
    const long half = static_cast<long>(N / 2);
    const std::size_t M = 2 * N;
    cvec B(M, cplx{}), H(M, cplx{});
    for (std::size_t m = 0; m < N; ++m) {
        const double mm = static_cast<double>(static_cast<long>(m) - half);
        B[m] = a[m] * std::polar(1.0, -0.5 * alpha * mm * mm);
    }
    for (long d = -static_cast<long>(N) + 1; d <= static_cast<long>(N) - 1; ++d) {
        const double dd = static_cast<double>(d);
        H[static_cast<std::size_t>((d + static_cast<long>(M)) % static_cast<long>(M))] =
            std::polar(1.0, 0.5 * alpha * dd * dd);
    }
    fft_inplace(B.data(), {M}, -1);
    fft_inplace(H.data(), {M}, -1);
    for (std::size_t i = 0; i < M; ++i) B[i] *= H[i];
    fft_inplace(B.data(), {M}, +1);
    const double inv = 1.0 / static_cast<double>(M);
    for (std::size_t k = 0; k < N; ++k) {
        const double kk = static_cast<double>(static_cast<long>(k) - half);
        a[k] = B[k] * inv * std::polar(1.0, -0.5 * alpha * kk * kk);
    }
}

void centered_dft_line(cvec& a, int sign) {
    for (std::size_t m = 1; m < a.size(); m += 2) a[m] = -a[m];
    fft_inplace(a.data(), {a.size()}, sign);
    for (std::size_t m = 1; m < a.size(); m += 2) a[m] = -a[m];
}

}  // namespace

void fft_inplace(cplx* data, const std::vector<std::size_t>& shape, int sign) {
    fftw_plan p = get_plan(shape, sign);
    auto* d = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(p, d, d);
}

Field to_spectral(const Field& f) {
    f.require(Space::physical, "to_spectral");
    const Grid& g = f.grid();
    cvec v = f.values();
    alternate(v, g);
    fft_inplace(v.data(), shape_of(g), -1);
    alternate(v, g);
    const double c = g.cell() / pow_n(std::sqrt(2.0 * std::numbers::pi), g.dim());
    for (auto& z : v) z *= c;
    return Field(std::make_shared<const Grid>(g.dual()), std::move(v), Space::spectral);
}

Field to_physical(const Field& fhat) {
    fhat.require(Space::spectral, "to_physical");
    const Grid& gd = fhat.grid();
    // dual of the dual is the original box
    Grid g = gd.dual();
    cvec v = fhat.values();
    alternate(v, g);
    fft_inplace(v.data(), shape_of(g), +1);
    alternate(v, g);
    const double c = gd.cell() / pow_n(std::sqrt(2.0 * std::numbers::pi), g.dim());
    for (auto& z : v) z *= c;
    return Field(std::make_shared<const Grid>(g), std::move(v), Space::physical);
}

Field to_spectral_alt(const Field& f) {
    Field out = to_spectral(f);
    out *= std::polar(1.0, -std::numbers::pi * f.grid().dim() / 4.0);
    return out;
}

Field to_physical_alt(const Field& fhat) {
    Field out = to_physical(fhat);
    out *= std::polar(1.0, std::numbers::pi * fhat.grid().dim() / 4.0);
    return out;
}

cvec scaled_dft(const cvec& in, const Grid& g, const std::vector<double>& alpha) {
    if (in.size() != g.size()) throw Error("scaled_dft: size mismatch");
    if (alpha.size() != static_cast<std::size_t>(g.dim())) throw Error("scaled_dft: one alpha per axis");
    cvec out = in;
    for (int a = 0; a < g.dim(); ++a) {
        const double N = static_cast<double>(g.points(a));
        const double unit = 2.0 * std::numbers::pi / N;
        const double al = alpha[a];
        if (std::abs(al - unit) <= 1e-13 * unit)
            apply_lines(out, g, a, [](cvec& l) { centered_dft_line(l, -1); });
        else if (std::abs(al + unit) <= 1e-13 * unit)
            apply_lines(out, g, a, [](cvec& l) { centered_dft_line(l, +1); });
        else
            apply_lines(out, g, a, [al](cvec& l) { bluestein_line(l, al); });
    }
    return out;
}

Field gradient(const Field& f, int axis) {
    f.require(Space::physical, "gradient");
    if (axis < 0 || axis >= f.grid().dim()) throw Error("gradient: bad axis");
    Field h = to_spectral(f);
    for_each_mode(f.grid(), [&](std::size_t i, double k0, double k1) {
        h[i] *= cplx(0.0, axis == 0 ? k0 : k1);
    });
    return to_physical(h);
}

Field resample_scaled(const Field& f, double lambda, const std::vector<double>& shift) {
    f.require(Space::physical, "resample_scaled");
    const Grid& g = f.grid();
    if (shift.size() != static_cast<std::size_t>(g.dim())) throw Error("resample_scaled: shift dim mismatch");
    Field h = to_spectral(f);
    for_each_mode(g, [&](std::size_t i, double k0, double k1) {
        double ph = -lambda * k0 * shift[0];
        if (g.dim() == 2) ph -= lambda * k1 * shift[1];
        h[i] *= std::polar(1.0, ph);
    });
    std::vector<double> alpha(g.dim());
    for (int a = 0; a < g.dim(); ++a) alpha[a] = -2.0 * std::numbers::pi * lambda / static_cast<double>(g.points(a));
    cvec v = scaled_dft(h.values(), g, alpha);
    const double c = h.grid().cell() / pow_n(std::sqrt(2.0 * std::numbers::pi), g.dim());
    Field out(f.grid_ptr(), std::move(v));
    for_each_point(g, [&](std::size_t i, double x0, double x1) {
        bool inside = std::abs(lambda * (x0 - shift[0])) < 0.5 * g.extent(0);
        if (g.dim() == 2) inside = inside && std::abs(lambda * (x1 - shift[1])) < 0.5 * g.extent(1);
        out[i] = inside ? out[i] * c : cplx{};
    });
    return out;
}

}  // namespace snls
