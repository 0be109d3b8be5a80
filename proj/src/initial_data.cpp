#include "snls/initial_data.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "snls/norms.hpp"

namespace snls {

std::vector<double> point_or_origin(const std::vector<double>& p, int dim) {
    if (p.empty()) return std::vector<double>(dim, 0.0);
    if (static_cast<int>(p.size()) != dim) throw Error("point has wrong dimension");
    return p;
}

Profile Profile::gaussian(int dim, GaussianDesc d) {
    if (dim != 1 && dim != 2) throw Error("profile: dim must be 1 or 2");
    if (!(d.width > 0)) throw Error("profile: width must be positive");
    d.center = point_or_origin(d.center, dim);
    d.momentum = point_or_origin(d.momentum, dim);
    Profile p;
    p.dim_ = dim;
    p.gauss_ = d;
    return p;
}

Profile Profile::unit_gaussian(int dim) {
    GaussianDesc d;
    d.amplitude = std::pow(std::numbers::pi, -dim / 4.0);
    return gaussian(dim, d);
}

Profile Profile::from_samples(Field samples) {
    samples.require(Space::physical, "profile");
    Profile p;
    p.dim_ = samples.grid().dim();
    p.samples_ = std::move(samples);
    return p;
}

namespace {
void cubic_weights(double t, double w[4]) {
    w[0] = -t * (t - 1) * (t - 2) / 6.0;
    w[1] = (t + 1) * (t - 1) * (t - 2) / 2.0;
    w[2] = -(t + 1) * t * (t - 2) / 2.0;
    w[3] = (t + 1) * t * (t - 1) / 6.0;
}

// locate x in centered samples; false if outside the box
bool locate(const Grid& g, int a, double x, long& i, double& t) {
    const double u = (x + 0.5 * g.extent(a)) / g.dx(a);
    if (u < 0.0 || u > static_cast<double>(g.points(a) - 1)) return false;
    i = static_cast<long>(std::floor(u));
    t = u - static_cast<double>(i);
    return true;
}
}  // namespace

cplx Profile::eval(double x0, double x1) const {
    if (gauss_) {
        const auto& d = *gauss_;
        const double y0 = x0 - d.center[0];
        double r2 = y0 * y0, ph = d.momentum[0] * x0;
        if (dim_ == 2) {
            const double y1 = x1 - d.center[1];
            r2 += y1 * y1;
            ph += d.momentum[1] * x1;
        }
        return d.amplitude * std::exp(-r2 / (2.0 * d.width * d.width)) * std::polar(1.0, ph);
    }
    if (samples_.empty()) return {};
    const Grid& g = samples_.grid();
    const auto at = [&](long i, long j) -> cplx {
        const long n0 = static_cast<long>(g.points(0));
        if (i < 0 || i >= n0) return {};
        if (dim_ == 1) return samples_[static_cast<std::size_t>(i)];
        const long n1 = static_cast<long>(g.points(1));
        if (j < 0 || j >= n1) return {};
        return samples_[static_cast<std::size_t>(i * n1 + j)];
    };
    long i0, i1 = 0;
    double t0, t1 = 0.0;
    if (!locate(g, 0, x0, i0, t0)) return {};
    if (dim_ == 2 && !locate(g, 1, x1, i1, t1)) return {};
    double w0[4], w1[4];
    cubic_weights(t0, w0);
    if (dim_ == 1) {
        cplx s{};
        for (int k = 0; k < 4; ++k) s += w0[k] * at(i0 - 1 + k, 0);
        return s;
    }
    cubic_weights(t1, w1);
    cplx s{};
    for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) s += w0[k] * w1[l] * at(i0 - 1 + k, i1 - 1 + l);
    return s;
}

Field Profile::sample(const GridPtr& g, double lambda, const std::vector<double>& shift) const {
    if (g->dim() != dim_) throw Error("profile: grid dimension mismatch");
    const auto s = point_or_origin(shift, dim_);
    Field out(g);
    for_each_point(*g, [&](std::size_t i, double x0, double x1) {
        out[i] = eval(lambda * (x0 - s[0]), dim_ == 2 ? lambda * (x1 - s[1]) : 0.0);
    });
    return out;
}

double Profile::width() const {
    if (gauss_) return gauss_->width;
    const double m = mass(samples_);
    if (m == 0.0) return 1.0;
    const auto c = centroid(samples_);
    const double rms = moment_norm(samples_, c) / std::sqrt(m);
    return std::sqrt(2.0) * rms / std::sqrt(static_cast<double>(dim_));
}

std::string Profile::describe() const {
    std::ostringstream os;
    os.precision(17);
    if (gauss_) {
        const auto& d = *gauss_;
        os << "gaussian{dim=" << dim_ << ",A=(" << d.amplitude.real() << "," << d.amplitude.imag()
           << "),w=" << d.width << ",c=[";
        for (double v : d.center) os << v << ",";
        os << "],p=[";
        for (double v : d.momentum) os << v << ",";
        os << "]}";
    } else {
        os << "samples{" << (samples_.empty() ? std::string("empty") : samples_.grid().describe()) << "}";
    }
    return os.str();
}

double datum_wavenumber(const Field& env, const std::function<double(double, double)>& phi, double eps,
                        double width) {
    double m = 0.0;
    for (const auto& z : env.values()) m = std::max(m, std::abs(z));
    double gmax = 0.0;
    const bool two = env.grid().dim() == 2;
    for_each_point(env.grid(), [&](std::size_t i, double x0, double x1) {
        if (std::abs(env[i]) <= 1e-12 * m) return;
        const double h = 1e-5 * (1.0 + std::abs(x0) + std::abs(x1));
        double g0 = (phi(x0 + h, x1) - phi(x0 - h, x1)) / (2 * h);
        double g2 = g0 * g0;
        if (two) {
            const double g1 = (phi(x0, x1 + h) - phi(x0, x1 - h)) / (2 * h);
            g2 += g1 * g1;
        }
        gmax = std::max(gmax, std::sqrt(g2));
    });
    return local_wavenumber(gmax, eps, width);
}

void check_resolution(const Grid& g, double kmax, const char* who) {
    for (int a = 0; a < g.dim(); ++a) {
        const double nyq = std::numbers::pi * static_cast<double>(g.points(a)) / g.extent(a);
        if (!(nyq > 1.5 * kmax)) {
            std::ostringstream os;
            os << who << ": resolution rule violated on axis " << a << " (pi N/L = " << nyq
               << ", need > 1.5 x " << kmax << "; minimal N = " << min_admissible_points(g.extent(a), kmax) << ")";
            throw Error(os.str());
        }
    }
}

Field wkb_datum(const Profile& f, const std::function<double(double, double)>& phi, double eps, const GridPtr& g) {
    Field env = f.sample(g);
    check_resolution(*g, datum_wavenumber(env, phi, eps, f.width()), "wkb_datum");
    for_each_point(*g, [&](std::size_t i, double x0, double x1) { env[i] *= std::polar(1.0, phi(x0, x1) / eps); });
    return env;
}

Field quadratic_datum(const QuadraticDatum& d, double eps, const GridPtr& g) {
    if (!(d.t_j > 0.0)) throw Error("quadratic_datum: need t_j > 0");
    const auto xj = point_or_origin(d.x_j, g->dim());
    const double tj = d.t_j;
    const auto phi = [&](double x0, double x1) {
        double r2 = (x0 - xj[0]) * (x0 - xj[0]);
        if (xj.size() > 1) r2 += (x1 - xj[1]) * (x1 - xj[1]);
        return -r2 / (2.0 * tj);
    };
    return wkb_datum(d.profile, phi, eps, g);
}

Field harmonic_quadratic_datum(const QuadraticDatum& d, double eps, const GridPtr& g) {
    const double tj = d.t_j;
    if (!(tj > 0.0 && tj < std::numbers::pi)) throw Error("harmonic_quadratic_datum: need t_j in (0, pi)");
    const int n = g->dim();
    const auto xj = point_or_origin(d.x_j, n);
    const double s = std::sin(tj), c = std::cos(tj), cot = c / s;
    double xj2 = 0.0;
    for (double v : xj) xj2 += v * v;
    // phase exactly as in the harmonic quadratic family: -(|x|^2+|x_j|^2) cot/2 + x.x_j/(2 sin)
    const auto phi = [&](double x0, double x1) {
        double x2 = x0 * x0, xx = x0 * xj[0];
        if (n == 2) {
            x2 += x1 * x1;
            xx += x1 * xj[1];
        }
        return -(x2 + xj2) * cot / 2.0 + xx / (2.0 * s);
    };
    std::vector<double> shift(n);
    for (int a = 0; a < n; ++a) shift[a] = xj[a] * c;
    Field env = d.profile.sample(g, 1.0 / s, shift);
    env *= std::pow(s, -n / 2.0);
    check_resolution(*g, datum_wavenumber(env, phi, eps, d.profile.width() * s), "harmonic_quadratic_datum");
    for_each_point(*g, [&](std::size_t i, double x0, double x1) { env[i] *= std::polar(1.0, phi(x0, x1) / eps); });
    return env;
}

SummedData sum_data(const std::vector<Field>& parts, const std::optional<Field>& remainder,
                    const std::vector<QuadraticDatum>& foci) {
    if (parts.empty() && !remainder) throw Error("sum_data: nothing to sum");
    std::set<std::vector<double>> seen;
    for (const auto& d : foci) {
        std::vector<double> key{d.t_j};
        for (double v : point_or_origin(d.x_j, parts.empty() ? remainder->grid().dim() : parts[0].grid().dim()))
            key.push_back(v);
        if (!seen.insert(key).second) throw Error("sum_data: duplicate focus (t_j, x_j)");
    }
    SummedData out;
    out.total = parts.empty() ? Field(remainder->grid_ptr()) : parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) {
        parts[i].require_same_grid(out.total, "sum_data");
        out.total += parts[i];
    }
    if (remainder) {
        remainder->require_same_grid(out.total, "sum_data");
        if (!parts.empty()) out.total += *remainder;
        else out.total = *remainder;
        out.has_remainder = true;
    }
    out.foci = foci;
    return out;
}

}  // namespace snls
