#include "snls/grid.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace snls {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

Grid::Grid(int dim, std::vector<double> L, std::vector<std::size_t> N)
    : dim_(dim), L_(std::move(L)), N_(std::move(N)) {
    if (dim_ != 1 && dim_ != 2) throw Error("grid: dim must be 1 or 2");
    if (L_.size() != static_cast<std::size_t>(dim_) || N_.size() != static_cast<std::size_t>(dim_))
        throw Error("grid: per-axis extents/points must match dim");
    size_ = 1;
    for (int a = 0; a < dim_; ++a) {
        if (!(L_[a] > 0.0) || !std::isfinite(L_[a])) throw Error("grid: extent must be positive");
        if (!is_pow2(N_[a]) || N_[a] < 8)
            throw Error("grid: points per axis must be a power of two >= 8, got " + std::to_string(N_[a]));
        size_ *= N_[a];
        std::vector<double> xs(N_[a]), ks(N_[a]);
        const double h = dx(a);
        const double dk = 2.0 * std::numbers::pi / L_[a];
        const long half = static_cast<long>(N_[a] / 2);
        for (std::size_t m = 0; m < N_[a]; ++m) {
            const long c = static_cast<long>(m) - half;
            xs[m] = static_cast<double>(c) * h;
            ks[m] = static_cast<double>(c) * dk;
        }
        x_.push_back(std::move(xs));
        xi_.push_back(std::move(ks));
    }
}

double Grid::cell() const {
    double c = 1.0;
    for (int a = 0; a < dim_; ++a) c *= dx(a);
    return c;
}

double Grid::dxi(int a) const { return 2.0 * std::numbers::pi / L_[a]; }

Grid Grid::dual() const {
    std::vector<double> Ld(dim_);
    for (int a = 0; a < dim_; ++a) Ld[a] = 2.0 * std::numbers::pi * static_cast<double>(N_[a]) / L_[a];
    return Grid(dim_, Ld, N_);
}

bool Grid::operator==(const Grid& o) const {
    if (dim_ != o.dim_ || N_ != o.N_) return false;
    // dual of dual reproduces L only up to rounding
    for (int a = 0; a < dim_; ++a)
        if (std::abs(L_[a] - o.L_[a]) > 1e-12 * L_[a]) return false;
    return true;
}

std::string Grid::describe() const {
    std::ostringstream os;
    os << "grid(" << dim_ << "d";
    for (int a = 0; a < dim_; ++a) os << ", L=" << L_[a] << " N=" << N_[a];
    os << ")";
    return os.str();
}

GridPtr make_grid(int dim, std::vector<double> L, std::vector<std::size_t> N) {
    return std::make_shared<const Grid>(dim, std::move(L), std::move(N));
}

std::size_t min_admissible_points(double L, double kmax) {
    if (!(L > 0)) throw Error("resolution rule: L must be positive");
    std::size_t N = 8;
    while (std::numbers::pi * static_cast<double>(N) / L <= 1.5 * kmax) {
        N *= 2;
        if (N > (std::size_t{1} << 26)) throw Error("resolution rule: required N exceeds 2^26");
    }
    return N;
}

double local_wavenumber(double max_phase_gradient, double eps, double width) {
    return std::abs(max_phase_gradient) / eps + 6.0 / width;
}

void Params::validate() const {
    if (n != 1 && n != 2) throw Error("params: only n = 1, 2 are supported");
    if (!(sigma > 2.0 / n)) throw Error("params: need sigma > 2/n");
    if (!(eps > 0.0 && eps <= 1.0)) throw Error("params: need eps in (0, 1]");
    if (!(T > 0.0)) throw Error("params: need T > 0");
}

std::string to_string(Potential p) { return p == Potential::harmonic ? "harmonic" : "none"; }

Potential potential_from_string(const std::string& s) {
    if (s == "none") return Potential::none;
    if (s == "harmonic") return Potential::harmonic;
    throw Error("unknown potential '" + s + "'");
}

}  // namespace snls
