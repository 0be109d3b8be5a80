#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace snls {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Periodic box [-L/2, L/2)^dim, axis 0 is the slow index for dim = 2.
class Grid {
public:
    Grid(int dim, std::vector<double> L, std::vector<std::size_t> N);

    int dim() const { return dim_; }
    double extent(int a) const { return L_[a]; }
    std::size_t points(int a) const { return N_[a]; }
    double dx(int a) const { return L_[a] / static_cast<double>(N_[a]); }
    std::size_t size() const { return size_; }
    double cell() const;  // dx^n

    // coordinates and dual (angular) frequencies, both in centered order
    const std::vector<double>& x(int a) const { return x_[a]; }
    const std::vector<double>& xi(int a) const { return xi_[a]; }
    double dxi(int a) const;

    // grid of the spectral samples: L' = 2 pi N / L, same N
    Grid dual() const;

    bool operator==(const Grid& o) const;
    bool operator!=(const Grid& o) const { return !(*this == o); }

    std::string describe() const;

private:
    int dim_;
    std::vector<double> L_;
    std::vector<std::size_t> N_;
    std::size_t size_;
    std::vector<std::vector<double>> x_, xi_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(int dim, std::vector<double> L, std::vector<std::size_t> N);
inline GridPtr make_grid_1d(double L, std::size_t N) { return make_grid(1, {L}, {N}); }

bool is_pow2(std::size_t n);

// Smallest power of two N >= 8 with pi N / L > 1.5 * kmax.
std::size_t min_admissible_points(double L, double kmax);
// Local wavenumber estimate max|grad phi|/eps + 6/width.
double local_wavenumber(double max_phase_gradient, double eps, double width);

enum class Potential { none, harmonic };

struct Params {
    int n = 1;
    double sigma = 3.0;
    double eps = 0.1;
    Potential potential = Potential::none;
    double T = 1.0;

    void validate() const;
};

std::string to_string(Potential p);
Potential potential_from_string(const std::string& s);

}  // namespace snls
