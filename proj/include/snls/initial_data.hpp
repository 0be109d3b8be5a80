#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "snls/field.hpp"

namespace snls {

struct GaussianDesc {
    cplx amplitude{1.0, 0.0};
    double width = 1.0;
    std::vector<double> center;    // empty = origin
    std::vector<double> momentum;  // profile-level momentum, e^{i p.x}
};

// eps-independent profile: analytic Gaussian or samples on a reference grid.
class Profile {
public:
    Profile() = default;
    static Profile gaussian(int dim, GaussianDesc d);
    // unit L^2 mass, width 1, centered
    static Profile unit_gaussian(int dim);
    static Profile from_samples(Field samples);

    int dim() const { return dim_; }
    bool analytic() const { return gauss_.has_value(); }
    const std::optional<GaussianDesc>& gaussian_desc() const { return gauss_; }
    const Field& samples() const { return samples_; }

    // value at a point; custom samples use cubic interpolation and vanish outside their box
    cplx eval(double x0, double x1 = 0.0) const;
    // p(lambda (x - shift)) on every point of g
    Field sample(const GridPtr& g, double lambda = 1.0, const std::vector<double>& shift = {}) const;
    double width() const;  // Gaussian width, or an rms width from samples

    std::string describe() const;  // stable text used in cache keys

private:
    int dim_ = 1;
    std::optional<GaussianDesc> gauss_;
    Field samples_;
};

struct QuadraticDatum {
    Profile profile;
    double t_j = 1.0;
    std::vector<double> x_j;  // empty = origin
};

// f(x) e^{i phi(x)/eps}
Field wkb_datum(const Profile& f, const std::function<double(double, double)>& phi, double eps, const GridPtr& g);
// f(x) e^{-i |x - x_j|^2 / (2 eps t_j)}
Field quadratic_datum(const QuadraticDatum& d, double eps, const GridPtr& g);
// harmonic-trap analogue; t_j in (0, pi)
Field harmonic_quadratic_datum(const QuadraticDatum& d, double eps, const GridPtr& g);

struct SummedData {
    Field total;
    std::vector<QuadraticDatum> foci;
    bool has_remainder = false;
};

SummedData sum_data(const std::vector<Field>& parts, const std::optional<Field>& remainder,
                    const std::vector<QuadraticDatum>& foci = {});

// Largest local wavenumber of f e^{i phi/eps} over the support of f (phi gradient by
// central differences), plus 6/width.
double datum_wavenumber(const Field& envelope, const std::function<double(double, double)>& phi, double eps,
                        double width);
// Throws if the grid cannot carry the given wavenumber.
void check_resolution(const Grid& g, double kmax, const char* who);

std::vector<double> point_or_origin(const std::vector<double>& p, int dim);

}  // namespace snls
