#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "snls/grid.hpp"

namespace snls {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

enum class Space { physical, spectral };

class Field {
public:
    Field() = default;
    Field(GridPtr g, Space s = Space::physical);
    Field(GridPtr g, cvec values, Space s = Space::physical);

    const Grid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    Space space() const { return space_; }
    bool empty() const { return !grid_; }

    cvec& values() { return v_; }
    const cvec& values() const { return v_; }
    std::size_t size() const { return v_.size(); }
    cplx& operator[](std::size_t i) { return v_[i]; }
    const cplx& operator[](std::size_t i) const { return v_[i]; }

    Field& operator+=(const Field& o);
    Field& operator-=(const Field& o);
    Field& operator*=(cplx c);

    // f(x) on every grid point; for dim 1 the second coordinate is ignored
    static Field from_function(GridPtr g, const std::function<cplx(double, double)>& f);

    void require(Space s, const char* who) const;
    void require_same_grid(const Field& o, const char* who) const;

private:
    GridPtr grid_;
    cvec v_;
    Space space_ = Space::physical;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(cplx c, Field a);

// Visit every point with its coordinates (x0, x1), x1 = 0 for dim 1.
template <class F>
void for_each_point(const Grid& g, F&& f) {
    if (g.dim() == 1) {
        const auto& x = g.x(0);
        for (std::size_t i = 0; i < x.size(); ++i) f(i, x[i], 0.0);
    } else {
        const auto& x0 = g.x(0);
        const auto& x1 = g.x(1);
        std::size_t idx = 0;
        for (std::size_t i = 0; i < x0.size(); ++i)
            for (std::size_t j = 0; j < x1.size(); ++j, ++idx) f(idx, x0[i], x1[j]);
    }
}

// Same, over the dual frequencies.
template <class F>
void for_each_mode(const Grid& g, F&& f) {
    if (g.dim() == 1) {
        const auto& k = g.xi(0);
        for (std::size_t i = 0; i < k.size(); ++i) f(i, k[i], 0.0);
    } else {
        const auto& k0 = g.xi(0);
        const auto& k1 = g.xi(1);
        std::size_t idx = 0;
        for (std::size_t i = 0; i < k0.size(); ++i)
            for (std::size_t j = 0; j < k1.size(); ++j, ++idx) f(idx, k0[i], k1[j]);
    }
}

}  // namespace snls
