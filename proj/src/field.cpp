#include "snls/field.hpp"

namespace snls {

Field::Field(GridPtr g, Space s) : grid_(std::move(g)), v_(grid_->size()), space_(s) {}

Field::Field(GridPtr g, cvec values, Space s) : grid_(std::move(g)), v_(std::move(values)), space_(s) {
    if (v_.size() != grid_->size()) throw Error("field: value count does not match grid size");
}

void Field::require(Space s, const char* who) const {
    if (empty()) throw Error(std::string(who) + ": empty field");
    if (space_ != s)
        throw Error(std::string(who) + ": expected " + (s == Space::physical ? "physical" : "spectral") +
                    " field");
}

void Field::require_same_grid(const Field& o, const char* who) const {
    if (empty() || o.empty() || (grid_ != o.grid_ && *grid_ != *o.grid_))
        throw Error(std::string(who) + ": grid mismatch");
    if (space_ != o.space_) throw Error(std::string(who) + ": space tag mismatch");
}

Field& Field::operator+=(const Field& o) {
    require_same_grid(o, "field +=");
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
    return *this;
}

Field& Field::operator-=(const Field& o) {
    require_same_grid(o, "field -=");
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
    return *this;
}

Field& Field::operator*=(cplx c) {
    for (auto& z : v_) z *= c;
    return *this;
}

Field Field::from_function(GridPtr g, const std::function<cplx(double, double)>& f) {
    Field out(g);
    for_each_point(*g, [&](std::size_t i, double x0, double x1) { out.v_[i] = f(x0, x1); });
    return out;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(cplx c, Field a) { return a *= c; }

}  // namespace snls
