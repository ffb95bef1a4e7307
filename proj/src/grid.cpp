#include "logdelta/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace logdelta {

Grid::Grid(double half_width, std::size_t nodes) : half_width_(half_width), nodes_(nodes) {
    if (!std::isfinite(half_width) || half_width <= 0.0) {
        throw std::invalid_argument("grid half-width must be positive and finite");
    }
    if (nodes < 6 || nodes % 2 != 0) {
        throw std::invalid_argument("grid node count must be even and >= 6, got " +
                                    std::to_string(nodes));
    }
    dx_ = 2.0 * half_width / static_cast<double>(nodes);
}

std::vector<double> Grid::coordinates() const {
    std::vector<double> xs(nodes_);
    for (std::size_t j = 0; j < nodes_; ++j) xs[j] = x(j);
    return xs;
}

Field::Field(Grid grid) : grid_(grid), values_(grid.size(), Complex(0.0, 0.0)) {}

Field::Field(Grid grid, std::vector<Complex> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
        throw std::invalid_argument("field sample count does not match the grid");
    }
}

Field Field::sample(const Grid& grid, const std::function<Complex(double)>& fn) {
    Field f(grid);
    for (std::size_t j = 0; j < grid.size(); ++j) f.values_[j] = fn(grid.x(j));
    return f;
}

bool Field::all_finite() const noexcept {
    for (const Complex& v : values_) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    }
    return true;
}

Traces Field::traces() const {
    // Nodes at distance h/2, 3h/2, 5h/2 from the interface on each side.
    const std::size_t k = grid_.interface_index();
    const double h = grid_.dx();
    const Complex r0 = values_[k], r1 = values_[k + 1], r2 = values_[k + 2];
    const Complex l0 = values_[k - 1], l1 = values_[k - 2], l2 = values_[k - 3];

    Traces t;
    t.right = 1.875 * r0 - 1.25 * r1 + 0.375 * r2;
    t.left = 1.875 * l0 - 1.25 * l1 + 0.375 * l2;
    t.slope_right = (-2.0 * r0 + 3.0 * r1 - r2) / h;
    t.slope_left = (2.0 * l0 - 3.0 * l1 + l2) / h;
    return t;
}

Field& Field::operator*=(Complex s) {
    for (Complex& v : values_) v *= s;
    return *this;
}

Field& Field::operator+=(const Field& other) {
    if (!(grid_ == other.grid_)) throw std::invalid_argument("field grids do not match");
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += other.values_[j];
    return *this;
}

Field& Field::operator-=(const Field& other) {
    if (!(grid_ == other.grid_)) throw std::invalid_argument("field grids do not match");
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] -= other.values_[j];
    return *this;
}

Field operator*(Complex s, Field f) { return f *= s; }
Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }

Field mirrored(const Field& u) {
    Field out(u.grid());
    const std::size_t n = u.size();
    for (std::size_t j = 0; j < n; ++j) out[j] = u[n - 1 - j];
    return out;
}

}  // namespace logdelta
