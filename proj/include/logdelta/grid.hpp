#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace logdelta {

using Complex = std::complex<double>;

/// Staggered uniform mesh on [-L, L]: node j sits at -L + (j + 1/2) dx, so
/// x = 0 is a cell edge with n/2 nodes on each side and no node at the
/// interaction point.
class Grid {
public:
    Grid(double half_width, std::size_t nodes);

    double half_width() const noexcept { return half_width_; }
    std::size_t size() const noexcept { return nodes_; }
    double dx() const noexcept { return dx_; }

    /// First node of the right half-line, x = +dx/2.
    std::size_t interface_index() const noexcept { return nodes_ / 2; }
    double x(std::size_t j) const noexcept {
        return -half_width_ + (static_cast<double>(j) + 0.5) * dx_;
    }
    std::vector<double> coordinates() const;

    friend bool operator==(const Grid& a, const Grid& b) noexcept {
        return a.nodes_ == b.nodes_ && a.half_width_ == b.half_width_;
    }

private:
    double half_width_;
    std::size_t nodes_;
    double dx_;
};

/// One-sided limits at x = 0 of a field and of its derivative.
struct Traces {
    Complex left;         // u(0-)
    Complex right;        // u(0+)
    Complex slope_left;   // u'(0-)
    Complex slope_right;  // u'(0+)

    Complex jump() const { return right - left; }
    Complex mean_slope() const { return 0.5 * (slope_left + slope_right); }
};

/// Complex samples on a Grid; homogeneous Dirichlet at x = +-L.
class Field {
public:
    explicit Field(Grid grid);
    Field(Grid grid, std::vector<Complex> values);

    /// Samples fn at every node.
    static Field sample(const Grid& grid, const std::function<Complex(double)>& fn);

    const Grid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }
    double dx() const noexcept { return grid_.dx(); }

    std::span<const Complex> values() const noexcept { return values_; }
    std::span<Complex> values() noexcept { return values_; }
    Complex operator[](std::size_t j) const noexcept { return values_[j]; }
    Complex& operator[](std::size_t j) noexcept { return values_[j]; }

    bool all_finite() const noexcept;

    /// Traces by quadratic extrapolation from the three nodes nearest x = 0 on
    /// each side; slopes are the derivatives of the same quadratics.
    Traces traces() const;

    Field& operator*=(Complex s);
    Field& operator+=(const Field& other);
    Field& operator-=(const Field& other);

private:
    Grid grid_;
    std::vector<Complex> values_;
};

Field operator*(Complex s, Field f);
Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);

/// u(-x) on the mirrored node; the grid is symmetric so this is exact.
Field mirrored(const Field& u);

}  // namespace logdelta
