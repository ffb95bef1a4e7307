#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace logdelta {

/// Symmetric tridiagonal matrix: diag[j] on the diagonal, off[j] coupling
/// rows j and j+1.
template <class T>
struct Tridiagonal {
    std::vector<T> diag;
    std::vector<T> off;

    std::size_t size() const noexcept { return diag.size(); }

    /// y = A x
    template <class V>
    void multiply(std::span<const V> x, std::span<V> y) const {
        const std::size_t n = diag.size();
        if (n == 1) {
            y[0] = diag[0] * x[0];
            return;
        }
        y[0] = diag[0] * x[0] + off[0] * x[1];
        for (std::size_t j = 1; j + 1 < n; ++j) {
            y[j] = off[j - 1] * x[j - 1] + diag[j] * x[j] + off[j] * x[j + 1];
        }
        y[n - 1] = off[n - 2] * x[n - 2] + diag[n - 1] * x[n - 1];
    }
};

/// LU factors of a Tridiagonal (Thomas algorithm without pivoting), reused
/// across many right-hand sides.
template <class T>
class TridiagonalFactor {
public:
    explicit TridiagonalFactor(const Tridiagonal<T>& a) : off_(a.off) {
        const std::size_t n = a.size();
        if (n == 0 || off_.size() + 1 != n) throw std::invalid_argument("bad tridiagonal shape");
        inv_pivot_.resize(n);
        upper_.resize(n > 0 ? n - 1 : 0);
        pivots_.resize(n);
        T pivot = a.diag[0];
        for (std::size_t j = 0; j < n; ++j) {
            if (j > 0) pivot = a.diag[j] - off_[j - 1] * upper_[j - 1];
            if (pivot == T(0)) throw std::runtime_error("singular tridiagonal system");
            pivots_[j] = pivot;
            inv_pivot_[j] = T(1) / pivot;
            if (j + 1 < n) upper_[j] = off_[j] * inv_pivot_[j];
        }
    }

    const std::vector<T>& pivots() const noexcept { return pivots_; }

    /// Overwrites rhs with the solution.
    template <class V>
    void solve(std::span<V> rhs) const {
        const std::size_t n = inv_pivot_.size();
        rhs[0] = rhs[0] * inv_pivot_[0];
        for (std::size_t j = 1; j < n; ++j) {
            rhs[j] = (rhs[j] - off_[j - 1] * rhs[j - 1]) * inv_pivot_[j];
        }
        for (std::size_t j = n - 1; j-- > 0;) rhs[j] -= upper_[j] * rhs[j + 1];
    }

private:
    std::vector<T> off_;
    std::vector<T> inv_pivot_;
    std::vector<T> upper_;
    std::vector<T> pivots_;
};

}  // namespace logdelta
