#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>

#include "nsb/error.hpp"

namespace nsb {

enum class Axis : int { x = 0, y = 1, z = 2 };

/// Integer wavevector on the lattice {-n/2+1, ..., n/2}^3.
struct Mode {
    int x = 0;
    int y = 0;
    int z = 0;

    int norm2() const { return x * x + y * y + z * z; }
    int operator[](Axis a) const { return a == Axis::x ? x : (a == Axis::y ? y : z); }
    friend bool operator==(const Mode&, const Mode&) = default;
};

/// Uniform periodic grid on the cube [0, box_length)^3 with n points per axis.
///
/// Sample (ix, iy, iz) sits at (ix, iy, iz) * spacing. Physical wavenumbers are
/// 2*pi/box_length times the integer lattice index, so the default box makes
/// them coincide.
class Grid {
public:
    explicit Grid(std::size_t n, double box_length = 2.0 * std::numbers::pi)
        : n_(n), box_length_(box_length) {
        if (n < 8 || (n & (n - 1)) != 0)
            throw InvalidArgument("grid size must be a power of two >= 8, got " + std::to_string(n));
        if (!std::isfinite(box_length) || box_length <= 0.0)
            throw InvalidArgument("box length must be finite and positive");
    }

    std::size_t n() const { return n_; }
    double box_length() const { return box_length_; }
    double spacing() const { return box_length_ / static_cast<double>(n_); }
    double cell_volume() const { return std::pow(spacing(), 3); }
    double volume() const { return std::pow(box_length_, 3); }

    std::size_t points() const { return n_ * n_ * n_; }
    /// Length of the last axis in half-spectrum (real-to-complex) storage.
    std::size_t half() const { return n_ / 2 + 1; }
    std::size_t spectral_points() const { return n_ * n_ * half(); }

    int nyquist() const { return static_cast<int>(n_ / 2); }
    /// Physical wavenumber of one lattice step.
    double wavenumber_unit() const { return 2.0 * std::numbers::pi / box_length_; }

    /// Storage index along a full axis -> signed lattice index in (-n/2, n/2].
    int signed_index(std::size_t i) const {
        return i <= n_ / 2 ? static_cast<int>(i) : static_cast<int>(i) - static_cast<int>(n_);
    }
    /// Inverse of signed_index, for any integer (taken modulo n).
    std::size_t storage_index(int k) const {
        const int n = static_cast<int>(n_);
        return static_cast<std::size_t>(((k % n) + n) % n);
    }

    double coordinate(std::size_t i) const { return static_cast<double>(i) * spacing(); }

    friend bool operator==(const Grid& a, const Grid& b) {
        return a.n_ == b.n_ && a.box_length_ == b.box_length_;
    }

private:
    std::size_t n_;
    double box_length_;
};

inline void require_same_grid(const Grid& a, const Grid& b, const char* what) {
    if (!(a == b)) throw GridMismatch(std::string(what) + ": fields live on different grids");
}

}  // namespace nsb
