#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "nsb/grid.hpp"

namespace nsb {

using Complex = std::complex<double>;

inline void require_components(std::size_t components) {
    if (components != 1 && components != 3)
        throw InvalidArgument("fields have 1 or 3 components, got " + std::to_string(components));
}

/// Samples of a scalar (1 component) or vector (3 components) field.
///
/// Storage is component-major, then x, y, z with z fastest.
class RealField {
public:
    RealField(Grid grid, std::size_t components)
        : grid_(grid), components_(components), samples_((require_components(components), components * grid.points()), 0.0) {}

    RealField(Grid grid, std::size_t components, std::vector<double> samples)
        : grid_(grid), components_(components), samples_(std::move(samples)) {
        require_components(components);
        if (samples_.size() != components * grid.points())
            throw InvalidArgument("sample count does not match grid and component count");
    }

    const Grid& grid() const { return grid_; }
    std::size_t components() const { return components_; }
    bool is_vector() const { return components_ == 3; }

    std::span<const double> samples() const { return samples_; }
    std::span<double> samples() { return samples_; }

    std::span<const double> component(std::size_t c) const {
        return std::span<const double>(samples_).subspan(c * grid_.points(), grid_.points());
    }
    std::span<double> component(std::size_t c) {
        return std::span<double>(samples_).subspan(c * grid_.points(), grid_.points());
    }

    std::size_t offset(std::size_t ix, std::size_t iy, std::size_t iz) const {
        const std::size_t n = grid_.n();
        return (ix * n + iy) * n + iz;
    }
    double operator()(std::size_t c, std::size_t ix, std::size_t iy, std::size_t iz) const {
        return samples_[c * grid_.points() + offset(ix, iy, iz)];
    }
    double& operator()(std::size_t c, std::size_t ix, std::size_t iy, std::size_t iz) {
        return samples_[c * grid_.points() + offset(ix, iy, iz)];
    }

    bool all_finite() const {
        return std::all_of(samples_.begin(), samples_.end(), [](double v) { return std::isfinite(v); });
    }

    RealField& operator+=(const RealField& o) {
        check_compatible(o);
        for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] += o.samples_[i];
        return *this;
    }
    RealField& operator-=(const RealField& o) {
        check_compatible(o);
        for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] -= o.samples_[i];
        return *this;
    }
    RealField& operator*=(double a) {
        for (double& v : samples_) v *= a;
        return *this;
    }
    friend RealField operator+(RealField a, const RealField& b) { return a += b; }
    friend RealField operator-(RealField a, const RealField& b) { return a -= b; }
    friend RealField operator*(double a, RealField f) { return f *= a; }
    friend RealField operator*(RealField f, double a) { return f *= a; }

    /// Fills every component by evaluating fn(c, x, y, z) at the sample points.
    template <class Fn>
    static RealField sample(const Grid& grid, std::size_t components, Fn&& fn) {
        RealField f(grid, components);
        const std::size_t n = grid.n();
        for (std::size_t c = 0; c < components; ++c)
            for (std::size_t ix = 0; ix < n; ++ix)
                for (std::size_t iy = 0; iy < n; ++iy)
                    for (std::size_t iz = 0; iz < n; ++iz)
                        f(c, ix, iy, iz) = fn(c, grid.coordinate(ix), grid.coordinate(iy), grid.coordinate(iz));
        return f;
    }

private:
    void check_compatible(const RealField& o) const {
        require_same_grid(grid_, o.grid_, "field arithmetic");
        if (components_ != o.components_) throw InvalidArgument("field arithmetic: component count mismatch");
    }

    Grid grid_;
    std::size_t components_;
    std::vector<double> samples_;
};

/// Fourier coefficients of a real field in half-spectrum storage.
///
/// coefficient(xi) = n^-3 sum_x f(x) exp(-i xi.x), so f(x) = sum_xi coefficient(xi) exp(i xi.x).
/// Only z-indices 0..n/2 are stored; the rest follow from Hermitian symmetry.
class SpectralField {
public:
    SpectralField(Grid grid, std::size_t components)
        : grid_(grid), components_(components), coeffs_((require_components(components), components * grid.spectral_points())) {}

    const Grid& grid() const { return grid_; }
    std::size_t components() const { return components_; }
    bool is_vector() const { return components_ == 3; }

    std::span<const Complex> coefficients() const { return coeffs_; }
    std::span<Complex> coefficients() { return coeffs_; }

    std::span<const Complex> component(std::size_t c) const {
        return std::span<const Complex>(coeffs_).subspan(c * grid_.spectral_points(), grid_.spectral_points());
    }
    std::span<Complex> component(std::size_t c) {
        return std::span<Complex>(coeffs_).subspan(c * grid_.spectral_points(), grid_.spectral_points());
    }

    /// Coefficient at any lattice wavevector, using conj(coeff(-xi)) for xi.z < 0.
    Complex coeff(std::size_t c, Mode m) const {
        const int nyq = grid_.nyquist();
        bool conjugate = false;
        if (m.z < 0) {
            m = Mode{-m.x, -m.y, -m.z};
            conjugate = true;
        }
        if (m.z > nyq) throw InvalidArgument("wavevector outside the lattice");
        const std::size_t n = grid_.n();
        const std::size_t idx =
            c * grid_.spectral_points() + (grid_.storage_index(m.x) * n + grid_.storage_index(m.y)) * grid_.half() +
            static_cast<std::size_t>(m.z);
        return conjugate ? std::conj(coeffs_[idx]) : coeffs_[idx];
    }

    SpectralField& operator+=(const SpectralField& o) {
        check_compatible(o);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
        return *this;
    }
    SpectralField& operator-=(const SpectralField& o) {
        check_compatible(o);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
        return *this;
    }
    SpectralField& operator*=(double a) {
        for (Complex& v : coeffs_) v *= a;
        return *this;
    }
    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(double a, SpectralField f) { return f *= a; }
    friend SpectralField operator*(SpectralField f, double a) { return f *= a; }

    /// Visits every stored coefficient: fn(component, mode, coefficient&).
    template <class Fn>
    void for_each_mode(Fn&& fn) {
        visit(*this, std::forward<Fn>(fn));
    }
    template <class Fn>
    void for_each_mode(Fn&& fn) const {
        visit(*this, std::forward<Fn>(fn));
    }

private:
    template <class Self, class Fn>
    static void visit(Self& self, Fn&& fn) {
        const Grid& g = self.grid_;
        const std::size_t n = g.n();
        const std::size_t h = g.half();
        std::size_t idx = 0;
        for (std::size_t c = 0; c < self.components_; ++c)
            for (std::size_t ix = 0; ix < n; ++ix)
                for (std::size_t iy = 0; iy < n; ++iy)
                    for (std::size_t iz = 0; iz < h; ++iz, ++idx)
                        fn(c, Mode{g.signed_index(ix), g.signed_index(iy), static_cast<int>(iz)}, self.coeffs_[idx]);
    }

    void check_compatible(const SpectralField& o) const {
        require_same_grid(grid_, o.grid_, "spectral arithmetic");
        if (components_ != o.components_) throw InvalidArgument("spectral arithmetic: component count mismatch");
    }

    Grid grid_;
    std::size_t components_;
    std::vector<Complex> coeffs_;
};

/// Multiplicity of a stored coefficient in the full lattice (1 on the z = 0 and z = n/2 planes, else 2).
inline double hermitian_weight(const Grid& g, int mode_z) {
    return (mode_z == 0 || mode_z == g.nyquist()) ? 1.0 : 2.0;
}

}  // namespace nsb
