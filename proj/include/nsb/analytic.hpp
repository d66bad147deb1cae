#pragma once

#include <cmath>
#include <cstdint>

#include "nsb/heat_leray.hpp"
#include "nsb/random_fields.hpp"

namespace nsb {

/// Taylor-Green vortex A (cos x sin y, -sin x cos y, 0) in lattice units.
/// Its convective term is a pure gradient, so the mild solution is e^{t Delta} u0.
inline RealField taylor_green(const Grid& grid, double amplitude = 1.0) {
    const double k = grid.wavenumber_unit();
    return RealField::sample(grid, 3, [&](std::size_t c, double x, double y, double) {
        if (c == 0) return amplitude * std::cos(k * x) * std::sin(k * y);
        if (c == 1) return -amplitude * std::cos(k * y) * std::sin(k * x);
        return 0.0;
    });
}

/// Shear mode A (0, sin(mode x), 0): divergence-free with vanishing convective term.
inline RealField shear_mode(const Grid& grid, int mode, double amplitude = 1.0) {
    const double k = grid.wavenumber_unit() * mode;
    return RealField::sample(grid, 3, [&](std::size_t c, double x, double, double) {
        return c == 1 ? amplitude * std::sin(k * x) : 0.0;
    });
}

/// Scalar sin(mode x_axis).
inline RealField scalar_sine(const Grid& grid, int mode, Axis axis = Axis::x, double amplitude = 1.0) {
    const double k = grid.wavenumber_unit() * mode;
    return RealField::sample(grid, 1, [&](std::size_t, double x, double y, double z) {
        const double coord = axis == Axis::x ? x : (axis == Axis::y ? y : z);
        return amplitude * std::sin(k * coord);
    });
}

/// ABC (Beltrami) flow (A sin z + C cos y, B sin x + A cos z, C sin y + B cos x).
inline RealField abc_flow(const Grid& grid, double a, double b, double c) {
    const double k = grid.wavenumber_unit();
    return RealField::sample(grid, 3, [&](std::size_t comp, double x, double y, double z) {
        if (comp == 0) return a * std::sin(k * z) + c * std::cos(k * y);
        if (comp == 1) return b * std::sin(k * x) + a * std::cos(k * z);
        return c * std::sin(k * y) + b * std::cos(k * x);
    });
}

/// Random divergence-free, zero-mean velocity: complex Gaussian coefficients
/// with magnitude |xi|^{-slope} on 1 <= |xi|, |xi_i| <= n/3, Leray-projected
/// and scaled so that ||u||_inf = amplitude.
inline SpectralField random_smooth(const Grid& grid, std::uint64_t seed, double slope, double amplitude) {
    auto rng = make_rng(seed, 0x5eed);
    SpectralField F = dealias(white_noise_spectrum(grid, 3, rng));
    F.for_each_mode([&](std::size_t, Mode m, Complex& c) {
        const int k2 = m.norm2();
        c = k2 == 0 ? Complex(0.0) : c * std::pow(static_cast<double>(k2), -0.5 * slope);
    });
    F = leray_project(F);
    const double peak = lp_norm(from_spectral(F), infinity);
    if (peak > 0.0) F *= amplitude / peak;
    return F;
}

}  // namespace nsb
