#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "nsb/fft.hpp"

namespace nsb {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

/// Multiplies every coefficient by fn(mode), component by component.
template <class Fn>
SpectralField apply_multiplier(SpectralField F, Fn&& fn) {
    F.for_each_mode([&](std::size_t, Mode m, Complex& c) { c *= fn(m); });
    return F;
}

/// Lattice index with the Nyquist entry mapped to zero; every odd multiplier uses this.
inline int derivative_index(const Grid& g, int k) { return k == g.nyquist() || k == -g.nyquist() ? 0 : k; }

/// Physical wavevector components used by the first-derivative multiplier.
inline std::array<double, 3> derivative_wavevector(const Grid& g, Mode m) {
    const double u = g.wavenumber_unit();
    return {u * derivative_index(g, m.x), u * derivative_index(g, m.y), u * derivative_index(g, m.z)};
}

/// |kappa|^2 with the full (Nyquist-inclusive) lattice index; used by even multipliers.
inline double wavenumber_squared(const Grid& g, Mode m) {
    const double u = g.wavenumber_unit();
    return u * u * static_cast<double>(m.norm2());
}

/// Spectral partial derivative: multiplier i*kappa_axis, Nyquist plane zeroed.
inline SpectralField derivative(const SpectralField& F, Axis axis) {
    const Grid& g = F.grid();
    return apply_multiplier(F, [&](Mode m) { return Complex(0.0, derivative_wavevector(g, m)[static_cast<int>(axis)]); });
}

inline RealField derivative(const RealField& f, Axis axis) { return from_spectral(derivative(to_spectral(f), axis)); }

/// Extracts one component as a scalar field.
inline SpectralField component_of(const SpectralField& F, std::size_t c) {
    SpectralField out(F.grid(), 1);
    auto src = F.component(c);
    std::copy(src.begin(), src.end(), out.component(0).begin());
    return out;
}

inline RealField component_of(const RealField& f, std::size_t c) {
    RealField out(f.grid(), 1);
    auto src = f.component(c);
    std::copy(src.begin(), src.end(), out.component(0).begin());
    return out;
}

/// Assembles a vector field from three scalar fields.
inline SpectralField make_vector(const SpectralField& a, const SpectralField& b, const SpectralField& c) {
    require_same_grid(a.grid(), b.grid(), "make_vector");
    require_same_grid(a.grid(), c.grid(), "make_vector");
    SpectralField out(a.grid(), 3);
    const SpectralField* parts[3] = {&a, &b, &c};
    for (std::size_t i = 0; i < 3; ++i) {
        if (parts[i]->components() != 1) throw InvalidArgument("make_vector: expected scalar parts");
        auto src = parts[i]->component(0);
        std::copy(src.begin(), src.end(), out.component(i).begin());
    }
    return out;
}

/// Spectral divergence of a vector field (scalar result).
inline SpectralField divergence(const SpectralField& V) {
    if (!V.is_vector()) throw InvalidArgument("divergence: vector field required");
    const Grid& g = V.grid();
    SpectralField out(g, 1);
    auto dst = out.component(0);
    const std::size_t sp = g.spectral_points();
    auto coeffs = V.coefficients();
    std::size_t idx = 0;
    out.for_each_mode([&](std::size_t, Mode m, Complex&) {
        const auto k = derivative_wavevector(g, m);
        dst[idx] = Complex(0.0, 1.0) * (k[0] * coeffs[idx] + k[1] * coeffs[sp + idx] + k[2] * coeffs[2 * sp + idx]);
        ++idx;
    });
    return out;
}

/// Spectral gradient of a scalar field.
inline SpectralField gradient(const SpectralField& F) {
    if (F.components() != 1) throw InvalidArgument("gradient: scalar field required");
    return make_vector(derivative(F, Axis::x), derivative(F, Axis::y), derivative(F, Axis::z));
}

inline void require_norm_exponent(double p) {
    if (!(p >= 1.0)) throw InvalidArgument("norm exponent must satisfy p >= 1 (or p = inf)");
}

/// L^p norm by rectangle-rule quadrature over the samples; vector fields use
/// the pointwise Euclidean magnitude. p = infinity gives the sample maximum.
inline double lp_norm(const RealField& f, double p) {
    require_norm_exponent(p);
    const std::size_t np = f.grid().points();
    const std::size_t nc = f.components();
    auto s = f.samples();
    auto magnitude2 = [&](std::size_t i) {
        double m = 0.0;
        for (std::size_t c = 0; c < nc; ++c) m += s[c * np + i] * s[c * np + i];
        return m;
    };
    if (std::isinf(p)) {
        double mx = 0.0;
        for (std::size_t i = 0; i < np; ++i) mx = std::max(mx, magnitude2(i));
        return std::sqrt(mx);
    }
    double acc = 0.0;
    if (p == 2.0) {
        for (std::size_t i = 0; i < np; ++i) acc += magnitude2(i);
        return std::sqrt(acc * f.grid().cell_volume());
    }
    for (std::size_t i = 0; i < np; ++i) acc += std::pow(magnitude2(i), 0.5 * p);
    return std::pow(acc * f.grid().cell_volume(), 1.0 / p);
}

/// Per-component maximum of |f| over the samples.
inline double max_abs_component(const RealField& f, std::size_t c) {
    double mx = 0.0;
    for (double v : f.component(c)) mx = std::max(mx, std::abs(v));
    return mx;
}

/// L^2 norm from the coefficients (Parseval), no transform needed.
inline double l2_norm(const SpectralField& F) {
    double acc = 0.0;
    const Grid& g = F.grid();
    F.for_each_mode([&](std::size_t, Mode m, const Complex& c) { acc += hermitian_weight(g, m.z) * std::norm(c); });
    return std::sqrt(acc * g.volume());
}

/// L^2 inner product from the coefficients.
inline double l2_inner(const SpectralField& A, const SpectralField& B) {
    require_same_grid(A.grid(), B.grid(), "l2_inner");
    if (A.components() != B.components()) throw InvalidArgument("l2_inner: component mismatch");
    const Grid& g = A.grid();
    auto b = B.coefficients();
    double acc = 0.0;
    std::size_t idx = 0;
    A.for_each_mode([&](std::size_t, Mode m, const Complex& a) {
        acc += hermitian_weight(g, m.z) * (std::conj(a) * b[idx]).real();
        ++idx;
    });
    return acc * g.volume();
}

/// Largest coefficient magnitude.
inline double max_coefficient(const SpectralField& F) {
    double mx = 0.0;
    for (const Complex& c : F.coefficients()) mx = std::max(mx, std::abs(c));
    return mx;
}

/// True when xi lies inside the 2/3-rule band |xi_i| <= n/3 on every axis.
inline bool in_dealiasing_band(const Grid& g, Mode m) {
    const int n = static_cast<int>(g.n());
    return 3 * std::abs(m.x) <= n && 3 * std::abs(m.y) <= n && 3 * std::abs(m.z) <= n;
}

/// Zeroes every coefficient outside the 2/3-rule band.
inline SpectralField dealias(SpectralField F) {
    const Grid& g = F.grid();
    F.for_each_mode([&](std::size_t, Mode m, Complex& c) {
        if (!in_dealiasing_band(g, m)) c = 0.0;
    });
    return F;
}

/// Keeps only modes with |xi_i| <= cutoff on every axis.
inline SpectralField truncate_cube(SpectralField F, int cutoff) {
    F.for_each_mode([&](std::size_t, Mode m, Complex& c) {
        if (std::abs(m.x) > cutoff || std::abs(m.y) > cutoff || std::abs(m.z) > cutoff) c = 0.0;
    });
    return F;
}

/// The same trigonometric polynomial on a grid `factor` times finer (spectral
/// zero padding). Nyquist coefficients are split evenly between +n/2 and -n/2
/// so the refined field stays real and agrees with F at the coarse nodes.
inline SpectralField refine(const SpectralField& F, std::size_t factor) {
    if (factor == 0 || (factor & (factor - 1)) != 0) throw InvalidArgument("refine: factor must be a power of two");
    if (factor == 1) return F;
    const Grid& g = F.grid();
    const Grid fine(g.n() * factor, g.box_length());
    SpectralField out(fine, F.components());
    const int ny = g.nyquist();
    const std::size_t sp = fine.spectral_points(), h = fine.half();
    auto dst = out.coefficients();
    F.for_each_mode([&](std::size_t c, Mode m, const Complex& v) {
        const bool nx = m.x == ny, nyq_y = m.y == ny;
        const double w = (nx ? 0.5 : 1.0) * (nyq_y ? 0.5 : 1.0) * (m.z == ny ? 0.5 : 1.0);
        for (int sx : {1, -1}) {
            if (sx < 0 && !nx) continue;
            for (int sy : {1, -1}) {
                if (sy < 0 && !nyq_y) continue;
                const std::size_t ix = fine.storage_index(sx * m.x), iy = fine.storage_index(sy * m.y);
                dst[c * sp + (ix * fine.n() + iy) * h + static_cast<std::size_t>(m.z)] = w * v;
            }
        }
    });
    return out;
}

/// Sample-wise product. Component counts must match, or one side must be scalar
/// (broadcast). With dealias set, the product is truncated to the 2/3-rule band.
inline RealField pointwise_product(const RealField& f, const RealField& g, bool dealias_product) {
    require_same_grid(f.grid(), g.grid(), "pointwise_product");
    const std::size_t nc = std::max(f.components(), g.components());
    if (f.components() != g.components() && f.components() != 1 && g.components() != 1)
        throw InvalidArgument("pointwise_product: incompatible component counts");
    RealField out(f.grid(), nc);
    const std::size_t np = f.grid().points();
    for (std::size_t c = 0; c < nc; ++c) {
        auto a = f.component(f.components() == 1 ? 0 : c);
        auto b = g.component(g.components() == 1 ? 0 : c);
        auto d = out.component(c);
        for (std::size_t i = 0; i < np; ++i) d[i] = a[i] * b[i];
    }
    if (!dealias_product) return out;
    return from_spectral(dealias(to_spectral(out)));
}

/// Mean value of each component (the xi = 0 coefficient).
inline double mean_of(const SpectralField& F, std::size_t c) { return F.component(c)[0].real(); }

}  // namespace nsb
