#pragma once

#include <cstdint>
#include <random>

#include "nsb/littlewood_paley.hpp"

namespace nsb {

/// Deterministic per-sample generator: the stream depends only on (seed, stream).
inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

/// Real white noise transformed to spectral space, so the coefficients are
/// complex Gaussian with exact Hermitian symmetry. Nyquist planes are zeroed.
inline SpectralField white_noise_spectrum(const Grid& grid, std::size_t components, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    RealField w(grid, components);
    for (double& v : w.samples()) v = normal(rng);
    SpectralField F = to_spectral(w);
    const int nyq = grid.nyquist();
    F.for_each_mode([&](std::size_t, Mode m, Complex& c) {
        if (std::abs(m.x) == nyq || std::abs(m.y) == nyq || m.z == nyq) c = 0.0;
    });
    return F;
}

/// Random field inside the 2/3-rule band whose dyadic blocks satisfy
/// ||Delta_k f||_inf = 2^{exponent k} before re-summation.
///
/// exponent = 1 gives a flat B^{-1,inf} profile, 0 a flat L^inf-per-block
/// profile, -(s+1) a flat B^{s+1,inf} profile. Blocks overlap, so the
/// profile of the summed field is approximate.
inline SpectralField shaped_random_field(const DyadicFilterBank& bank, std::size_t components, double exponent,
                                         std::mt19937_64& rng) {
    const Grid& g = bank.grid();
    SpectralField noise = dealias(white_noise_spectrum(g, components, rng));
    SpectralField out(g, components);
    for (int k = 0; k <= bank.j_max(); ++k) {
        SpectralField block = dyadic_block(bank, noise, k);
        double peak = 0.0;
        const RealField phys = from_spectral(block);
        for (std::size_t c = 0; c < components; ++c) peak = std::max(peak, max_abs_component(phys, c));
        if (peak <= 0.0) continue;
        block *= std::exp2(exponent * k) / peak;
        out += block;
    }
    return dealias(out);
}

}  // namespace nsb
