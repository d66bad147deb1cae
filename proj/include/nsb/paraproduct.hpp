#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "nsb/littlewood_paley.hpp"
#include "nsb/parallel.hpp"
#include "nsb/random_fields.hpp"

namespace nsb {

namespace detail {

/// Accumulates a[i] * b[i] sample-wise into acc, with scalar broadcast.
inline void accumulate_product(RealField& acc, const RealField& a, const RealField& b) {
    const std::size_t np = acc.grid().points();
    for (std::size_t c = 0; c < acc.components(); ++c) {
        auto x = a.component(a.components() == 1 ? 0 : c);
        auto y = b.component(b.components() == 1 ? 0 : c);
        auto d = acc.component(c);
        for (std::size_t i = 0; i < np; ++i) d[i] += x[i] * y[i];
    }
}

inline std::size_t product_components(std::size_t a, std::size_t b) {
    if (a != b && a != 1 && b != 1) throw InvalidArgument("paraproduct: incompatible component counts");
    return std::max(a, b);
}

/// sum_{k=first..j_max} lows[clamp(k + shift)] * blocks[k], dealiased.
inline SpectralField paraproduct_sum(const std::vector<RealField>& lows, const std::vector<RealField>& blocks,
                                     int shift, int first) {
    const int j_max = static_cast<int>(blocks.size()) - 1;
    RealField acc(blocks.front().grid(),
                  product_components(lows.front().components(), blocks.front().components()));
    for (int k = first; k <= j_max; ++k) {
        const int j = std::clamp(k + shift, 0, j_max);
        accumulate_product(acc, lows[static_cast<std::size_t>(j)], blocks[static_cast<std::size_t>(k)]);
    }
    return dealias(to_spectral(acc));
}

inline void check_pair(const DyadicFilterBank& bank, const SpectralField& f, const SpectralField& g, const char* what) {
    require_same_grid(f.grid(), g.grid(), what);
    bank.require_grid(f.grid(), what);
}

}  // namespace detail

/// pi0(f, g) = sum_k S_k f * Delta_k g (dealiased products).
inline SpectralField pi0(const DyadicFilterBank& bank, const SpectralField& f, const SpectralField& g) {
    detail::check_pair(bank, f, g, "pi0");
    return detail::paraproduct_sum(physical_low_passes(bank, f), physical_blocks(bank, g), 0, 0);
}

/// pi1(f, g) = sum_k S_{k+1} f * Delta_k g, with S_{j_max+1} = S_{j_max}.
inline SpectralField pi1(const DyadicFilterBank& bank, const SpectralField& f, const SpectralField& g) {
    detail::check_pair(bank, f, g, "pi1");
    return detail::paraproduct_sum(physical_low_passes(bank, f), physical_blocks(bank, g), 1, 0);
}

/// sum_{k>=1} S_{k-1} f * Delta_k g: the strictly-high complement of pi0,
/// so that f g = pi0(f, g) + exact_bony_high(g, f) holds identically.
inline SpectralField exact_bony_high(const DyadicFilterBank& bank, const SpectralField& f, const SpectralField& g) {
    detail::check_pair(bank, f, g, "exact_bony_high");
    return detail::paraproduct_sum(physical_low_passes(bank, f), physical_blocks(bank, g), -1, 1);
}

/// Dealiased product f g as a spectral field.
inline SpectralField dealiased_product(const SpectralField& f, const SpectralField& g) {
    return to_spectral(pointwise_product(from_spectral(f), from_spectral(g), true));
}

/// f g - pi0(f, g) - pi1(g, f). Equals -sum_k Delta_k f (Delta_k g + Delta_{k+1} g):
/// the two paraproducts both contain the near-diagonal block pairs.
inline SpectralField bony_remainder(const DyadicFilterBank& bank, const SpectralField& f, const SpectralField& g) {
    detail::check_pair(bank, f, g, "bony_remainder");
    return dealiased_product(f, g) - pi0(bank, f, g) - pi1(bank, g, f);
}

inline RealField pi0(const DyadicFilterBank& bank, const RealField& f, const RealField& g) {
    return from_spectral(pi0(bank, to_spectral(f), to_spectral(g)));
}
inline RealField pi1(const DyadicFilterBank& bank, const RealField& f, const RealField& g) {
    return from_spectral(pi1(bank, to_spectral(f), to_spectral(g)));
}
inline RealField exact_bony_high(const DyadicFilterBank& bank, const RealField& f, const RealField& g) {
    return from_spectral(exact_bony_high(bank, to_spectral(f), to_spectral(g)));
}
inline RealField bony_remainder(const DyadicFilterBank& bank, const RealField& f, const RealField& g) {
    return from_spectral(bony_remainder(bank, to_spectral(f), to_spectral(g)));
}

enum class Paraproduct { pi0, pi1 };

/// Input space of the first argument in the boundedness ratio.
enum class Lemma1Variant {
    besov_in,  ///< f in B^{-1,inf}, output measured in B^{s,inf}
    linf_in,   ///< f in L^inf, output measured in B^{s+1,inf}
};

inline const char* to_string(Paraproduct p) { return p == Paraproduct::pi0 ? "pi0" : "pi1"; }
inline const char* to_string(Lemma1Variant v) { return v == Lemma1Variant::besov_in ? "besov_in" : "linf_in"; }

/// Largest observed boundedness ratio for one operator/variant pair.
/// Empirical constants are lower bounds on the operator norm.
struct Lemma1Estimate {
    Paraproduct which = Paraproduct::pi0;
    Lemma1Variant variant = Lemma1Variant::besov_in;
    double s = 0.0;
    std::size_t n = 0;
    std::size_t samples = 0;
    std::size_t pairs_used = 0;
    std::uint64_t seed = 0;
    double max_ratio = 0.0;
};

/// Ratios ||pi(f, g)||_out / (||f||_X ||g||_{B^{s+1,inf}}) for one random pair,
/// ordered (pi0, besov_in), (pi0, linf_in), (pi1, besov_in), (pi1, linf_in).
/// A pair with a vanishing denominator yields a negative (skipped) entry.
inline std::array<double, 4> lemma1_ratios(const DyadicFilterBank& bank, double s, const SpectralField& f_besov,
                                           const SpectralField& f_linf, const SpectralField& g) {
    const auto g_blocks = physical_blocks(bank, g);
    const double g_norm = besov_norm_of_blocks(g_blocks, BesovIndex(s + 1.0, infinity));
    std::array<double, 4> out{-1.0, -1.0, -1.0, -1.0};
    const SpectralField* inputs[2] = {&f_besov, &f_linf};
    for (int v = 0; v < 2; ++v) {
        const auto lows = physical_low_passes(bank, *inputs[v]);
        double x_norm = 0.0;
        if (v == 0) {
            std::vector<RealField> blocks;
            blocks.reserve(lows.size());
            blocks.push_back(lows[0]);
            for (std::size_t k = 1; k < lows.size(); ++k) blocks.push_back(lows[k] - lows[k - 1]);
            x_norm = besov_norm_of_blocks(blocks, BesovIndex(-1.0, infinity));
        } else {
            x_norm = lp_norm(lows.back(), infinity);  // S_{j_max} is the identity
        }
        const double denom = x_norm * g_norm;
        if (!(denom > 0.0)) continue;
        const BesovIndex out_idx(v == 0 ? s : s + 1.0, infinity);
        for (int op = 0; op < 2; ++op) {
            const SpectralField P = detail::paraproduct_sum(lows, g_blocks, op, 0);
            out[static_cast<std::size_t>(op * 2 + v)] = besov_norm(bank, P, out_idx) / denom;
        }
    }
    return out;
}

/// Runs the random-pair harness once for all four operator/variant combinations.
///
/// Sample i draws f_besov (flat B^{-1,inf} profile), f_linf (flat per-block
/// L^inf profile) and g (flat B^{s+1,inf} profile) from a stream seeded by
/// (seed, i), so results do not depend on the thread count.
inline std::array<Lemma1Estimate, 4> estimate_lemma1_constants(double s, std::size_t samples, const Grid& grid,
                                                               std::uint64_t seed) {
    if (!(s > 0.0)) throw InvalidArgument("estimate_lemma1_constant: s must be > 0");
    if (samples < 1) throw InvalidArgument("estimate_lemma1_constant: samples must be >= 1");
    const DyadicFilterBank bank(grid);
    std::vector<std::array<double, 4>> ratios(samples);
    parallel_for(samples, [&](std::size_t i) {
        auto rng = make_rng(seed, i);
        const SpectralField f_besov = shaped_random_field(bank, 1, 1.0, rng);
        const SpectralField f_linf = shaped_random_field(bank, 1, 0.0, rng);
        const SpectralField g = shaped_random_field(bank, 1, -(s + 1.0), rng);
        ratios[i] = lemma1_ratios(bank, s, f_besov, f_linf, g);
    });
    std::array<Lemma1Estimate, 4> est;
    for (std::size_t slot = 0; slot < 4; ++slot) {
        auto& e = est[slot];
        e.which = slot < 2 ? Paraproduct::pi0 : Paraproduct::pi1;
        e.variant = slot % 2 == 0 ? Lemma1Variant::besov_in : Lemma1Variant::linf_in;
        e.s = s;
        e.n = grid.n();
        e.samples = samples;
        e.seed = seed;
        for (const auto& r : ratios) {
            if (r[slot] < 0.0) continue;
            ++e.pairs_used;
            e.max_ratio = std::max(e.max_ratio, r[slot]);
        }
    }
    return est;
}

inline double estimate_lemma1_constant(Paraproduct which, Lemma1Variant variant, double s, std::size_t samples,
                                       const Grid& grid, std::uint64_t seed) {
    const auto all = estimate_lemma1_constants(s, samples, grid, seed);
    const std::size_t slot = (which == Paraproduct::pi0 ? 0 : 2) + (variant == Lemma1Variant::besov_in ? 0 : 1);
    return all[slot].max_ratio;
}

}  // namespace nsb
