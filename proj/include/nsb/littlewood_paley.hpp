#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "nsb/spectral.hpp"

namespace nsb {

/// Shape of the radial cutoff on the transition band (1, 2).
enum class SmoothingProfile {
    exponential,    ///< C-infinity step built from exp(-1/t) bumps (default)
    raised_cosine,  ///< 0.5 (1 + cos(pi (r - 1))); smooth inside the band only
};

/// Radial cutoff: 1 on [0, 1], 0 on [2, inf), nonincreasing in between.
inline double cutoff_profile(double r, SmoothingProfile profile = SmoothingProfile::exponential) {
    if (r <= 1.0) return 1.0;
    if (r >= 2.0) return 0.0;
    switch (profile) {
    case SmoothingProfile::raised_cosine:
        return 0.5 * (1.0 + std::cos(std::numbers::pi * (r - 1.0)));
    case SmoothingProfile::exponential:
    default: {
        const double a = std::exp(-1.0 / (2.0 - r));
        const double b = std::exp(-1.0 / (r - 1.0));
        return a / (a + b);
    }
    }
}

/// The Besov index (s, p) naming B_p^{s,inf}.
struct BesovIndex {
    double s = -1.0;
    double p = infinity;

    BesovIndex() = default;
    BesovIndex(double s_, double p_) : s(s_), p(p_) { require_norm_exponent(p); }
};

/// Transfer functions of the low-pass operators S_j, j = 0..j_max, sampled
/// on the half-spectrum lattice: transfer_j(xi) = Phi(2^-j |kappa(xi)|).
///
/// j_max is the smallest level whose cutoff covers the whole lattice (corner
/// modes included), so S_{j_max} is the identity on every grid field.
class DyadicFilterBank {
public:
    explicit DyadicFilterBank(const Grid& grid, SmoothingProfile profile = SmoothingProfile::exponential)
        : grid_(grid), profile_(profile) {
        const double kmax = std::sqrt(3.0) * grid.nyquist() * grid.wavenumber_unit();
        j_max_ = 0;
        while (std::ldexp(1.0, j_max_) < kmax) ++j_max_;
        for (int j = 0; j <= j_max_; ++j) scale_.push_back(std::ldexp(1.0, -j));

        radius_.resize(grid.spectral_points());
        SpectralField probe(grid, 1);
        std::size_t idx = 0;
        probe.for_each_mode([&](std::size_t, Mode m, Complex&) { radius_[idx++] = std::sqrt(wavenumber_squared(grid, m)); });
    }

    const Grid& grid() const { return grid_; }
    SmoothingProfile profile() const { return profile_; }
    int j_max() const { return j_max_; }
    int block_count() const { return j_max_ + 1; }

    /// Low-pass transfer at level j (clamped to j_max above the top level) for
    /// the half-spectrum storage slot i. Evaluated on demand: only a thin shell
    /// of modes per level lies in the transition band.
    double transfer(int j, std::size_t i) const {
        return cutoff_profile(scale_[static_cast<std::size_t>(std::min(j, j_max_))] * radius_[i], profile_);
    }
    double low_pass_transfer(int j, Mode m) const { return profile_value(j, m); }

    /// Transfer of the dyadic block k: S_0 for k = 0, S_k - S_{k-1} otherwise.
    double block_transfer(int k, Mode m) const {
        require_level(k, "dyadic_block");
        return k == 0 ? profile_value(0, m) : profile_value(k, m) - profile_value(k - 1, m);
    }

    void require_grid(const Grid& g, const char* what) const { require_same_grid(grid_, g, what); }

private:
    double profile_value(int j, Mode m) const {
        require_level(j, "transfer");
        const int jj = std::min(j, j_max_);
        return cutoff_profile(std::ldexp(1.0, -jj) * std::sqrt(wavenumber_squared(grid_, m)), profile_);
    }

    void require_level(int j, const char* what) const {
        if (j < 0 || j > j_max_ + 1)
            throw InvalidArgument(std::string(what) + ": level " + std::to_string(j) + " outside 0.." +
                                  std::to_string(j_max_));
    }

    Grid grid_;
    SmoothingProfile profile_;
    int j_max_ = 0;
    std::vector<double> radius_;
    std::vector<double> scale_;  ///< 2^-j
};

namespace detail {

inline void require_block_index(const DyadicFilterBank& bank, int k, const char* what) {
    if (k < 0 || k > bank.j_max())
        throw InvalidArgument(std::string(what) + ": index " + std::to_string(k) + " outside 0.." +
                              std::to_string(bank.j_max()));
}

template <class Weight>
SpectralField multiply_half_spectrum(const SpectralField& F, Weight&& weight) {
    SpectralField out = F;
    const std::size_t sp = F.grid().spectral_points();
    auto c = out.coefficients();
    for (std::size_t i = 0; i < sp; ++i) {
        const double w = weight(i);
        for (std::size_t comp = 0; comp < F.components(); ++comp) c[comp * sp + i] *= w;
    }
    return out;
}

}  // namespace detail

/// S_j f: spectral multiplication by the level-j transfer.
inline SpectralField low_pass(const DyadicFilterBank& bank, const SpectralField& F, int j) {
    bank.require_grid(F.grid(), "low_pass");
    detail::require_block_index(bank, j, "low_pass");
    return detail::multiply_half_spectrum(F, [&](std::size_t i) { return bank.transfer(j, i); });
}

/// Delta_k f: S_0 f for k = 0, S_k f - S_{k-1} f for k >= 1.
inline SpectralField dyadic_block(const DyadicFilterBank& bank, const SpectralField& F, int k) {
    bank.require_grid(F.grid(), "dyadic_block");
    detail::require_block_index(bank, k, "dyadic_block");
    if (k == 0) return low_pass(bank, F, 0);
    return detail::multiply_half_spectrum(F, [&](std::size_t i) { return bank.transfer(k, i) - bank.transfer(k - 1, i); });
}

inline RealField low_pass(const DyadicFilterBank& bank, const RealField& f, int j) {
    return from_spectral(low_pass(bank, to_spectral(f), j));
}
inline RealField dyadic_block(const DyadicFilterBank& bank, const RealField& f, int k) {
    return from_spectral(dyadic_block(bank, to_spectral(f), k));
}

/// Physical-space dyadic blocks Delta_0 f, ..., Delta_{j_max} f.
inline std::vector<RealField> physical_blocks(const DyadicFilterBank& bank, const SpectralField& F) {
    std::vector<RealField> out;
    out.reserve(static_cast<std::size_t>(bank.block_count()));
    for (int k = 0; k <= bank.j_max(); ++k) out.push_back(from_spectral(dyadic_block(bank, F, k)));
    return out;
}

/// Physical-space low passes S_0 f, ..., S_{j_max} f.
inline std::vector<RealField> physical_low_passes(const DyadicFilterBank& bank, const SpectralField& F) {
    std::vector<RealField> out;
    out.reserve(static_cast<std::size_t>(bank.block_count()));
    for (int j = 0; j <= bank.j_max(); ++j) out.push_back(from_spectral(low_pass(bank, F, j)));
    return out;
}

/// Delta_0 f + sum_{k=1..j_max} Delta_k f, each block summed in physical space.
inline RealField lp_reconstruct(const DyadicFilterBank& bank, const SpectralField& F) {
    bank.require_grid(F.grid(), "lp_reconstruct");
    RealField sum(F.grid(), F.components());
    for (int k = 0; k <= bank.j_max(); ++k) sum += from_spectral(dyadic_block(bank, F, k));
    return sum;
}
inline RealField lp_reconstruct(const DyadicFilterBank& bank, const RealField& f) {
    return lp_reconstruct(bank, to_spectral(f));
}

/// Per-block L^p norms, max over components for vector fields.
inline double block_norm(const RealField& block, double p) {
    if (block.components() == 1) return lp_norm(block, p);
    double mx = 0.0;
    for (std::size_t c = 0; c < block.components(); ++c) mx = std::max(mx, lp_norm(component_of(block, c), p));
    return mx;
}

inline std::vector<double> block_norms(const std::vector<RealField>& blocks, double p) {
    require_norm_exponent(p);
    std::vector<double> out;
    out.reserve(blocks.size());
    for (const auto& b : blocks) out.push_back(block_norm(b, p));
    return out;
}

/// 2^{s k} ||Delta_k f||_p for k = 0..j_max; vector fields take the max over
/// components. Components are processed one at a time; empty blocks are skipped.
inline std::vector<double> weighted_block_norms(const DyadicFilterBank& bank, const SpectralField& F, BesovIndex idx) {
    bank.require_grid(F.grid(), "besov_norm");
    require_norm_exponent(idx.p);
    std::vector<double> norms(static_cast<std::size_t>(bank.block_count()), 0.0);
    for (std::size_t c = 0; c < F.components(); ++c) {
        const SpectralField comp = F.components() == 1 ? F : component_of(F, c);
        if (max_coefficient(comp) == 0.0) continue;
        for (int k = 0; k <= bank.j_max(); ++k) {
            const SpectralField block = dyadic_block(bank, comp, k);
            if (max_coefficient(block) == 0.0) continue;
            const double v = lp_norm(from_spectral(block), idx.p);
            norms[static_cast<std::size_t>(k)] = std::max(norms[static_cast<std::size_t>(k)], v);
        }
    }
    for (std::size_t k = 0; k < norms.size(); ++k) norms[k] *= std::exp2(idx.s * static_cast<double>(k));
    return norms;
}

/// Besov norm from precomputed physical blocks.
inline double besov_norm_of_blocks(const std::vector<RealField>& blocks, BesovIndex idx) {
    double mx = 0.0;
    for (std::size_t k = 0; k < blocks.size(); ++k)
        mx = std::max(mx, std::exp2(idx.s * static_cast<double>(k)) * block_norm(blocks[k], idx.p));
    return mx;
}

/// sup_k 2^{s k} ||Delta_k f||_p over the finite block range 0..j_max.
inline double besov_norm(const DyadicFilterBank& bank, const SpectralField& F, BesovIndex idx) {
    auto w = weighted_block_norms(bank, F, idx);
    return w.empty() ? 0.0 : *std::max_element(w.begin(), w.end());
}
inline double besov_norm(const DyadicFilterBank& bank, const RealField& f, BesovIndex idx) {
    return besov_norm(bank, to_spectral(f), idx);
}

inline double besov_distance(const DyadicFilterBank& bank, const SpectralField& F, const SpectralField& G,
                             BesovIndex idx) {
    require_same_grid(F.grid(), G.grid(), "besov_distance");
    return besov_norm(bank, F - G, idx);
}
inline double besov_distance(const DyadicFilterBank& bank, const RealField& f, const RealField& g, BesovIndex idx) {
    require_same_grid(f.grid(), g.grid(), "besov_distance");
    return besov_norm(bank, f - g, idx);
}

/// Largest |coefficient| at wavevectors where pred(mode) holds.
template <class Pred>
double max_coefficient_where(const SpectralField& F, Pred&& pred) {
    double mx = 0.0;
    F.for_each_mode([&](std::size_t, Mode m, const Complex& c) {
        if (pred(m)) mx = std::max(mx, std::abs(c));
    });
    return mx;
}

/// Relative level below which a coefficient counts as absent in support checks.
inline constexpr double support_tolerance = 1e-12;

/// 2^m f(2^m x), computed by moving coefficient xi to 2^m xi and scaling by 2^m.
///
/// Requires |xi_i| < n / 2^{m+1} on every nonzero coefficient so the image
/// stays strictly below the Nyquist plane.
inline SpectralField dilate_dyadic(const SpectralField& F, int m) {
    if (m < 0) throw InvalidArgument("dilate_dyadic: m must be >= 0");
    if (m == 0) return F;
    const Grid& g = F.grid();
    const int n = static_cast<int>(g.n());
    if ((n >> (m + 1)) < 1) throw InvalidArgument("dilate_dyadic: grid too coarse for this dilation");
    const int bound = n >> (m + 1);
    const double ref = max_coefficient(F);
    const double outside = max_coefficient_where(F, [&](Mode k) {
        return std::abs(k.x) >= bound || std::abs(k.y) >= bound || std::abs(k.z) >= bound;
    });
    if (outside > support_tolerance * ref)
        throw InvalidArgument("dilate_dyadic: field is not band-limited to |xi_i| < n/2^(m+1)");

    SpectralField out(g, F.components());
    const std::size_t sp = g.spectral_points();
    const std::size_t h = g.half();
    auto dst = out.coefficients();
    const double amp = std::ldexp(1.0, m);
    F.for_each_mode([&](std::size_t c, Mode k, const Complex& v) {
        if (std::abs(k.x) >= bound || std::abs(k.y) >= bound || k.z >= bound) return;
        const std::size_t ix = g.storage_index(k.x * (1 << m));
        const std::size_t iy = g.storage_index(k.y * (1 << m));
        const std::size_t iz = static_cast<std::size_t>(k.z * (1 << m));
        dst[c * sp + (ix * g.n() + iy) * h + iz] = amp * v;
    });
    return out;
}

inline RealField dilate_dyadic(const RealField& f, int m) { return from_spectral(dilate_dyadic(to_spectral(f), m)); }

}  // namespace nsb
