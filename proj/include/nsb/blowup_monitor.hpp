#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nsb/mild_solver.hpp"

namespace nsb {

/// Per-node diagnostics along a trajectory.
struct NormSeries {
    std::vector<double> times;
    std::vector<double> l2, l3, l6, linf;
    std::vector<double> besov_m1_inf;   ///< ||u(t)||_{B^{-1,inf}_inf}
    std::vector<double> dist_to_omega;  ///< ||u(t) - omega||_{B^{-1,inf}_inf}
    std::vector<double> kato;           ///< Kato quantity of u(t) over (0, kato_horizon]
    std::vector<double> tv_accum;       ///< running sum of B^{-1,inf} increments
    /// ||u(t)||_3^3 - ||u*||_3^3, present only when a reference u* is supplied.
    std::optional<std::vector<double>> kozono_shor;

    std::size_t size() const { return times.size(); }
};

struct MonitorOptions {
    double kato_horizon = 1.0;
    /// Log-spaced Kato samples per decade over six decades below kato_horizon.
    std::size_t kato_points_per_decade = 64;
};

inline const BesovIndex limit_space{-1.0, infinity};

/// Diagnostics of one trajectory. omega defaults to the zero field.
inline NormSeries record(const Trajectory& traj, const std::optional<SpectralField>& omega = std::nullopt,
                         const std::optional<SpectralField>& reference = std::nullopt,
                         const MonitorOptions& options = {}) {
    NormSeries s;
    if (traj.size() == 0) return s;
    const Grid& g = traj.grid();
    if (omega) require_same_grid(g, omega->grid(), "record: omega");
    if (reference) require_same_grid(g, reference->grid(), "record: reference");
    const DyadicFilterBank bank(g);
    double ref_l3_cubed = 0.0;
    if (reference) {
        ref_l3_cubed = std::pow(lp_norm(from_spectral(*reference), 3.0), 3);
        s.kozono_shor.emplace();
    }
    double tv = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const SpectralField& U = traj.state(i);
        const RealField u = from_spectral(U);
        s.times.push_back(traj.times[i]);
        s.l2.push_back(lp_norm(u, 2.0));
        const double l3 = lp_norm(u, 3.0);
        s.l3.push_back(l3);
        s.l6.push_back(lp_norm(u, 6.0));
        s.linf.push_back(lp_norm(u, infinity));
        const double b = besov_norm(bank, U, limit_space);
        s.besov_m1_inf.push_back(b);
        s.dist_to_omega.push_back(omega ? besov_distance(bank, U, *omega, limit_space) : b);
        s.kato.push_back(KatoProfile(U, options.kato_points_per_decade).quantity(options.kato_horizon));
        if (i > 0) tv += besov_distance(bank, U, traj.state(i - 1), limit_space);
        s.tv_accum.push_back(tv);
        if (reference) s.kozono_shor->push_back(l3 * l3 * l3 - ref_l3_cubed);
    }
    return s;
}

struct LowerBoundFit {
    double exponent = 0.0;     ///< fitted slope of log ||u||_p against log(t* - t)
    double c_p = 0.0;          ///< exp(intercept)
    double theory = 0.0;       ///< (1/2)(3/p - 1)
    bool blowup_signature = false;
};

/// Theoretical exponent (1/2)(3/p - 1) of the lower bound ||u(t)||_p >= c_p (t* - t)^e.
inline double lower_bound_exponent(double p) { return std::isinf(p) ? -0.5 : 0.5 * (3.0 / p - 1.0); }

/// Fits log norms[i] = log c_p + e log(t_star - times[i]) by least squares.
/// blowup_signature is set when |e - theory| <= signature_tolerance.
inline LowerBoundFit fit_lower_bound_exponent(std::span<const double> times, std::span<const double> norms, double p,
                                              double t_star, double signature_tolerance = 0.1) {
    if (!(p > 3.0)) throw InvalidArgument("fit_lower_bound_exponent: p must exceed 3");
    if (times.size() != norms.size()) throw InvalidArgument("fit_lower_bound_exponent: size mismatch");
    if (times.size() < 8) throw InvalidArgument("fit_lower_bound_exponent: need at least 8 samples");
    std::vector<double> gap;
    gap.reserve(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(t_star > times[i])) throw InvalidArgument("fit_lower_bound_exponent: t_star must exceed every sample time");
        if (!(norms[i] > 0.0)) throw InvalidArgument("fit_lower_bound_exponent: norms must be positive");
        gap.push_back(t_star - times[i]);
    }
    const LinearFit fit = fit_power_law(gap, norms);
    LowerBoundFit out;
    out.exponent = fit.slope;
    out.c_p = std::exp(fit.intercept);
    out.theory = lower_bound_exponent(p);
    out.blowup_signature = std::abs(out.exponent - out.theory) <= signature_tolerance;
    return out;
}

/// Column overload: p = 6 uses l6, p = inf uses linf.
inline LowerBoundFit fit_lower_bound_exponent(const NormSeries& s, double p, double t_star,
                                              double signature_tolerance = 0.1) {
    if (p == 6.0) return fit_lower_bound_exponent(s.times, s.l6, p, t_star, signature_tolerance);
    if (std::isinf(p)) return fit_lower_bound_exponent(s.times, s.linf, p, t_star, signature_tolerance);
    throw InvalidArgument("fit_lower_bound_exponent: series carries p = 6 and p = inf only");
}

/// sup of dist_to_omega over nodes with t >= t_last - window: the finite-data
/// stand-in for the lim sup at the end of the series.
inline double criterion_distance(const NormSeries& s, double window) {
    if (s.size() == 0) throw InvalidArgument("criterion_distance: empty series");
    const double span = s.times.back() - s.times.front();
    if (!(window > 0.0)) throw InvalidArgument("criterion_distance: empty window");
    if (!(window < span)) throw InvalidArgument("criterion_distance: window must be shorter than the series span");
    const double cut = s.times.back() - window;
    double sup = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s.times[i] >= cut - 1e-12 * std::max(1.0, std::abs(cut))) sup = std::max(sup, s.dist_to_omega[i]);
    return sup;
}

/// Greedy count of successive nodes t_{j+1} > t_j with
/// ||u(t_{j+1}) - u(t_j)||_{B^{-1,inf}} >= epsilon.
inline std::size_t bv_witness_count(const Trajectory& traj, double epsilon) {
    if (!(epsilon > 0.0)) throw InvalidArgument("bv_witness_count: epsilon must be > 0");
    if (traj.size() < 2) return 0;
    const DyadicFilterBank bank(traj.grid());
    std::size_t anchor = 0, count = 0;
    for (std::size_t i = 1; i < traj.size(); ++i) {
        if (besov_distance(bank, traj.state(i), traj.state(anchor), limit_space) >= epsilon) {
            ++count;
            anchor = i;
        }
    }
    return count;
}

struct ScalingCheck {
    double before = 0.0;
    double after = 0.0;
};

/// B^{-1,inf} norm of f and of 2^m f(2^m x). Requires no S_0 content and
/// |xi_i| < n/2^{m+1}.
///
/// On the original grid the dilated field's samples are only the coarse
/// subgrid samples of f, so its block sups are read off a grid 2^m times finer
/// (spectral zero padding); both norms then sup over the same point density.
inline ScalingCheck scaling_invariance_check(const SpectralField& f, int m) {
    const DyadicFilterBank bank(f.grid());
    const double ref = max_coefficient(f);
    const double low = max_coefficient_where(f, [&](Mode k) { return bank.low_pass_transfer(0, k) > 0.0; });
    if (low > support_tolerance * ref)
        throw InvalidArgument("scaling_invariance_check: field has content in the lowest block");
    ScalingCheck out;
    out.before = besov_norm(bank, f, limit_space);
    const SpectralField dilated = refine(dilate_dyadic(f, m), std::size_t{1} << m);
    out.after = besov_norm(DyadicFilterBank(dilated.grid()), dilated, limit_space);
    return out;
}

inline ScalingCheck scaling_invariance_check(const RealField& f, int m) {
    return scaling_invariance_check(to_spectral(f), m);
}

}  // namespace nsb
