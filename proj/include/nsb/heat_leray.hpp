#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "nsb/littlewood_paley.hpp"
#include "nsb/parallel.hpp"
#include "nsb/random_fields.hpp"
#include "nsb/regression.hpp"

namespace nsb {

/// e^{t Delta}: multiplier exp(-t |kappa|^2).
inline SpectralField heat_flow(const SpectralField& F, double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("heat_flow: t must be finite and >= 0");
    if (t == 0.0) return F;
    const Grid& g = F.grid();
    return apply_multiplier(F, [&](Mode m) { return std::exp(-t * wavenumber_squared(g, m)); });
}

inline RealField heat_flow(const RealField& f, double t) { return from_spectral(heat_flow(to_spectral(f), t)); }

/// Leray projector delta_ij - kappa_i kappa_j / |kappa|^2 on each mode.
///
/// Uses the derivative wavevector (Nyquist components zeroed), so the output
/// is exactly divergence-free under the spectral divergence and gradients are
/// annihilated. Modes with zero derivative wavevector (the mean) pass through.
inline SpectralField leray_project(const SpectralField& V) {
    if (!V.is_vector()) throw InvalidArgument("leray_project: vector field required");
    const Grid& g = V.grid();
    SpectralField out = V;
    auto c = out.coefficients();
    const std::size_t sp = g.spectral_points();
    SpectralField lattice(g, 1);
    std::size_t idx = 0;
    lattice.for_each_mode([&](std::size_t, Mode m, Complex&) {
        const auto k = derivative_wavevector(g, m);
        const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        if (k2 > 0.0) {
            const Complex dot = (k[0] * c[idx] + k[1] * c[sp + idx] + k[2] * c[2 * sp + idx]) / k2;
            c[idx] -= k[0] * dot;
            c[sp + idx] -= k[1] * dot;
            c[2 * sp + idx] -= k[2] * dot;
        }
        ++idx;
    });
    return out;
}

inline RealField leray_project(const RealField& v) { return from_spectral(leray_project(to_spectral(v))); }

/// Uniform time nodes 0, dt, ..., steps * dt.
class TimeGrid {
public:
    TimeGrid(double dt, std::size_t steps) : dt_(dt), steps_(steps) {
        if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("TimeGrid: dt must be finite and > 0");
    }

    /// Nodes covering [0, T]; T must be an integer multiple of dt up to rounding.
    static TimeGrid covering(double T, double dt) {
        if (!(T >= 0.0) || !(dt > 0.0)) throw InvalidArgument("TimeGrid: need T >= 0 and dt > 0");
        const double ratio = T / dt;
        const double steps = std::round(ratio);
        if (std::abs(ratio - steps) > 1e-9 * std::max(1.0, ratio))
            throw InvalidArgument("TimeGrid: T is not an integer multiple of dt");
        return TimeGrid(dt, static_cast<std::size_t>(steps));
    }

    double dt() const { return dt_; }
    std::size_t steps() const { return steps_; }
    std::size_t size() const { return steps_ + 1; }
    double node(std::size_t i) const { return static_cast<double>(i) * dt_; }
    double end() const { return node(steps_); }

    std::optional<std::size_t> index_of(double t) const {
        const double r = t / dt_;
        const double i = std::round(r);
        if (i < 0.0 || i > static_cast<double>(steps_)) return std::nullopt;
        if (std::abs(r - i) > 1e-9 * std::max(1.0, r)) return std::nullopt;
        return static_cast<std::size_t>(i);
    }

private:
    double dt_;
    std::size_t steps_;
};

namespace detail {

/// phi1(z) = (e^z - 1)/z and phi2(z) = (e^z - 1 - z)/z^2, stable near z = 0.
inline void exponential_phi(double z, double& phi1, double& phi2) {
    if (std::abs(z) < 0.1) {
        // Taylor series: phi1 = sum z^k/(k+1)!, phi2 = sum z^k/(k+2)!
        double term1 = 1.0, term2 = 0.5;
        phi1 = 0.0;
        phi2 = 0.0;
        for (int k = 0; k < 16; ++k) {
            phi1 += term1;
            phi2 += term2;
            term1 *= z / (k + 2);
            term2 *= z / (k + 3);
        }
        return;
    }
    const double em1 = std::expm1(z);
    phi1 = em1 / z;
    phi2 = (em1 - z) / (z * z);
}

}  // namespace detail

/// Per-mode weights of the exponential integrator on one subinterval of length h:
/// int_0^h e^{-lambda (h - tau)} f(tau) dtau with f linear between its endpoint values
/// equals w_start f(0) + w_end f(h); the carried history decays by exp(-lambda h).
class ExponentialIntegrator {
public:
    ExponentialIntegrator(const Grid& grid, double h) : grid_(grid), h_(h) {
        if (!(h > 0.0)) throw InvalidArgument("ExponentialIntegrator: step must be > 0");
        const std::size_t sp = grid.spectral_points();
        decay_.resize(sp);
        w_start_.resize(sp);
        w_end_.resize(sp);
        SpectralField lattice(grid, 1);
        std::size_t idx = 0;
        lattice.for_each_mode([&](std::size_t, Mode m, Complex&) {
            const double z = -wavenumber_squared(grid, m) * h;
            double p1 = 0.0, p2 = 0.0;
            detail::exponential_phi(z, p1, p2);
            decay_[idx] = std::exp(z);
            w_start_[idx] = h * (p1 - p2);
            w_end_[idx] = h * p2;
            ++idx;
        });
    }

    const Grid& grid() const { return grid_; }
    double step() const { return h_; }

    /// acc <- decay * acc + w_start * f_start + w_end * f_end.
    void advance(SpectralField& acc, const SpectralField& f_start, const SpectralField& f_end) const {
        const std::size_t sp = grid_.spectral_points();
        auto a = acc.coefficients();
        auto s = f_start.coefficients();
        auto e = f_end.coefficients();
        for (std::size_t c = 0; c < acc.components(); ++c)
            for (std::size_t i = 0; i < sp; ++i) {
                const std::size_t j = c * sp + i;
                a[j] = decay_[i] * a[j] + w_start_[i] * s[j] + w_end_[i] * e[j];
            }
    }

private:
    Grid grid_;
    double h_;
    std::vector<double> decay_, w_start_, w_end_;
};

namespace detail {

inline void check_forcing(const TimeGrid& tg, std::span<const SpectralField> forcing) {
    if (forcing.empty()) throw InvalidArgument("duhamel: empty forcing");
    if (forcing.size() != tg.size()) throw InvalidArgument("duhamel: forcing must have one sample per time node");
    for (const auto& f : forcing) {
        require_same_grid(forcing.front().grid(), f.grid(), "duhamel");
        if (f.components() != forcing.front().components()) throw InvalidArgument("duhamel: component mismatch");
    }
}

}  // namespace detail

/// L(f)(t_i) = -int_0^{t_i} e^{(t_i - s) Delta} f(s) ds at every node, with f
/// interpolated linearly in time and the heat factor applied exactly per mode.
inline std::vector<SpectralField> duhamel_all(const TimeGrid& tg, std::span<const SpectralField> forcing,
                                              const ExponentialIntegrator* integrator = nullptr) {
    detail::check_forcing(tg, forcing);
    std::optional<ExponentialIntegrator> own;
    if (!integrator) integrator = &own.emplace(forcing.front().grid(), tg.dt());
    std::vector<SpectralField> out;
    out.reserve(tg.size());
    SpectralField acc(forcing.front().grid(), forcing.front().components());
    out.push_back(acc);
    for (std::size_t i = 0; i + 1 < tg.size(); ++i) {
        integrator->advance(acc, forcing[i], forcing[i + 1]);
        out.push_back(-1.0 * acc);
    }
    return out;
}

/// L(f)(t) for a node t of the time grid.
inline SpectralField duhamel(const TimeGrid& tg, std::span<const SpectralField> forcing, double t) {
    const auto idx = tg.index_of(t);
    if (!idx) throw InvalidArgument("duhamel: t is not a node of the time grid");
    detail::check_forcing(tg, forcing);
    const ExponentialIntegrator integrator(forcing.front().grid(), tg.dt());
    SpectralField acc(forcing.front().grid(), forcing.front().components());
    for (std::size_t i = 0; i < *idx; ++i) integrator.advance(acc, forcing[i], forcing[i + 1]);
    return -1.0 * acc;
}

/// L^1 norm of the (output, input, derivative_axis) component of the kernel of
/// e^{t Delta} P d_k on the torus, i.e. the inverse transform of
/// e^{-t |xi|^2} (delta_ij - xi_i xi_j / |xi|^2) i xi_k, by the rectangle rule.
///
/// The projector factor uses the full lattice wavevector; only the derivative
/// factor drops its Nyquist component, as the spectral derivative does.
inline double oseen_kernel_l1(double t, const Grid& grid, Axis output = Axis::x, Axis input = Axis::x,
                              Axis derivative_axis = Axis::x) {
    const double t_max = std::pow(grid.box_length() / 8.0, 2);
    if (!(t > 0.0) || t > t_max)
        throw InvalidArgument("oseen_kernel_l1: t must lie in (0, (box_length/8)^2]");
    const int i = static_cast<int>(output), j = static_cast<int>(input);
    const double unit = grid.wavenumber_unit();
    SpectralField kernel(grid, 1);
    kernel.for_each_mode([&](std::size_t, Mode m, Complex& c) {
        const double k2 = wavenumber_squared(grid, m);
        if (k2 == 0.0) return;
        const double xi_i = unit * m[output], xi_j = unit * m[input];
        const double proj = (i == j ? 1.0 : 0.0) - xi_i * xi_j / k2;
        const double d = derivative_wavevector(grid, m)[static_cast<int>(derivative_axis)];
        c = Complex(0.0, d * proj * std::exp(-t * k2) / grid.volume());
    });
    return lp_norm(from_spectral(kernel), 1.0);
}

/// sqrt(t) ||e^{t Delta} v||_inf.
inline double smoothed_sup(const SpectralField& v, double t) {
    return std::sqrt(t) * lp_norm(from_spectral(heat_flow(v, t)), infinity);
}

/// Log-spaced sample times t_i in [T 1e-6, T], count points.
inline std::vector<double> kato_sample_times(double T, std::size_t count) {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double e = -6.0 * static_cast<double>(count - 1 - i) / static_cast<double>(count - 1);
        out[i] = T * std::pow(10.0, e);
    }
    out.back() = T;
    return out;
}

/// Default Kato sampling: 64 log-spaced points per decade over six decades.
inline constexpr std::size_t kato_default_samples = 6 * 64 + 1;

/// (1 + ||v0||_3) max_t sqrt(t) ||e^{t Delta} v0||_inf over log-spaced t in (0, T].
inline double kato_quantity(const SpectralField& v0, double T, std::size_t t_samples = kato_default_samples) {
    if (!(T > 0.0) || T > 1.0) throw InvalidArgument("kato_quantity: T must lie in (0, 1]");
    if (t_samples < 8) throw InvalidArgument("kato_quantity: need at least 8 time samples");
    const double l3 = lp_norm(from_spectral(v0), 3.0);
    double sup = 0.0;
    for (double t : kato_sample_times(T, t_samples)) sup = std::max(sup, smoothed_sup(v0, t));
    return (1.0 + l3) * sup;
}

inline double kato_quantity(const RealField& v0, double T, std::size_t t_samples = kato_default_samples) {
    return kato_quantity(to_spectral(v0), T, t_samples);
}

/// Kato quantity evaluated for many horizons of one field, with cached samples.
///
/// Sampling descends from T on a log grid and stops once sqrt(t) W falls below
/// the running maximum, where W (sum of |coefficients|) bounds ||e^{t Delta} v||_inf
/// for every t.
class KatoProfile {
public:
    explicit KatoProfile(SpectralField v, std::size_t points_per_decade = 64)
        : v_(std::move(v)), per_decade_(points_per_decade) {
        if (per_decade_ < 1) throw InvalidArgument("KatoProfile: need >= 1 point per decade");
        l3_ = lp_norm(from_spectral(v_), 3.0);
        double w2 = 0.0;
        for (std::size_t c = 0; c < v_.components(); ++c) {
            double a = 0.0;
            const Grid& g = v_.grid();
            const auto comp = v_.component(c);
            std::size_t idx = 0;
            SpectralField lattice(g, 1);
            lattice.for_each_mode([&](std::size_t, Mode m, Complex&) { a += hermitian_weight(g, m.z) * std::abs(comp[idx++]); });
            w2 += a * a;
        }
        wiener_ = std::sqrt(w2);
    }

    double l3() const { return l3_; }

    double quantity(double T) {
        if (!(T > 0.0) || T > 1.0) throw InvalidArgument("KatoProfile: T must lie in (0, 1]");
        double sup = 0.0;
        const std::size_t count = 6 * per_decade_;
        for (std::size_t i = 0; i <= count; ++i) {
            const double t = T * std::pow(10.0, -static_cast<double>(i) / static_cast<double>(per_decade_));
            if (std::sqrt(t) * wiener_ <= sup) break;
            sup = std::max(sup, sample(t));
        }
        return (1.0 + l3_) * sup;
    }

private:
    double sample(double t) {
        auto it = cache_.find(t);
        if (it != cache_.end()) return it->second;
        const double v = smoothed_sup(v_, t);
        cache_.emplace(t, v);
        return v;
    }

    SpectralField v_;
    std::size_t per_decade_;
    double l3_ = 0.0;
    double wiener_ = 0.0;
    std::map<double, double> cache_;
};

struct SmoothingProbeResult {
    double T = 0.0;
    double max_ratio = 0.0;
    std::size_t samples_used = 0;
};

/// Largest observed sup_{t <= T} ||L f(t)||_{B^{r+alpha,inf}} / ||f||_{B^{r,inf}} over
/// random time-constant forcings f with a flat B^{r,inf} block profile.
///
/// The sup runs over `time_nodes` uniform nodes in (0, T]. Forcings come from
/// streams seeded by (seed, i), so different T share the same ensemble.
inline SmoothingProbeResult lemma2_smoothing_probe(double r, int alpha, double T, std::size_t samples,
                                                   const Grid& grid, std::uint64_t seed,
                                                   std::size_t time_nodes = 8) {
    if (alpha != 1 && alpha != 2) throw InvalidArgument("lemma2_smoothing_probe: alpha must be 1 or 2");
    if (!(T > 0.0) || T > 1.0) throw InvalidArgument("lemma2_smoothing_probe: T must lie in (0, 1]");
    if (samples < 1 || time_nodes < 1) throw InvalidArgument("lemma2_smoothing_probe: need samples and nodes >= 1");
    const DyadicFilterBank bank(grid);
    const TimeGrid tg(T / static_cast<double>(time_nodes), time_nodes);
    const ExponentialIntegrator integrator(grid, tg.dt());
    std::vector<double> ratios(samples, -1.0);
    parallel_for(samples, [&](std::size_t i) {
        auto rng = make_rng(seed, i);
        const SpectralField f = shaped_random_field(bank, 1, -r, rng);
        const double in_norm = besov_norm(bank, f, BesovIndex(r, infinity));
        if (!(in_norm > 0.0)) return;
        const std::vector<SpectralField> forcing(tg.size(), f);
        const auto out = duhamel_all(tg, forcing, &integrator);
        double sup = 0.0;
        for (std::size_t k = 1; k < out.size(); ++k)
            sup = std::max(sup, besov_norm(bank, out[k], BesovIndex(r + alpha, infinity)));
        ratios[i] = sup / in_norm;
    });
    SmoothingProbeResult res;
    res.T = T;
    for (double v : ratios) {
        if (v < 0.0) continue;
        ++res.samples_used;
        res.max_ratio = std::max(res.max_ratio, v);
    }
    return res;
}

}  // namespace nsb
