#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "nsb/heat_leray.hpp"

namespace nsb {

struct SolverConfig {
    double dt = 1e-2;
    /// Stop when max_i ||u_new(t_i) - u(t_i)||_2 / max_i ||u_new(t_i)||_2 falls below this.
    double picard_tol = 1e-10;
    int picard_max_iter = 50;
    /// Smallness threshold for the Kato quantity; a calibrated constant, not a derived one.
    double epsilon3 = 0.1;
    bool dealias = true;
    std::size_t kato_points_per_decade = 64;
    /// Smallest dyadic horizon probed.
    double min_horizon = 0x1p-30;
    bool compute_residual = true;

    void validate() const {
        if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("solver config: dt must be > 0");
        if (!(picard_tol > 0.0)) throw InvalidArgument("solver config: picard_tol must be > 0");
        if (picard_max_iter < 1) throw InvalidArgument("solver config: picard_max_iter must be >= 1");
        if (!(epsilon3 > 0.0)) throw InvalidArgument("solver config: epsilon3 must be > 0");
        if (kato_points_per_decade < 1) throw InvalidArgument("solver config: kato_points_per_decade must be >= 1");
        if (!(min_horizon > 0.0) || min_horizon > 1.0)
            throw InvalidArgument("solver config: min_horizon must lie in (0, 1]");
    }
};

enum class TrajectoryStatus { completed, picard_diverged, horizon_reached };

inline const char* to_string(TrajectoryStatus s) {
    switch (s) {
    case TrajectoryStatus::completed: return "completed";
    case TrajectoryStatus::picard_diverged: return "picard_diverged";
    case TrajectoryStatus::horizon_reached: return "horizon_reached";
    }
    return "unknown";
}

struct WindowReport {
    std::size_t first_node = 0;
    std::size_t last_node = 0;
    double horizon = 0.0;
    int sweeps = 0;
    double final_update = 0.0;
};

/// Solver output: one divergence-free state per accepted time node.
struct Trajectory {
    std::vector<double> times;
    std::vector<SpectralField> states;
    /// Relative integral-equation residual at each node (0 at window starts).
    std::vector<double> residuals;
    std::vector<WindowReport> windows;
    SolverConfig config;
    TrajectoryStatus status = TrajectoryStatus::completed;
    double requested_T = 0.0;
    std::string diagnostics;

    std::size_t size() const { return times.size(); }
    const SpectralField& state(std::size_t i) const { return states.at(i); }
    RealField field(std::size_t i) const { return from_spectral(states.at(i)); }
    const Grid& grid() const { return states.front().grid(); }

    std::optional<std::size_t> node_index(double t) const {
        for (std::size_t i = 0; i < times.size(); ++i)
            if (std::abs(times[i] - t) <= 1e-9 * std::max(1.0, std::abs(t))) return i;
        return std::nullopt;
    }
};

/// P div(u (x) u): component i is P sum_j d_j (u_i u_j), products dealiased.
inline SpectralField nonlinear_term(const SpectralField& u, bool dealias_products = true) {
    if (!u.is_vector()) throw InvalidArgument("nonlinear_term: vector field required");
    const Grid& g = u.grid();
    const RealField phys = from_spectral(u);
    const std::size_t np = g.points();
    const std::size_t sp = g.spectral_points();

    // Symmetric tensor u_i u_j for i <= j.
    std::vector<SpectralField> tensor;
    tensor.reserve(6);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i; j < 3; ++j) {
            RealField prod(g, 1);
            auto a = phys.component(i);
            auto b = phys.component(j);
            auto d = prod.component(0);
            for (std::size_t q = 0; q < np; ++q) d[q] = a[q] * b[q];
            SpectralField P = to_spectral(prod);
            tensor.push_back(dealias_products ? dealias(std::move(P)) : std::move(P));
        }
    auto slot = [](std::size_t i, std::size_t j) {
        if (i > j) std::swap(i, j);
        static constexpr std::size_t base[3] = {0, 3, 5};
        return base[i] + (j - i);
    };

    SpectralField div(g, 3);
    auto out = div.coefficients();
    SpectralField lattice(g, 1);
    std::size_t idx = 0;
    lattice.for_each_mode([&](std::size_t, Mode m, Complex&) {
        const auto k = derivative_wavevector(g, m);
        for (std::size_t i = 0; i < 3; ++i) {
            Complex acc = 0.0;
            for (std::size_t j = 0; j < 3; ++j) acc += k[j] * tensor[slot(i, j)].coefficients()[idx];
            out[i * sp + idx] = Complex(0.0, 1.0) * acc;
        }
        ++idx;
    });
    return leray_project(div);
}

inline RealField nonlinear_term(const RealField& u, bool dealias_products = true) {
    return from_spectral(nonlinear_term(to_spectral(u), dealias_products));
}

struct HorizonEstimate {
    double horizon = 0.0;
    /// False when even the smallest probe violates the smallness condition.
    bool certified = false;
};

/// Largest dyadic T in (0, 1] with kato_quantity(u0, T) <= epsilon3.
inline HorizonEstimate horizon_search(const SpectralField& u0, const SolverConfig& config) {
    config.validate();
    KatoProfile profile(u0, config.kato_points_per_decade);
    HorizonEstimate est;
    for (double T = 1.0; T >= config.min_horizon; T *= 0.5) {
        est.horizon = T;
        if (profile.quantity(T) <= config.epsilon3) {
            est.certified = true;
            return est;
        }
    }
    return est;
}

/// Dyadic lower bound on the existence time from the Kato smallness condition;
/// returns the smallest probe when no probe satisfies it.
inline double admissible_horizon(const SpectralField& u0, const SolverConfig& config) {
    return horizon_search(u0, config).horizon;
}
inline double admissible_horizon(const RealField& u0, const SolverConfig& config) {
    return admissible_horizon(to_spectral(u0), config);
}

namespace detail {

/// Divergence-free, zero-mean copy of u0, or an exception.
inline SpectralField ingest_initial_data(const SpectralField& u0) {
    if (!u0.is_vector()) throw InvalidArgument("picard_solve: initial data must be a vector field");
    for (const Complex& c : u0.coefficients())
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw InvalidArgument("picard_solve: initial data is not finite");
    const double scale = l2_norm(u0);
    SpectralField projected = leray_project(u0);
    if (l2_norm(projected - u0) > 1e-6 * scale)
        throw InvalidArgument("picard_solve: initial data is not divergence-free");
    const double coeff_scale = max_coefficient(u0);
    for (std::size_t c = 0; c < 3; ++c) {
        if (std::abs(u0.component(c)[0]) > 1e-12 * coeff_scale)
            throw InvalidArgument("picard_solve: initial data must have zero mean");
        projected.component(c)[0] = 0.0;
    }
    return projected;
}

}  // namespace detail

/// Mild solution of u(t) = e^{t Delta} u0 + L(P div(u (x) u))(t) on the nodes of [0, T].
///
/// Windows of length min(admissible horizon, remaining time), at least one dt,
/// are solved by Picard iteration over all their nodes; each window restarts
/// from the last accepted state.
inline Trajectory picard_solve(const SpectralField& u0_in, double T, const SolverConfig& config) {
    config.validate();
    if (!(T >= 0.0) || !std::isfinite(T)) throw InvalidArgument("picard_solve: T must be finite and >= 0");
    const SpectralField u0 = detail::ingest_initial_data(u0_in);
    const TimeGrid tg = TimeGrid::covering(T, config.dt);
    const Grid& g = u0.grid();
    const ExponentialIntegrator integrator(g, config.dt);

    Trajectory traj;
    traj.config = config;
    traj.requested_T = T;
    traj.times.push_back(0.0);
    traj.states.push_back(u0);
    traj.residuals.push_back(0.0);

    std::size_t start = 0;
    while (start < tg.steps()) {
        const SpectralField base = traj.states.back();
        const HorizonEstimate horizon = horizon_search(base, config);
        if (!horizon.certified) {
            traj.status = TrajectoryStatus::horizon_reached;
            traj.diagnostics = "Kato smallness fails at the smallest probe T=" + std::to_string(horizon.horizon) +
                               " at t=" + std::to_string(tg.node(start));
            return traj;
        }
        const double remaining = tg.node(tg.steps()) - tg.node(start);
        std::size_t steps = static_cast<std::size_t>(std::floor(std::min(horizon.horizon, remaining) / config.dt + 1e-9));
        steps = std::clamp<std::size_t>(steps, 1, tg.steps() - start);
        const TimeGrid window(config.dt, steps);

        std::vector<SpectralField> linear;
        linear.reserve(window.size());
        for (std::size_t i = 0; i < window.size(); ++i) linear.push_back(heat_flow(base, window.node(i)));

        std::vector<SpectralField> u = linear;
        std::vector<SpectralField> forcing(window.size(), SpectralField(g, 3));
        forcing[0] = nonlinear_term(base, config.dealias);
        WindowReport report;
        report.first_node = start;
        report.last_node = start + steps;
        report.horizon = horizon.horizon;
        bool converged = false;
        for (int sweep = 1; sweep <= config.picard_max_iter; ++sweep) {
            for (std::size_t i = 1; i < window.size(); ++i) forcing[i] = nonlinear_term(u[i], config.dealias);
            const auto duh = duhamel_all(window, forcing, &integrator);
            double update = 0.0, scale = 0.0;
            for (std::size_t i = 1; i < window.size(); ++i) {
                SpectralField next = linear[i] + duh[i];
                update = std::max(update, l2_norm(next - u[i]));
                scale = std::max(scale, l2_norm(next));
                u[i] = std::move(next);
            }
            const double rel = scale > 0.0 ? update / scale : 0.0;
            report.sweeps = sweep;
            report.final_update = rel;
            if (!std::isfinite(rel)) {
                traj.status = TrajectoryStatus::picard_diverged;
                traj.diagnostics = "non-finite Picard update in window starting at t=" + std::to_string(tg.node(start));
                traj.windows.push_back(report);
                return traj;
            }
            if (rel < config.picard_tol) {
                converged = true;
                break;
            }
        }
        traj.windows.push_back(report);
        if (!converged) {
            traj.status = TrajectoryStatus::picard_diverged;
            traj.diagnostics = "Picard iteration exceeded " + std::to_string(config.picard_max_iter) +
                               " sweeps in window starting at t=" + std::to_string(tg.node(start)) +
                               " (last relative update " + std::to_string(report.final_update) + ")";
            return traj;
        }

        std::vector<double> residual(window.size(), 0.0);
        if (config.compute_residual) {
            for (std::size_t i = 1; i < window.size(); ++i) forcing[i] = nonlinear_term(u[i], config.dealias);
            const auto duh = duhamel_all(window, forcing, &integrator);
            double scale = 0.0;
            for (std::size_t i = 1; i < window.size(); ++i) scale = std::max(scale, l2_norm(u[i]));
            for (std::size_t i = 1; i < window.size(); ++i)
                residual[i] = scale > 0.0 ? l2_norm(linear[i] + duh[i] - u[i]) / scale : 0.0;
        }
        for (std::size_t i = 1; i < window.size(); ++i) {
            traj.times.push_back(tg.node(start + i));
            traj.states.push_back(std::move(u[i]));
            traj.residuals.push_back(residual[i]);
        }
        start += steps;
    }
    traj.status = TrajectoryStatus::completed;
    return traj;
}

inline Trajectory picard_solve(const RealField& u0, double T, const SolverConfig& config) {
    return picard_solve(to_spectral(u0), T, config);
}

/// Re-solves from the state at node t0 up to the trajectory's last node.
/// Times of the result are absolute (they start at t0).
inline Trajectory restart(const Trajectory& traj, double t0) {
    const auto idx = traj.node_index(t0);
    if (!idx) throw InvalidArgument("restart: t0 is not a node of the trajectory");
    const double t_start = traj.times[*idx];
    const int steps = static_cast<int>(std::llround((traj.times.back() - t_start) / traj.config.dt));
    Trajectory out = picard_solve(traj.states[*idx], steps * traj.config.dt, traj.config);
    for (double& t : out.times) t += t_start;
    return out;
}

}  // namespace nsb
