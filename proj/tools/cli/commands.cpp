#include "cli/commands.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "nsb/nsb.hpp"

namespace nsb::cli {

namespace fs = std::filesystem;

BesovIndex parse_besov_pair(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw ConfigError("besov pair '" + text + "' must look like s,p");
    const auto number = [&](const std::string& s) {
        double v = 0.0;
        const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || end != s.data() + s.size()) throw ConfigError("besov pair '" + text + "': bad number '" + s + "'");
        return v;
    };
    const std::string ps = text.substr(comma + 1);
    const double s = number(text.substr(0, comma));
    const double p = (ps == "inf" || ps == "infinity") ? infinity : number(ps);
    if (!(p >= 1.0)) throw ConfigError("besov pair '" + text + "': p must be >= 1 or inf");
    return BesovIndex(s, p);
}

namespace {

std::string format_exponent(double p) { return std::isinf(p) ? "inf" : format_double(p); }

std::string node_file(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "u_%06zu.bnsf", i);
    return buf;
}

SpectralField load_on_grid(const std::string& path, const Grid& grid, const char* what) {
    const RealField f = read_field(path);
    if (f.grid() != grid)
        throw ConfigError(std::string(what) + " " + path + " is on a different grid than [grid]");
    if (f.components() != 3) throw ConfigError(std::string(what) + " " + path + " must be a 3-component field");
    return to_spectral(f);
}

}  // namespace

int cmd_analyze(const std::string& field_path, std::vector<BesovIndex> pairs, std::ostream& out, std::ostream& err) {
    if (pairs.empty()) pairs.push_back(BesovIndex(-1.0, infinity));
    std::optional<RealField> f;
    try {
        f = read_field(field_path);
    } catch (const Error& e) {
        err << "analyze: " << field_path << ": " << e.what() << '\n';
        return exit_config;
    }
    const DyadicFilterBank bank(f->grid());
    const SpectralField F = to_spectral(*f);
    const auto weighted = weighted_block_norms(bank, F, pairs.front());
    out << "block,weighted_norm\n";
    for (std::size_t k = 0; k < weighted.size(); ++k) out << k << ',' << format_double(weighted[k]) << '\n';
    out << "\ns,p,besov_norm\n";
    for (const auto& idx : pairs)
        out << format_double(idx.s) << ',' << format_exponent(idx.p) << ',' << format_double(besov_norm(bank, F, idx))
            << '\n';
    return exit_ok;
}

SpectralField make_initial_field(const ExperimentConfig& cfg) {
    const Grid grid(cfg.n, cfg.box_length);
    const auto& ic = cfg.initial;
    switch (ic.kind) {
    case InitialKind::taylor_green: return to_spectral(taylor_green(grid, ic.amplitude));
    case InitialKind::random_smooth: return random_smooth(grid, ic.seed, ic.slope, ic.amplitude);
    case InitialKind::single_mode: return to_spectral(shear_mode(grid, ic.mode, ic.amplitude));
    case InitialKind::zero: return SpectralField(grid, 3);
    case InitialKind::file: return load_on_grid(ic.path, grid, "initial field");
    }
    throw ConfigError("unknown initial condition");
}

int cmd_simulate(const ExperimentConfig& cfg, std::ostream& log, std::ostream& err) {
    std::optional<SpectralField> u0_holder, omega, reference;
    try {
        cfg.validate();
        u0_holder = make_initial_field(cfg);
        if (cfg.omega == OmegaKind::initial) omega = u0_holder;
        if (cfg.omega == OmegaKind::file) omega = load_on_grid(cfg.omega_path, u0_holder->grid(), "omega field");
        if (!cfg.reference_path.empty())
            reference = load_on_grid(cfg.reference_path, u0_holder->grid(), "reference field");
    } catch (const Error& e) {
        err << "simulate: " << e.what() << '\n';
        return exit_config;
    }
    const SpectralField& u0 = *u0_holder;

    const fs::path dir(cfg.output_directory);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        err << "simulate: cannot create " << dir.string() << ": " << ec.message() << '\n';
        return exit_config;
    }
    {
        std::ofstream c(dir / "config.ini");
        write_config(c, cfg);
    }

    Trajectory traj;
    try {
        traj = picard_solve(u0, cfg.T, cfg.solver);
    } catch (const InvalidArgument& e) {
        err << "simulate: " << e.what() << '\n';
        return exit_config;
    }
    const NormSeries series = record(traj, omega, reference, cfg.monitor);
    {
        std::ofstream s(dir / "series.csv");
        write_series_csv(s, series);
    }
    if (cfg.write_fields) {
        fs::create_directories(dir / "fields");
        for (std::size_t i = 0; i < traj.size(); ++i) write_field((dir / "fields" / node_file(i)).string(), traj.field(i));
    }

    double max_residual = 0.0, max_div = 0.0, energy_rise = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        max_residual = std::max(max_residual, traj.residuals[i]);
        max_div = std::max(max_div, lp_norm(from_spectral(divergence(traj.state(i))), infinity));
        if (i > 0 && series.l2[i - 1] > 0.0) energy_rise = std::max(energy_rise, series.l2[i] / series.l2[i - 1] - 1.0);
    }
    int max_sweeps = 0;
    for (const auto& w : traj.windows) max_sweeps = std::max(max_sweeps, w.sweeps);

    std::ofstream sum(dir / "summary.txt");
    sum << "status = " << to_string(traj.status) << '\n'
        << "diagnostics = " << traj.diagnostics << '\n'
        << "requested_T = " << format_double(traj.requested_T) << '\n'
        << "final_time = " << format_double(traj.times.back()) << '\n'
        << "nodes = " << traj.size() << '\n'
        << "windows = " << traj.windows.size() << '\n'
        << "max_picard_sweeps = " << max_sweeps << '\n'
        << "max_residual = " << format_double(max_residual) << '\n'
        << "max_divergence = " << format_double(max_div) << '\n'
        << "max_energy_rise = " << format_double(energy_rise) << '\n'
        << "initial_kato = " << format_double(series.kato.front()) << '\n'
        << "initial_horizon = " << format_double(admissible_horizon(u0, cfg.solver)) << '\n';
    // Class check of the mild-solution space: sqrt(t) ||u(t)||_inf at the first positive node.
    if (traj.size() > 1)
        sum << "sqrt_t_linf_first_node = " << format_double(std::sqrt(series.times[1]) * series.linf[1]) << '\n';
    const double span = series.times.back() - series.times.front();
    if (span > 0.0) {
        const double window = cfg.window > 0.0 && cfg.window < span ? cfg.window : 0.5 * span;
        sum << "criterion_window = " << format_double(window) << '\n'
            << "criterion_distance = " << format_double(criterion_distance(series, window)) << '\n';
    }
    sum << "bv_epsilon = " << format_double(cfg.bv_epsilon) << '\n'
        << "bv_witness_count = " << bv_witness_count(traj, cfg.bv_epsilon) << '\n'
        << "tv_accum = " << format_double(series.tv_accum.back()) << '\n';

    log << "simulate: " << to_string(traj.status) << " at t=" << format_double(traj.times.back()) << " ("
        << traj.size() << " nodes) -> " << dir.string() << '\n';
    if (traj.status == TrajectoryStatus::picard_diverged) {
        err << "simulate: " << traj.diagnostics << '\n';
        return exit_numerical;
    }
    if (traj.status == TrajectoryStatus::horizon_reached) log << "simulate: " << traj.diagnostics << '\n';
    return exit_ok;
}

int cmd_simulate_file(const std::string& config_path, const std::optional<std::string>& out_dir, std::ostream& log,
                      std::ostream& err) {
    ExperimentConfig cfg;
    try {
        cfg = load_config(config_path);
        if (out_dir) {
            cfg.output_directory = *out_dir;
            cfg.validate();
        }
    } catch (const Error& e) {
        err << "simulate: " << e.what() << '\n';
        return exit_config;
    }
    return cmd_simulate(cfg, log, err);
}

int cmd_scale_check(const ScaleCheckRequest& req, std::ostream& out, std::ostream& err) {
    try {
        if (req.m < 0) throw ConfigError("--m must be >= 0");
        if (!req.field_path && !req.mode) throw ConfigError("scale-check needs --field or --mode");
        const SpectralField f = req.field_path ? to_spectral(read_field(*req.field_path))
                                               : to_spectral(shear_mode(Grid(req.n), *req.mode));
        const ScalingCheck c = scaling_invariance_check(f, req.m);
        out << "m,before,after,gap\n"
            << req.m << ',' << format_double(c.before) << ',' << format_double(c.after) << ','
            << format_double(std::abs(c.after - c.before)) << '\n';
    } catch (const Error& e) {
        err << "scale-check: " << e.what() << '\n';
        return exit_config;
    }
    return exit_ok;
}

int cmd_generate(const GenerateRequest& req, std::ostream& err) {
    try {
        if (req.path.empty()) throw ConfigError("generate needs an output path");
        const Grid g(req.n, req.box_length);
        const auto make = [&]() -> RealField {
            if (req.kind == "taylor-green") return taylor_green(g, req.amplitude);
            if (req.kind == "random-smooth") return from_spectral(random_smooth(g, req.seed, req.slope, req.amplitude));
            if (req.kind == "single-mode") return shear_mode(g, req.mode, req.amplitude);
            if (req.kind == "scalar-sine") return scalar_sine(g, req.mode, Axis::x, req.amplitude);
            if (req.kind == "zero") return RealField(g, 3);
            throw ConfigError("unknown field kind '" + req.kind + "'");
        };
        write_field(req.path, make());
    } catch (const Error& e) {
        err << "generate: " << e.what() << '\n';
        return exit_config;
    }
    return exit_ok;
}

}  // namespace nsb::cli
