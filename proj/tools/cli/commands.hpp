#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cli/config.hpp"
#include "nsb/littlewood_paley.hpp"

namespace nsb::cli {

/// Process exit codes shared by every subcommand.
enum ExitCode : int { exit_ok = 0, exit_config = 1, exit_numerical = 2 };

/// Parses "s,p" with p a number >= 1 or "inf".
BesovIndex parse_besov_pair(const std::string& text);

/// `analyze`: per-block table `block,weighted_norm` for the first pair, a blank
/// line, then `s,p,besov_norm` for every pair. Defaults to (-1, inf).
int cmd_analyze(const std::string& field_path, std::vector<BesovIndex> pairs, std::ostream& out, std::ostream& err);

/// Initial velocity described by the config (grid taken from [grid]).
SpectralField make_initial_field(const ExperimentConfig& cfg);

/// `simulate`: writes config.ini, series.csv, summary.txt and (optionally)
/// fields/u_NNNNNN.bnsf into cfg.output_directory.
int cmd_simulate(const ExperimentConfig& cfg, std::ostream& log, std::ostream& err);

/// Loads the config, applies the output override, then runs cmd_simulate.
int cmd_simulate_file(const std::string& config_path, const std::optional<std::string>& out_dir, std::ostream& log,
                      std::ostream& err);

/// `verify`: rows `suite,check,observed,threshold,pass` (pass iff observed <= threshold).
/// Suites: lp, paraproduct, heat, solver, all. Probe details go to details_dir when set.
int cmd_verify(const std::string& suite, const std::optional<std::string>& details_dir, std::ostream& out,
               std::ostream& err);

struct ScaleCheckRequest {
    std::optional<std::string> field_path;
    std::optional<int> mode;  ///< shear mode (0, sin(k x), 0) when no file is given
    std::size_t n = 64;
    int m = 1;
};

/// `scale-check`: prints `m,before,after,gap` for B^{-1,inf} under u -> 2^m u(2^m x).
int cmd_scale_check(const ScaleCheckRequest& req, std::ostream& out, std::ostream& err);

struct GenerateRequest {
    std::string kind = "taylor-green";  ///< taylor-green | random-smooth | single-mode | scalar-sine | zero
    std::size_t n = 32;
    double box_length = 2.0 * std::numbers::pi;
    double amplitude = 1.0;
    std::uint64_t seed = 1;
    double slope = 2.0;
    int mode = 1;
    std::string path;
};

/// `generate`: writes one analytic field to a BNSF file.
int cmd_generate(const GenerateRequest& req, std::ostream& err);

}  // namespace nsb::cli
