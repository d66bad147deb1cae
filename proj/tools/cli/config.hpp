#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "nsb/blowup_monitor.hpp"
#include "nsb/mild_solver.hpp"

namespace nsb::cli {

/// A config file is unreadable, malformed, or out of range.
class ConfigError : public Error {
public:
    using Error::Error;
};

enum class InitialKind { taylor_green, random_smooth, single_mode, zero, file };
enum class OmegaKind { zero, initial, file };

const char* to_string(InitialKind k);
const char* to_string(OmegaKind k);

struct InitialSpec {
    InitialKind kind = InitialKind::taylor_green;
    double amplitude = 1.0;
    std::uint64_t seed = 1;
    double slope = 2.0;   ///< random-smooth spectral decay |xi|^-slope
    int mode = 1;         ///< single-mode wavenumber
    std::string path;     ///< kind = file
};

/// Everything `simulate` needs. Defaults reproduce the Taylor-Green preset.
struct ExperimentConfig {
    std::size_t n = 32;
    double box_length = 2.0 * std::numbers::pi;
    InitialSpec initial;
    double T = 0.1;
    SolverConfig solver;
    OmegaKind omega = OmegaKind::zero;
    std::string omega_path;
    std::string reference_path;  ///< optional u* for the Kozono-Shor column
    MonitorOptions monitor;
    double window = 0.0;         ///< criterion window; 0 picks half the series span
    double bv_epsilon = 1e-2;
    std::string output_directory = "run";
    bool write_fields = true;

    void validate() const;
};

/// Parses INI text. Unknown sections or keys, duplicates, and malformed or
/// out-of-range values raise ConfigError.
ExperimentConfig parse_config(std::istream& in, const std::string& source = "<config>");
ExperimentConfig load_config(const std::string& path);

/// Writes every setting (defaults included) so the file reloads to the same config.
void write_config(std::ostream& out, const ExperimentConfig& cfg);

}  // namespace nsb::cli
