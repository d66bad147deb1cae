#include <iostream>

#include <CLI11.hpp>

#if defined(__GLIBC__)
#include <malloc.h>
#endif

#include "cli/commands.hpp"

int main(int argc, char** argv) {
#if defined(__GLIBC__)
    // Field-sized buffers are allocated and freed constantly; keep them on the
    // heap instead of round-tripping through mmap.
    mallopt(M_MMAP_THRESHOLD, 1 << 30);
    mallopt(M_TRIM_THRESHOLD, 1 << 30);
#endif
    using namespace nsb::cli;
    CLI::App app{"Spectral diagnostics for mild Navier-Stokes solutions on the periodic 3-torus"};
    app.require_subcommand(1);

    std::string field_path;
    std::vector<std::string> besov;
    auto* analyze = app.add_subcommand("analyze", "Dyadic block table and Besov norms of a field file");
    analyze->add_option("field", field_path, "BNSF field file")->required();
    analyze->add_option("--besov", besov, "Besov index s,p (p may be inf); repeatable");

    std::string config_path;
    std::optional<std::string> out_dir;
    auto* simulate = app.add_subcommand("simulate", "Solve the mild equation and record diagnostics");
    simulate->add_option("--config", config_path, "experiment config (ini)")->required();
    simulate->add_option("--out", out_dir, "output directory, overrides [output] directory");

    std::string suite;
    std::optional<std::string> details;
    auto* verify = app.add_subcommand("verify", "Run invariant checks: lp, paraproduct, heat, solver or all");
    verify->add_option("suite", suite, "suite name")->required();
    verify->add_option("--details", details, "directory for probe CSVs");

    ScaleCheckRequest scale;
    auto* scale_check = app.add_subcommand("scale-check", "Compare B^{-1,inf} norms of u and 2^m u(2^m x)");
    auto* field_opt = scale_check->add_option("--field", scale.field_path, "BNSF field file");
    scale_check->add_option("--mode", scale.mode, "shear mode (0, sin(k x), 0)")->excludes(field_opt);
    scale_check->add_option("--n", scale.n, "grid size for --mode");
    scale_check->add_option("--m", scale.m, "dilation exponent");

    GenerateRequest gen;
    auto* generate = app.add_subcommand("generate", "Write an analytic field to a BNSF file");
    generate->add_option("kind", gen.kind, "taylor-green, random-smooth, single-mode, scalar-sine or zero")->required();
    generate->add_option("path", gen.path, "output file")->required();
    generate->add_option("--n", gen.n, "grid size");
    generate->add_option("--box", gen.box_length, "box length");
    generate->add_option("--amplitude", gen.amplitude, "amplitude");
    generate->add_option("--seed", gen.seed, "random seed");
    generate->add_option("--slope", gen.slope, "spectral slope for random-smooth");
    generate->add_option("--mode", gen.mode, "wavenumber for single-mode and scalar-sine");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }

    try {
        if (*analyze) {
            std::vector<nsb::BesovIndex> pairs;
            for (const auto& b : besov) pairs.push_back(parse_besov_pair(b));
            return cmd_analyze(field_path, pairs, std::cout, std::cerr);
        }
        if (*simulate) return cmd_simulate_file(config_path, out_dir, std::cout, std::cerr);
        if (*verify) return cmd_verify(suite, details, std::cout, std::cerr);
        if (*scale_check) return cmd_scale_check(scale, std::cout, std::cerr);
        if (*generate) return cmd_generate(gen, std::cerr);
    } catch (const ConfigError& e) {
        std::cerr << "nsb: " << e.what() << '\n';
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "nsb: " << e.what() << '\n';
        return exit_numerical;
    }
    return exit_config;
}
