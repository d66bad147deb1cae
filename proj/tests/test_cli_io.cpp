#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli/commands.hpp"
#include "nsb/nsb.hpp"
#include "test_support.hpp"

using namespace nsb;
using namespace nsb::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("nsb_cli_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(slurp(p));
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> row;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(cell);
        rows.push_back(row);
    }
    return rows;
}

ExperimentConfig small_config(const fs::path& dir) {
    ExperimentConfig cfg;
    cfg.n = 16;
    cfg.T = 0.1;
    cfg.solver.kato_points_per_decade = 16;
    cfg.monitor.kato_points_per_decade = 16;
    cfg.output_directory = dir.string();
    cfg.write_fields = false;
    return cfg;
}

}  // namespace

TEST(FieldFile, BitExactRoundTrip) {
    const Grid g(16, 3.5);
    const RealField f = nsb::test::random_field(g, 3, 11);
    const fs::path p = scratch("roundtrip.bnsf");
    write_field(p.string(), f);
    EXPECT_EQ(fs::file_size(p), bnsf::header_size + 3 * 16 * 16 * 16 * 8);
    const RealField h = read_field(p.string());
    EXPECT_EQ(h.grid(), g);
    EXPECT_EQ(h.components(), 3u);
    ASSERT_EQ(h.samples().size(), f.samples().size());
    EXPECT_EQ(std::memcmp(h.samples().data(), f.samples().data(), f.samples().size() * sizeof(double)), 0);
    EXPECT_EQ(encode_field(h), encode_field(f));
}

TEST(FieldFile, TruncationNamesLengthsAndOffset) {
    const RealField f = nsb::test::random_field(Grid(8), 1, 2);
    auto bytes = encode_field(f);
    const std::size_t full = bytes.size();
    bytes.resize(full - 5);
    try {
        decode_field(bytes);
        FAIL() << "truncated file accepted";
    } catch (const FormatError& e) {
        const std::string what = e.what();
        EXPECT_NE(what.find("expected " + std::to_string(full)), std::string::npos) << what;
        EXPECT_NE(what.find("got " + std::to_string(full - 5)), std::string::npos) << what;
        EXPECT_EQ(e.offset(), full - 5);
    }
    bytes.resize(10);
    EXPECT_THROW(decode_field(bytes), FormatError);
    auto bad = encode_field(f);
    bad[0] = 'X';
    try {
        decode_field(bad);
        FAIL();
    } catch (const FormatError& e) {
        EXPECT_EQ(e.offset(), 0u);
    }
}

TEST(Config, RejectsUnknownKeysAndSections) {
    std::istringstream unknown_key("[grid]\nn = 16\ncolour = blue\n");
    EXPECT_THROW(parse_config(unknown_key), ConfigError);
    std::istringstream unknown_section("[grid]\nn = 16\n[extras]\na = 1\n");
    EXPECT_THROW(parse_config(unknown_section), ConfigError);
    std::istringstream bad_value("[time]\nT = fast\n");
    EXPECT_THROW(parse_config(bad_value), ConfigError);
    std::istringstream bad_grid("[grid]\nn = 12\n");
    EXPECT_THROW(parse_config(bad_grid), ConfigError);
    std::istringstream bad_kind("[initial]\nkind = vortex\n");
    EXPECT_THROW(parse_config(bad_kind), ConfigError);
}

TEST(Config, ParsesAndRoundTrips) {
    std::istringstream in(
        "[grid]\nn = 16\n[initial]\nkind = random-smooth\nseed = 7\nslope = 1.5\namplitude = 0.3\n"
        "[time]\nT = 0.2\ndt = 0.005\n[monitor]\nomega = initial\nwindow = 0.05\n[output]\ndirectory = out\n"
        "write_fields = no\n");
    const ExperimentConfig cfg = parse_config(in);
    EXPECT_EQ(cfg.n, 16u);
    EXPECT_EQ(cfg.initial.kind, InitialKind::random_smooth);
    EXPECT_EQ(cfg.initial.seed, 7u);
    EXPECT_EQ(cfg.initial.slope, 1.5);
    EXPECT_EQ(cfg.solver.dt, 0.005);
    EXPECT_EQ(cfg.omega, OmegaKind::initial);
    EXPECT_FALSE(cfg.write_fields);
    std::ostringstream a;
    write_config(a, cfg);
    std::istringstream back(a.str());
    std::ostringstream b;
    write_config(b, parse_config(back));
    EXPECT_EQ(a.str(), b.str());
}

TEST(Analyze, ZeroFieldHasZeroBlocks) {
    const fs::path p = scratch("zero.bnsf");
    write_field(p.string(), RealField(Grid(16), 3));
    std::ostringstream out, err;
    ASSERT_EQ(cmd_analyze(p.string(), {}, out, err), exit_ok) << err.str();
    std::istringstream lines(out.str());
    std::string line;
    std::getline(lines, line);
    EXPECT_EQ(line, "block,weighted_norm");
    int blocks = 0;
    while (std::getline(lines, line) && !line.empty()) {
        EXPECT_EQ(line.substr(line.find(',') + 1), "0");
        ++blocks;
    }
    EXPECT_EQ(blocks, DyadicFilterBank(Grid(16)).j_max() + 1);
    std::getline(lines, line);
    EXPECT_EQ(line, "s,p,besov_norm");
    std::getline(lines, line);
    EXPECT_EQ(line, "-1,inf,0");
}

TEST(Analyze, SingleModeBesovNorm) {
    const fs::path p = scratch("sine.bnsf");
    write_field(p.string(), scalar_sine(Grid(32), 4));
    std::ostringstream out, err;
    ASSERT_EQ(cmd_analyze(p.string(), {parse_besov_pair("-1,inf"), parse_besov_pair("0,2")}, out, err), exit_ok);
    const std::string text = out.str();
    const auto summary = text.substr(text.find("s,p,besov_norm"));
    std::istringstream rows(summary);
    std::string header, first;
    std::getline(rows, header);
    std::getline(rows, first);
    ASSERT_EQ(first.rfind("-1,inf,", 0), 0u) << first;
    EXPECT_NEAR(std::stod(first.substr(7)), 0.25, 1e-12);
    EXPECT_THROW(parse_besov_pair("1"), ConfigError);
    EXPECT_THROW(parse_besov_pair("1,0.5"), ConfigError);
}

TEST(Analyze, MalformedFileReportsOffset) {
    const fs::path p = scratch("short.bnsf");
    auto bytes = encode_field(RealField(Grid(8), 1));
    bytes.resize(bytes.size() - 8);
    std::ofstream(p, std::ios::binary).write(reinterpret_cast<const char*>(bytes.data()), bytes.size());
    std::ostringstream out, err;
    EXPECT_EQ(cmd_analyze(p.string(), {}, out, err), exit_config);
    EXPECT_NE(err.str().find("byte offset"), std::string::npos) << err.str();
    EXPECT_NE(err.str().find("expected " + std::to_string(bytes.size() + 8)), std::string::npos) << err.str();
}

TEST(Simulate, TaylorGreenEnergyLaw) {
    const fs::path dir = scratch("tg");
    ExperimentConfig cfg = small_config(dir);
    cfg.write_fields = true;
    std::ostringstream log, err;
    ASSERT_EQ(cmd_simulate(cfg, log, err), exit_ok) << err.str();
    const auto rows = read_csv(dir / "series.csv");
    ASSERT_EQ(rows.size(), 12u);
    EXPECT_EQ(rows[0][1], "l2");
    const double l2_0 = std::stod(rows[1][1]);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double t = std::stod(rows[i][0]);
        EXPECT_NEAR(std::stod(rows[i][1]), l2_0 * std::exp(-2.0 * t), 1e-10 * l2_0) << t;
    }
    EXPECT_TRUE(fs::exists(dir / "config.ini"));
    EXPECT_TRUE(fs::exists(dir / "fields" / "u_000010.bnsf"));
    const std::string summary = slurp(dir / "summary.txt");
    EXPECT_NE(summary.find("status = completed"), std::string::npos);
    // The archived config reproduces the run.
    const ExperimentConfig back = load_config((dir / "config.ini").string());
    EXPECT_EQ(back.n, cfg.n);
    EXPECT_EQ(back.solver.kato_points_per_decade, 16u);
}

TEST(Simulate, ZeroPresetGivesZeroSeries) {
    const fs::path dir = scratch("zero");
    ExperimentConfig cfg = small_config(dir);
    cfg.initial.kind = InitialKind::zero;
    std::ostringstream log, err;
    ASSERT_EQ(cmd_simulate(cfg, log, err), exit_ok) << err.str();
    const auto rows = read_csv(dir / "series.csv");
    ASSERT_GT(rows.size(), 1u);
    for (std::size_t i = 1; i < rows.size(); ++i)
        for (std::size_t c = 1; c < rows[i].size(); ++c) EXPECT_EQ(rows[i][c], "0") << i << ',' << c;
}

TEST(Simulate, RepeatedRunsAreByteIdentical) {
    const fs::path a = scratch("det_a"), b = scratch("det_b");
    ExperimentConfig cfg = small_config(a);
    cfg.initial.kind = InitialKind::random_smooth;
    cfg.initial.seed = 3;
    cfg.initial.amplitude = 0.5;
    cfg.initial.slope = 1.5;
    std::ostringstream log, err;
    ASSERT_EQ(cmd_simulate(cfg, log, err), exit_ok) << err.str();
    cfg.output_directory = b.string();
    ASSERT_EQ(cmd_simulate(cfg, log, err), exit_ok) << err.str();
    EXPECT_EQ(slurp(a / "series.csv"), slurp(b / "series.csv"));
    EXPECT_FALSE(slurp(a / "series.csv").empty());
}

TEST(Simulate, ExitCodes) {
    const fs::path dir = scratch("codes");
    std::ostringstream log, err;
    ExperimentConfig bad = small_config(dir);
    bad.T = -1.0;
    EXPECT_EQ(cmd_simulate(bad, log, err), exit_config);
    EXPECT_EQ(cmd_simulate_file((dir / "missing.ini").string(), std::nullopt, log, err), exit_config);

    ExperimentConfig capped = small_config(dir);
    capped.initial.kind = InitialKind::random_smooth;
    capped.initial.amplitude = 0.5;
    capped.solver.picard_max_iter = 1;
    EXPECT_EQ(cmd_simulate(capped, log, err), exit_numerical);
    EXPECT_NE(slurp(dir / "summary.txt").find("status = picard_diverged"), std::string::npos);
}

TEST(Verify, SuiteNameValidation) {
    std::ostringstream out, err;
    EXPECT_EQ(cmd_verify("", std::nullopt, out, err), exit_config);
    EXPECT_NE(err.str().find("unknown suite"), std::string::npos);
    EXPECT_EQ(cmd_verify("everything", std::nullopt, out, err), exit_config);
}

TEST(Verify, LpSuiteRows) {
    std::ostringstream out, err;
    ASSERT_EQ(cmd_verify("lp", std::nullopt, out, err), exit_ok) << out.str() << err.str();
    const std::string text = out.str();
    EXPECT_EQ(text.rfind("suite,check,observed,threshold,pass\n", 0), 0u);
    EXPECT_NE(text.find("lp,reconstruction_residual,"), std::string::npos);
    EXPECT_NE(text.find(",1e-12,true"), std::string::npos);
}

TEST(ScaleCheck, ShearModeGapVanishes) {
    ScaleCheckRequest req;
    req.mode = 4;
    req.n = 32;
    req.m = 1;
    std::ostringstream out, err;
    ASSERT_EQ(cmd_scale_check(req, out, err), exit_ok) << err.str();
    std::istringstream rows(out.str());
    std::string header, row;
    std::getline(rows, header);
    std::getline(rows, row);
    EXPECT_EQ(header, "m,before,after,gap");
    double m = 0, before = 0, after = 0, gap = 1;
    ASSERT_EQ(std::sscanf(row.c_str(), "%lf,%lf,%lf,%lf", &m, &before, &after, &gap), 4) << row;
    EXPECT_EQ(m, 1.0);
    EXPECT_NEAR(before, 0.25, 1e-12);
    EXPECT_LE(gap, 1e-10);
    req.mode = 1;  // has Delta_0 content
    EXPECT_EQ(cmd_scale_check(req, out, err), exit_config);
}

TEST(Generate, WritesReadableField) {
    const fs::path p = scratch("gen.bnsf");
    GenerateRequest req;
    req.kind = "random-smooth";
    req.n = 16;
    req.path = p.string();
    std::ostringstream err;
    ASSERT_EQ(cmd_generate(req, err), exit_ok) << err.str();
    const RealField f = read_field(p.string());
    EXPECT_NEAR(lp_norm(f, infinity), 1.0, 1e-12);
    req.kind = "vortex";
    EXPECT_EQ(cmd_generate(req, err), exit_config);
}
