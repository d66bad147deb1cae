#include "cli/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <fstream>
#include <map>
#include <set>

#include "nsb/csv.hpp"

namespace nsb::cli {

namespace pt = boost::property_tree;

const char* to_string(InitialKind k) {
    switch (k) {
    case InitialKind::taylor_green: return "taylor-green";
    case InitialKind::random_smooth: return "random-smooth";
    case InitialKind::single_mode: return "single-mode";
    case InitialKind::zero: return "zero";
    case InitialKind::file: return "file";
    }
    return "?";
}

const char* to_string(OmegaKind k) {
    switch (k) {
    case OmegaKind::zero: return "zero";
    case OmegaKind::initial: return "initial";
    case OmegaKind::file: return "file";
    }
    return "?";
}

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> s{
        {"grid", {"n", "box_length"}},
        {"initial", {"kind", "amplitude", "seed", "slope", "mode", "path"}},
        {"time", {"T", "dt"}},
        {"solver", {"picard_tol", "picard_max_iter", "epsilon3", "dealias", "kato_points_per_decade", "min_horizon"}},
        {"monitor", {"omega", "omega_path", "reference_path", "kato_horizon", "kato_points_per_decade", "window",
                     "bv_epsilon"}},
        {"output", {"directory", "write_fields"}},
    };
    return s;
}

class Reader {
public:
    Reader(const pt::ptree& tree, std::string source) : tree_(tree), source_(std::move(source)) {}

    const std::string* raw(const std::string& section, const std::string& key) const {
        const auto sec = tree_.get_child_optional(pt::ptree::path_type(section, '\0'));
        if (!sec) return nullptr;
        const auto v = sec->get_child_optional(pt::ptree::path_type(key, '\0'));
        return v ? &v->data() : nullptr;
    }

    void real(const std::string& section, const std::string& key, double& out) const {
        if (const auto* s = raw(section, key)) out = parse_real(*s, section, key);
    }

    template <class Int>
    void integer(const std::string& section, const std::string& key, Int& out) const {
        const auto* s = raw(section, key);
        if (!s) return;
        Int v{};
        const auto [end, ec] = std::from_chars(s->data(), s->data() + s->size(), v);
        if (ec != std::errc() || end != s->data() + s->size()) fail(section, key, "expected an integer, got '" + *s + "'");
        out = v;
    }

    void boolean(const std::string& section, const std::string& key, bool& out) const {
        const auto* s = raw(section, key);
        if (!s) return;
        if (*s == "true" || *s == "yes" || *s == "on" || *s == "1")
            out = true;
        else if (*s == "false" || *s == "no" || *s == "off" || *s == "0")
            out = false;
        else
            fail(section, key, "expected true or false, got '" + *s + "'");
    }

    void text(const std::string& section, const std::string& key, std::string& out) const {
        if (const auto* s = raw(section, key)) out = *s;
    }

    [[noreturn]] void fail(const std::string& section, const std::string& key, const std::string& why) const {
        throw ConfigError(source_ + ": [" + section + "] " + key + ": " + why);
    }

private:
    double parse_real(const std::string& s, const std::string& section, const std::string& key) const {
        double v = 0.0;
        const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || end != s.data() + s.size()) fail(section, key, "expected a number, got '" + s + "'");
        return v;
    }

    const pt::ptree& tree_;
    std::string source_;
};

}  // namespace

void ExperimentConfig::validate() const {
    auto bad = [](const std::string& what) { throw ConfigError("config: " + what); };
    if (n < 8 || (n & (n - 1)) != 0) bad("[grid] n must be a power of two >= 8");
    if (!(box_length > 0.0) || !std::isfinite(box_length)) bad("[grid] box_length must be finite and > 0");
    if (!std::isfinite(initial.amplitude)) bad("[initial] amplitude must be finite");
    if (initial.kind == InitialKind::single_mode &&
        (initial.mode < 1 || initial.mode >= static_cast<int>(n / 2)))
        bad("[initial] mode must lie in 1 .. n/2 - 1");
    if (initial.kind == InitialKind::random_smooth && !std::isfinite(initial.slope)) bad("[initial] slope must be finite");
    if (initial.kind == InitialKind::file && initial.path.empty()) bad("[initial] kind = file needs a path");
    if (!(T >= 0.0) || !std::isfinite(T)) bad("[time] T must be finite and >= 0");
    if (omega == OmegaKind::file && omega_path.empty()) bad("[monitor] omega = file needs omega_path");
    if (!(monitor.kato_horizon > 0.0) || monitor.kato_horizon > 1.0) bad("[monitor] kato_horizon must lie in (0, 1]");
    if (monitor.kato_points_per_decade < 1) bad("[monitor] kato_points_per_decade must be >= 1");
    if (!(window >= 0.0) || !std::isfinite(window)) bad("[monitor] window must be finite and >= 0");
    if (!(bv_epsilon > 0.0)) bad("[monitor] bv_epsilon must be > 0");
    if (output_directory.empty()) bad("[output] directory must not be empty");
    try {
        solver.validate();
        TimeGrid::covering(T, solver.dt);
    } catch (const InvalidArgument& e) {
        bad(e.what());
    }
}

ExperimentConfig parse_config(std::istream& in, const std::string& source) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(source + ":" + std::to_string(e.line()) + ": " + e.message());
    }
    for (const auto& [section, body] : tree) {
        const auto it = schema().find(section);
        if (it == schema().end()) throw ConfigError(source + ": unknown section [" + section + "]");
        if (!body.data().empty()) throw ConfigError(source + ": key '" + section + "' outside any section");
        for (const auto& [key, value] : body)
            if (!it->second.count(key)) throw ConfigError(source + ": unknown key '" + key + "' in [" + section + "]");
    }

    const Reader r(tree, source);
    ExperimentConfig cfg;
    r.integer("grid", "n", cfg.n);
    r.real("grid", "box_length", cfg.box_length);

    std::string kind = to_string(cfg.initial.kind);
    r.text("initial", "kind", kind);
    if (kind == "taylor-green")
        cfg.initial.kind = InitialKind::taylor_green;
    else if (kind == "random-smooth")
        cfg.initial.kind = InitialKind::random_smooth;
    else if (kind == "single-mode")
        cfg.initial.kind = InitialKind::single_mode;
    else if (kind == "zero")
        cfg.initial.kind = InitialKind::zero;
    else if (kind == "file")
        cfg.initial.kind = InitialKind::file;
    else
        r.fail("initial", "kind", "expected taylor-green, random-smooth, single-mode, zero or file, got '" + kind + "'");
    r.real("initial", "amplitude", cfg.initial.amplitude);
    r.integer("initial", "seed", cfg.initial.seed);
    r.real("initial", "slope", cfg.initial.slope);
    r.integer("initial", "mode", cfg.initial.mode);
    r.text("initial", "path", cfg.initial.path);

    r.real("time", "T", cfg.T);
    r.real("time", "dt", cfg.solver.dt);

    r.real("solver", "picard_tol", cfg.solver.picard_tol);
    r.integer("solver", "picard_max_iter", cfg.solver.picard_max_iter);
    r.real("solver", "epsilon3", cfg.solver.epsilon3);
    r.boolean("solver", "dealias", cfg.solver.dealias);
    r.integer("solver", "kato_points_per_decade", cfg.solver.kato_points_per_decade);
    r.real("solver", "min_horizon", cfg.solver.min_horizon);

    std::string omega = to_string(cfg.omega);
    r.text("monitor", "omega", omega);
    if (omega == "zero")
        cfg.omega = OmegaKind::zero;
    else if (omega == "initial")
        cfg.omega = OmegaKind::initial;
    else if (omega == "file")
        cfg.omega = OmegaKind::file;
    else
        r.fail("monitor", "omega", "expected zero, initial or file, got '" + omega + "'");
    r.text("monitor", "omega_path", cfg.omega_path);
    r.text("monitor", "reference_path", cfg.reference_path);
    r.real("monitor", "kato_horizon", cfg.monitor.kato_horizon);
    r.integer("monitor", "kato_points_per_decade", cfg.monitor.kato_points_per_decade);
    r.real("monitor", "window", cfg.window);
    r.real("monitor", "bv_epsilon", cfg.bv_epsilon);

    r.text("output", "directory", cfg.output_directory);
    r.boolean("output", "write_fields", cfg.write_fields);

    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    return parse_config(in, path);
}

void write_config(std::ostream& out, const ExperimentConfig& c) {
    const auto d = [](double v) { return format_double(v); };
    const auto b = [](bool v) { return v ? "true" : "false"; };
    out << "[grid]\n"
        << "n = " << c.n << '\n'
        << "box_length = " << d(c.box_length) << "\n\n"
        << "[initial]\n"
        << "kind = " << to_string(c.initial.kind) << '\n'
        << "amplitude = " << d(c.initial.amplitude) << '\n'
        << "seed = " << c.initial.seed << '\n'
        << "slope = " << d(c.initial.slope) << '\n'
        << "mode = " << c.initial.mode << '\n'
        << "path = " << c.initial.path << "\n\n"
        << "[time]\n"
        << "T = " << d(c.T) << '\n'
        << "dt = " << d(c.solver.dt) << "\n\n"
        << "[solver]\n"
        << "picard_tol = " << d(c.solver.picard_tol) << '\n'
        << "picard_max_iter = " << c.solver.picard_max_iter << '\n'
        << "epsilon3 = " << d(c.solver.epsilon3) << '\n'
        << "dealias = " << b(c.solver.dealias) << '\n'
        << "kato_points_per_decade = " << c.solver.kato_points_per_decade << '\n'
        << "min_horizon = " << d(c.solver.min_horizon) << "\n\n"
        << "[monitor]\n"
        << "omega = " << to_string(c.omega) << '\n'
        << "omega_path = " << c.omega_path << '\n'
        << "reference_path = " << c.reference_path << '\n'
        << "kato_horizon = " << d(c.monitor.kato_horizon) << '\n'
        << "kato_points_per_decade = " << c.monitor.kato_points_per_decade << '\n'
        << "window = " << d(c.window) << '\n'
        << "bv_epsilon = " << d(c.bv_epsilon) << "\n\n"
        << "[output]\n"
        << "directory = " << c.output_directory << '\n'
        << "write_fields = " << b(c.write_fields) << '\n';
}

}  // namespace nsb::cli
