// Command line front end.  A JSON config file names the measures and the
// command; the flags can override the scalar settings.  Exit codes:
// 0 success, 2 usage or config problem, 3 contract violation, 4 singular
// reconstruction system, 5 inconclusive distinguishing depth, 6 unsupported
// step-measure regime, 1 anything unexpected.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rwrs/distinguish.hpp"
#include "rwrs/io.hpp"
#include "rwrs/measures.hpp"
#include "rwrs/record.hpp"
#include "rwrs/reconstruct.hpp"
#include "rwrs/words.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Problems with flags, the config file, or input files; mapped to exit 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Runs input-construction code, turning library complaints about malformed
// input into config errors.
template <typename F>
auto as_input(F&& f) {
    try {
        return f();
    } catch (const rwrs::ContractError& e) {
        throw ConfigError(e.what());
    } catch (const json::exception& e) {
        throw ConfigError(e.what());
    }
}

struct Settings {
    json cfg = json::object();
    std::string command;
    std::optional<int> depth;
    long length = 0;
    bool has_length = false;
    std::uint64_t seed = 0;
    double eps = rwrs::kDefaultEps;
    double tol = 1e-10;
    int threads = 1;
    fs::path out = ".";
    std::string mode = "auto";
    rwrs::ColourAlphabet alphabet{rwrs::ColourAlphabet::binary()};
};

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config file ") + path + ": " + e.what());
    }
}

template <typename T>
T cfg_scalar(const json& cfg, const char* key, T fallback) {
    if (!cfg.contains(key)) return fallback;
    try {
        return cfg.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("config key \"") + key + "\" has the wrong type");
    }
}

const json& cfg_object(const json& cfg, const char* key) {
    if (!cfg.contains(key))
        throw ConfigError(std::string("config needs an object under \"") + key + "\"");
    if (!cfg.at(key).is_object())
        throw ConfigError(std::string("config key \"") + key + "\" must be an object");
    return cfg.at(key);
}

rwrs::StepMeasure load_mu(const Settings& s) {
    const json& j = cfg_object(s.cfg, "mu");
    return as_input([&] { return rwrs::step_measure_from_json(j); });
}

rwrs::SceneryMeasure load_lambda(const Settings& s) {
    const bool has_lambda = s.cfg.contains("lambda");
    const bool has_scenery = s.cfg.contains("scenery");
    if (has_lambda && has_scenery)
        throw ConfigError("give either \"lambda\" or \"scenery\", not both");
    if (has_lambda) {
        const json& j = cfg_object(s.cfg, "lambda");
        return as_input([&] { return rwrs::scenery_measure_from_json(j); });
    }
    if (has_scenery) {
        const std::string word = cfg_scalar<std::string>(s.cfg, "scenery", "");
        return as_input(
            [&] { return rwrs::SceneryMeasure::periodic_orbit(word, s.alphabet); });
    }
    throw ConfigError("config needs \"lambda\" (a measure) or \"scenery\" (a period word)");
}

std::string load_scenery_word(const Settings& s, const char* key) {
    if (!s.cfg.contains(key) || !s.cfg.at(key).is_string())
        throw ConfigError(std::string("config needs a period word under \"") + key + "\"");
    std::string word = s.cfg.at(key).get<std::string>();
    if (word.empty() || !s.alphabet.contains_word(word))
        throw ConfigError(std::string("config key \"") + key +
                          "\" must be a nonempty word over \"" + s.alphabet.symbols() + "\"");
    return word;
}

int require_depth(const Settings& s) {
    if (!s.depth) throw ConfigError("this command needs --depth or a \"depth\" config key");
    if (*s.depth < 1) throw ConfigError("depth must be >= 1");
    return *s.depth;
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot write " + path.string());
    return os;
}

fs::path prepare_out_dir(const Settings& s) {
    std::error_code ec;
    fs::create_directories(s.out, ec);
    if (ec) throw ConfigError("cannot create output directory " + s.out.string());
    return s.out;
}

void write_json(const fs::path& path, const json& j) {
    auto os = open_out(path);
    os << j.dump(2) << '\n';
}

int cmd_order(const Settings& s) {
    const rwrs::WordOrder order = rwrs::canonical_order(s.alphabet, require_depth(s));
    for (const auto& w : order.entries) std::cout << w << '\n';
    return 0;
}

int cmd_forward(const Settings& s) {
    const rwrs::StepMeasure mu = load_mu(s);
    const rwrs::SceneryMeasure lambda = load_lambda(s);
    const int depth = require_depth(s);
    const rwrs::CylinderVector rho = rwrs::exact_record_vector(mu, lambda, depth, s.threads);
    const fs::path dir = prepare_out_dir(s);
    {
        auto os = open_out(dir / "rho.csv");
        rwrs::write_vector_csv(os, rho.order, rho.values);
    }
    std::cout << "wrote " << (dir / "rho.csv").string() << " (" << rho.size() << " rows)\n";
    return 0;
}

int cmd_matrix(const Settings& s) {
    const rwrs::StepMeasure mu = load_mu(s);
    const int depth = require_depth(s);
    const rwrs::ReconMatrix a = rwrs::build_matrix(mu, depth, s.threads, s.alphabet);
    const rwrs::StructureReport report = rwrs::verify_structure(a, mu);
    const fs::path dir = prepare_out_dir(s);
    {
        auto os = open_out(dir / "matrix.csv");
        rwrs::write_matrix_csv(os, a);
    }
    write_json(dir / "blocks.json", rwrs::blocks_to_json(a));
    write_json(dir / "structure.json", rwrs::structure_report_to_json(report));
    std::cout << "wrote " << (dir / "matrix.csv").string() << ", blocks.json, structure.json\n";
    if (report.ok())
        std::cout << "structure ok (" << a.blocks.size() << " blocks)\n";
    else
        std::cout << "structure violations: " << report.violations.size() << '\n';
    return 0;
}

int cmd_reconstruct(const Settings& s) {
    const rwrs::StepMeasure mu = load_mu(s);
    const std::string rho_path = cfg_scalar<std::string>(s.cfg, "rho", "");
    if (rho_path.empty()) throw ConfigError("reconstruct needs a \"rho\" csv path in the config");
    rwrs::CylinderVector rho = as_input([&] {
        std::ifstream in(rho_path);
        if (!in) throw ConfigError("cannot open rho csv " + rho_path);
        return rwrs::read_vector_csv(in, s.alphabet);
    });
    if (s.depth && *s.depth < rho.order.depth) {
        // The rows of a shallower order are a prefix of the deeper one.
        rwrs::CylinderVector cut;
        cut.order = rwrs::canonical_order(s.alphabet, *s.depth);
        cut.values.assign(rho.values.begin(),
                          rho.values.begin() + static_cast<long>(cut.order.size()));
        rho = std::move(cut);
    } else if (s.depth && *s.depth > rho.order.depth) {
        throw ConfigError("requested depth exceeds the depth of the rho csv");
    }
    const int depth = rho.order.depth;

    std::string mode = s.mode;
    if (mode == "auto") {
        mode = rwrs::classify_regime(mu, std::max(1, depth - 1)) == rwrs::Regime::Asymmetric
                   ? "asymmetric"
                   : "symmetric";
    } else if (mode != "asymmetric" && mode != "symmetric") {
        throw ConfigError("mode must be auto, asymmetric or symmetric");
    }

    const fs::path dir = prepare_out_dir(s);
    json report;
    report["mode"] = mode;
    report["depth"] = depth;
    report["eps"] = s.eps;
    if (mode == "asymmetric") {
        const rwrs::ReconMatrix a = rwrs::build_matrix(mu, depth, s.threads, s.alphabet);
        const rwrs::CylinderVector lambda = rwrs::solve_asymmetric(a, rho, s.eps);
        const double residual = rwrs::residual_inf(a, lambda.values, rho);
        {
            auto os = open_out(dir / "lambda.csv");
            rwrs::write_vector_csv(os, lambda.order, lambda.values);
        }
        report["residual_inf"] = residual;
        report["effective_rank"] = a.effective_rank;
        report["reconstructs"] = "scenery cylinder values";
        std::cout << "wrote " << (dir / "lambda.csv").string() << " (mode asymmetric, residual "
                  << rwrs::format_double(residual) << ")\n";
    } else {
        const rwrs::SymmetrizedVector lambda = rwrs::solve_symmetric(mu, rho, s.eps);
        const rwrs::ReconMatrix a =
            rwrs::build_symmetric_matrix(mu, depth, s.threads, s.alphabet);
        const double residual = rwrs::residual_inf(a, lambda.values, rho);
        {
            auto os = open_out(dir / "lambda.csv");
            rwrs::write_vector_csv(os, lambda.order, lambda.values);
        }
        report["residual_inf"] = residual;
        report["effective_rank"] = a.effective_rank;
        report["reconstructs"] = "reversal-symmetrized scenery cylinder values";
        std::cout << "wrote " << (dir / "lambda.csv").string() << " (mode symmetric, residual "
                  << rwrs::format_double(residual) << ")\n";
    }
    write_json(dir / "reconstruct.json", report);
    return 0;
}

int cmd_simulate(const Settings& s) {
    const rwrs::StepMeasure mu = load_mu(s);
    const std::string word = load_scenery_word(s, "scenery");
    if (!s.has_length) throw ConfigError("simulate needs --length or a \"length\" config key");
    const rwrs::RecordSequence rec =
        rwrs::simulate_record(mu, word, s.length, s.seed, s.alphabet);
    const fs::path dir = prepare_out_dir(s);
    {
        auto os = open_out(dir / "record.txt");
        rwrs::write_record_text(os, rec);
    }
    std::cout << "wrote " << (dir / "record.txt").string() << " (" << rec.colours.size()
              << " colours, seed " << s.seed << ")\n";
    return 0;
}

int cmd_estimate(const Settings& s) {
    const int depth = require_depth(s);
    rwrs::RecordSequence rec;
    if (s.cfg.contains("record")) {
        const std::string path = cfg_scalar<std::string>(s.cfg, "record", "");
        rec = as_input([&] {
            std::ifstream in(path);
            if (!in) throw ConfigError("cannot open record file " + path);
            return rwrs::read_record_text(in, s.alphabet);
        });
    } else {
        const rwrs::StepMeasure mu = load_mu(s);
        const std::string word = load_scenery_word(s, "scenery");
        if (!s.has_length)
            throw ConfigError("estimate needs a \"record\" path, or measure, scenery and length");
        rec = rwrs::simulate_record(mu, word, s.length, s.seed, s.alphabet);
    }
    const rwrs::CylinderVector emp = rwrs::empirical_cylinders(rec, depth);
    const fs::path dir = prepare_out_dir(s);
    {
        auto os = open_out(dir / "empirical.csv");
        rwrs::write_vector_csv(os, emp.order, emp.values);
    }
    std::cout << "wrote " << (dir / "empirical.csv").string() << " (" << emp.size()
              << " rows from " << rec.colours.size() << " colours)\n";
    return 0;
}

int cmd_distinguish(const Settings& s) {
    const rwrs::StepMeasure mu = load_mu(s);
    const rwrs::PeriodicScenery x = as_input([&] {
        return rwrs::PeriodicScenery(load_scenery_word(s, "scenery"), s.alphabet);
    });
    const rwrs::PeriodicScenery y = as_input([&] {
        return rwrs::PeriodicScenery(load_scenery_word(s, "scenery2"), s.alphabet);
    });
    if (s.depth && *s.depth < 1) throw ConfigError("depth must be >= 1");
    const int n_max = s.depth ? *s.depth : 0;
    const rwrs::Verdict verdict = rwrs::distinguish(x, y, mu, n_max, s.tol);
    const fs::path dir = prepare_out_dir(s);
    write_json(dir / "verdict.json", rwrs::verdict_to_json(verdict));
    switch (verdict.relation) {
        case rwrs::Relation::Translate:
            std::cout << "relation translate (shift " << verdict.shift << ")\n";
            break;
        case rwrs::Relation::ReflectionEquivalent:
            std::cout << "relation reflection_equivalent (shift " << verdict.shift << ")\n";
            break;
        case rwrs::Relation::Distinguishable:
            std::cout << "relation distinguishable (certificate " << verdict.certificate_word
                      << ", depth " << verdict.depth << ", divergence "
                      << rwrs::format_double(verdict.divergence) << ")\n";
            break;
    }
    std::cout << "wrote " << (dir / "verdict.json").string() << '\n';
    return 0;
}

int run(const Settings& s) {
    if (s.command == "order") return cmd_order(s);
    if (s.command == "forward") return cmd_forward(s);
    if (s.command == "matrix") return cmd_matrix(s);
    if (s.command == "reconstruct") return cmd_reconstruct(s);
    if (s.command == "simulate") return cmd_simulate(s);
    if (s.command == "estimate") return cmd_estimate(s);
    if (s.command == "distinguish") return cmd_distinguish(s);
    throw ConfigError("unknown command \"" + s.command +
                      "\" (order, forward, matrix, reconstruct, simulate, estimate, "
                      "distinguish)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"record measures of random walks on coloured integer lines"};
    std::string config_path;
    std::string command;
    int depth = 0;
    long length = 0;
    std::uint64_t seed = 0;
    double eps = rwrs::kDefaultEps;
    double tol = 1e-10;
    std::string out;
    int threads = 0;

    app.add_option("--config", config_path, "JSON config file");
    auto* opt_command = app.add_option("--command", command, "command to run");
    auto* opt_depth = app.add_option("--depth", depth, "cylinder depth / search depth");
    auto* opt_length = app.add_option("--length", length, "record length for simulation");
    auto* opt_seed = app.add_option("--seed", seed, "random seed");
    auto* opt_eps = app.add_option("--eps", eps, "singularity threshold");
    auto* opt_tol = app.add_option("--tol", tol, "divergence tolerance");
    auto* opt_out = app.add_option("--out", out, "output directory");
    auto* opt_threads = app.add_option("--threads", threads, "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        Settings s;
        if (!config_path.empty()) s.cfg = load_config(config_path);
        s.command = cfg_scalar<std::string>(s.cfg, "command", "");
        if (opt_command->count()) s.command = command;
        if (s.command.empty()) throw ConfigError("no command given (--command or config)");

        s.alphabet = rwrs::ColourAlphabet(cfg_scalar<std::string>(s.cfg, "alphabet", "01"));
        if (s.cfg.contains("depth")) s.depth = cfg_scalar<int>(s.cfg, "depth", 0);
        if (opt_depth->count()) s.depth = depth;
        s.has_length = s.cfg.contains("length");
        s.length = cfg_scalar<long>(s.cfg, "length", 0);
        if (opt_length->count()) {
            s.length = length;
            s.has_length = true;
        }
        s.seed = cfg_scalar<std::uint64_t>(s.cfg, "seed", 0);
        if (opt_seed->count()) s.seed = seed;
        s.eps = cfg_scalar<double>(s.cfg, "eps", rwrs::kDefaultEps);
        if (opt_eps->count()) s.eps = eps;
        s.tol = cfg_scalar<double>(s.cfg, "tol", 1e-10);
        if (opt_tol->count()) s.tol = tol;
        s.threads = cfg_scalar<int>(s.cfg, "threads", 1);
        if (opt_threads->count()) s.threads = threads;
        if (s.threads < 1) throw ConfigError("threads must be >= 1");
        s.out = cfg_scalar<std::string>(s.cfg, "out", ".");
        if (opt_out->count()) s.out = out;
        s.mode = cfg_scalar<std::string>(s.cfg, "mode", "auto");

        return run(s);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const rwrs::SingularSystemError& e) {
        std::cerr << "singular system: " << e.what() << '\n';
        return 4;
    } catch (const rwrs::InconclusiveDepthError& e) {
        std::cerr << "inconclusive: " << e.what() << '\n';
        return 5;
    } catch (const rwrs::UnsupportedRegimeError& e) {
        std::cerr << "unsupported regime: " << e.what() << '\n';
        return 6;
    } catch (const rwrs::ContractError& e) {
        std::cerr << "contract violation: " << e.what() << '\n';
        return 3;
    } catch (const rwrs::Error& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << '\n';
        return 1;
    }
}
