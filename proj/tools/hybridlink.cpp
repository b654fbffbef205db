// hybridlink: sweeps and figure reproduction for the hybrid FSO/THz + mmWave system.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hybridlink/cli/figures.hpp"

namespace hl = hybridlink;
namespace cli = hybridlink::cli;

namespace {

constexpr int exit_config = 2;
constexpr int exit_numerical = 3;

int emit(const std::string& text, const std::string& out) {
    if (out.empty() || out == "-") {
        std::cout << text;
        return 0;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) {
        std::cerr << "error: cannot write '" << out << "'\n";
        return exit_config;
    }
    f << text;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hybrid FSO/THz backhaul with mmWave access: analytical and Monte Carlo sweeps"};
    app.require_subcommand(1);

    std::string config_path, out_path, method;
    cli::RunOptions opt;
    std::uint64_t seed = 0, samples = 0;
    double rho = 0.0;
    int threads = 0;

    auto* o_seed = app.add_option("--seed", seed, "master RNG seed");
    auto* o_samples = app.add_option("--samples", samples, "Monte Carlo samples per sweep point");
    auto* o_rho = app.add_option("--rho", rho, "slot-to-slot fading correlation for traces");
    auto* o_threads = app.add_option("--threads", threads, "worker threads (0 = all cores)");
    app.add_option("--config", config_path, "INI scenario file (built-in defaults if omitted)");
    app.add_option("--method", method, "analytical | asymptotic | quadrature | log_approx | mc | all (default: analytical, mc for trace)");
    app.add_option("--out", out_path, "output file (default stdout)");

    std::string figure_id;
    std::vector<std::pair<std::string, cli::Command>> commands{{"outage", cli::Command::outage},
                                                               {"capacity", cli::Command::capacity},
                                                               {"aber", cli::Command::aber},
                                                               {"diversity", cli::Command::diversity},
                                                               {"trace", cli::Command::trace}};
    for (auto& [name, cmd] : commands) app.add_subcommand(name, "sweep the " + name + " metrics")->fallthrough();
    auto* fig = app.add_subcommand("figure", "run a predefined figure sweep")->fallthrough();
    fig->add_option("id", figure_id, "fig5 fig6a fig6b fig7 fig8 fig9 fig10 fig11 fig12 fig13 fig14a fig14b")->required();
    auto* dump = app.add_subcommand("config", "print the resolved configuration")->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_config;
    }

    opt.method = method;
    if (*o_seed) opt.seed = seed;
    if (*o_samples) opt.samples = samples;
    if (*o_rho) opt.rho = rho;
    if (*o_threads) opt.threads = threads;

    try {
        cli::ScenarioConfig cfg = config_path.empty() ? cli::ScenarioConfig{} : cli::load_config(config_path);
        std::ostringstream os;
        if (*dump) {
            cli::apply_overrides(cfg, opt);
            os << cli::to_ini(cfg);
        } else if (*fig) {
            cli::write_csv(os, cli::figure(figure_id, opt));
        } else {
            for (auto& [name, cmd] : commands)
                if (app.got_subcommand(name)) cli::write_csv(os, cli::run(cfg, cmd, opt));
        }
        return emit(os.str(), out_path);
    } catch (const hl::config_error& e) {
        std::cerr << "config error";
        if (e.line() > 0) std::cerr << " at line " << e.line();
        if (!e.key().empty()) std::cerr << " (key '" << e.key() << "')";
        std::cerr << ": " << e.what() << '\n';
        return exit_config;
    } catch (const hl::numerical_integrity_error& e) {
        std::cerr << "numerical integrity error: " << e.what() << '\n';
        return exit_numerical;
    } catch (const hl::unsupported_parameters_error& e) {
        std::cerr << "numerical integrity error: " << e.what() << '\n';
        return exit_numerical;
    } catch (const hl::domain_error& e) {
        std::cerr << "config error: invalid parameters: " << e.what() << '\n';
        return exit_config;
    }
}
