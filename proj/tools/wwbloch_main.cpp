#include <cstdio>
#include <exception>

#include "CLI11.hpp"

#include "wwbloch/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Bloch band structure of the water-wave Dirichlet-Neumann operator"};
    app.require_subcommand(1);

    std::string config_path, out_prefix;
    int threads = 1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file")->required();
        sub->add_option("--out", out_prefix, "output path prefix")->required();
        sub->add_option("--threads", threads, "worker threads for theta sweeps")
            ->default_val(1);
    };
    add_common(app.add_subcommand("band-structure",
                                  "band functions over the Brillouin cell"));
    add_common(app.add_subcommand("gap-scan", "spectral gap report"));
    add_common(app.add_subcommand("gap-scaling",
                                  "gap widths across an eps ladder with fits"));
    add_common(app.add_subcommand("validate-oracle",
                                  "series terms vs the PDE reference solve"));
    add_common(app.add_subcommand("evolve", "linearized surface evolution"));

    CLI11_PARSE(app, argc, argv);
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        wwbloch::cli::run_command(command, config_path, out_prefix, threads);
    } catch (const wwbloch::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const wwbloch::NumericalError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 3;
    } catch (const wwbloch::InvariantViolation& e) {
        std::fprintf(stderr, "invariant violation: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
