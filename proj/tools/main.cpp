// main.cpp — sqzcav command-line entry point

#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv)
{
    using namespace sqz::cli;

    CLI::App app{"Squeezed-bath cavity QED simulator"};
    app.set_version_flag("--version", kLibraryVersion);
    app.require_subcommand(1);

    CommandArgs args;
    std::string probe_mode, tier;
    int n_max = 0;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", args.config_path, "JSON run configuration (defaults if omitted)")
            ->check(CLI::ExistingFile);
        sub->add_option("--out", args.out_dir, "Output directory");
        sub->add_option("--tier", tier, "Model tier override (T0, T3F, T3E, T3R, T4F, T4I, T4R)");
        sub->add_option("--nmax", n_max, "Fock truncation override");
        sub->add_option("--seed", args.seed, "Recorded in the result; all commands are deterministic");
        sub->add_option("--threads", args.threads, "Worker threads")->check(CLI::PositiveNumber);
    };

    auto* validate = app.add_subcommand("validate", "Check the model-validity conditions");
    auto* bloch = app.add_subcommand("bloch", "Ground-state Bloch dynamics and fitted decay rates");
    auto* spectrum = app.add_subcommand("spectrum", "Probe transmission spectra");
    auto* compare = app.add_subcommand("compare", "Trace distance between two tiers");
    auto* nogo = app.add_subcommand("nogo", "Three-level quadrature no-go scan");
    for (auto* sub : {validate, bloch, spectrum, compare, nogo}) common(sub);
    spectrum->add_option("--method", args.method, "analytic | numeric | both")
        ->check(CLI::IsMember({"analytic", "numeric", "both"}));
    spectrum->add_option("--probe-mode", probe_mode, "single | sym | antisym | custom");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsageError;
    }
    if (!tier.empty()) args.tier = tier;
    if (!probe_mode.empty()) args.probe_mode = probe_mode;
    if (n_max != 0) args.n_max = n_max;

    try {
        if (validate->parsed()) return cmd_validate(args);
        if (bloch->parsed()) return cmd_bloch(args);
        if (spectrum->parsed()) return cmd_spectrum(args);
        if (compare->parsed()) return cmd_compare(args);
        if (nogo->parsed()) return cmd_nogo(args);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kPhysicsFailure;
    }
    return kUsageError;
}
