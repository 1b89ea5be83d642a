#include "d2d/scenario.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    CLI::App app{"D2D coexistence simulator: interference tables, figure data, power allocation"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, waveform, figure, out;
    std::uint64_t seed = 0;
    bool force = false;
    app.add_option("--config", config_path, "scenario JSON (default: built-in lte-15rb values)")
        ->check(CLI::ExistingFile);
    app.add_option("--waveform", waveform, "ofdm, fmt, oqam, lapped or gfdm");
    auto* seed_opt = app.add_option("--seed", seed, "seed recorded with every output");
    app.add_option("--out", out, "output file");
    app.add_flag("--force-rebuild", force, "ignore cached tables");

    auto* table = app.add_subcommand("table", "build and cache the interference table");
    auto* fig = app.add_subcommand("figure", "emit CSV data for one figure");
    fig->add_option("--figure", figure, "fig3, fig4, fig5a, fig5b, fig6a, fig6b or fig7")
        ->required();
    auto* alloc = app.add_subcommand("allocate", "solve one allocation and write a JSON report");

    CLI11_PARSE(app, argc, argv);

    try {
        auto cfg = config_path.empty() ? d2d::ScenarioConfig{} : d2d::load_config(config_path);
        if (!waveform.empty()) {
            cfg.waveform = d2d::parse_waveform(waveform);
            cfg.figure_waveforms = {cfg.waveform};
        }
        if (seed_opt->count() > 0)
            cfg.seed = seed;
        d2d::validate(cfg);

        std::string path;
        if (table->parsed())
            path = d2d::run_table(cfg, out, force);
        else if (fig->parsed())
            path = d2d::run_figure(cfg, d2d::parse_figure(figure), out, force);
        else if (alloc->parsed())
            path = d2d::run_allocation(cfg, out, force);
        std::cout << path << "\n";
    } catch (const std::exception& e) {
        std::cerr << "d2dsim: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
