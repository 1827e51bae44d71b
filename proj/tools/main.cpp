#include <string>

#include <CLI11.hpp>

#include "atompulse/config.hpp"

int main(int argc, char** argv) {
    CLI::App app{
        "atompulse: excitation of a two-level atom by quantized light pulses "
        "in two counter-propagating 1D modes"};
    app.require_subcommand(1);

    std::string config_path;
    std::string scan_config_path;
    std::string figure_id;
    std::string outdir = ".";
    bool oracle_check = false;

    CLI::App* simulate =
        app.add_subcommand("simulate", "Integrate one trajectory and write a CSV");
    simulate->add_option("config", config_path, "configuration file")->required();
    simulate->add_flag("--oracle", oracle_check,
                       "cross-check against the collision-model oracle")
        ->group("");

    CLI::App* scan =
        app.add_subcommand("scan", "Parameter sweep defined by the sweep section");
    scan->add_option("config", scan_config_path, "configuration file")->required();

    CLI::App* figure = app.add_subcommand(
        "reproduce-figure", "Write the CSV bundle for one figure (2..8)");
    figure->add_option("id", figure_id, "figure id")->required();
    figure->add_option("--outdir", outdir, "output directory");

    CLI11_PARSE(app, argc, argv);

    if (simulate->parsed()) {
        return atompulse::cli::run_simulate(config_path, oracle_check);
    }
    if (scan->parsed()) {
        return atompulse::cli::run_scan(scan_config_path);
    }
    return atompulse::cli::run_reproduce_figure(figure_id, outdir);
}
