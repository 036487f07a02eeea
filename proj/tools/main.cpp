#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "oamqkd/campaign.hpp"

namespace {

oamqkd::CampaignConfig config_from(const std::string& path, const std::string& preset) {
    if (!path.empty()) return oamqkd::load_config(path);
    if (preset == "desk") return oamqkd::CampaignConfig::desk_preset();
    return oamqkd::CampaignConfig::production_defaults();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Satellite-to-Earth OAM-QKD Monte Carlo simulator"};
    app.require_subcommand(1);

    // campaign run / campaign analyze
    auto* campaign = app.add_subcommand("campaign", "Run or analyze a Monte Carlo campaign");
    campaign->require_subcommand(1);

    std::string run_config_path, run_store_override;
    auto* run = campaign->add_subcommand("run", "Propagate realizations into an ensemble store");
    run->add_option("config", run_config_path, "campaign config (JSON)")->required();
    run->add_option("--store", run_store_override, "override the store path from the config");

    std::string an_store, an_config, an_out = "results.json", an_csv;
    auto* an = campaign->add_subcommand("analyze", "Compute key rates from an ensemble store");
    an->add_option("store", an_store, "ensemble store (JSONL)")->required();
    an->add_option("config", an_config, "campaign config (JSON)")->required();
    an->add_option("--out", an_out, "results JSON path");
    an->add_option("--csv", an_csv, "also write results as CSV");

    std::string val_config, val_preset = "full";
    auto* val = app.add_subcommand("validate", "Run the numerical validation suite");
    val->add_option("--config", val_config, "campaign config (JSON)");
    val->add_option("--preset", val_preset, "desk or full (when no config is given)")
        ->check(CLI::IsMember({"desk", "full"}));

    std::string exp_csv, exp_from = "results.json";
    auto* exp = app.add_subcommand("export", "Convert analysis results to CSV");
    exp->add_option("--csv", exp_csv, "output CSV path")->required();
    exp->add_option("--from", exp_from, "results JSON produced by campaign analyze");

    std::string init_path, init_preset = "desk";
    auto* init = app.add_subcommand("init", "Write a starter config file");
    init->add_option("path", init_path, "output config path")->required();
    init->add_option("--preset", init_preset, "desk or full")
        ->check(CLI::IsMember({"desk", "full"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            oamqkd::CampaignConfig cfg = oamqkd::load_config(run_config_path);
            if (!run_store_override.empty()) cfg.store_path = run_store_override;
            oamqkd::run_campaign(cfg);
            std::cout << "campaign complete: " << cfg.store_path << "\n";
        } else if (an->parsed()) {
            const oamqkd::CampaignConfig cfg = oamqkd::load_config(an_config);
            const auto store = oamqkd::EnsembleStore::load(an_store);
            const auto results = oamqkd::analyze(store, cfg);
            oamqkd::write_results_json(an_out, results, cfg);
            if (!an_csv.empty()) oamqkd::write_results_csv(an_csv, results);
            std::cout << "analyzed " << store.records.size() << " realizations into "
                      << results.size() << " records -> " << an_out << "\n";
        } else if (val->parsed()) {
            const auto cfg = config_from(val_config, val_preset);
            const auto report = oamqkd::validate_suite(cfg);
            oamqkd::print_report(std::cout, report);
            return report.all_pass() ? 0 : 1;
        } else if (exp->parsed()) {
            const auto results = oamqkd::load_results_json(exp_from);
            oamqkd::write_results_csv(exp_csv, results);
            std::cout << "wrote " << results.size() << " rows -> " << exp_csv << "\n";
        } else if (init->parsed()) {
            const auto cfg = init_preset == "desk" ? oamqkd::CampaignConfig::desk_preset()
                                                   : oamqkd::CampaignConfig::production_defaults();
            oamqkd::save_config(init_path, cfg);
            std::cout << "wrote " << init_preset << " config -> " << init_path << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
