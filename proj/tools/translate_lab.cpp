#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>

#include "tlab/scenario.hpp"

namespace {

void print_error(const std::string& kind, const std::string& what) {
    nlohmann::json j;
    j["error"] = kind;
    j["message"] = what;
    std::cerr << j.dump() << "\n";
}

void print_summary(const tlab::ScenarioReport& report) {
    std::cout << report.command << ": " << (report.all_pass() ? "pass" : "FAIL") << "\n";
    for (const auto& [name, value] : report.metrics)
        std::cout << "  " << name << " = " << tlab::format_real(value) << "\n";
    for (const auto& [name, v] : report.verdicts) std::cout << "  [" << v << "] " << name << "\n";
    for (const auto& note : report.notes) std::cout << "  note: " << note << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical workbench for discrete-translate completeness experiments"};
    app.require_subcommand(1);

    std::string config_path, out_dir, report_path;
    int jobs = 1;

    const std::vector<std::string> commands = {
        "density",        "probe-radius",   "hilbert-check", "norms",      "molecule-suite",
        "generator-build", "generator-demo", "pair-build",    "annihilate", "approx"};
    for (const std::string& name : commands) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "scenario config (key=value or JSON)")
            ->required();
        sub->add_option("--jobs", jobs, "parallel workers for batch work");
        sub->add_option("--out", out_dir, "output directory override");
    }
    CLI::App* replay = app.add_subcommand("replay", "re-run a report and audit determinism");
    replay->add_option("--report", report_path, "report.json from a previous run")->required();
    replay->add_option("--jobs", jobs, "parallel workers for batch work");
    replay->add_option("--out", out_dir, "output directory override");

    CLI11_PARSE(app, argc, argv);
    const std::string chosen = app.get_subcommands().front()->get_name();

    try {
        tlab::RunOptions opts;
        opts.jobs = jobs;
        opts.out_override = out_dir;
        tlab::ScenarioReport report;
        if (chosen == "replay") {
            report = tlab::replay_report(report_path, opts);
        } else {
            tlab::ScenarioConfig cfg = tlab::parse_config(config_path);
            if (cfg.command != chosen)
                throw tlab::ConfigError("config command '" + cfg.command +
                                        "' does not match subcommand '" + chosen + "'");
            report = tlab::run_scenario(cfg, opts);
        }
        print_summary(report);
        return report.all_pass() ? 0 : 1;
    } catch (const tlab::ConfigError& e) {
        print_error("config", e.what());
        return 2;
    } catch (const tlab::NumericalHazard& e) {
        print_error("numerical-hazard", e.what());
        return 3;
    } catch (const std::exception& e) {
        print_error("internal", e.what());
        return 3;
    }
}
