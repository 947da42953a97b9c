#include <iostream>

#include <CLI11.hpp>

#include "talpiot/cli.hpp"
#include "talpiot/version.hpp"

int main(int argc, char** argv) {
    using namespace talpiot;

    CLI::App app{"Monte Carlo Bayesian analysis of the Talpiot tomb identification"};
    app.set_version_flag("--version", std::string(kToolName) + " " + kVersion);
    app.require_subcommand(1);

    cli::RunOptions run_opt;
    CLI::App* run = app.add_subcommand("run", "estimate P(J|T) for one scenario");
    run->add_option("--scenario", run_opt.scenario_path, "scenario JSON file");
    run->add_option("--onomasticon", run_opt.onomasticon_path, "name-frequency CSV file");
    run->add_option("--out", run_opt.output_dir, "run-record directory (default: runs)");
    run->add_option("--seed", run_opt.seed, "master seed (default: 42)");
    run->add_option("--batches", run_opt.batches, "override scenario batches");
    run->add_option("--batch-size", run_opt.batch_size, "override scenario batch size");
    run->add_option("--replicates", run_opt.replicates, "override scenario replicates");
    run->add_option("--male-population", run_opt.male_population, "adult male population");
    run->add_option("--female-population", run_opt.female_population, "adult female population");
    run->add_option("--threads", run_opt.threads, "worker threads (default: 1)");
    run->add_flag("--strict", run_opt.strict, "exit 2 when statistical flags are raised");
    run->add_option("--format", run_opt.format, "summary format: text, json, or csv")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    run->add_option("--dump-draws", run_opt.dump_draws_path,
                    "write an audit CSV of the first batch of each ensemble");

    cli::SweepOptions sweep_opt;
    CLI::App* sweep = app.add_subcommand("sweep", "run a grid of scenario variants");
    sweep->add_option("--scenario", sweep_opt.scenario_path, "base scenario JSON file");
    sweep->add_option("--grid", sweep_opt.grid_path, "grid JSON file")->required();
    sweep->add_option("--onomasticon", sweep_opt.onomasticon_path, "name-frequency CSV file");
    sweep->add_option("--out", sweep_opt.output_path, "output CSV path (default: sweep.csv)");
    sweep->add_option("--seed", sweep_opt.seed, "master seed, shared across points");
    sweep->add_option("--male-population", sweep_opt.male_population, "adult male population");
    sweep->add_option("--female-population", sweep_opt.female_population,
                      "adult female population");
    sweep->add_option("--threads", sweep_opt.threads, "worker threads (default: 1)");

    cli::AuditOptions audit_opt;
    CLI::App* audit = app.add_subcommand("audit-rr", "apply RR bias corrections to a base value");
    audit->add_option("--base", audit_opt.base_rr, "base RR value")->required();
    audit->add_option("--factors", audit_opt.factors_path,
                      "custom factor JSON (default: the three built-in corrections)");

    cli::OracleOptions oracle_opt;
    CLI::App* oracle = app.add_subcommand("oracle", "exact beta by enumeration (toy scenarios)");
    oracle->add_option("--scenario", oracle_opt.scenario_path, "scenario JSON file");
    oracle->add_option("--onomasticon", oracle_opt.onomasticon_path, "name-frequency CSV file");
    oracle->add_option("--male-population", oracle_opt.male_population, "adult male population");
    oracle->add_option("--female-population", oracle_opt.female_population,
                       "adult female population");
    oracle->add_option("--seed", oracle_opt.seed, "also run the Monte Carlo comparison");
    oracle->add_option("--draws", oracle_opt.draws, "per-ensemble draws for the comparison");
    oracle->add_option("--max-states", oracle_opt.max_states, "enumeration state-space cap");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : cli::kExitValidation;
    }

    if (run->parsed()) return cli::cmd_run(run_opt, std::cout, std::cerr);
    if (sweep->parsed()) return cli::cmd_sweep(sweep_opt, std::cout, std::cerr);
    if (audit->parsed()) return cli::cmd_audit_rr(audit_opt, std::cout, std::cerr);
    if (oracle->parsed()) return cli::cmd_oracle(oracle_opt, std::cout, std::cerr);
    return cli::kExitValidation;
}
