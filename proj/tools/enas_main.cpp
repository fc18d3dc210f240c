#include "enas/harness.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

using enas::ExperimentConfig;

void add_common_options(CLI::App* cmd, ExperimentConfig& cfg, std::string& config_path) {
    cmd->add_option("--config", config_path, "JSON config file (flags override it)");
    cmd->add_option("--out", cfg.out_dir, "output directory");
    cmd->add_option("--seed", cfg.seed, "master RNG seed");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse neural architecture search for market movement classification"};
    app.require_subcommand(1);

    ExperimentConfig cfg;
    std::string config_path;

    std::string scenario = "split";
    std::string theta = "theta2";
    std::vector<std::string> boundary_strings;
    std::vector<std::string> report_files;
    bool rules_only = false;
    std::string synth_out = "synthetic.csv";

    auto* prepare = app.add_subcommand("prepare", "build the standardized dataset bundle");
    add_common_options(prepare, cfg, config_path);
    prepare->add_option("--data", cfg.data_csv, "OHLCV CSV (omit for a synthetic series)");
    prepare->add_option("--synth-days", cfg.synth_days, "synthetic series length");
    prepare->add_option("--indicators", cfg.indicator_config, "indicator spec file");
    prepare->add_option("--boundaries", boundary_strings, "three cut dates YYYY-MM-DD")
        ->expected(3);

    auto* search = app.add_subcommand("search", "run the architecture search");
    add_common_options(search, cfg, config_path);
    search->add_option("--optimizer", cfg.optimizer, "2ds or ga");
    auto* scenario_opt = search->add_option("--scenario", scenario, "full or split");
    auto* theta_opt = search->add_option("--theta", theta, "theta1|theta2|theta3");
    search->add_option("--runs", cfg.runs, "independent runs");
    search->add_option("--budget", cfg.budget, "criterion evaluations per run");
    search->add_option("--search-cycles", cfg.search_cycles, "learning cycles during search");
    search->add_option("--final-cycles", cfg.final_cycles, "learning cycles for reporting");
    search->add_option("--max-epochs", cfg.max_epochs, "SCG epochs during search");
    search->add_option("--bits-per-layer", cfg.bits_per_layer, "bits per hidden layer block");
    search->add_option("--max-layers", cfg.max_layers, "maximum hidden layers");
    search->add_option("--swarm-size", cfg.swarm.swarm_size, "2DS particles");
    search->add_option("--unification", cfg.swarm.unification, "2DS unification factor");
    search->add_option("--refresh-gap", cfg.swarm.refresh_gap, "2DS refresh gap");
    search->add_option("--population", cfg.ga.population, "GA population");
    search->add_option("--crossover-prob", cfg.ga.crossover_prob, "GA crossover probability");
    search->add_option("--mutation-prob", cfg.ga.mutation_prob,
                       "GA mutation probability (default 1/n)");

    auto* baselines = app.add_subcommand("baselines", "empirical-rule + mRMR baseline table");
    add_common_options(baselines, cfg, config_path);
    baselines->add_flag("--rules-only", rules_only, "skip the mRMR feature mode");
    baselines->add_option("--mrmr-k", cfg.mrmr_k, "reduced subset cardinality");
    baselines->add_option("--mrmr-bins", cfg.mrmr_bins, "discretization bins");
    baselines->add_option("--cycles", cfg.final_cycles, "learning cycles per row");
    bool mrmr_sweep = false;
    int sweep_steps = 8;
    std::string sweep_rule = "Fletcher-Goss";
    baselines->add_flag("--mrmr-sweep", mrmr_sweep,
                        "sweep the reduced-subset cardinality over [0.1 n_f, 0.75 n_f]");
    baselines->add_option("--sweep-steps", sweep_steps, "points in the cardinality sweep");
    baselines->add_option("--sweep-rule", sweep_rule, "design rule used for the sweep");

    auto* stats = app.add_subcommand("stats", "nonparametric comparison of method reports");
    add_common_options(stats, cfg, config_path);
    stats->add_option("reports", report_files, "search report and/or baseline JSON files")
        ->required();
    bool no_random = false;
    stats->add_flag("--no-random", no_random, "omit the internal random classifier");

    auto* synth = app.add_subcommand("synth", "write a synthetic OHLCV CSV");
    synth->add_option("--days", cfg.synth_days, "series length");
    synth->add_option("--seed", cfg.seed, "generator seed");
    synth->add_option("--output", synth_out, "output CSV path");

    // parse --config first so explicit flags override the file
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            try {
                cfg = ExperimentConfig::from_json_file(argv[i + 1]);
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << "\n";
                return 2;
            }
        }
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (!boundary_strings.empty()) {
            cfg.boundaries = {enas::Date::parse(boundary_strings[0]),
                              enas::Date::parse(boundary_strings[1]),
                              enas::Date::parse(boundary_strings[2])};
        }
        if (scenario_opt->count() > 0) {
            if (scenario == "full") cfg.scenario = enas::Scenario::FullDataset;
            else if (scenario == "split") cfg.scenario = enas::Scenario::SplitDataset;
            else throw enas::DataError("scenario must be 'full' or 'split'");
        }
        if (theta_opt->count() > 0) {
            if (theta == "theta1") cfg.weights = enas::PreferenceWeights::theta1();
            else if (theta == "theta2") cfg.weights = enas::PreferenceWeights::theta2();
            else if (theta == "theta3") cfg.weights = enas::PreferenceWeights::theta3();
            else throw enas::DataError("theta must be theta1, theta2 or theta3");
        }

        if (prepare->parsed()) {
            const auto summary = enas::run_prepare(cfg);
            std::printf("bundle written to %s/bundle (n_f = %d)\n", cfg.out_dir.c_str(),
                        summary.n_features);
            std::printf("rows: pre=%lld train=%lld test=%lld holdout=%lld\n",
                        static_cast<long long>(summary.row_counts[0]),
                        static_cast<long long>(summary.row_counts[1]),
                        static_cast<long long>(summary.row_counts[2]),
                        static_cast<long long>(summary.row_counts[3]));
        } else if (search->parsed()) {
            const auto report = enas::run_search(cfg);
            const auto& best = report.runs[static_cast<std::size_t>(report.best_run)];
            std::printf("report written to %s\n", report.report_path.c_str());
            std::printf("best run %d: J=%.4f #X=%zu holdout acc=%.2f%% mcc=%.4f\n",
                        report.best_run, best.record.criterion, best.selected_features.size(),
                        best.holdout_accuracy, best.holdout_mcc);
        } else if (baselines->parsed()) {
            if (mrmr_sweep) {
                enas::RuleName rule = enas::RuleName::FletcherGoss;
                bool found = false;
                for (const auto r : enas::kAllRules)
                    if (sweep_rule == enas::rule_name(r)) {
                        rule = r;
                        found = true;
                    }
                if (!found) throw enas::DataError("unknown sweep rule '" + sweep_rule + "'");
                const auto rows = enas::run_mrmr_sweep(cfg, rule, sweep_steps);
                std::printf("%zu sweep rows written to %s/mrmr_sweep.csv\n", rows.size(),
                            cfg.out_dir.c_str());
            } else {
                const auto rows = enas::run_baselines(cfg, rules_only);
                std::printf("%zu baseline rows written to %s/baselines.csv\n", rows.size(),
                            cfg.out_dir.c_str());
            }
        } else if (stats->parsed()) {
            const auto out = enas::run_stats(cfg, report_files, !no_random);
            std::printf("stats written to %s/stats\n", cfg.out_dir.c_str());
            std::printf("friedman accuracy: chi2=%.4f p=%.4g\n",
                        out.friedman_accuracy.statistic, out.friedman_accuracy.p_value);
            std::printf("friedman mcc:      chi2=%.4f p=%.4g\n", out.friedman_mcc.statistic,
                        out.friedman_mcc.p_value);
            if (out.wilcoxon_present)
                std::printf("wilcoxon (first>second): acc p=%.4g, mcc p=%.4g\n",
                            out.wilcoxon_accuracy.p_value, out.wilcoxon_mcc.p_value);
        } else if (synth->parsed()) {
            const auto series = enas::generate_synthetic_series(cfg.synth_days, cfg.seed);
            enas::write_series_csv(series, synth_out);
            std::printf("%d bars written to %s\n", cfg.synth_days, synth_out.c_str());
        }
    } catch (const enas::DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
