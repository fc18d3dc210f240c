#pragma once

#include "enas/baselines.hpp"
#include "enas/indicators.hpp"
#include "enas/market_data.hpp"
#include "enas/objective.hpp"
#include "enas/search_2ds.hpp"
#include "enas/search_ga.hpp"
#include "enas/stats.hpp"

#include <array>
#include <atomic>
#include <cstdint>
#include <string>
#include <vector>

namespace enas {

struct ExperimentConfig {
    // data source: CSV path, or a synthetic series when empty
    std::string data_csv;
    int synth_days = 1200;
    std::string indicator_config;  // empty -> built-in default list
    std::array<Date, 3> boundaries{Date{2019, 1, 1}, Date{2020, 8, 1}, Date{2021, 1, 1}};

    // genome schema
    int bits_per_layer = 8;
    int max_layers = 2;

    // objective
    Scenario scenario = Scenario::SplitDataset;
    PreferenceWeights weights = PreferenceWeights::theta2();
    double eps1 = 0.2, eps2 = 0.2, eps3 = 0.44;
    int search_cycles = 5;
    int final_cycles = 20;
    int max_epochs = 100;

    // search
    std::string optimizer = "2ds";  // "2ds" | "ga"
    int runs = 20;
    std::uint64_t budget = 6000;
    SwarmConfig swarm;
    GaConfig ga;

    // baselines
    int mrmr_k = 31;
    int mrmr_bins = 6;

    std::uint64_t seed = 1;
    std::string out_dir = "out";

    static ExperimentConfig from_json_file(const std::string& path);
    void apply_json(const std::string& json_text);
};

// Hold-out rows sit behind an access-counting gate so a run can prove the
// search never touched them.
class DatasetBundle {
public:
    LabeledDataset pre, train, test;

    DatasetBundle() = default;
    DatasetBundle(DatasetBundle&& other) noexcept
        : pre(std::move(other.pre)),
          train(std::move(other.train)),
          test(std::move(other.test)),
          holdout_(std::move(other.holdout_)),
          holdout_reads_(other.holdout_reads_.load()) {}
    DatasetBundle& operator=(DatasetBundle&&) = delete;

    void set_holdout(LabeledDataset ds) { holdout_ = std::move(ds); }
    const LabeledDataset& holdout() const {
        holdout_reads_.fetch_add(1, std::memory_order_relaxed);
        return holdout_;
    }
    std::uint64_t holdout_access_count() const {
        return holdout_reads_.load(std::memory_order_relaxed);
    }

private:
    LabeledDataset holdout_;
    mutable std::atomic<std::uint64_t> holdout_reads_{0};
};

struct PrepareSummary {
    std::array<Eigen::Index, 4> row_counts{};
    int n_features = 0;
    std::vector<std::string> feature_names;
};

// prepare: series -> indicators -> labels -> date split -> standardize
// (statistics fitted on pre+train rows only) -> bundle files under
// <out_dir>/bundle.
PrepareSummary run_prepare(const ExperimentConfig& cfg);
DatasetBundle load_bundle(const std::string& bundle_dir);

struct RunOutcome {
    int run = 0;
    Genome best;
    EvaluationRecord record;
    std::vector<int> selected_features;
    std::vector<LayerSpec> layers;
    double holdout_accuracy = 0.0;  // percent, mean over final cycles
    double holdout_mcc = 0.0;
    std::vector<double> cycle_accuracy;
    std::vector<double> cycle_mcc;
};

struct SearchReport {
    std::vector<RunOutcome> runs;
    int best_run = 0;
    std::uint64_t holdout_reads_during_search = 0;
    std::string report_path;
};

SearchReport run_search(const ExperimentConfig& cfg);

std::vector<BaselineRow> run_baselines(const ExperimentConfig& cfg, bool rules_only = false);

// mRMR cardinality sweep for one rule: k over [0.1 n_f, 0.75 n_f] in
// `steps` points, hold-out metrics per k; writes <out>/mrmr_sweep.csv.
std::vector<BaselineRow> run_mrmr_sweep(const ExperimentConfig& cfg, RuleName rule,
                                        int steps = 8);

struct StatsOutputs {
    FriedmanResult friedman_accuracy;
    FriedmanResult friedman_mcc;
    std::vector<std::string> method_names;
    std::vector<PosthocComparison> posthoc_accuracy;
    std::vector<PosthocComparison> posthoc_mcc;
    bool wilcoxon_present = false;
    WilcoxonResult wilcoxon_accuracy;  // H1: first report > second report
    WilcoxonResult wilcoxon_mcc;
};

// report_files: search reports and/or baseline JSON files. A naive random
// classifier over the hold-out rows is appended unless include_random is
// false.
StatsOutputs run_stats(const ExperimentConfig& cfg, const std::vector<std::string>& report_files,
                       bool include_random = true);

void ensure_dir(const std::string& path);

}  // namespace enas
