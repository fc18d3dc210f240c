#pragma once

#include "enas/indicators.hpp"
#include "enas/market_data.hpp"
#include "enas/mlp.hpp"
#include "enas/objective.hpp"

#include <array>
#include <string>
#include <vector>

namespace enas {

enum class RuleName { Kolmogorov, Hush, Wang, Ripley, FletcherGoss, Huang };

constexpr std::array<RuleName, 6> kAllRules = {RuleName::Kolmogorov, RuleName::Hush,
                                               RuleName::Wang, RuleName::Ripley,
                                               RuleName::FletcherGoss, RuleName::Huang};

const char* rule_name(RuleName r);

// Hidden-layer sizes from the named design rule. Non-integer results are
// rounded to the nearest integer (half away from zero). Hush uses c1 = 4 in
// its single-hidden-layer form; Huang is the only rule that reads N.
std::pair<int, int> apply_rule(RuleName rule, int n_features, int n_classes,
                               int n_train_samples);

struct DiscretizeResult {
    std::vector<int> codes;
    int distinct_bins = 0;
    bool collapsed = false;  // fewer distinct values than requested bins
};

// Equal-frequency (quantile) binning; monotone in the input value.
DiscretizeResult discretize(const std::vector<double>& column, int bins);

// Greedy max-(relevance - redundancy) ordering by mutual information over
// quantile-discretized features. Deterministic: ties resolve to the lowest
// column index. Returns the first k indices of the ordering.
std::vector<int> mrmr_select(const Eigen::MatrixXd& features, const Eigen::VectorXi& labels,
                             int k, int bins = 6);

// Mutual information (nats) between two integer code vectors.
double mutual_information(const std::vector<int>& a, const std::vector<int>& b);

enum class FeatureMode { Full, Mrmr };

struct BaselineRow {
    std::string scenario;  // "full" or "mrmr"
    RuleName rule;
    int s1 = 0, s2 = 0;
    double complexity = 0.0;
    double holdout_accuracy = 0.0;  // percent, cycle-averaged
    double holdout_mcc = 0.0;
    std::vector<double> cycle_accuracy;
    std::vector<double> cycle_mcc;
};

struct BaselineSetup {
    int mrmr_k = 31;
    int mrmr_bins = 6;
    int cycles = 20;
    int complexity_bits_per_layer = 10;  // baseline sizes may exceed the search bound
    ScgOptions training;
    std::uint64_t seed = 1;
};

// Trains on the within-period training data (split-scenario emulation) with
// tanh hidden layers and reports hold-out metrics. mRMR selection uses
// pre+train rows.
BaselineRow evaluate_baseline(RuleName rule, FeatureMode mode, const LabeledDataset& pre,
                              const LabeledDataset& train, const LabeledDataset& holdout,
                              const BaselineSetup& setup);

void write_baseline_csv(const std::vector<BaselineRow>& rows, const std::string& path);

}  // namespace enas
