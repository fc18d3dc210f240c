#pragma once

#include "enas/encoding.hpp"
#include "enas/market_data.hpp"
#include "enas/mlp.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace enas {

struct PreferenceWeights {
    double efficacy = 0.5;    // theta_E
    double complexity = 0.5;  // theta_C

    static PreferenceWeights theta1() { return {0.75, 0.25}; }
    static PreferenceWeights theta2() { return {0.50, 0.50}; }
    static PreferenceWeights theta3() { return {0.25, 0.75}; }
};

enum class Scenario { FullDataset, SplitDataset };

const char* scenario_name(Scenario s);

struct ScenarioConfig {
    Scenario scenario = Scenario::SplitDataset;
    double eps1 = 0.2;   // MCC floor on test data
    double eps2 = 0.2;   // MCC floor on pre-period data (split only)
    double eps3 = 0.44;  // error ceiling on pre-period data (split only)
    int cycles = 5;
    ScgOptions training;
};

struct ComplexityParts {
    double features = 0.0;  // C_f
    double neurons = 0.0;   // C_s
    double layers = 0.0;    // C_l
    double total = 0.0;
};

struct CycleOutcome {
    double test_error = 1.0;
    double test_mcc = -1.0;
    double pre_error = 1.0;
    double pre_mcc = -1.0;
};

struct EvaluationRecord {
    double efficacy = 1.0;     // E: mean test error over cycles
    double complexity = 0.0;   // C
    double penalty = 0.0;      // P
    double criterion = 0.0;    // J = theta_E*E + theta_C*C + P
    double test_mcc = -1.0;    // mean MCC on test data
    double pre_error = 1.0;    // split scenario only; worst-case defaults otherwise
    double pre_mcc = -1.0;
    ComplexityParts parts;
    std::vector<CycleOutcome> cycle_trace;
    bool degenerate = false;   // empty feature subset, training skipped

    std::string to_json() const;
};

// C = (C_f + C_l + C_s) / 3 with C_f = #X/n_f, C_l = active/n_l and
// C_s the mean per-active-layer size fraction sum(s_k) / (active * s_max).
ComplexityParts complexity(const CandidateSolution& sol, const EncodingSchema& schema);

double penalty_full(double test_mcc, const ScenarioConfig& cfg);
double penalty_split(double test_mcc, double pre_mcc, double pre_error,
                     const ScenarioConfig& cfg);

double criterion(double efficacy, double complexity_value, double penalty,
                 const PreferenceWeights& weights);

// Per-cycle training seeds are mix(run_seed, genome hash, cycle), so a
// genome re-evaluated within one run yields identical results.
class CandidateEvaluator {
public:
    CandidateEvaluator(const LabeledDataset& pre, const LabeledDataset& train,
                       const LabeledDataset& test, ScenarioConfig config,
                       PreferenceWeights weights, std::uint64_t run_seed);

    EvaluationRecord operator()(const Genome& genome) const;
    EvaluationRecord evaluate(const CandidateSolution& sol) const;

    const ScenarioConfig& config() const { return config_; }
    const PreferenceWeights& weights() const { return weights_; }

private:
    Eigen::MatrixXd train_features_;  // pre+train (full) or train only (split)
    Eigen::VectorXi train_labels_;
    const LabeledDataset& pre_;
    const LabeledDataset& test_;
    ScenarioConfig config_;
    PreferenceWeights weights_;
    std::uint64_t run_seed_;
};

// Columns of `m` restricted to `subset`, in subset order.
Eigen::MatrixXd select_columns(const Eigen::MatrixXd& m, const std::vector<int>& subset);

}  // namespace enas
