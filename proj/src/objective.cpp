#include "enas/objective.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace enas {

const char* scenario_name(Scenario s) {
    return s == Scenario::FullDataset ? "full" : "split";
}

ComplexityParts complexity(const CandidateSolution& sol, const EncodingSchema& schema) {
    ComplexityParts parts;
    parts.features =
        static_cast<double>(sol.feature_subset.size()) / schema.n_features;

    const auto active = static_cast<int>(sol.architecture.layers.size());
    parts.layers = static_cast<double>(active) / schema.max_layers;

    if (active > 0) {
        double size_sum = 0.0;
        for (const auto& l : sol.architecture.layers) size_sum += l.size;
        parts.neurons = size_sum / (static_cast<double>(active) * schema.max_layer_size());
    }

    parts.total = (parts.features + parts.layers + parts.neurons) / 3.0;
    return parts;
}

double penalty_full(double test_mcc, const ScenarioConfig& cfg) {
    return 5.0 * std::max(0.0, cfg.eps1 - test_mcc);
}

double penalty_split(double test_mcc, double pre_mcc, double pre_error,
                     const ScenarioConfig& cfg) {
    return 5.0 * (std::max(0.0, cfg.eps1 - test_mcc) + std::max(0.0, cfg.eps2 - pre_mcc) +
                  std::max(0.0, pre_error - cfg.eps3));
}

double criterion(double efficacy, double complexity_value, double penalty,
                 const PreferenceWeights& weights) {
    return weights.efficacy * efficacy + weights.complexity * complexity_value + penalty;
}

Eigen::MatrixXd select_columns(const Eigen::MatrixXd& m, const std::vector<int>& subset) {
    Eigen::MatrixXd out(m.rows(), static_cast<Eigen::Index>(subset.size()));
    for (std::size_t k = 0; k < subset.size(); ++k)
        out.col(static_cast<Eigen::Index>(k)) = m.col(subset[k]);
    return out;
}

CandidateEvaluator::CandidateEvaluator(const LabeledDataset& pre, const LabeledDataset& train,
                                       const LabeledDataset& test, ScenarioConfig config,
                                       PreferenceWeights weights, std::uint64_t run_seed)
    : pre_(pre), test_(test), config_(config), weights_(weights), run_seed_(run_seed) {
    if (config_.cycles < 1) throw std::invalid_argument("cycles must be >= 1");
    if (pre.rows() == 0 || train.rows() == 0 || test.rows() == 0)
        throw std::invalid_argument("evaluator datasets must be non-empty");

    if (config_.scenario == Scenario::FullDataset) {
        train_features_.resize(pre.rows() + train.rows(), train.cols());
        train_features_ << pre.features, train.features;
        train_labels_.resize(pre.rows() + train.rows());
        train_labels_ << pre.labels, train.labels;
    } else {
        train_features_ = train.features;
        train_labels_ = train.labels;
    }
}

EvaluationRecord CandidateEvaluator::operator()(const Genome& genome) const {
    return evaluate(decode(genome));
}

EvaluationRecord CandidateEvaluator::evaluate(const CandidateSolution& sol) const {
    EvaluationRecord rec;
    rec.parts = complexity(sol, sol.genome.schema);
    rec.complexity = rec.parts.total;

    const bool split = config_.scenario == Scenario::SplitDataset;

    if (sol.feature_subset.empty()) {
        // Degenerate candidate: no inputs to train on. Worst-case outcomes
        // keep J total over the genome space.
        rec.degenerate = true;
        rec.cycle_trace.assign(static_cast<std::size_t>(config_.cycles), CycleOutcome{});
        rec.efficacy = 1.0;
        rec.test_mcc = -1.0;
        rec.pre_error = 1.0;
        rec.pre_mcc = -1.0;
    } else {
        const Eigen::MatrixXd train_x = select_columns(train_features_, sol.feature_subset);
        const Eigen::MatrixXd test_x = select_columns(test_.features, sol.feature_subset);
        const Eigen::MatrixXd pre_x =
            split ? select_columns(pre_.features, sol.feature_subset) : Eigen::MatrixXd();

        const std::uint64_t genome_hash = sol.genome.hash();
        rec.cycle_trace.resize(static_cast<std::size_t>(config_.cycles));
        for (int k = 0; k < config_.cycles; ++k) {
            auto& cyc = rec.cycle_trace[static_cast<std::size_t>(k)];
            try {
                const std::uint64_t seed =
                    mix_seed({run_seed_, genome_hash, static_cast<std::uint64_t>(k)});
                const auto trained = train_scg(sol.architecture, train_x, train_labels_,
                                               seed, config_.training);
                const auto ev = enas::evaluate(sol.architecture, trained.weights, test_x,
                                               test_.labels);
                cyc.test_error = ev.error_rate;
                cyc.test_mcc = mcc(ev.confusion);
                if (split) {
                    const auto pv = enas::evaluate(sol.architecture, trained.weights, pre_x,
                                                   pre_.labels);
                    cyc.pre_error = pv.error_rate;
                    cyc.pre_mcc = mcc(pv.confusion);
                }
            } catch (const std::exception&) {
                // cycle recorded at worst case, search continues
                cyc = CycleOutcome{};
            }
        }

        double e_sum = 0.0, phi_sum = 0.0, pe_sum = 0.0, pm_sum = 0.0;
        for (const auto& cyc : rec.cycle_trace) {
            e_sum += cyc.test_error;
            phi_sum += cyc.test_mcc;
            pe_sum += cyc.pre_error;
            pm_sum += cyc.pre_mcc;
        }
        const double n = static_cast<double>(config_.cycles);
        rec.efficacy = e_sum / n;
        rec.test_mcc = phi_sum / n;
        rec.pre_error = pe_sum / n;
        rec.pre_mcc = pm_sum / n;
    }

    rec.penalty = split ? penalty_split(rec.test_mcc, rec.pre_mcc, rec.pre_error, config_)
                        : penalty_full(rec.test_mcc, config_);
    rec.criterion = enas::criterion(rec.efficacy, rec.complexity, rec.penalty, weights_);
    return rec;
}

std::string EvaluationRecord::to_json() const {
    nlohmann::json j;
    j["efficacy"] = efficacy;
    j["complexity"] = complexity;
    j["penalty"] = penalty;
    j["criterion"] = criterion;
    j["test_mcc"] = test_mcc;
    j["pre_error"] = pre_error;
    j["pre_mcc"] = pre_mcc;
    j["degenerate"] = degenerate;
    j["complexity_parts"] = {
        {"features", parts.features}, {"neurons", parts.neurons}, {"layers", parts.layers}};
    auto& cycles = j["cycles"] = nlohmann::json::array();
    for (const auto& c : cycle_trace)
        cycles.push_back({{"test_error", c.test_error},
                          {"test_mcc", c.test_mcc},
                          {"pre_error", c.pre_error},
                          {"pre_mcc", c.pre_mcc}});
    return j.dump();
}

}  // namespace enas
