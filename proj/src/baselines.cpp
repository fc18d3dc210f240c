#include "enas/baselines.hpp"

#include "enas/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace enas {

const char* rule_name(RuleName r) {
    switch (r) {
        case RuleName::Kolmogorov: return "Kolmogorov";
        case RuleName::Hush: return "Hush";
        case RuleName::Wang: return "Wang";
        case RuleName::Ripley: return "Ripley";
        case RuleName::FletcherGoss: return "Fletcher-Goss";
        case RuleName::Huang: return "Huang";
    }
    return "?";
}

namespace {

int round_half_away(double v) { return static_cast<int>(std::lround(v)); }

}  // namespace

std::pair<int, int> apply_rule(RuleName rule, int n_features, int n_classes,
                               int n_train_samples) {
    if (n_features < 1 || n_classes < 1 || n_train_samples < 1)
        throw std::invalid_argument("apply_rule: arguments must be >= 1");
    const double nf = n_features;
    const double m = n_classes;
    const double n = n_train_samples;
    switch (rule) {
        case RuleName::Kolmogorov:
            return {2 * n_features + 1, 0};
        case RuleName::Hush:
            return {4 * n_features, 0};
        case RuleName::Wang:
            return {round_half_away(2.0 * nf / 3.0), 0};
        case RuleName::Ripley:
            return {round_half_away((nf + m) / 2.0), 0};
        case RuleName::FletcherGoss:
            return {round_half_away(2.0 * std::sqrt(nf) + m), 0};
        case RuleName::Huang:
            return {round_half_away(std::sqrt((m + 2.0) * n) + 2.0 * std::sqrt(n / (m + 2.0))),
                    round_half_away(m * std::sqrt(n / (m + 2.0)))};
    }
    throw std::invalid_argument("unknown rule");
}

DiscretizeResult discretize(const std::vector<double>& column, int bins) {
    if (bins < 2) throw std::invalid_argument("discretize: bins must be >= 2");
    if (column.empty()) throw std::invalid_argument("discretize: empty column");

    std::vector<double> sorted = column;
    std::sort(sorted.begin(), sorted.end());
    const auto n = sorted.size();

    // quantile cut points; values strictly above a cut move to the next bin
    std::vector<double> edges;
    edges.reserve(static_cast<std::size_t>(bins - 1));
    for (int b = 1; b < bins; ++b) {
        const auto at = (n * static_cast<std::size_t>(b)) / static_cast<std::size_t>(bins);
        edges.push_back(sorted[at == 0 ? 0 : at - 1]);
    }

    DiscretizeResult res;
    res.codes.resize(column.size());
    for (std::size_t i = 0; i < column.size(); ++i) {
        int code = 0;
        for (double e : edges)
            if (column[i] > e) ++code;
        res.codes[i] = code;
    }

    std::vector<int> seen = res.codes;
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    res.distinct_bins = static_cast<int>(seen.size());
    res.collapsed = res.distinct_bins < bins;
    return res;
}

double mutual_information(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size() || a.empty())
        throw std::invalid_argument("mutual_information: size mismatch");
    std::map<std::pair<int, int>, int> joint;
    std::map<int, int> ma, mb;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ++joint[{a[i], b[i]}];
        ++ma[a[i]];
        ++mb[b[i]];
    }
    const double n = static_cast<double>(a.size());
    double mi = 0.0;
    for (const auto& [key, cnt] : joint) {
        const double pxy = cnt / n;
        const double px = ma[key.first] / n;
        const double py = mb[key.second] / n;
        mi += pxy * std::log(pxy / (px * py));
    }
    return std::max(0.0, mi);
}

std::vector<int> mrmr_select(const Eigen::MatrixXd& features, const Eigen::VectorXi& labels,
                             int k, int bins) {
    const int n_f = static_cast<int>(features.cols());
    if (k < 1 || k > n_f) throw std::invalid_argument("mrmr_select: k out of range");
    if (features.rows() != labels.size())
        throw std::invalid_argument("mrmr_select: row/label count mismatch");

    std::vector<std::vector<int>> codes(static_cast<std::size_t>(n_f));
    for (int c = 0; c < n_f; ++c) {
        std::vector<double> col(features.col(c).data(),
                                features.col(c).data() + features.rows());
        codes[static_cast<std::size_t>(c)] = discretize(col, bins).codes;
    }
    std::vector<int> label_codes(labels.data(), labels.data() + labels.size());

    std::vector<double> relevance(static_cast<std::size_t>(n_f));
    for (int c = 0; c < n_f; ++c)
        relevance[static_cast<std::size_t>(c)] =
            mutual_information(codes[static_cast<std::size_t>(c)], label_codes);

    std::vector<int> selected;
    std::vector<bool> used(static_cast<std::size_t>(n_f), false);
    std::vector<double> redundancy_sum(static_cast<std::size_t>(n_f), 0.0);

    while (static_cast<int>(selected.size()) < k) {
        int best = -1;
        double best_score = -std::numeric_limits<double>::infinity();
        for (int c = 0; c < n_f; ++c) {
            if (used[static_cast<std::size_t>(c)]) continue;
            double score = relevance[static_cast<std::size_t>(c)];
            if (!selected.empty())
                score -= redundancy_sum[static_cast<std::size_t>(c)] /
                         static_cast<double>(selected.size());
            if (score > best_score) {
                best_score = score;
                best = c;
            }
        }
        used[static_cast<std::size_t>(best)] = true;
        selected.push_back(best);
        for (int c = 0; c < n_f; ++c)
            if (!used[static_cast<std::size_t>(c)])
                redundancy_sum[static_cast<std::size_t>(c)] += mutual_information(
                    codes[static_cast<std::size_t>(c)], codes[static_cast<std::size_t>(best)]);
    }
    return selected;
}

BaselineRow evaluate_baseline(RuleName rule, FeatureMode mode, const LabeledDataset& pre,
                              const LabeledDataset& train, const LabeledDataset& holdout,
                              const BaselineSetup& setup) {
    const int n_full = static_cast<int>(train.cols());

    std::vector<int> subset(static_cast<std::size_t>(n_full));
    std::iota(subset.begin(), subset.end(), 0);
    if (mode == FeatureMode::Mrmr) {
        Eigen::MatrixXd pool(pre.rows() + train.rows(), train.cols());
        pool << pre.features, train.features;
        Eigen::VectorXi pool_labels(pre.rows() + train.rows());
        pool_labels << pre.labels, train.labels;
        subset = mrmr_select(pool, pool_labels, setup.mrmr_k, setup.mrmr_bins);
        std::sort(subset.begin(), subset.end());
    }

    const int n_f = static_cast<int>(subset.size());
    const auto [s1, s2] = apply_rule(rule, n_f, 2, static_cast<int>(train.rows()));

    Architecture arch;
    arch.input_dim = n_f;
    if (s1 > 0) arch.layers.push_back({s1, Activation::Tanh});
    if (s2 > 0) arch.layers.push_back({s2, Activation::Tanh});

    BaselineRow row;
    row.scenario = mode == FeatureMode::Full ? "full" : "mrmr";
    row.rule = rule;
    row.s1 = s1;
    row.s2 = s2;

    // complexity reported against the wider baseline schema: rule sizes may
    // exceed the search encoding bound
    EncodingSchema schema{n_full, 2, setup.complexity_bits_per_layer};
    CandidateSolution sol;
    sol.architecture = arch;
    sol.feature_subset = subset;
    sol.genome = Genome::zeros(schema);
    row.complexity = complexity(sol, schema).total;

    const Eigen::MatrixXd train_x = select_columns(train.features, subset);
    const Eigen::MatrixXd hold_x = select_columns(holdout.features, subset);

    row.cycle_accuracy.resize(static_cast<std::size_t>(setup.cycles));
    row.cycle_mcc.resize(static_cast<std::size_t>(setup.cycles));
    const std::uint64_t rule_tag =
        mix_seed({setup.seed, static_cast<std::uint64_t>(rule), mode == FeatureMode::Full ? 0u : 1u});
    for (int k = 0; k < setup.cycles; ++k) {
        const auto trained =
            train_scg(arch, train_x, train.labels,
                      mix_seed({rule_tag, static_cast<std::uint64_t>(k)}), setup.training);
        const auto ev = evaluate(arch, trained.weights, hold_x, holdout.labels);
        row.cycle_accuracy[static_cast<std::size_t>(k)] = 100.0 * ev.confusion.accuracy();
        row.cycle_mcc[static_cast<std::size_t>(k)] = mcc(ev.confusion);
    }
    row.holdout_accuracy =
        std::accumulate(row.cycle_accuracy.begin(), row.cycle_accuracy.end(), 0.0) /
        setup.cycles;
    row.holdout_mcc = std::accumulate(row.cycle_mcc.begin(), row.cycle_mcc.end(), 0.0) /
                      setup.cycles;
    return row;
}

void write_baseline_csv(const std::vector<BaselineRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << "scenario,rule,s1,s2,complexity,holdout_accuracy,holdout_mcc\n";
    char buf[160];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%s,%s,%d,%d,%.6g,%.6g,%.6g\n", r.scenario.c_str(),
                      rule_name(r.rule), r.s1, r.s2, r.complexity, r.holdout_accuracy,
                      r.holdout_mcc);
        out << buf;
    }
}

}  // namespace enas
