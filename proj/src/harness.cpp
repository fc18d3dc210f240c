#include "enas/harness.hpp"

#include "enas/rng.hpp"
#include "enas/search_common.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace enas {

using nlohmann::json;

namespace {

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    json j;
    in >> j;
    return j;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << text;
}

void write_dataset_csv(const LabeledDataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << "label";
    for (const auto& name : ds.feature_names) out << "," << name;
    out << "\n";
    for (Eigen::Index r = 0; r < ds.rows(); ++r) {
        out << ds.labels[r];
        for (Eigen::Index c = 0; c < ds.cols(); ++c) out << "," << fmt(ds.features(r, c));
        out << "\n";
    }
}

LabeledDataset read_dataset_csv(const std::string& path, DatasetRole role) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open dataset '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw DataError("dataset '" + path + "' is empty");

    std::vector<std::string> names;
    {
        std::stringstream hs(line);
        std::string tok;
        bool first = true;
        while (std::getline(hs, tok, ',')) {
            if (first) {
                if (tok != "label") throw DataError("dataset '" + path + "': bad header");
                first = false;
            } else {
                names.push_back(tok);
            }
        }
    }

    std::vector<int> labels;
    std::vector<double> values;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ls(line);
        std::string tok;
        std::getline(ls, tok, ',');
        labels.push_back(std::stoi(tok));
        std::size_t got = 0;
        while (std::getline(ls, tok, ',')) {
            values.push_back(std::stod(tok));
            ++got;
        }
        if (got != names.size())
            throw DataError("dataset '" + path + "': row " + std::to_string(rows + 2) +
                            " has " + std::to_string(got) + " features, expected " +
                            std::to_string(names.size()));
        ++rows;
    }

    LabeledDataset ds;
    ds.role = role;
    ds.feature_names = names;
    ds.features.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(names.size()));
    ds.labels.resize(static_cast<Eigen::Index>(rows));
    for (std::size_t r = 0; r < rows; ++r) {
        ds.labels[static_cast<Eigen::Index>(r)] = labels[r];
        for (std::size_t c = 0; c < names.size(); ++c)
            ds.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                values[r * names.size() + c];
    }
    return ds;
}

std::array<Date, 3> boundaries_from_json(const json& arr) {
    if (!arr.is_array() || arr.size() != 3)
        throw DataError("config: boundaries must be an array of three dates");
    return {Date::parse(arr[0].get<std::string>()), Date::parse(arr[1].get<std::string>()),
            Date::parse(arr[2].get<std::string>())};
}

PreferenceWeights weights_from_json(const json& v) {
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "theta1") return PreferenceWeights::theta1();
        if (s == "theta2") return PreferenceWeights::theta2();
        if (s == "theta3") return PreferenceWeights::theta3();
        throw DataError("config: unknown theta '" + s + "'");
    }
    if (v.is_array() && v.size() == 2) {
        PreferenceWeights w{v[0].get<double>(), v[1].get<double>()};
        if (std::abs(w.efficacy + w.complexity - 1.0) > 1e-12)
            throw DataError("config: preference weights must sum to 1");
        return w;
    }
    throw DataError("config: theta must be a name or [theta_E, theta_C]");
}

// Deterministic objective wrapper: identical genomes within a run share one
// evaluation result, so repeats are free.
class MemoObjective {
public:
    explicit MemoObjective(const CandidateEvaluator& eval) : eval_(eval) {}

    EvaluationRecord operator()(const Genome& g) const {
        const std::string key = g.to_string();
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto it = cache_.find(key);
            if (it != cache_.end()) return it->second;
        }
        EvaluationRecord rec = eval_(g);
        {
            std::lock_guard<std::mutex> lock(mutex_);
            cache_.emplace(key, rec);
        }
        return rec;
    }

private:
    const CandidateEvaluator& eval_;
    mutable std::mutex mutex_;
    mutable std::unordered_map<std::string, EvaluationRecord> cache_;
};

struct ScenarioTraining {
    Eigen::MatrixXd features;
    Eigen::VectorXi labels;
};

ScenarioTraining scenario_training(const DatasetBundle& bundle, Scenario scenario) {
    ScenarioTraining st;
    if (scenario == Scenario::FullDataset) {
        st.features.resize(bundle.pre.rows() + bundle.train.rows(), bundle.train.cols());
        st.features << bundle.pre.features, bundle.train.features;
        st.labels.resize(bundle.pre.rows() + bundle.train.rows());
        st.labels << bundle.pre.labels, bundle.train.labels;
    } else {
        st.features = bundle.train.features;
        st.labels = bundle.train.labels;
    }
    return st;
}

}  // namespace

void ensure_dir(const std::string& path) { std::filesystem::create_directories(path); }

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
    ExperimentConfig cfg;
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    cfg.apply_json(ss.str());
    return cfg;
}

void ExperimentConfig::apply_json(const std::string& json_text) {
    json j = json::parse(json_text);
    if (j.contains("data_csv")) data_csv = j["data_csv"].get<std::string>();
    if (j.contains("synth_days")) synth_days = j["synth_days"].get<int>();
    if (j.contains("indicator_config")) indicator_config = j["indicator_config"].get<std::string>();
    if (j.contains("boundaries")) boundaries = boundaries_from_json(j["boundaries"]);
    if (j.contains("bits_per_layer")) bits_per_layer = j["bits_per_layer"].get<int>();
    if (j.contains("max_layers")) max_layers = j["max_layers"].get<int>();
    if (j.contains("scenario")) {
        const auto s = j["scenario"].get<std::string>();
        if (s == "full") scenario = Scenario::FullDataset;
        else if (s == "split") scenario = Scenario::SplitDataset;
        else throw DataError("config: scenario must be 'full' or 'split'");
    }
    if (j.contains("theta")) weights = weights_from_json(j["theta"]);
    if (j.contains("eps1")) eps1 = j["eps1"].get<double>();
    if (j.contains("eps2")) eps2 = j["eps2"].get<double>();
    if (j.contains("eps3")) eps3 = j["eps3"].get<double>();
    if (j.contains("search_cycles")) search_cycles = j["search_cycles"].get<int>();
    if (j.contains("final_cycles")) final_cycles = j["final_cycles"].get<int>();
    if (j.contains("max_epochs")) max_epochs = j["max_epochs"].get<int>();
    if (j.contains("optimizer")) optimizer = j["optimizer"].get<std::string>();
    if (j.contains("runs")) runs = j["runs"].get<int>();
    if (j.contains("budget")) budget = j["budget"].get<std::uint64_t>();
    if (j.contains("swarm_size")) swarm.swarm_size = j["swarm_size"].get<int>();
    if (j.contains("unification")) swarm.unification = j["unification"].get<double>();
    if (j.contains("refresh_gap")) swarm.refresh_gap = j["refresh_gap"].get<int>();
    if (j.contains("population")) ga.population = j["population"].get<int>();
    if (j.contains("crossover_prob")) ga.crossover_prob = j["crossover_prob"].get<double>();
    if (j.contains("mutation_prob")) ga.mutation_prob = j["mutation_prob"].get<double>();
    if (j.contains("elitism")) ga.elitism = j["elitism"].get<int>();
    if (j.contains("mrmr_k")) mrmr_k = j["mrmr_k"].get<int>();
    if (j.contains("mrmr_bins")) mrmr_bins = j["mrmr_bins"].get<int>();
    if (j.contains("seed")) seed = j["seed"].get<std::uint64_t>();
    if (j.contains("out_dir")) out_dir = j["out_dir"].get<std::string>();
}

PrepareSummary run_prepare(const ExperimentConfig& cfg) {
    MarketSeries series = cfg.data_csv.empty()
                              ? generate_synthetic_series(cfg.synth_days, cfg.seed)
                              : load_series(cfg.data_csv);

    const auto specs = cfg.indicator_config.empty() ? default_indicator_specs()
                                                    : load_indicator_specs(cfg.indicator_config);
    const FeatureMatrix fm = build_feature_matrix(series, specs);
    const auto labels_all = label_movements(series);

    // feature row t pairs with label at t; the final bar has no label
    const auto first = static_cast<std::size_t>(fm.offset);
    const std::size_t last = series.size() - 1;  // exclusive
    if (first >= last) throw DataError("not enough labeled rows after warm-up");
    const auto rows = static_cast<Eigen::Index>(last - first);

    Eigen::MatrixXd features = fm.values.topRows(rows);
    std::vector<int> labels(labels_all.begin() + static_cast<std::ptrdiff_t>(first),
                            labels_all.begin() + static_cast<std::ptrdiff_t>(last));
    std::vector<Date> dates;
    dates.reserve(static_cast<std::size_t>(rows));
    for (std::size_t t = first; t < last; ++t) dates.push_back(series[t].date);

    auto parts = split_by_dates(features, labels, dates, fm.column_names(), cfg.boundaries);

    // scale on pre+train statistics only; test and hold-out reuse them
    Eigen::MatrixXd fit_rows(parts[0].rows() + parts[1].rows(), features.cols());
    fit_rows << parts[0].features, parts[1].features;
    const Standardization norm = fit_standardizer(fit_rows);
    for (auto& ds : parts) apply_standardizer(norm, ds.features);

    const std::string dir = cfg.out_dir + "/bundle";
    ensure_dir(dir);
    write_dataset_csv(parts[0], dir + "/pre.csv");
    write_dataset_csv(parts[1], dir + "/train.csv");
    write_dataset_csv(parts[2], dir + "/test.csv");
    write_dataset_csv(parts[3], dir + "/holdout.csv");

    json stats;
    stats["mean"] = std::vector<double>(norm.mean.data(), norm.mean.data() + norm.mean.size());
    stats["std"] =
        std::vector<double>(norm.stddev.data(), norm.stddev.data() + norm.stddev.size());
    stats["zero_variance"] = norm.zero_variance;
    write_text_file(dir + "/norm_stats.json", stats.dump(2) + "\n");

    json meta;
    meta["n_features"] = fm.values.cols();
    meta["feature_names"] = fm.column_names();
    meta["boundaries"] = {cfg.boundaries[0].to_string(), cfg.boundaries[1].to_string(),
                          cfg.boundaries[2].to_string()};
    meta["seed"] = cfg.seed;
    meta["rows"] = {{"pre", parts[0].rows()},
                    {"train", parts[1].rows()},
                    {"test", parts[2].rows()},
                    {"holdout", parts[3].rows()}};
    write_text_file(dir + "/meta.json", meta.dump(2) + "\n");

    PrepareSummary summary;
    for (int r = 0; r < 4; ++r) summary.row_counts[static_cast<std::size_t>(r)] = parts[r].rows();
    summary.n_features = static_cast<int>(features.cols());
    summary.feature_names = fm.column_names();
    return summary;
}

DatasetBundle load_bundle(const std::string& bundle_dir) {
    DatasetBundle bundle;
    bundle.pre = read_dataset_csv(bundle_dir + "/pre.csv", DatasetRole::PreCovid);
    bundle.train = read_dataset_csv(bundle_dir + "/train.csv", DatasetRole::Train);
    bundle.test = read_dataset_csv(bundle_dir + "/test.csv", DatasetRole::Test);
    bundle.set_holdout(read_dataset_csv(bundle_dir + "/holdout.csv", DatasetRole::HoldOut));
    return bundle;
}

SearchReport run_search(const ExperimentConfig& cfg) {
    const DatasetBundle bundle = load_bundle(cfg.out_dir + "/bundle");
    const int n_features = static_cast<int>(bundle.train.cols());
    EncodingSchema schema{n_features, cfg.max_layers, cfg.bits_per_layer};
    schema.validate();

    ScenarioConfig scenario_cfg;
    scenario_cfg.scenario = cfg.scenario;
    scenario_cfg.eps1 = cfg.eps1;
    scenario_cfg.eps2 = cfg.eps2;
    scenario_cfg.eps3 = cfg.eps3;
    scenario_cfg.cycles = cfg.search_cycles;
    scenario_cfg.training.max_epochs = cfg.max_epochs;

    const std::string search_dir = cfg.out_dir + "/search";
    ensure_dir(search_dir);

    SearchReport report;
    std::vector<SearchResult> results(static_cast<std::size_t>(cfg.runs));
    for (int r = 0; r < cfg.runs; ++r) {
        const std::uint64_t run_seed =
            mix_seed({cfg.seed, 0x52554eULL, static_cast<std::uint64_t>(r)});  // "RUN"
        CandidateEvaluator evaluator(bundle.pre, bundle.train, bundle.test, scenario_cfg,
                                     cfg.weights, run_seed);
        MemoObjective memo(evaluator);
        CountingObjective counting([&memo](const Genome& g) { return memo(g); });
        ObjectiveFn objective = [&counting](const Genome& g) { return counting(g); };

        SearchResult res;
        if (cfg.optimizer == "2ds") {
            SwarmConfig sc = cfg.swarm;
            sc.budget = cfg.budget;
            res = run_2ds(objective, schema, sc, run_seed);
        } else if (cfg.optimizer == "ga") {
            GaConfig gc = cfg.ga;
            gc.budget = cfg.budget;
            res = run_ga(objective, schema, gc, run_seed);
        } else {
            throw DataError("unknown optimizer '" + cfg.optimizer + "'");
        }
        if (counting.count() != cfg.budget)
            throw std::logic_error("evaluation budget audit failed: " +
                                   std::to_string(counting.count()) + " != " +
                                   std::to_string(cfg.budget));
        write_trace_csv(res.trace,
                        search_dir + "/trace_" + cfg.optimizer + "_run" + std::to_string(r) +
                            ".csv");
        results[static_cast<std::size_t>(r)] = std::move(res);
    }

    // the search phase must never have touched the hold-out rows
    report.holdout_reads_during_search = bundle.holdout_access_count();

    const ScenarioTraining st = scenario_training(bundle, cfg.scenario);
    const LabeledDataset& holdout = bundle.holdout();

    ScgOptions final_training;  // full default budget for the reported nets

    report.runs.resize(static_cast<std::size_t>(cfg.runs));
    for (int r = 0; r < cfg.runs; ++r) {
        auto& outcome = report.runs[static_cast<std::size_t>(r)];
        const auto& res = results[static_cast<std::size_t>(r)];
        outcome.run = r;
        outcome.best = res.best;
        outcome.record = res.best_record;

        const CandidateSolution sol = decode(res.best);
        outcome.selected_features = sol.feature_subset;
        outcome.layers = sol.architecture.layers;

        outcome.cycle_accuracy.resize(static_cast<std::size_t>(cfg.final_cycles), 0.0);
        outcome.cycle_mcc.resize(static_cast<std::size_t>(cfg.final_cycles), -1.0);
        if (!sol.feature_subset.empty()) {
            const Eigen::MatrixXd train_x = select_columns(st.features, sol.feature_subset);
            const Eigen::MatrixXd hold_x =
                select_columns(holdout.features, sol.feature_subset);
            std::vector<std::pair<double, double>> cycle_results(
                static_cast<std::size_t>(cfg.final_cycles));
            const std::uint64_t base = mix_seed(
                {cfg.seed, 0x46494e414cULL, static_cast<std::uint64_t>(r), res.best.hash()});
            parallel_for(static_cast<std::size_t>(cfg.final_cycles), [&](std::size_t k) {
                const auto trained =
                    train_scg(sol.architecture, train_x, st.labels,
                              mix_seed({base, static_cast<std::uint64_t>(k)}), final_training);
                const auto ev = evaluate(sol.architecture, trained.weights, hold_x,
                                         holdout.labels);
                cycle_results[k] = {100.0 * ev.confusion.accuracy(), mcc(ev.confusion)};
            });
            for (std::size_t k = 0; k < cycle_results.size(); ++k) {
                outcome.cycle_accuracy[k] = cycle_results[k].first;
                outcome.cycle_mcc[k] = cycle_results[k].second;
            }
        }
        outcome.holdout_accuracy =
            std::accumulate(outcome.cycle_accuracy.begin(), outcome.cycle_accuracy.end(), 0.0) /
            cfg.final_cycles;
        outcome.holdout_mcc =
            std::accumulate(outcome.cycle_mcc.begin(), outcome.cycle_mcc.end(), 0.0) /
            cfg.final_cycles;
    }

    report.best_run = 0;
    for (int r = 1; r < cfg.runs; ++r) {
        if (report.runs[static_cast<std::size_t>(r)].record.criterion <
            report.runs[static_cast<std::size_t>(report.best_run)].record.criterion)
            report.best_run = r;
    }

    // Table-3-shaped JSON row
    const auto& feature_names = bundle.train.feature_names;
    auto run_to_json = [&](const RunOutcome& run) {
        json jr;
        jr["run"] = run.run;
        jr["genome"] = run.best.to_string();
        jr["J"] = run.record.criterion;
        jr["E"] = run.record.efficacy;
        jr["C"] = run.record.complexity;
        jr["P"] = run.record.penalty;
        jr["test_mcc"] = run.record.test_mcc;
        jr["complexity_parts"] = {{"features", run.record.parts.features},
                                  {"neurons", run.record.parts.neurons},
                                  {"layers", run.record.parts.layers}};
        jr["selected_indices"] = run.selected_features;
        auto& names = jr["selected_features"] = json::array();
        for (int idx : run.selected_features)
            names.push_back(feature_names[static_cast<std::size_t>(idx)]);
        auto& layers = jr["layers"] = json::array();
        for (const auto& l : run.layers)
            layers.push_back({{"size", l.size}, {"activation", activation_name(l.activation)}});
        jr["holdout_accuracy"] = run.holdout_accuracy;
        jr["holdout_mcc"] = run.holdout_mcc;
        jr["cycle_accuracy"] = run.cycle_accuracy;
        jr["cycle_mcc"] = run.cycle_mcc;
        return jr;
    };

    json out;
    out["method"] = cfg.optimizer + "-" + scenario_name(cfg.scenario);
    out["optimizer"] = cfg.optimizer;
    out["scenario"] = scenario_name(cfg.scenario);
    out["theta"] = {cfg.weights.efficacy, cfg.weights.complexity};
    out["budget"] = cfg.budget;
    out["runs"] = cfg.runs;
    out["seed"] = cfg.seed;
    out["search_cycles"] = cfg.search_cycles;
    out["final_cycles"] = cfg.final_cycles;
    out["schema"] = {{"n_features", schema.n_features},
                     {"max_layers", schema.max_layers},
                     {"bits_per_layer", schema.bits_per_layer}};
    out["holdout_reads_during_search"] = report.holdout_reads_during_search;
    out["best_run"] = report.best_run;
    auto& detail = out["runs_detail"] = json::array();
    for (const auto& run : report.runs) detail.push_back(run_to_json(run));
    out["best"] = run_to_json(report.runs[static_cast<std::size_t>(report.best_run)]);

    report.report_path = search_dir + "/report_" + cfg.optimizer + "_" +
                         scenario_name(cfg.scenario) + ".json";
    write_text_file(report.report_path, out.dump(2) + "\n");
    return report;
}

std::vector<BaselineRow> run_baselines(const ExperimentConfig& cfg, bool rules_only) {
    const DatasetBundle bundle = load_bundle(cfg.out_dir + "/bundle");

    BaselineSetup setup;
    setup.mrmr_k = std::min(cfg.mrmr_k, static_cast<int>(bundle.train.cols()));
    setup.mrmr_bins = cfg.mrmr_bins;
    setup.cycles = cfg.final_cycles;
    setup.seed = cfg.seed;

    std::vector<BaselineRow> rows;
    const LabeledDataset& holdout = bundle.holdout();
    for (const FeatureMode mode : {FeatureMode::Full, FeatureMode::Mrmr}) {
        if (rules_only && mode == FeatureMode::Mrmr) continue;
        for (const RuleName rule : kAllRules)
            rows.push_back(
                evaluate_baseline(rule, mode, bundle.pre, bundle.train, holdout, setup));
    }

    ensure_dir(cfg.out_dir);
    write_baseline_csv(rows, cfg.out_dir + "/baselines.csv");

    json j;
    auto& arr = j["rows"] = json::array();
    for (const auto& row : rows) {
        arr.push_back({{"scenario", row.scenario},
                       {"rule", rule_name(row.rule)},
                       {"s1", row.s1},
                       {"s2", row.s2},
                       {"complexity", row.complexity},
                       {"holdout_accuracy", row.holdout_accuracy},
                       {"holdout_mcc", row.holdout_mcc},
                       {"cycle_accuracy", row.cycle_accuracy},
                       {"cycle_mcc", row.cycle_mcc}});
    }
    write_text_file(cfg.out_dir + "/baselines.json", j.dump(2) + "\n");
    return rows;
}

std::vector<BaselineRow> run_mrmr_sweep(const ExperimentConfig& cfg, RuleName rule, int steps) {
    if (steps < 2) throw DataError("mrmr sweep needs at least 2 steps");
    const DatasetBundle bundle = load_bundle(cfg.out_dir + "/bundle");
    const int n_f = static_cast<int>(bundle.train.cols());
    const int k_lo = std::max(1, static_cast<int>(std::lround(0.1 * n_f)));
    const int k_hi = std::max(k_lo + 1, static_cast<int>(std::lround(0.75 * n_f)));

    BaselineSetup setup;
    setup.mrmr_bins = cfg.mrmr_bins;
    setup.cycles = cfg.final_cycles;
    setup.seed = cfg.seed;

    std::vector<BaselineRow> rows;
    const LabeledDataset& holdout = bundle.holdout();
    for (int i = 0; i < steps; ++i) {
        const int k = k_lo + static_cast<int>(std::lround(
                                 static_cast<double>(i) * (k_hi - k_lo) / (steps - 1)));
        setup.mrmr_k = k;
        auto row = evaluate_baseline(rule, FeatureMode::Mrmr, bundle.pre, bundle.train,
                                     holdout, setup);
        row.scenario = "mrmr-" + std::to_string(k);
        rows.push_back(std::move(row));
    }

    ensure_dir(cfg.out_dir);
    write_baseline_csv(rows, cfg.out_dir + "/mrmr_sweep.csv");
    return rows;
}

StatsOutputs run_stats(const ExperimentConfig& cfg, const std::vector<std::string>& report_files,
                       bool include_random) {
    struct Method {
        std::string name;
        std::vector<double> cycle_accuracy;
        std::vector<double> cycle_mcc;
        std::vector<double> per_run_accuracy;  // search reports only
        std::vector<double> per_run_mcc;
    };
    std::vector<Method> methods;

    for (const auto& path : report_files) {
        const json j = load_json_file(path);
        if (j.contains("runs_detail")) {
            Method m;
            m.name = j.value("method", path);
            const auto& best = j.at("best");
            m.cycle_accuracy = best.at("cycle_accuracy").get<std::vector<double>>();
            m.cycle_mcc = best.at("cycle_mcc").get<std::vector<double>>();
            for (const auto& run : j.at("runs_detail")) {
                m.per_run_accuracy.push_back(run.at("holdout_accuracy").get<double>());
                m.per_run_mcc.push_back(run.at("holdout_mcc").get<double>());
            }
            methods.push_back(std::move(m));
        } else if (j.contains("rows")) {
            for (const auto& row : j.at("rows")) {
                Method m;
                m.name = row.at("scenario").get<std::string>() + "+" +
                         row.at("rule").get<std::string>();
                m.cycle_accuracy = row.at("cycle_accuracy").get<std::vector<double>>();
                m.cycle_mcc = row.at("cycle_mcc").get<std::vector<double>>();
                methods.push_back(std::move(m));
            }
        } else {
            throw DataError("'" + path + "' is neither a search report nor a baseline file");
        }
    }
    if (methods.size() < 2) throw DataError("stats needs at least two method reports");

    const std::size_t cycles = methods.front().cycle_accuracy.size();
    for (const auto& m : methods)
        if (m.cycle_accuracy.size() != cycles || m.cycle_mcc.size() != cycles)
            throw DataError("mismatched cycle counts across method reports");

    // naive random comparator on the hold-out rows, one draw per row/cycle
    const DatasetBundle bundle = load_bundle(cfg.out_dir + "/bundle");
    const LabeledDataset& holdout = bundle.holdout();
    if (include_random) {
        Method random;
        random.name = "random";
        for (std::size_t k = 0; k < cycles; ++k) {
            Rng rng(mix_seed({cfg.seed, 0x52414e44ULL, static_cast<std::uint64_t>(k)}));
            ConfusionMatrix cm;
            for (Eigen::Index i = 0; i < holdout.rows(); ++i) {
                const int pred = rng.coin() ? 1 : 0;
                if (pred == 1 && holdout.labels[i] == 1) ++cm.tp;
                else if (pred == 0 && holdout.labels[i] == 0) ++cm.tn;
                else if (pred == 1) ++cm.fp;
                else ++cm.fn;
            }
            random.cycle_accuracy.push_back(100.0 * cm.accuracy());
            random.cycle_mcc.push_back(mcc(cm));
        }
        methods.push_back(std::move(random));
    }

    const auto k = static_cast<Eigen::Index>(methods.size());
    Eigen::MatrixXd acc(static_cast<Eigen::Index>(cycles), k);
    Eigen::MatrixXd mcc_matrix(static_cast<Eigen::Index>(cycles), k);
    for (Eigen::Index j = 0; j < k; ++j)
        for (std::size_t i = 0; i < cycles; ++i) {
            acc(static_cast<Eigen::Index>(i), j) = methods[static_cast<std::size_t>(j)].cycle_accuracy[i];
            mcc_matrix(static_cast<Eigen::Index>(i), j) = methods[static_cast<std::size_t>(j)].cycle_mcc[i];
        }

    StatsOutputs out;
    for (const auto& m : methods) out.method_names.push_back(m.name);
    out.friedman_accuracy = friedman_test(acc, RankDirection::HigherIsBetter);
    out.friedman_mcc = friedman_test(mcc_matrix, RankDirection::HigherIsBetter);
    out.posthoc_accuracy = hommel_posthoc(out.friedman_accuracy);
    out.posthoc_mcc = hommel_posthoc(out.friedman_mcc);

    // scenario comparison, Wilcoxon one-sided: first report > second report
    if (methods.size() >= 2 && !methods[0].per_run_accuracy.empty() &&
        methods[0].per_run_accuracy.size() == methods[1].per_run_accuracy.size()) {
        try {
            out.wilcoxon_accuracy = wilcoxon_signed_rank(
                methods[0].per_run_accuracy, methods[1].per_run_accuracy, Alternative::Greater);
            out.wilcoxon_mcc = wilcoxon_signed_rank(methods[0].per_run_mcc,
                                                    methods[1].per_run_mcc, Alternative::Greater);
            out.wilcoxon_present = true;
        } catch (const std::invalid_argument&) {
            out.wilcoxon_present = false;  // all differences zero: test undefined
        }
    }

    const std::string stats_dir = cfg.out_dir + "/stats";
    ensure_dir(stats_dir);

    json js;
    js["methods"] = out.method_names;
    auto friedman_json = [](const FriedmanResult& fr) {
        return json{{"average_ranks", fr.average_ranks},
                    {"statistic", fr.statistic},
                    {"p_value", fr.p_value},
                    {"methods", fr.methods},
                    {"observations", fr.observations}};
    };
    auto posthoc_json = [&](const std::vector<PosthocComparison>& cs) {
        json arr = json::array();
        for (const auto& c : cs)
            arr.push_back({{"method", out.method_names[static_cast<std::size_t>(c.method)]},
                           {"z", c.z},
                           {"raw_p", c.raw_p},
                           {"adjusted_p", c.adjusted_p},
                           {"reject_at_0.05", c.reject_at_05}});
        return arr;
    };
    js["friedman"] = {{"accuracy", friedman_json(out.friedman_accuracy)},
                      {"mcc", friedman_json(out.friedman_mcc)}};
    js["hommel"] = {{"accuracy", posthoc_json(out.posthoc_accuracy)},
                    {"mcc", posthoc_json(out.posthoc_mcc)}};
    if (out.wilcoxon_present) {
        js["wilcoxon"] = {
            {"alternative", "first report greater than second"},
            {"accuracy",
             {{"statistic", out.wilcoxon_accuracy.statistic},
              {"p_value", out.wilcoxon_accuracy.p_value},
              {"n", out.wilcoxon_accuracy.n_nonzero},
              {"exact", out.wilcoxon_accuracy.exact}}},
            {"mcc",
             {{"statistic", out.wilcoxon_mcc.statistic},
              {"p_value", out.wilcoxon_mcc.p_value},
              {"n", out.wilcoxon_mcc.n_nonzero},
              {"exact", out.wilcoxon_mcc.exact}}}};
    }
    write_text_file(stats_dir + "/stats.json", js.dump(2) + "\n");

    std::ofstream csv(stats_dir + "/stats.csv");
    csv << "method,avg_rank_accuracy,avg_rank_mcc,z_accuracy,raw_p_accuracy,apv_accuracy,"
           "reject_accuracy,z_mcc,raw_p_mcc,apv_mcc,reject_mcc\n";
    for (std::size_t m = 0; m < methods.size(); ++m) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.2f",
                      out.friedman_accuracy.average_ranks[m]);
        csv << out.method_names[m] << "," << buf << ",";
        std::snprintf(buf, sizeof buf, "%.2f", out.friedman_mcc.average_ranks[m]);
        csv << buf;
        auto find_cmp = [&](const std::vector<PosthocComparison>& cs) {
            for (const auto& c : cs)
                if (static_cast<std::size_t>(c.method) == m) return &c;
            return static_cast<const PosthocComparison*>(nullptr);
        };
        for (const auto* cs : {find_cmp(out.posthoc_accuracy), find_cmp(out.posthoc_mcc)}) {
            if (cs) {
                std::snprintf(buf, sizeof buf, ",%.4g,%.4g,%.4g,%s", cs->z, cs->raw_p,
                              cs->adjusted_p, cs->reject_at_05 ? "yes" : "no");
                csv << buf;
            } else {
                csv << ",control,,,";
            }
        }
        csv << "\n";
    }
    return out;
}

}  // namespace enas
