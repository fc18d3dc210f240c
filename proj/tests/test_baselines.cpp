#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "enas/baselines.hpp"
#include "enas/rng.hpp"

#include <algorithm>
#include <numeric>

using namespace enas;

namespace {

LabeledDataset blob_dataset(int rows, std::uint64_t seed, DatasetRole role) {
    Rng rng(seed);
    LabeledDataset ds;
    ds.role = role;
    ds.features.resize(rows, 3);
    ds.labels.resize(rows);
    ds.feature_names = {"f0", "f1", "f2"};
    for (int i = 0; i < rows; ++i) {
        const int cls = rng.coin();
        ds.features(i, 0) = rng.gaussian() + (cls ? 1.5 : -1.5);
        ds.features(i, 1) = rng.gaussian();
        ds.features(i, 2) = rng.gaussian();
        ds.labels[i] = cls;
    }
    return ds;
}

}  // namespace

TEST_CASE("empirical rules reproduce the full-feature sizes") {
    CHECK(apply_rule(RuleName::Kolmogorov, 68, 2, 361) == std::pair{137, 0});
    CHECK(apply_rule(RuleName::Hush, 68, 2, 361) == std::pair{272, 0});
    CHECK(apply_rule(RuleName::Wang, 68, 2, 361) == std::pair{45, 0});
    CHECK(apply_rule(RuleName::Ripley, 68, 2, 361) == std::pair{35, 0});
    CHECK(apply_rule(RuleName::FletcherGoss, 68, 2, 361) == std::pair{18, 0});
    CHECK(apply_rule(RuleName::Huang, 68, 2, 361) == std::pair{57, 19});
}

TEST_CASE("empirical rules reproduce the reduced-feature sizes") {
    CHECK(apply_rule(RuleName::Kolmogorov, 31, 2, 361) == std::pair{63, 0});
    CHECK(apply_rule(RuleName::Hush, 31, 2, 361) == std::pair{124, 0});
    CHECK(apply_rule(RuleName::Wang, 31, 2, 361) == std::pair{21, 0});
    CHECK(apply_rule(RuleName::Ripley, 31, 2, 361) == std::pair{17, 0});
    CHECK(apply_rule(RuleName::FletcherGoss, 31, 2, 361) == std::pair{13, 0});
    CHECK(apply_rule(RuleName::Huang, 31, 2, 361) == std::pair{57, 19});
    CHECK_THROWS_AS(apply_rule(RuleName::Huang, 0, 2, 361), std::invalid_argument);
}

TEST_CASE("Huang's rule is independent of the feature count") {
    const auto a = apply_rule(RuleName::Huang, 68, 2, 361);
    const auto b = apply_rule(RuleName::Huang, 31, 2, 361);
    CHECK(a == b);
}

TEST_CASE("reference architecture complexities under the wide baseline schema") {
    // sizes from the rules, feature share of a 68-column pool, s_max = 511
    const EncodingSchema schema{68, 2, 10};
    REQUIRE(schema.max_layer_size() == 511);

    struct Case {
        int selected;
        int s1, s2;
        double expected;
    };
    const Case cases[] = {
        {68, 137, 0, 0.5894}, {68, 272, 0, 0.6774}, {68, 45, 0, 0.5294},
        {68, 35, 0, 0.5228},  {68, 18, 0, 0.5117},  {68, 57, 19, 0.6915},
        {31, 63, 0, 0.3597},  {31, 124, 0, 0.3995}, {31, 21, 0, 0.3323},
        {31, 17, 0, 0.3297},  {31, 13, 0, 0.3271},  {31, 57, 19, 0.5101},
    };
    for (const auto& c : cases) {
        CandidateSolution sol;
        sol.genome = Genome::zeros(schema);
        for (int f = 0; f < c.selected; ++f) sol.feature_subset.push_back(f);
        sol.architecture.input_dim = c.selected;
        if (c.s1 > 0) sol.architecture.layers.push_back({c.s1, Activation::Tanh});
        if (c.s2 > 0) sol.architecture.layers.push_back({c.s2, Activation::Tanh});
        const double got = complexity(sol, schema).total;
        INFO("selected=", c.selected, " s1=", c.s1, " s2=", c.s2);
        CHECK(std::abs(got - c.expected) <= 6e-5);
    }
}

TEST_CASE("quantile discretization splits 1..100 into equal quarters") {
    std::vector<double> column(100);
    std::iota(column.begin(), column.end(), 1.0);
    const auto res = discretize(column, 4);
    CHECK_FALSE(res.collapsed);
    CHECK(res.distinct_bins == 4);
    std::array<int, 4> counts{};
    for (int code : res.codes) ++counts[static_cast<std::size_t>(code)];
    for (int c : counts) CHECK(c == 25);
}

TEST_CASE("discretization of a constant column collapses with a warning flag") {
    const std::vector<double> column(50, 3.14);
    const auto res = discretize(column, 4);
    CHECK(res.collapsed);
    CHECK(res.distinct_bins == 1);
    CHECK_THROWS_AS(discretize(column, 1), std::invalid_argument);
}

TEST_CASE("discretization preserves ordering") {
    Rng rng(17);
    std::vector<double> column(200);
    for (auto& v : column) v = rng.gaussian();
    column[10] = column[20];  // inject ties
    const auto res = discretize(column, 6);
    for (std::size_t i = 0; i < column.size(); ++i)
        for (std::size_t j = 0; j < column.size(); ++j)
            if (column[i] <= column[j]) CHECK(res.codes[i] <= res.codes[j]);
}

TEST_CASE("mutual information sanity") {
    const std::vector<int> a{0, 0, 1, 1, 0, 1, 0, 1};
    CHECK(mutual_information(a, a) == doctest::Approx(std::log(2.0)).epsilon(1e-9));
    const std::vector<int> b{0, 1, 0, 1, 0, 1, 0, 1};
    // a and b share half their pattern here; only bound checks make sense
    CHECK(mutual_information(a, b) >= 0.0);
}

TEST_CASE("mrmr with k = n_f returns a permutation") {
    Rng rng(5);
    Eigen::MatrixXd x(60, 5);
    Eigen::VectorXi y(60);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.gaussian();
    for (int i = 0; i < 60; ++i) y[i] = rng.coin();
    auto order = mrmr_select(x, y, 5);
    std::sort(order.begin(), order.end());
    CHECK(order == std::vector<int>{0, 1, 2, 3, 4});
    CHECK_THROWS_AS(mrmr_select(x, y, 6), std::invalid_argument);
    CHECK_THROWS_AS(mrmr_select(x, y, 0), std::invalid_argument);
}

TEST_CASE("mrmr ranks a label-equal feature first") {
    Rng rng(6);
    const int rows = 300;
    Eigen::MatrixXd x(rows, 4);
    Eigen::VectorXi y(rows);
    for (int i = 0; i < rows; ++i) {
        y[i] = rng.coin();
        x(i, 0) = rng.gaussian();
        x(i, 1) = y[i];  // the planted column
        x(i, 2) = rng.gaussian();
        x(i, 3) = rng.gaussian();
    }
    const auto order = mrmr_select(x, y, 4);
    CHECK(order[0] == 1);
}

TEST_CASE("mrmr demotes an exact duplicate behind weak informative features") {
    Rng rng(7);
    const int rows = 500;
    Eigen::MatrixXd x(rows, 5);
    Eigen::VectorXi y(rows);
    for (int i = 0; i < rows; ++i) {
        y[i] = rng.coin();
        x(i, 0) = y[i] + 0.05 * rng.gaussian();  // strong
        x(i, 1) = x(i, 0);                       // duplicate of the strong column
        x(i, 2) = rng.u01() < 0.65 ? y[i] : 1 - y[i];  // weak
        x(i, 3) = rng.u01() < 0.65 ? y[i] : 1 - y[i];  // weak
        x(i, 4) = rng.gaussian();                // noise
    }
    const auto order = mrmr_select(x, y, 5);
    CHECK((order[0] == 0 || order[0] == 1));

    // brute-force check of the second greedy step: the duplicate's
    // relevance-minus-redundancy score is dominated by the weak columns
    const int first = order[0];
    const int dup = first == 0 ? 1 : 0;
    std::vector<std::vector<int>> codes;
    for (int c = 0; c < 5; ++c) {
        std::vector<double> col(x.col(c).data(), x.col(c).data() + rows);
        codes.push_back(discretize(col, 6).codes);
    }
    std::vector<int> label_codes(y.data(), y.data() + rows);
    const auto score = [&](int c) {
        return mutual_information(codes[static_cast<std::size_t>(c)], label_codes) -
               mutual_information(codes[static_cast<std::size_t>(c)],
                                  codes[static_cast<std::size_t>(first)]);
    };
    CHECK(score(dup) < score(2));
    CHECK(score(dup) < score(3));
    CHECK(order[1] != dup);
    const auto dup_pos = std::find(order.begin(), order.end(), dup) - order.begin();
    const auto weak2_pos = std::find(order.begin(), order.end(), 2) - order.begin();
    const auto weak3_pos = std::find(order.begin(), order.end(), 3) - order.begin();
    CHECK(dup_pos > weak2_pos);
    CHECK(dup_pos > weak3_pos);
}

TEST_CASE("mrmr is equivariant to column permutation") {
    Rng rng(8);
    const int rows = 200;
    Eigen::MatrixXd x(rows, 4);
    Eigen::VectorXi y(rows);
    for (int i = 0; i < rows; ++i) {
        y[i] = rng.coin();
        x(i, 0) = y[i] + 0.3 * rng.gaussian();
        x(i, 1) = rng.gaussian();
        x(i, 2) = 0.5 * y[i] + rng.gaussian();
        x(i, 3) = rng.gaussian();
    }
    const auto base = mrmr_select(x, y, 4);

    const std::vector<int> perm{2, 0, 3, 1};  // new column c holds old perm[c]
    Eigen::MatrixXd xp(rows, 4);
    for (int c = 0; c < 4; ++c) xp.col(c) = x.col(perm[static_cast<std::size_t>(c)]);
    const auto permuted = mrmr_select(xp, y, 4);
    for (std::size_t i = 0; i < base.size(); ++i)
        CHECK(perm[static_cast<std::size_t>(permuted[i])] == base[i]);
}

TEST_CASE("evaluate_baseline produces a sane report row") {
    const auto pre = blob_dataset(50, 1, DatasetRole::PreCovid);
    const auto train = blob_dataset(100, 2, DatasetRole::Train);
    const auto holdout = blob_dataset(50, 3, DatasetRole::HoldOut);

    BaselineSetup setup;
    setup.cycles = 2;
    setup.mrmr_k = 2;
    setup.training.max_epochs = 30;

    const auto row = evaluate_baseline(RuleName::Kolmogorov, FeatureMode::Full, pre, train,
                                       holdout, setup);
    CHECK(row.scenario == "full");
    CHECK(row.s1 == 7);  // 2*3 + 1
    CHECK(row.s2 == 0);
    CHECK(row.cycle_accuracy.size() == 2);
    CHECK(row.holdout_accuracy > 60.0);  // separable blob data
    CHECK(row.complexity > 0.0);

    const auto reduced = evaluate_baseline(RuleName::Ripley, FeatureMode::Mrmr, pre, train,
                                           holdout, setup);
    CHECK(reduced.scenario == "mrmr");
    CHECK(reduced.s1 == apply_rule(RuleName::Ripley, 2, 2, 100).first);
}
