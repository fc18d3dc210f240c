#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "enas/market_data.hpp"

#include <filesystem>
#include <fstream>

using namespace enas;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    const auto path = (std::filesystem::temp_directory_path() / name).string();
    std::ofstream out(path);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("load_series ingests a well-formed csv") {
    const auto path = write_temp("md_ok.csv",
                                 "date,open,high,low,close,volume\n"
                                 "2020-01-02,10,11,9,10.5,100\n"
                                 "2020-01-03,10.5,12,10,11,150\n"
                                 "2020-01-06,11,11.5,10.2,10.4,90\n");
    const auto series = load_series(path);
    REQUIRE(series.size() == 3);
    CHECK(series[0].close == doctest::Approx(10.5));
    CHECK(series[2].date.to_string() == "2020-01-06");
}

TEST_CASE("load_series sorts shuffled dates") {
    const auto path = write_temp("md_shuffled.csv",
                                 "date,open,high,low,close,volume\n"
                                 "2020-01-06,11,11.5,10.2,10.4,90\n"
                                 "2020-01-02,10,11,9,10.5,100\n"
                                 "2020-01-03,10.5,12,10,11,150\n");
    const auto series = load_series(path);
    REQUIRE(series.size() == 3);
    for (std::size_t i = 1; i < series.size(); ++i) CHECK(series[i - 1].date < series[i].date);
}

TEST_CASE("load_series rejects a high < low row naming the line") {
    const auto path = write_temp("md_bad.csv",
                                 "date,open,high,low,close,volume\n"
                                 "2020-01-02,10,11,9,10.5,100\n"
                                 "2020-01-03,10.5,9,12,11,150\n");
    CHECK_THROWS_WITH_AS(load_series(path), doctest::Contains("line 3"), DataError);
}

TEST_CASE("load_series rejects bad schema and empty files") {
    const auto bad_header = write_temp("md_schema.csv", "time,open,high,low,close,volume\n");
    CHECK_THROWS_AS(load_series(bad_header), DataError);
    const auto empty = write_temp("md_empty.csv", "");
    CHECK_THROWS_AS(load_series(empty), DataError);
    const auto header_only =
        write_temp("md_header_only.csv", "date,open,high,low,close,volume\n");
    CHECK_THROWS_AS(load_series(header_only), DataError);
    CHECK_THROWS_AS(load_series("/nonexistent/nowhere.csv"), DataError);
}

TEST_CASE("load_series rejects duplicate dates") {
    const auto path = write_temp("md_dup.csv",
                                 "date,open,high,low,close,volume\n"
                                 "2020-01-02,10,11,9,10.5,100\n"
                                 "2020-01-02,10,11,9,10.6,100\n");
    CHECK_THROWS_WITH_AS(load_series(path), doctest::Contains("duplicate"), DataError);
}

TEST_CASE("label_movements follows the strict next-close rule") {
    MarketSeries s;
    int weekday = 0;
    Date d{2020, 1, 6};
    for (double close : {10.0, 11.0, 11.0, 9.0}) {
        OhlcvBar b;
        b.date = d;
        b.open = b.close = close;
        b.high = close + 1;
        b.low = close - 1;
        b.volume = 1;
        s.bars.push_back(b);
        d = next_weekday(d, weekday);
    }
    CHECK(label_movements(s) == std::vector<int>{1, 0, 0});

    MarketSeries rising = s;
    for (std::size_t i = 0; i < rising.bars.size(); ++i)
        rising.bars[i].close = 10.0 + static_cast<double>(i);
    CHECK(label_movements(rising) == std::vector<int>{1, 1, 1});

    MarketSeries flat = s;
    for (auto& b : flat.bars) b.close = 10.0;
    CHECK(label_movements(flat) == std::vector<int>{0, 0, 0});

    MarketSeries one;
    one.bars.push_back(s.bars[0]);
    CHECK_THROWS_AS(label_movements(one), DataError);
}

TEST_CASE("labels count is always bars - 1") {
    for (int n : {60, 61, 100, 333}) {
        const auto s = generate_synthetic_series(n, 11);
        CHECK(label_movements(s).size() == s.size() - 1);
    }
}

TEST_CASE("assign_roles partitions every row exactly once") {
    const auto series = generate_synthetic_series(1200, 42);
    std::vector<Date> dates;
    for (const auto& b : series.bars) dates.push_back(b.date);
    const std::array<Date, 3> bounds{Date{2019, 1, 1}, Date{2020, 8, 1}, Date{2021, 1, 1}};
    const auto roles = assign_roles(dates, bounds);
    std::array<std::size_t, 4> counts{};
    for (auto r : roles) ++counts[static_cast<int>(r)];
    for (auto c : counts) CHECK(c > 0);
    CHECK(counts[0] + counts[1] + counts[2] + counts[3] == dates.size());
}

TEST_CASE("assign_roles rejects boundaries that empty a partition") {
    std::vector<Date> dates{Date{2020, 1, 2}, Date{2020, 6, 1}, Date{2020, 9, 1},
                            Date{2021, 2, 1}};
    CHECK_THROWS_WITH_AS(
        assign_roles(dates, {Date{2019, 1, 1}, Date{2020, 8, 1}, Date{2021, 1, 1}}),
        doctest::Contains("empty partition"), DataError);
    CHECK_THROWS_AS(
        assign_roles(dates, {Date{2020, 8, 1}, Date{2020, 8, 1}, Date{2021, 1, 1}}),
        DataError);
}

TEST_CASE("split_by_dates: 4 rows, 3 interleaved boundaries, one row per role") {
    std::vector<Date> dates{Date{2020, 1, 2}, Date{2020, 6, 1}, Date{2020, 9, 1},
                            Date{2021, 2, 1}};
    Eigen::MatrixXd features(4, 2);
    features << 1, 2, 3, 4, 5, 6, 7, 8;
    const std::vector<int> labels{1, 0, 1, 0};
    const auto parts = split_by_dates(features, labels, dates, {"a", "b"},
                                      {Date{2020, 3, 1}, Date{2020, 8, 1}, Date{2021, 1, 1}});
    for (const auto& ds : parts) CHECK(ds.rows() == 1);
    CHECK(parts[0].features(0, 0) == 1);
    CHECK(parts[3].features(0, 1) == 8);
    CHECK(parts[3].role == DatasetRole::HoldOut);
    CHECK(parts[3].labels[0] == 0);
}

TEST_CASE("synthetic series is deterministic and valid") {
    const auto a = generate_synthetic_series(200, 7);
    const auto b = generate_synthetic_series(200, 7);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].date == b[i].date);
        CHECK(a[i].close == b[i].close);
        CHECK(a[i].volume == b[i].volume);
    }

    const auto c = generate_synthetic_series(60, 123);
    CHECK(c.size() == 60);
    for (const auto& bar : c.bars) CHECK(bar.valid());

    CHECK_THROWS_AS(generate_synthetic_series(59, 1), DataError);
}

TEST_CASE("csv round-trip preserves the series") {
    const auto series = generate_synthetic_series(90, 5);
    const auto path = (std::filesystem::temp_directory_path() / "md_roundtrip.csv").string();
    write_series_csv(series, path);
    const auto back = load_series(path);
    REQUIRE(back.size() == series.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back[i].date == series[i].date);
        CHECK(back[i].open == doctest::Approx(series[i].open).epsilon(1e-9));
        CHECK(back[i].close == doctest::Approx(series[i].close).epsilon(1e-9));
        CHECK(back[i].volume == series[i].volume);
    }
}
