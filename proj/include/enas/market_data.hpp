#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace enas {

struct Date {
    int year = 0;
    int month = 0;
    int day = 0;

    static Date parse(const std::string& iso);  // "YYYY-MM-DD"
    std::string to_string() const;
    bool valid() const;

    friend auto operator<=>(const Date&, const Date&) = default;
};

struct OhlcvBar {
    Date date;
    double open = 0.0;
    double high = 0.0;
    double low = 0.0;
    double close = 0.0;
    double volume = 0.0;

    // low <= min(open, close), high >= max(open, close), prices > 0, volume >= 0
    bool valid() const;
};

struct MarketSeries {
    std::vector<OhlcvBar> bars;

    std::size_t size() const { return bars.size(); }
    const OhlcvBar& operator[](std::size_t i) const { return bars[i]; }
};

enum class DatasetRole { PreCovid, Train, Test, HoldOut };

const char* role_name(DatasetRole role);

struct LabeledDataset {
    Eigen::MatrixXd features;  // N x n_f
    Eigen::VectorXi labels;    // N, entries in {0, 1}
    DatasetRole role = DatasetRole::Train;
    std::vector<std::string> feature_names;

    Eigen::Index rows() const { return features.rows(); }
    Eigen::Index cols() const { return features.cols(); }
};

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// CSV schema: header `date,open,high,low,close,volume`, ISO-8601 dates.
// Rows are sorted by date on load; any malformed row or bar-invariant
// violation raises DataError naming the offending line.
MarketSeries load_series(const std::string& path);
void write_series_csv(const MarketSeries& series, const std::string& path);

// label[t] = 1 iff close(t+1) > close(t); length = series.size() - 1
std::vector<int> label_movements(const MarketSeries& series);

// Role per row: date < b[0] -> PreCovid, < b[1] -> Train, < b[2] -> Test,
// otherwise HoldOut. Throws if any partition would be empty.
std::vector<DatasetRole> assign_roles(const std::vector<Date>& dates,
                                      const std::array<Date, 3>& boundaries);

// Partition aligned rows (features, labels, dates) into the four datasets.
std::array<LabeledDataset, 4> split_by_dates(const Eigen::MatrixXd& features,
                                             const std::vector<int>& labels,
                                             const std::vector<Date>& dates,
                                             const std::vector<std::string>& feature_names,
                                             const std::array<Date, 3>& boundaries);

// Deterministic geometric random walk with volume noise over a weekday
// calendar; n_days >= 60.
MarketSeries generate_synthetic_series(int n_days, std::uint64_t seed);

// Next weekday after d; `weekday` is d's day-of-week (0 = Monday) and is
// advanced in place.
Date next_weekday(Date d, int& weekday);

}  // namespace enas
