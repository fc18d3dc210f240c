#include "enas/market_data.hpp"

#include "enas/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace enas {

namespace {

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
    static const int d[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y)) return 29;
    return d[m - 1];
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string token;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(token);
            token.clear();
        } else if (ch != '\r') {
            token.push_back(ch);
        }
    }
    fields.push_back(token);
    return fields;
}

double parse_number(const std::string& s, const char* what, std::size_t line_no) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw DataError("line " + std::to_string(line_no) + ": bad " + std::string(what) +
                        " value '" + s + "'");
    }
}

}  // namespace

Date Date::parse(const std::string& iso) {
    Date d;
    if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-')
        throw DataError("bad date '" + iso + "' (expected YYYY-MM-DD)");
    auto digits = [&](int from, int to) {
        int v = 0;
        for (int i = from; i < to; ++i) {
            if (iso[i] < '0' || iso[i] > '9')
                throw DataError("bad date '" + iso + "' (expected YYYY-MM-DD)");
            v = v * 10 + (iso[i] - '0');
        }
        return v;
    };
    d.year = digits(0, 4);
    d.month = digits(5, 7);
    d.day = digits(8, 10);
    if (!d.valid()) throw DataError("invalid calendar date '" + iso + "'");
    return d;
}

std::string Date::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
    return buf;
}

bool Date::valid() const {
    return year >= 1 && month >= 1 && month <= 12 && day >= 1 &&
           day <= days_in_month(year, month);
}

bool OhlcvBar::valid() const {
    if (!(open > 0 && high > 0 && low > 0 && close > 0)) return false;
    if (volume < 0) return false;
    if (low > std::min(open, close)) return false;
    if (high < std::max(open, close)) return false;
    return true;
}

const char* role_name(DatasetRole role) {
    switch (role) {
        case DatasetRole::PreCovid: return "pre";
        case DatasetRole::Train: return "train";
        case DatasetRole::Test: return "test";
        case DatasetRole::HoldOut: return "holdout";
    }
    return "?";
}

MarketSeries load_series(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw DataError("'" + path + "' is empty");

    auto header = split_csv_line(line);
    const std::vector<std::string> expected = {"date", "open", "high",
                                               "low",  "close", "volume"};
    if (header.size() < expected.size())
        throw DataError("'" + path + "': bad header, expected date,open,high,low,close,volume");
    for (std::size_t i = 0; i < expected.size(); ++i) {
        std::string h = header[i];
        std::transform(h.begin(), h.end(), h.begin(), ::tolower);
        if (h != expected[i])
            throw DataError("'" + path + "': bad header column " + std::to_string(i + 1) +
                            " ('" + header[i] + "', expected '" + expected[i] + "')");
    }

    MarketSeries series;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto fields = split_csv_line(line);
        if (fields.size() != 6)
            throw DataError("line " + std::to_string(line_no) + ": expected 6 fields, got " +
                            std::to_string(fields.size()));
        OhlcvBar bar;
        bar.date = Date::parse(fields[0]);
        bar.open = parse_number(fields[1], "open", line_no);
        bar.high = parse_number(fields[2], "high", line_no);
        bar.low = parse_number(fields[3], "low", line_no);
        bar.close = parse_number(fields[4], "close", line_no);
        bar.volume = parse_number(fields[5], "volume", line_no);
        if (!bar.valid())
            throw DataError("line " + std::to_string(line_no) + " (" + bar.date.to_string() +
                            "): OHLCV invariant violated");
        series.bars.push_back(bar);
    }
    if (series.bars.empty()) throw DataError("'" + path + "' has no data rows");

    std::stable_sort(series.bars.begin(), series.bars.end(),
                     [](const OhlcvBar& a, const OhlcvBar& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < series.bars.size(); ++i) {
        if (series.bars[i].date == series.bars[i - 1].date)
            throw DataError("duplicate date " + series.bars[i].date.to_string());
    }
    return series;
}

void write_series_csv(const MarketSeries& series, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << "date,open,high,low,close,volume\n";
    char buf[256];
    for (const auto& b : series.bars) {
        std::snprintf(buf, sizeof buf, "%s,%.10g,%.10g,%.10g,%.10g,%.10g\n",
                      b.date.to_string().c_str(), b.open, b.high, b.low, b.close, b.volume);
        out << buf;
    }
}

std::vector<int> label_movements(const MarketSeries& series) {
    if (series.size() < 2) throw DataError("series too short to label (need >= 2 bars)");
    std::vector<int> labels(series.size() - 1);
    for (std::size_t t = 0; t + 1 < series.size(); ++t)
        labels[t] = series[t + 1].close > series[t].close ? 1 : 0;
    return labels;
}

std::vector<DatasetRole> assign_roles(const std::vector<Date>& dates,
                                      const std::array<Date, 3>& boundaries) {
    if (!(boundaries[0] < boundaries[1] && boundaries[1] < boundaries[2]))
        throw DataError("date boundaries must be strictly increasing");
    std::vector<DatasetRole> roles(dates.size());
    std::array<std::size_t, 4> counts{};
    for (std::size_t i = 0; i < dates.size(); ++i) {
        DatasetRole r = DatasetRole::HoldOut;
        if (dates[i] < boundaries[0]) r = DatasetRole::PreCovid;
        else if (dates[i] < boundaries[1]) r = DatasetRole::Train;
        else if (dates[i] < boundaries[2]) r = DatasetRole::Test;
        roles[i] = r;
        ++counts[static_cast<int>(r)];
    }
    for (int r = 0; r < 4; ++r) {
        if (counts[r] == 0)
            throw DataError(std::string("empty partition: no rows fall into '") +
                            role_name(static_cast<DatasetRole>(r)) + "'");
    }
    return roles;
}

std::array<LabeledDataset, 4> split_by_dates(const Eigen::MatrixXd& features,
                                             const std::vector<int>& labels,
                                             const std::vector<Date>& dates,
                                             const std::vector<std::string>& feature_names,
                                             const std::array<Date, 3>& boundaries) {
    const auto n = static_cast<std::size_t>(features.rows());
    if (labels.size() != n || dates.size() != n)
        throw DataError("split_by_dates: features/labels/dates row counts differ");
    auto roles = assign_roles(dates, boundaries);

    std::array<std::vector<std::size_t>, 4> idx;
    for (std::size_t i = 0; i < n; ++i) idx[static_cast<int>(roles[i])].push_back(i);

    std::array<LabeledDataset, 4> out;
    for (int r = 0; r < 4; ++r) {
        auto& ds = out[r];
        ds.role = static_cast<DatasetRole>(r);
        ds.feature_names = feature_names;
        ds.features.resize(static_cast<Eigen::Index>(idx[r].size()), features.cols());
        ds.labels.resize(static_cast<Eigen::Index>(idx[r].size()));
        for (std::size_t k = 0; k < idx[r].size(); ++k) {
            ds.features.row(static_cast<Eigen::Index>(k)) =
                features.row(static_cast<Eigen::Index>(idx[r][k]));
            ds.labels[static_cast<Eigen::Index>(k)] = labels[idx[r][k]];
        }
    }
    return out;
}

namespace {

Date advance_one_day(Date d) {
    ++d.day;
    if (d.day > days_in_month(d.year, d.month)) {
        d.day = 1;
        ++d.month;
        if (d.month > 12) {
            d.month = 1;
            ++d.year;
        }
    }
    return d;
}

}  // namespace

Date next_weekday(Date d, int& weekday) {
    do {
        d = advance_one_day(d);
        weekday = (weekday + 1) % 7;
    } while (weekday >= 5);
    return d;
}

MarketSeries generate_synthetic_series(int n_days, std::uint64_t seed) {
    if (n_days < 60) throw DataError("synthetic series needs n_days >= 60");
    Rng rng(mix_seed({seed, 0x53594e5448ULL}));  // "SYNTH"

    MarketSeries series;
    series.bars.reserve(static_cast<std::size_t>(n_days));
    Date date{2017, 1, 2};  // a Monday; weekends are skipped
    int weekday = 0;
    double close = 100.0;
    for (int t = 0; t < n_days; ++t) {
        OhlcvBar bar;
        bar.date = date;
        const double gap = 0.002 * rng.gaussian();
        bar.open = (t == 0) ? close : close * std::exp(gap);
        const double ret = 0.0002 + 0.012 * rng.gaussian();
        bar.close = bar.open * std::exp(ret);
        const double up_wick = std::abs(0.004 * rng.gaussian());
        const double dn_wick = std::abs(0.004 * rng.gaussian());
        bar.high = std::max(bar.open, bar.close) * (1.0 + up_wick);
        bar.low = std::min(bar.open, bar.close) * (1.0 - dn_wick);
        bar.volume = std::floor(1e6 * std::exp(0.5 * rng.gaussian()));
        series.bars.push_back(bar);
        close = bar.close;
        date = next_weekday(date, weekday);
    }
    return series;
}

}  // namespace enas
