#include "enas/indicators.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace enas {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Column = std::vector<double>;

struct Series {
    std::vector<double> open, high, low, close, volume;
    std::size_t n = 0;

    explicit Series(const MarketSeries& s) : n(s.size()) {
        open.reserve(n);
        high.reserve(n);
        low.reserve(n);
        close.reserve(n);
        volume.reserve(n);
        for (const auto& b : s.bars) {
            open.push_back(b.open);
            high.push_back(b.high);
            low.push_back(b.low);
            close.push_back(b.close);
            volume.push_back(b.volume);
        }
    }
};

// True range and buying pressure, defined from index 1.
double true_range(const Series& s, std::size_t t) {
    return std::max(s.high[t], s.close[t - 1]) - std::min(s.low[t], s.close[t - 1]);
}

double buying_pressure(const Series& s, std::size_t t) {
    return s.close[t] - std::min(s.low[t], s.close[t - 1]);
}

// Window [t-n+1, t] (inclusive of the current day).
double window_max(const std::vector<double>& v, std::size_t t, int n) {
    double m = v[t];
    for (int k = 1; k < n; ++k) m = std::max(m, v[t - k]);
    return m;
}

double window_min(const std::vector<double>& v, std::size_t t, int n) {
    double m = v[t];
    for (int k = 1; k < n; ++k) m = std::min(m, v[t - k]);
    return m;
}

Column moving_average(const Series& s, int n) {
    Column out(s.n, kNaN);
    double sum = 0.0;
    for (std::size_t t = 0; t < s.n; ++t) {
        sum += s.close[t];
        if (t >= static_cast<std::size_t>(n)) sum -= s.close[t - n];
        if (t + 1 >= static_cast<std::size_t>(n)) out[t] = sum / n;
    }
    return out;
}

Column exponential_ma(const Series& s, int n) {
    Column out(s.n, kNaN);
    const double alpha = 2.0 / (n + 1);
    out[0] = s.close[0];
    for (std::size_t t = 1; t < s.n; ++t)
        out[t] = alpha * s.close[t] + (1.0 - alpha) * out[t - 1];
    return out;
}

Column rsi(const Series& s, int n) {
    Column out(s.n, kNaN);
    for (std::size_t t = static_cast<std::size_t>(n); t < s.n; ++t) {
        int ud = 0, dd = 0;
        double upc = 0.0, dpc = 0.0;
        for (std::size_t j = t - n + 1; j <= t; ++j) {
            if (s.close[j] > s.close[j - 1]) {
                ++ud;
                upc += s.close[j];
            } else if (s.close[j] < s.close[j - 1]) {
                ++dd;
                dpc += s.close[j];
            }
        }
        if (ud == 0 || dd == 0) {
            out[t] = 50.0;
        } else {
            const double up = upc / ud, down = dpc / dd;
            out[t] = 100.0 * up / (up + down);
        }
    }
    return out;
}

// Raw stochastic ratio (C - HH) / (HH - LL) on the current-inclusive window.
Column stochastic_ratio(const Series& s, int n) {
    Column out(s.n, kNaN);
    for (std::size_t t = static_cast<std::size_t>(n - 1); t < s.n; ++t) {
        const double hh = window_max(s.high, t, n);
        const double ll = window_min(s.low, t, n);
        out[t] = (hh == ll) ? 0.0 : (s.close[t] - hh) / (hh - ll);
    }
    return out;
}

// Recursive smoothing x(t) = (1-w)*x(t-1) + w*raw(t), seeded at the first
// index where a simple average of the first n raw terms is available.
Column seeded_recursion(const Column& raw, int n, double w) {
    Column out(raw.size(), kNaN);
    std::size_t first = 0;
    while (first < raw.size() && std::isnan(raw[first])) ++first;
    const std::size_t seed_at = first + n - 1;
    if (seed_at >= raw.size()) return out;
    double acc = 0.0;
    for (std::size_t j = first; j <= seed_at; ++j) acc += raw[j];
    out[seed_at] = acc / n;
    for (std::size_t t = seed_at + 1; t < raw.size(); ++t)
        out[t] = (1.0 - w) * out[t - 1] + w * raw[t];
    return out;
}

Column stochastic_k(const Series& s, int n) {
    return seeded_recursion(stochastic_ratio(s, n), n, 1.0 / 3.0);
}

Column stochastic_d(const Series& s, int n) {
    return seeded_recursion(stochastic_k(s, n), n, 1.0 / 3.0);
}

Column macd(const Series& s, int n) {
    Column diff(s.n, kNaN);
    const Column e12 = exponential_ma(s, 12), e26 = exponential_ma(s, 26);
    for (std::size_t t = 0; t < s.n; ++t) diff[t] = e12[t] - e26[t];
    return seeded_recursion(diff, n, 2.0 / (n + 1));
}

Column williams_r(const Series& s, int n) {
    Column out(s.n, kNaN);
    for (std::size_t t = static_cast<std::size_t>(n - 1); t < s.n; ++t) {
        const double hh = window_max(s.high, t, n);
        const double ll = window_min(s.low, t, n);
        out[t] = (hh == ll) ? 50.0 : 100.0 * (hh - s.close[t]) / (hh - ll);
    }
    return out;
}

Column psy(const Series& s, int n) {
    Column out(s.n, kNaN);
    for (std::size_t t = static_cast<std::size_t>(n); t < s.n; ++t) {
        int ud = 0;
        for (std::size_t j = t - n + 1; j <= t; ++j)
            if (s.close[j] > s.close[j - 1]) ++ud;
        out[t] = 100.0 * ud / n;
    }
    return out;
}

Column oscp(const Series& s, int x, int y) {
    Column out(s.n, kNaN);
    const Column mx = moving_average(s, x), my = moving_average(s, y);
    const std::size_t from = static_cast<std::size_t>(std::max(x, y)) - 1;
    for (std::size_t t = from; t < s.n; ++t)
        out[t] = (mx[t] == 0.0) ? 0.0 : (mx[t] - my[t]) / mx[t];
    return out;
}

// Wilder-style smoothed sum s(t) = (s(t-1)*(n-1) + raw(t)) / n.
Column wilder_recursion(const Column& raw, int n) {
    Column out(raw.size(), kNaN);
    std::size_t first = 0;
    while (first < raw.size() && std::isnan(raw[first])) ++first;
    const std::size_t seed_at = first + n - 1;
    if (seed_at >= raw.size()) return out;
    double acc = 0.0;
    for (std::size_t j = first; j <= seed_at; ++j) acc += raw[j];
    out[seed_at] = acc / n;
    for (std::size_t t = seed_at + 1; t < raw.size(); ++t)
        out[t] = (out[t - 1] * (n - 1) + raw[t]) / n;
    return out;
}

Column directional_indicator(const Series& s, int n, bool up) {
    Column dm(s.n, kNaN), tr(s.n, kNaN);
    for (std::size_t t = 1; t < s.n; ++t) {
        dm[t] = up ? s.high[t] - s.high[t - 1] : s.low[t] - s.low[t - 1];
        tr[t] = true_range(s, t);
    }
    const Column dms = wilder_recursion(dm, n), trs = wilder_recursion(tr, n);
    Column out(s.n, kNaN);
    for (std::size_t t = 0; t < s.n; ++t) {
        if (std::isnan(dms[t])) continue;
        out[t] = (trs[t] == 0.0) ? 0.0 : 100.0 * dms[t] / trs[t];
    }
    return out;
}

Column bias(const Series& s, int n) {
    Column out(s.n, kNaN);
    const Column ma = moving_average(s, n);
    for (std::size_t t = static_cast<std::size_t>(n - 1); t < s.n; ++t)
        out[t] = (ma[t] == 0.0) ? 0.0 : 100.0 * (s.close[t] - ma[t]) / ma[t];
    return out;
}

Column volume_ratio(const Series& s, int n) {
    Column out(s.n, kNaN);
    for (std::size_t t = static_cast<std::size_t>(n); t < s.n; ++t) {
        double uv = 0.0, dv = 0.0;
        for (std::size_t j = t - n + 1; j <= t; ++j) {
            if (s.close[j] > s.close[j - 1]) uv += s.volume[j];
            else if (s.close[j] < s.close[j - 1]) dv += s.volume[j];
        }
        out[t] = (uv + dv == 0.0) ? 0.0 : uv / (uv + dv);
    }
    return out;
}

Column ab_ratio(const Series& s, int n, bool a_ratio) {
    Column out(s.n, kNaN);
    for (std::size_t t = static_cast<std::size_t>(n - 1); t < s.n; ++t) {
        double num = 0.0, den = 0.0;
        for (std::size_t j = t - n + 1; j <= t; ++j) {
            if (a_ratio) {
                num += s.high[j] - s.open[j];
                den += s.open[j] - s.low[j];
            } else {
                num += s.high[j] - s.close[j];
                den += s.close[j] - s.low[j];
            }
        }
        out[t] = (den == 0.0) ? 0.0 : num / den;
    }
    return out;
}

// Previous-n-days extrema, exclusive of the current day.
Column lowest_low(const Series& s, int n) {
    Column out(s.n, kNaN);
    for (std::size_t t = static_cast<std::size_t>(n); t < s.n; ++t)
        out[t] = window_min(s.low, t - 1, n);
    return out;
}

Column highest_high(const Series& s, int n) {
    Column out(s.n, kNaN);
    for (std::size_t t = static_cast<std::size_t>(n); t < s.n; ++t)
        out[t] = window_max(s.high, t - 1, n);
    return out;
}

Column median_price(const Series& s, int n) {
    Column out(s.n, kNaN);
    std::vector<double> buf(static_cast<std::size_t>(n));
    for (std::size_t t = static_cast<std::size_t>(n); t < s.n; ++t) {
        for (int k = 0; k < n; ++k) buf[k] = s.close[t - n + k];
        std::sort(buf.begin(), buf.end());
        out[t] = (n % 2 == 1) ? buf[n / 2] : 0.5 * (buf[n / 2 - 1] + buf[n / 2]);
    }
    return out;
}

Column average_true_range(const Series& s, int n) {
    Column tr(s.n, kNaN);
    for (std::size_t t = 1; t < s.n; ++t) tr[t] = true_range(s, t);
    return wilder_recursion(tr, n);
}

Column rdp(const Series& s, int n) {
    Column out(s.n, kNaN);
    for (std::size_t t = static_cast<std::size_t>(n); t < s.n; ++t)
        out[t] = 100.0 * (s.close[t] - s.close[t - n]) / s.close[t - n];
    return out;
}

Column momentum(const Series& s, int n) {
    Column out(s.n, kNaN);
    for (std::size_t t = static_cast<std::size_t>(n); t < s.n; ++t)
        out[t] = s.close[t] - s.close[t - n];
    return out;
}

Column roc(const Series& s, int n) {
    Column out(s.n, kNaN);
    for (std::size_t t = static_cast<std::size_t>(n); t < s.n; ++t)
        out[t] = 100.0 * s.close[t] / s.close[t - n];
    return out;
}

Column ultimate_oscillator(const Series& s, int x, int y, int z) {
    Column out(s.n, kNaN);
    const int zmax = std::max({x, y, z});
    auto avg = [&](std::size_t t, int p) {
        double bp = 0.0, tr = 0.0;
        for (std::size_t j = t - p + 1; j <= t; ++j) {
            bp += buying_pressure(s, j);
            tr += true_range(s, j);
        }
        return (tr == 0.0) ? 0.5 : bp / tr;
    };
    for (std::size_t t = static_cast<std::size_t>(zmax); t < s.n; ++t)
        out[t] = (100.0 / 7.0) * (4.0 * avg(t, x) + 2.0 * avg(t, y) + avg(t, z));
    return out;
}

// Drawdowns against the 10-day highest high at each of the n previous days.
Column ulcer(const Series& s, int n) {
    constexpr int kHhWindow = 10;
    Column out(s.n, kNaN);
    const Column hh = highest_high(s, kHhWindow);
    for (std::size_t t = static_cast<std::size_t>(n + kHhWindow); t < s.n; ++t) {
        double acc = 0.0;
        for (int k = 1; k <= n; ++k) {
            const double h = hh[t - k];
            const double r = 100.0 * (s.close[t] - h) / h;
            acc += r * r;
        }
        out[t] = std::sqrt(acc / n);
    }
    return out;
}

Column raw_field(const Series& s, char which) {
    switch (which) {
        case 'O': return s.open;
        case 'H': return s.high;
        case 'L': return s.low;
        case 'C': return s.close;
        default: return s.volume;
    }
}

int expected_arity(const std::string& name) {
    if (name == "O" || name == "H" || name == "L" || name == "C" || name == "V") return 0;
    if (name == "OSCP") return 2;
    if (name == "UO") return 3;
    return 1;
}

}  // namespace

std::string IndicatorSpec::column_name() const {
    std::string out = name;
    for (int p : params) out += "_" + std::to_string(p);
    return out;
}

std::vector<std::string> FeatureMatrix::column_names() const {
    std::vector<std::string> names;
    names.reserve(specs.size());
    for (const auto& sp : specs) names.push_back(sp.column_name());
    return names;
}

std::vector<double> compute_indicator(const MarketSeries& series, const IndicatorSpec& spec) {
    const int arity = expected_arity(spec.name);
    if (static_cast<int>(spec.params.size()) != arity)
        throw DataError("indicator " + spec.name + " expects " + std::to_string(arity) +
                        " parameter(s), got " + std::to_string(spec.params.size()));
    for (int p : spec.params)
        if (p < 1) throw DataError("indicator " + spec.column_name() + ": window must be >= 1");

    const Series s(series);
    const auto& name = spec.name;
    const auto p = [&](int i) { return spec.params[static_cast<std::size_t>(i)]; };

    Column col;
    if (name == "O" || name == "H" || name == "L" || name == "C" || name == "V")
        col = raw_field(s, name[0]);
    else if (name == "MA") col = moving_average(s, p(0));
    else if (name == "EMA") col = exponential_ma(s, p(0));
    else if (name == "RSI") col = rsi(s, p(0));
    else if (name == "K") {
        col = stochastic_k(s, p(0));
        for (auto& v : col) v *= 100.0;
    } else if (name == "D") {
        col = stochastic_d(s, p(0));
        for (auto& v : col) v *= 100.0;
    } else if (name == "MACD") col = macd(s, p(0));
    else if (name == "WR") col = williams_r(s, p(0));
    else if (name == "PSY") col = psy(s, p(0));
    else if (name == "OSCP") col = oscp(s, p(0), p(1));
    else if (name == "+DI") col = directional_indicator(s, p(0), true);
    else if (name == "-DI") col = directional_indicator(s, p(0), false);
    else if (name == "BIAS") col = bias(s, p(0));
    else if (name == "VR") col = volume_ratio(s, p(0));
    else if (name == "AR") col = ab_ratio(s, p(0), true);
    else if (name == "BR") col = ab_ratio(s, p(0), false);
    else if (name == "LL") col = lowest_low(s, p(0));
    else if (name == "HH") col = highest_high(s, p(0));
    else if (name == "MP") col = median_price(s, p(0));
    else if (name == "ATR") col = average_true_range(s, p(0));
    else if (name == "RDP") col = rdp(s, p(0));
    else if (name == "MTM") col = momentum(s, p(0));
    else if (name == "ROC") col = roc(s, p(0));
    else if (name == "UO") col = ultimate_oscillator(s, p(0), p(1), p(2));
    else if (name == "ULCER") col = ulcer(s, p(0));
    else throw DataError("unknown indicator '" + name + "'");

    const bool any_defined =
        std::any_of(col.begin(), col.end(), [](double v) { return !std::isnan(v); });
    if (!any_defined)
        throw DataError("indicator " + spec.column_name() + ": window exceeds series length (" +
                        std::to_string(series.size()) + " bars)");
    return col;
}

FeatureMatrix build_feature_matrix(const MarketSeries& series,
                                   const std::vector<IndicatorSpec>& specs) {
    if (specs.empty()) throw DataError("empty indicator spec list");

    const std::size_t n = series.size();
    std::vector<Column> cols;
    cols.reserve(specs.size());
    std::size_t warmup = 0;
    for (const auto& sp : specs) {
        cols.push_back(compute_indicator(series, sp));
        std::size_t first = 0;
        while (first < n && std::isnan(cols.back()[first])) ++first;
        warmup = std::max(warmup, first);
    }
    if (warmup >= n) throw DataError("warm-up consumes the entire series");

    FeatureMatrix m;
    m.specs = specs;
    m.offset = static_cast<Eigen::Index>(warmup);
    m.values.resize(static_cast<Eigen::Index>(n - warmup),
                    static_cast<Eigen::Index>(specs.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) {
        for (std::size_t t = warmup; t < n; ++t) {
            const double v = cols[c][t];
            if (!std::isfinite(v))
                throw DataError("indicator " + specs[c].column_name() +
                                ": non-finite value at bar " + std::to_string(t));
            m.values(static_cast<Eigen::Index>(t - warmup), static_cast<Eigen::Index>(c)) = v;
        }
    }
    return m;
}

Standardization fit_standardizer(const Eigen::MatrixXd& train) {
    if (train.rows() == 0) throw DataError("cannot standardize an empty matrix");
    Standardization s;
    const auto n = static_cast<double>(train.rows());
    s.mean = train.colwise().mean();
    s.stddev.resize(train.cols());
    s.zero_variance.assign(static_cast<std::size_t>(train.cols()), 0);
    for (Eigen::Index c = 0; c < train.cols(); ++c) {
        const double var = (train.col(c).array() - s.mean[c]).square().sum() / n;
        const double sd = std::sqrt(var);
        if (sd == 0.0) {
            s.zero_variance[static_cast<std::size_t>(c)] = 1;
            s.stddev[c] = 1.0;  // centered pass-through
        } else {
            s.stddev[c] = sd;
        }
    }
    return s;
}

void apply_standardizer(const Standardization& s, Eigen::MatrixXd& m) {
    if (m.cols() != s.mean.size())
        throw DataError("standardizer/matrix column count mismatch");
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        m.col(c) = (m.col(c).array() - s.mean[c]) / s.stddev[c];
}

std::vector<IndicatorSpec> parse_indicator_specs(const std::string& text) {
    std::vector<IndicatorSpec> specs;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        IndicatorSpec sp;
        if (!(ls >> sp.name)) continue;
        int v = 0;
        while (ls >> v) sp.params.push_back(v);
        if (!ls.eof()) throw DataError("bad indicator line: '" + line + "'");
        specs.push_back(std::move(sp));
    }
    return specs;
}

std::vector<IndicatorSpec> load_indicator_specs(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open indicator config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    auto specs = parse_indicator_specs(ss.str());
    if (specs.empty()) throw DataError("indicator config '" + path + "' lists no indicators");
    return specs;
}

std::vector<IndicatorSpec> default_indicator_specs() {
    std::vector<IndicatorSpec> specs;
    auto add = [&](std::string name, std::vector<int> params = {}) {
        specs.push_back({std::move(name), std::move(params)});
    };
    for (const char* raw : {"O", "H", "L", "C", "V"}) add(raw);
    for (int n : {5, 10, 15, 20}) add("MA", {n});
    for (int n : {5, 10, 15, 20}) add("EMA", {n});
    for (int n : {5, 10, 15, 20}) add("RSI", {n});
    add("K", {9});
    add("D", {9});
    add("MACD", {9});
    for (int n : {5, 10, 15, 20}) add("WR", {n});
    add("PSY", {10});
    for (int x : {5, 10, 15})
        for (int y : {10, 15, 20})
            if (x < y) add("OSCP", {x, y});
    for (int n : {5, 10, 15, 20}) add("+DI", {n});
    for (int n : {5, 10, 15, 20}) add("-DI", {n});
    add("BIAS", {5});
    add("VR", {10});
    add("AR", {20});
    add("BR", {20});
    add("LL", {10});
    add("HH", {10});
    add("MP", {10});
    add("ATR", {10});
    for (int n : {5, 10, 15, 20}) add("RDP", {n});
    for (int n : {5, 10, 15, 20}) add("MTM", {n});
    for (int n : {5, 10, 15, 20}) add("ROC", {n});
    add("UO", {10, 20, 30});
    add("ULCER", {14});
    return specs;
}

void write_feature_matrix_csv(const FeatureMatrix& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    const auto names = m.column_names();
    for (std::size_t i = 0; i < names.size(); ++i) out << (i ? "," : "") << names[i];
    out << "\n";
    char buf[64];
    for (Eigen::Index r = 0; r < m.values.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.values.cols(); ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", m.values(r, c));
            out << (c ? "," : "") << buf;
        }
        out << "\n";
    }
}

}  // namespace enas
