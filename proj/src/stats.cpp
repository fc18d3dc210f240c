#include "enas/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace enas {

namespace {

// Midranks: tied values share the average of the ranks they span (1-based).
std::vector<double> midranks(const std::vector<double>& values) {
    const auto n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double shared = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
        i = j + 1;
    }
    return ranks;
}

double tie_correction_sum(const std::vector<double>& values) {
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    double total = 0.0;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
        const double t = static_cast<double>(j - i + 1);
        total += t * t * t - t;
        i = j + 1;
    }
    return total;
}

// Incomplete gamma P(a, x) by series expansion (x < a + 1).
double gamma_p_series(double a, double x) {
    double sum = 1.0 / a, term = sum, ap = a;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Incomplete gamma Q(a, x) by continued fraction (x >= a + 1).
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

double gamma_q(double a, double x) {
    if (x <= 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

}  // namespace

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double chi_squared_sf(double x, int dof) {
    if (dof < 1) throw std::invalid_argument("chi_squared_sf: dof must be >= 1");
    return gamma_q(0.5 * dof, 0.5 * x);
}

WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& x,
                                    const std::vector<double>& y,
                                    Alternative alternative) {
    if (x.size() != y.size() || x.empty())
        throw std::invalid_argument("wilcoxon: paired vectors must have equal non-zero length");

    std::vector<double> diffs;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        if (d != 0.0) diffs.push_back(d);
    }
    if (diffs.empty())
        throw std::invalid_argument("wilcoxon: all differences are zero, test undefined");

    const int n = static_cast<int>(diffs.size());
    std::vector<double> abs_d(diffs.size());
    for (std::size_t i = 0; i < diffs.size(); ++i) abs_d[i] = std::abs(diffs[i]);
    const auto ranks = midranks(abs_d);

    double w_plus = 0.0;
    for (std::size_t i = 0; i < diffs.size(); ++i)
        if (diffs[i] > 0.0) w_plus += ranks[i];

    WilcoxonResult res;
    res.statistic = w_plus;
    res.n_nonzero = n;

    if (n <= 25) {
        // doubled midranks are integers; count subset sums exactly
        std::vector<long long> r2(diffs.size());
        long long max_sum = 0;
        for (std::size_t i = 0; i < ranks.size(); ++i) {
            r2[i] = std::llround(2.0 * ranks[i]);
            max_sum += r2[i];
        }
        std::vector<double> counts(static_cast<std::size_t>(max_sum) + 1, 0.0);
        counts[0] = 1.0;
        long long reach = 0;
        for (long long r : r2) {
            reach += r;
            for (long long s = reach; s >= r; --s)
                counts[static_cast<std::size_t>(s)] += counts[static_cast<std::size_t>(s - r)];
        }
        const double total = std::pow(2.0, n);
        const long long w2 = std::llround(2.0 * w_plus);
        double below = 0.0, above = 0.0;
        for (long long s = 0; s <= max_sum; ++s) {
            if (s <= w2) below += counts[static_cast<std::size_t>(s)];
            if (s >= w2) above += counts[static_cast<std::size_t>(s)];
        }
        const double p_leq = below / total;
        const double p_geq = above / total;
        res.p_value = alternative == Alternative::Greater
                          ? p_geq
                          : std::min(1.0, 2.0 * std::min(p_leq, p_geq));
    } else {
        res.exact = false;
        const double mean = n * (n + 1) / 4.0;
        const double var =
            n * (n + 1) * (2.0 * n + 1) / 24.0 - tie_correction_sum(abs_d) / 48.0;
        const double sd = std::sqrt(var);
        if (alternative == Alternative::Greater) {
            const double z = (w_plus - mean - 0.5) / sd;
            res.p_value = 1.0 - normal_cdf(z);
        } else {
            const double z = (std::abs(w_plus - mean) - 0.5) / sd;
            res.p_value = std::min(1.0, 2.0 * (1.0 - normal_cdf(std::max(0.0, z))));
        }
    }
    return res;
}

Eigen::MatrixXd rank_observations(const Eigen::MatrixXd& metrics, RankDirection direction) {
    Eigen::MatrixXd ranks(metrics.rows(), metrics.cols());
    std::vector<double> row(static_cast<std::size_t>(metrics.cols()));
    for (Eigen::Index i = 0; i < metrics.rows(); ++i) {
        for (Eigen::Index j = 0; j < metrics.cols(); ++j) {
            const double v = metrics(i, j);
            row[static_cast<std::size_t>(j)] =
                direction == RankDirection::HigherIsBetter ? -v : v;
        }
        const auto r = midranks(row);
        for (Eigen::Index j = 0; j < metrics.cols(); ++j)
            ranks(i, j) = r[static_cast<std::size_t>(j)];
    }
    return ranks;
}

FriedmanResult friedman_test(const Eigen::MatrixXd& metrics, RankDirection direction) {
    const auto k = static_cast<int>(metrics.cols());
    const auto n = static_cast<int>(metrics.rows());
    if (k < 2 || n < 2)
        throw std::invalid_argument("friedman: need >= 2 methods and >= 2 observations");

    const Eigen::MatrixXd ranks = rank_observations(metrics, direction);

    FriedmanResult res;
    res.methods = k;
    res.observations = n;
    res.average_ranks.resize(static_cast<std::size_t>(k));
    double ssbn = 0.0;
    for (int j = 0; j < k; ++j) {
        const double col_sum = ranks.col(j).sum();
        res.average_ranks[static_cast<std::size_t>(j)] = col_sum / n;
        ssbn += col_sum * col_sum;
    }

    double ties = 0.0;
    std::vector<double> row(static_cast<std::size_t>(k));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < k; ++j) row[static_cast<std::size_t>(j)] = metrics(i, j);
        ties += tie_correction_sum(row);
    }
    const double correction = 1.0 - ties / (static_cast<double>(n) * k * (k * k - 1.0));
    if (correction <= 0.0) {
        // every observation fully tied: no evidence of any difference
        res.statistic = 0.0;
        res.p_value = 1.0;
        return res;
    }

    res.statistic =
        (12.0 / (static_cast<double>(n) * k * (k + 1)) * ssbn - 3.0 * n * (k + 1)) / correction;
    if (res.statistic < 0.0) res.statistic = 0.0;
    res.p_value = chi_squared_sf(res.statistic, k - 1);
    return res;
}

std::vector<double> hommel_adjust(const std::vector<double>& raw_p) {
    const auto n = raw_p.size();
    if (n == 0) return {};
    for (double p : raw_p)
        if (p < 0.0 || p > 1.0 || !std::isfinite(p))
            throw std::invalid_argument("hommel_adjust: p-values must lie in [0, 1]");
    if (n == 1) return raw_p;

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return raw_p[a] < raw_p[b]; });
    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = raw_p[order[i]];

    const double nn = static_cast<double>(n);
    double q0 = p[0] * nn;
    for (std::size_t i = 1; i < n; ++i) q0 = std::min(q0, nn * p[i] / static_cast<double>(i + 1));
    std::vector<double> q(n, q0), pa(n, q0);

    for (std::size_t m = n - 1; m >= 2; --m) {
        const std::size_t cut = n - m + 1;  // indices [0, cut) get the capped value
        double q1 = m * p[cut] / 2.0;
        for (std::size_t j = cut + 1; j < n; ++j)
            q1 = std::min(q1, m * p[j] / static_cast<double>(j - cut + 2));
        std::vector<double> shifted(q.begin() + static_cast<std::ptrdiff_t>(cut) - 1,
                                    q.end() - 1);
        for (std::size_t i = 0; i < cut; ++i) q[i] = std::min(m * p[i], q1);
        for (std::size_t j = cut; j < n; ++j) q[j] = shifted[j - cut];
        for (std::size_t i = 0; i < n; ++i) pa[i] = std::max(pa[i], q[i]);
    }

    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[order[i]] = std::min(1.0, std::max(pa[i], p[i]));
    return out;
}

std::vector<PosthocComparison> hommel_posthoc(const FriedmanResult& friedman, int control) {
    const int k = friedman.methods;
    if (k < 2) throw std::invalid_argument("posthoc needs >= 2 methods");
    if (control < 0) {
        control = 0;
        for (int j = 1; j < k; ++j)
            if (friedman.average_ranks[static_cast<std::size_t>(j)] <
                friedman.average_ranks[static_cast<std::size_t>(control)])
                control = j;
    }

    const double se = std::sqrt(k * (k + 1) / (6.0 * friedman.observations));
    std::vector<PosthocComparison> comparisons;
    std::vector<double> raw;
    for (int j = 0; j < k; ++j) {
        if (j == control) continue;
        PosthocComparison c;
        c.method = j;
        c.z = (friedman.average_ranks[static_cast<std::size_t>(j)] -
               friedman.average_ranks[static_cast<std::size_t>(control)]) /
              se;
        c.raw_p = std::min(1.0, 2.0 * (1.0 - normal_cdf(std::abs(c.z))));
        raw.push_back(c.raw_p);
        comparisons.push_back(c);
    }
    const auto adjusted = hommel_adjust(raw);
    for (std::size_t i = 0; i < comparisons.size(); ++i) {
        comparisons[i].adjusted_p = adjusted[i];
        comparisons[i].reject_at_05 = adjusted[i] <= 0.05;
    }
    return comparisons;
}

}  // namespace enas
