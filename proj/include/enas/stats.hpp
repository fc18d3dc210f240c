#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace enas {

enum class Alternative { TwoSided, Greater };
enum class RankDirection { HigherIsBetter, LowerIsBetter };

struct WilcoxonResult {
    double statistic = 0.0;  // W+: rank sum of positive differences
    double p_value = 1.0;
    int n_nonzero = 0;
    bool exact = true;
};

// Paired signed-rank test. Zero differences are dropped, tied |differences|
// get midranks. Exact distribution (conditional on the observed ranks) for
// n <= 25, normal approximation with continuity correction beyond. Throws
// if every difference is zero.
WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& x,
                                    const std::vector<double>& y,
                                    Alternative alternative = Alternative::TwoSided);

struct FriedmanResult {
    std::vector<double> average_ranks;  // per method, 1 = best
    double statistic = 0.0;             // tie-corrected chi-square
    double p_value = 1.0;
    int methods = 0;
    int observations = 0;
};

// Rank per observation (row) with midranks; rank 1 goes to the best value
// under `direction`.
Eigen::MatrixXd rank_observations(const Eigen::MatrixXd& metrics, RankDirection direction);

// metrics: observations x methods.
FriedmanResult friedman_test(const Eigen::MatrixXd& metrics, RankDirection direction);

// z statistic for method-vs-control comparison after a Friedman test plus
// its two-sided normal p-value.
struct PosthocComparison {
    int method = 0;
    double z = 0.0;
    double raw_p = 1.0;
    double adjusted_p = 1.0;
    bool reject_at_05 = false;
};

// Hommel step-up adjusted p-values (closed Simes testing shortcut).
std::vector<double> hommel_adjust(const std::vector<double>& raw_p);

// Full post-hoc block: every method against the control (best average rank
// if control < 0).
std::vector<PosthocComparison> hommel_posthoc(const FriedmanResult& friedman,
                                              int control = -1);

double normal_cdf(double z);
double chi_squared_sf(double x, int dof);  // upper tail

}  // namespace enas
