#pragma once

#include "enas/market_data.hpp"

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace enas {

struct IndicatorSpec {
    std::string name;          // e.g. "RSI", "OSCP", raw series "C"
    std::vector<int> params;   // window(s); arity depends on the indicator

    std::string column_name() const;  // "RSI_10", "OSCP_5_10", "C", ...
};

struct FeatureMatrix {
    Eigen::MatrixXd values;            // trimmed: rows are fully defined
    std::vector<IndicatorSpec> specs;  // one per column, in column order
    Eigen::Index offset = 0;           // series index of row 0 (warm-up length)

    std::vector<std::string> column_names() const;
};

// One column over the full series; leading warm-up entries are NaN.
// Throws on unknown name, wrong arity, or window exceeding the series.
std::vector<double> compute_indicator(const MarketSeries& series, const IndicatorSpec& spec);

// Columns in spec order; rows with any undefined entry trimmed from the top.
FeatureMatrix build_feature_matrix(const MarketSeries& series,
                                   const std::vector<IndicatorSpec>& specs);

struct Standardization {
    Eigen::VectorXd mean;
    Eigen::VectorXd stddev;                 // population std; 1.0 where flagged
    std::vector<std::uint8_t> zero_variance;  // flagged columns pass through centered
};

Standardization fit_standardizer(const Eigen::MatrixXd& train);
void apply_standardizer(const Standardization& s, Eigen::MatrixXd& m);

// Spec config: one indicator per line, "NAME [param...]", '#' comments.
std::vector<IndicatorSpec> load_indicator_specs(const std::string& path);
std::vector<IndicatorSpec> parse_indicator_specs(const std::string& text);

// The feature set shipped in configs/indicators_default.txt.
std::vector<IndicatorSpec> default_indicator_specs();

void write_feature_matrix_csv(const FeatureMatrix& m, const std::string& path);

}  // namespace enas
