#pragma once

#include "enas/market_data.hpp"

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace enas {

enum class Activation { Sigmoid, Tanh };

const char* activation_name(Activation a);

struct LayerSpec {
    int size = 0;
    Activation activation = Activation::Tanh;
};

// Feed-forward net with a single logistic output unit. An empty layer list
// is legal and amounts to logistic regression on the inputs.
struct Architecture {
    std::vector<LayerSpec> layers;
    int input_dim = 0;

    std::size_t weight_count() const;
};

struct WeightSet {
    std::vector<Eigen::MatrixXd> weights;  // per layer, [out x in]
    std::vector<Eigen::VectorXd> biases;
};

struct ConfusionMatrix {
    std::int64_t tp = 0, tn = 0, fp = 0, fn = 0;

    std::int64_t total() const { return tp + tn + fp + fn; }
    double accuracy() const;
};

// Matthews correlation coefficient; 0 when any denominator factor is zero.
double mcc(const ConfusionMatrix& c);

// Uniform in [-r, r], r = sqrt(6 / (fan_in + fan_out)).
WeightSet init_weights(const Architecture& arch, std::uint64_t seed);

// Batch forward pass; returns P(class 1) per row, strictly in (0, 1).
Eigen::VectorXd forward(const Architecture& arch, const WeightSet& w,
                        const Eigen::MatrixXd& inputs);

// Mean binary cross-entropy and its gradient w.r.t. the flattened weights.
double bce_loss(const Architecture& arch, const WeightSet& w,
                const Eigen::MatrixXd& inputs, const Eigen::VectorXi& labels);
double bce_loss_gradient(const Architecture& arch, const WeightSet& w,
                         const Eigen::MatrixXd& inputs, const Eigen::VectorXi& labels,
                         Eigen::VectorXd& grad_out);

Eigen::VectorXd flatten(const WeightSet& w);
WeightSet unflatten(const Architecture& arch, const Eigen::VectorXd& flat);

struct ScgOptions {
    int max_epochs = 100;
    double sigma = 1e-4;     // second-order step length
    double lambda0 = 1e-6;   // initial scaling factor
    double min_improvement = 1e-6;  // early stop threshold ...
    int patience = 10;              // ... over this many epochs
};

struct TrainOutcome {
    WeightSet weights;      // best finite-loss weights seen
    double initial_loss = 0.0;
    double final_loss = 0.0;
    int epochs = 0;
    bool aborted_non_finite = false;
    std::vector<double> accepted_losses;  // losses after each accepted step
};

// Scaled conjugate gradient (Møller's recurrence with restarts every
// |W| iterations). Features are expected to be standardized.
TrainOutcome train_scg(const Architecture& arch, const Eigen::MatrixXd& inputs,
                       const Eigen::VectorXi& labels, std::uint64_t seed,
                       const ScgOptions& opts = {});

struct Evaluation {
    double error_rate = 0.0;
    ConfusionMatrix confusion;
};

// Threshold 0.5; probability >= 0.5 predicts class 1.
Evaluation evaluate(const Architecture& arch, const WeightSet& w,
                    const Eigen::MatrixXd& inputs, const Eigen::VectorXi& labels);

void write_weights_csv(const Architecture& arch, const WeightSet& w, const std::string& path);

}  // namespace enas
