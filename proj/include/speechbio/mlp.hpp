#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace speechbio {

/// Hidden-layer width rule: attribute count plus class count.
int hidden_units(int n_attributes, int n_classes);

/// Training epochs: ten times the hidden-layer width.
int training_steps(int nnhl);

/// Single-hidden-layer perceptron: logistic hidden units, softmax output,
/// trained with per-sample gradient descent on cross-entropy. Inputs are
/// min-max scaled to [-1, 1] with ranges taken from the training data.
struct MlpModel {
    int n_inputs = 0;
    int n_hidden = 0;
    int n_outputs = 0;
    std::vector<double> w1;  // n_hidden x n_inputs, row-major
    std::vector<double> b1;
    std::vector<double> w2;  // n_outputs x n_hidden, row-major
    std::vector<double> b2;
    std::vector<double> feature_min;
    std::vector<double> feature_max;
    std::vector<std::string> classes;
    std::uint64_t seed = 0;
};

struct MlpOptions {
    double learning_rate = 0.3;
    double momentum = 0.2;
    int epochs = 0;           // 0: apply the training-steps rule
    double init_scale = 0.5;  // weights start uniform in [-init_scale, init_scale]
};

/// Trains on rows x with class indices y (into `classes`). Every class must
/// be represented by at least one row. Deterministic for a fixed seed.
MlpModel train_mlp(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                   const std::vector<std::string>& classes, std::uint64_t seed,
                   const MlpOptions& options = {});

/// Class probability vector; nonnegative and summing to one. Ties in the
/// argmax break toward the earlier class.
std::vector<double> predict_mlp(const MlpModel& model, std::span<const double> x);

int argmax_class(std::span<const double> probabilities);

namespace mlp_detail {

/// Min-max scaling to [-1, 1]; constant features map to 0.
std::vector<double> scale_input(const MlpModel& model, std::span<const double> x);

struct Activations {
    std::vector<double> hidden;
    std::vector<double> output;  // softmax probabilities
};

/// Forward pass on an already-scaled input.
Activations forward_scaled(const MlpModel& model, std::span<const double> x_scaled);

struct Gradients {
    std::vector<double> w1, b1, w2, b2;
};

/// Cross-entropy gradients for one scaled sample with target class index.
Gradients backprop_scaled(const MlpModel& model, std::span<const double> x_scaled, int target);

/// Cross-entropy loss of one scaled sample (used by the finite-difference
/// gradient check).
double sample_loss_scaled(const MlpModel& model, std::span<const double> x_scaled, int target);

}  // namespace mlp_detail

}  // namespace speechbio
