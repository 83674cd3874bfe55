#include "speechbio/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "speechbio/errors.hpp"
#include "speechbio/mathutil.hpp"
#include "speechbio/rng.hpp"

namespace speechbio {

int hidden_units(int n_attributes, int n_classes) {
    if (n_attributes < 1 || n_classes < 1) {
        throw ConfigError("hidden_units: attribute and class counts must be >= 1");
    }
    return n_attributes + n_classes;
}

int training_steps(int nnhl) { return nnhl * 10; }

namespace mlp_detail {

std::vector<double> scale_input(const MlpModel& model, std::span<const double> x) {
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double range = model.feature_max[i] - model.feature_min[i];
        out[i] = range > 0.0 ? 2.0 * (x[i] - model.feature_min[i]) / range - 1.0 : 0.0;
    }
    return out;
}

Activations forward_scaled(const MlpModel& model, std::span<const double> x_scaled) {
    Activations act;
    act.hidden.resize(static_cast<std::size_t>(model.n_hidden));
    for (int h = 0; h < model.n_hidden; ++h) {
        double z = model.b1[static_cast<std::size_t>(h)];
        const double* row = &model.w1[static_cast<std::size_t>(h) * model.n_inputs];
        for (int i = 0; i < model.n_inputs; ++i) z += row[i] * x_scaled[static_cast<std::size_t>(i)];
        act.hidden[static_cast<std::size_t>(h)] = logistic(z);
    }

    act.output.resize(static_cast<std::size_t>(model.n_outputs));
    double z_max = -1e300;
    for (int o = 0; o < model.n_outputs; ++o) {
        double z = model.b2[static_cast<std::size_t>(o)];
        const double* row = &model.w2[static_cast<std::size_t>(o) * model.n_hidden];
        for (int h = 0; h < model.n_hidden; ++h) z += row[h] * act.hidden[static_cast<std::size_t>(h)];
        act.output[static_cast<std::size_t>(o)] = z;
        z_max = std::max(z_max, z);
    }
    double sum = 0.0;
    for (double& z : act.output) {
        z = std::exp(z - z_max);
        sum += z;
    }
    for (double& z : act.output) z /= sum;
    return act;
}

Gradients backprop_scaled(const MlpModel& model, std::span<const double> x_scaled, int target) {
    const Activations act = forward_scaled(model, x_scaled);

    Gradients g;
    g.w1.assign(model.w1.size(), 0.0);
    g.b1.assign(model.b1.size(), 0.0);
    g.w2.assign(model.w2.size(), 0.0);
    g.b2.assign(model.b2.size(), 0.0);

    // d(loss)/d(output pre-activation) for softmax + cross-entropy
    std::vector<double> delta_out(static_cast<std::size_t>(model.n_outputs));
    for (int o = 0; o < model.n_outputs; ++o) {
        delta_out[static_cast<std::size_t>(o)] =
            act.output[static_cast<std::size_t>(o)] - (o == target ? 1.0 : 0.0);
    }
    for (int o = 0; o < model.n_outputs; ++o) {
        const double d = delta_out[static_cast<std::size_t>(o)];
        g.b2[static_cast<std::size_t>(o)] = d;
        double* row = &g.w2[static_cast<std::size_t>(o) * model.n_hidden];
        for (int h = 0; h < model.n_hidden; ++h) row[h] = d * act.hidden[static_cast<std::size_t>(h)];
    }

    for (int h = 0; h < model.n_hidden; ++h) {
        double back = 0.0;
        for (int o = 0; o < model.n_outputs; ++o) {
            back += delta_out[static_cast<std::size_t>(o)] *
                    model.w2[static_cast<std::size_t>(o) * model.n_hidden + h];
        }
        const double a = act.hidden[static_cast<std::size_t>(h)];
        const double d = back * a * (1.0 - a);
        g.b1[static_cast<std::size_t>(h)] = d;
        double* row = &g.w1[static_cast<std::size_t>(h) * model.n_inputs];
        for (int i = 0; i < model.n_inputs; ++i) row[i] = d * x_scaled[static_cast<std::size_t>(i)];
    }
    return g;
}

double sample_loss_scaled(const MlpModel& model, std::span<const double> x_scaled, int target) {
    const Activations act = forward_scaled(model, x_scaled);
    const double p = std::max(act.output[static_cast<std::size_t>(target)], 1e-300);
    return -std::log(p);
}

}  // namespace mlp_detail

MlpModel train_mlp(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                   const std::vector<std::string>& classes, std::uint64_t seed,
                   const MlpOptions& options) {
    if (x.empty() || x.size() != y.size()) {
        throw TrainingError("train_mlp: need matching non-empty rows and labels");
    }
    if (classes.size() < 2) throw TrainingError("train_mlp: need at least two classes");

    const int n_inputs = static_cast<int>(x[0].size());
    const int n_classes = static_cast<int>(classes.size());
    std::vector<std::size_t> per_class(classes.size(), 0);
    for (std::size_t r = 0; r < x.size(); ++r) {
        if (static_cast<int>(x[r].size()) != n_inputs) {
            throw TrainingError("train_mlp: ragged feature rows");
        }
        if (y[r] < 0 || y[r] >= n_classes) throw TrainingError("train_mlp: label out of range");
        ++per_class[static_cast<std::size_t>(y[r])];
    }
    for (std::size_t c = 0; c < per_class.size(); ++c) {
        if (per_class[c] == 0) {
            throw TrainingError("train_mlp: class '" + classes[c] + "' has no training instances");
        }
    }

    MlpModel model;
    model.n_inputs = n_inputs;
    model.n_hidden = hidden_units(n_inputs, n_classes);
    model.n_outputs = n_classes;
    model.classes = classes;
    model.seed = seed;

    model.feature_min.assign(static_cast<std::size_t>(n_inputs), 0.0);
    model.feature_max.assign(static_cast<std::size_t>(n_inputs), 0.0);
    for (int i = 0; i < n_inputs; ++i) {
        double lo = x[0][static_cast<std::size_t>(i)];
        double hi = lo;
        for (const auto& row : x) {
            lo = std::min(lo, row[static_cast<std::size_t>(i)]);
            hi = std::max(hi, row[static_cast<std::size_t>(i)]);
        }
        model.feature_min[static_cast<std::size_t>(i)] = lo;
        model.feature_max[static_cast<std::size_t>(i)] = hi;
    }

    Rng rng(seed);
    auto init = [&rng, &options](std::vector<double>& w, std::size_t n) {
        w.resize(n);
        for (double& v : w) v = rng.uniform(-options.init_scale, options.init_scale);
    };
    init(model.w1, static_cast<std::size_t>(model.n_hidden) * n_inputs);
    init(model.b1, static_cast<std::size_t>(model.n_hidden));
    init(model.w2, static_cast<std::size_t>(model.n_outputs) * model.n_hidden);
    init(model.b2, static_cast<std::size_t>(model.n_outputs));

    std::vector<std::vector<double>> x_scaled;
    x_scaled.reserve(x.size());
    for (const auto& row : x) x_scaled.push_back(mlp_detail::scale_input(model, row));

    const int epochs = options.epochs > 0 ? options.epochs : training_steps(model.n_hidden);

    std::vector<double> v_w1(model.w1.size(), 0.0), v_b1(model.b1.size(), 0.0);
    std::vector<double> v_w2(model.w2.size(), 0.0), v_b2(model.b2.size(), 0.0);
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    auto apply = [&options](std::vector<double>& w, std::vector<double>& v,
                            const std::vector<double>& g) {
        for (std::size_t i = 0; i < w.size(); ++i) {
            v[i] = options.momentum * v[i] - options.learning_rate * g[i];
            w[i] += v[i];
        }
    };

    for (int epoch = 0; epoch < epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t idx : order) {
            const auto g = mlp_detail::backprop_scaled(model, x_scaled[idx], y[idx]);
            apply(model.w1, v_w1, g.w1);
            apply(model.b1, v_b1, g.b1);
            apply(model.w2, v_w2, g.w2);
            apply(model.b2, v_b2, g.b2);
        }
    }
    return model;
}

std::vector<double> predict_mlp(const MlpModel& model, std::span<const double> x) {
    if (static_cast<int>(x.size()) != model.n_inputs) {
        throw ContractError("predict_mlp: expected " + std::to_string(model.n_inputs) +
                            " features, got " + std::to_string(x.size()));
    }
    const auto scaled = mlp_detail::scale_input(model, x);
    return mlp_detail::forward_scaled(model, scaled).output;
}

int argmax_class(std::span<const double> probabilities) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(probabilities.size()); ++i) {
        if (probabilities[static_cast<std::size_t>(i)] > probabilities[static_cast<std::size_t>(best)]) {
            best = i;
        }
    }
    return best;
}

}  // namespace speechbio
