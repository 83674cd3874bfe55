#include "speechbio/bagging.hpp"

#include <algorithm>
#include <numeric>

#include "speechbio/errors.hpp"
#include "speechbio/mlp.hpp"

namespace speechbio {

int DecisionTree::predict(std::span<const double> x) const {
    if (nodes.empty()) throw ContractError("DecisionTree::predict: empty tree");
    int idx = 0;
    while (nodes[static_cast<std::size_t>(idx)].label < 0) {
        const TreeNode& node = nodes[static_cast<std::size_t>(idx)];
        if (node.feature < 0 || static_cast<std::size_t>(node.feature) >= x.size()) {
            throw ContractError("DecisionTree::predict: feature index out of range");
        }
        idx = x[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left : node.right;
    }
    return nodes[static_cast<std::size_t>(idx)].label;
}

namespace {

double gini(const std::vector<std::size_t>& counts, std::size_t total) {
    if (total == 0) return 0.0;
    double g = 1.0;
    for (std::size_t c : counts) {
        const double p = static_cast<double>(c) / static_cast<double>(total);
        g -= p * p;
    }
    return g;
}

int majority_label(const std::vector<std::size_t>& counts) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < counts.size(); ++c) {
        if (counts[c] > counts[best]) best = c;
    }
    return static_cast<int>(best);
}

struct Builder {
    const std::vector<std::vector<double>>& x;
    const std::vector<int>& y;
    int n_classes;
    TreeOptions options;
    std::vector<TreeNode> nodes;

    int build(std::vector<std::size_t> idx, int depth) {
        std::vector<std::size_t> counts(static_cast<std::size_t>(n_classes), 0);
        for (std::size_t i : idx) ++counts[static_cast<std::size_t>(y[i])];
        const double node_gini = gini(counts, idx.size());

        const bool stop = node_gini == 0.0 || depth >= options.max_depth ||
                          idx.size() < static_cast<std::size_t>(options.min_samples_split);
        if (!stop) {
            int best_feature = -1;
            double best_threshold = 0.0;
            double best_impurity = node_gini;
            const std::size_t n_features = x[idx[0]].size();

            std::vector<std::size_t> sorted = idx;
            for (std::size_t f = 0; f < n_features; ++f) {
                std::sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
                    return x[a][f] < x[b][f];
                });
                std::vector<std::size_t> left_counts(static_cast<std::size_t>(n_classes), 0);
                std::vector<std::size_t> right_counts = counts;
                for (std::size_t pos = 0; pos + 1 < sorted.size(); ++pos) {
                    const auto cls = static_cast<std::size_t>(y[sorted[pos]]);
                    ++left_counts[cls];
                    --right_counts[cls];
                    const double v = x[sorted[pos]][f];
                    const double next = x[sorted[pos + 1]][f];
                    if (v == next) continue;  // no boundary between equal values
                    const std::size_t n_left = pos + 1;
                    const std::size_t n_right = sorted.size() - n_left;
                    const double impurity =
                        (static_cast<double>(n_left) * gini(left_counts, n_left) +
                         static_cast<double>(n_right) * gini(right_counts, n_right)) /
                        static_cast<double>(sorted.size());
                    if (impurity < best_impurity - 1e-12) {
                        best_impurity = impurity;
                        best_feature = static_cast<int>(f);
                        best_threshold = v + 0.5 * (next - v);
                    }
                }
            }

            if (best_feature >= 0) {
                std::vector<std::size_t> left_idx, right_idx;
                for (std::size_t i : idx) {
                    if (x[i][static_cast<std::size_t>(best_feature)] <= best_threshold) {
                        left_idx.push_back(i);
                    } else {
                        right_idx.push_back(i);
                    }
                }
                const int me = static_cast<int>(nodes.size());
                nodes.push_back(TreeNode{best_feature, best_threshold, -1, -1, -1});
                const int left = build(std::move(left_idx), depth + 1);
                const int right = build(std::move(right_idx), depth + 1);
                nodes[static_cast<std::size_t>(me)].left = left;
                nodes[static_cast<std::size_t>(me)].right = right;
                return me;
            }
        }

        const int me = static_cast<int>(nodes.size());
        nodes.push_back(TreeNode{-1, 0.0, -1, -1, majority_label(counts)});
        return me;
    }
};

}  // namespace

DecisionTree train_tree(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                        int n_classes, const TreeOptions& options) {
    if (x.empty() || x.size() != y.size()) {
        throw TrainingError("train_tree: need matching non-empty rows and labels");
    }
    Builder builder{x, y, n_classes, options, {}};
    std::vector<std::size_t> idx(x.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    builder.build(std::move(idx), 0);
    DecisionTree tree;
    tree.nodes = std::move(builder.nodes);
    return tree;
}

std::vector<std::size_t> bootstrap_indices(std::size_t n, Rng& rng) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = static_cast<std::size_t>(rng.uniform_index(n));
    return idx;
}

BaggingModel train_bagging(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                           const std::vector<std::string>& classes, int n_bags,
                           std::uint64_t seed, const TreeOptions& options) {
    if (x.empty() || x.size() != y.size()) {
        throw TrainingError("train_bagging: need matching non-empty rows and labels");
    }
    if (n_bags < 1) throw ConfigError("train_bagging: n_bags must be >= 1");

    std::vector<bool> present(classes.size(), false);
    for (int label : y) {
        if (label < 0 || static_cast<std::size_t>(label) >= classes.size()) {
            throw TrainingError("train_bagging: label out of range");
        }
        present[static_cast<std::size_t>(label)] = true;
    }
    for (std::size_t c = 0; c < classes.size(); ++c) {
        if (!present[c]) {
            throw TrainingError("train_bagging: class '" + classes[c] + "' has no instances");
        }
    }

    BaggingModel model;
    model.classes = classes;
    model.seed = seed;
    model.members.reserve(static_cast<std::size_t>(n_bags));

    Rng rng(seed);
    for (int b = 0; b < n_bags; ++b) {
        const auto sample = bootstrap_indices(x.size(), rng);
        std::vector<std::vector<double>> xs;
        std::vector<int> ys;
        xs.reserve(sample.size());
        ys.reserve(sample.size());
        for (std::size_t i : sample) {
            xs.push_back(x[i]);
            ys.push_back(y[i]);
        }
        model.members.push_back(train_tree(xs, ys, static_cast<int>(classes.size()), options));
    }
    return model;
}

std::vector<double> bagging_vote_shares(const BaggingModel& model, std::span<const double> x) {
    if (model.members.empty()) throw ContractError("bagging_vote_shares: no members");
    std::vector<double> shares(model.classes.size(), 0.0);
    for (const DecisionTree& tree : model.members) {
        ++shares[static_cast<std::size_t>(tree.predict(x))];
    }
    for (double& s : shares) s /= static_cast<double>(model.members.size());
    return shares;
}

int predict_bagging(const BaggingModel& model, std::span<const double> x) {
    const auto shares = bagging_vote_shares(model, x);
    return argmax_class(shares);
}

}  // namespace speechbio
