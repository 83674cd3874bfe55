#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "speechbio/rng.hpp"

namespace speechbio {

/// Axis-aligned decision tree node; label >= 0 marks a leaf.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    int label = -1;
};

struct TreeOptions {
    int max_depth = 5;
    int min_samples_split = 2;
};

struct DecisionTree {
    std::vector<TreeNode> nodes;

    int predict(std::span<const double> x) const;
};

/// CART with Gini splits; exhaustive threshold search at value midpoints.
/// Ties in impurity keep the earlier feature/threshold, leaf labels break
/// ties toward the earlier class.
DecisionTree train_tree(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                        int n_classes, const TreeOptions& options = {});

struct BaggingModel {
    std::vector<std::string> classes;
    std::vector<DecisionTree> members;
    std::uint64_t seed = 0;
};

/// n draws with replacement; exposed so the resampling sequence itself can
/// be pinned by tests.
std::vector<std::size_t> bootstrap_indices(std::size_t n, Rng& rng);

/// Each member learns on an independent bootstrap resample.
BaggingModel train_bagging(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                           const std::vector<std::string>& classes, int n_bags,
                           std::uint64_t seed, const TreeOptions& options = {});

/// Per-class fraction of member votes.
std::vector<double> bagging_vote_shares(const BaggingModel& model, std::span<const double> x);

/// Majority vote; ties break toward the earlier class.
int predict_bagging(const BaggingModel& model, std::span<const double> x);

}  // namespace speechbio
