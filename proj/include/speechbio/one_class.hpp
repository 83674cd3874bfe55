#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "speechbio/bagging.hpp"
#include "speechbio/mlp.hpp"

namespace speechbio {

enum class OneClassBase { Mlp, Bagging };

OneClassBase one_class_base_from_string(const std::string& s);
std::string one_class_base_to_string(OneClassBase base);

struct OneClassParams {
    double artificial_ratio = 1.0;   // artificial count = ratio * target count
    double expansion_margin = 0.1;   // box expansion per feature, fraction of range
    double rejection_budget = 0.10;  // rho: tolerated rejection rate on training targets
    int n_bags = 10;
    MlpOptions mlp;
};

/// Boundary around a single target class: a two-class base model trained
/// on targets versus uniformly generated artificial outliers, thresholded
/// so at least 1-rho of the training targets are accepted.
struct OneClassModel {
    std::string target_class;
    OneClassBase base_kind = OneClassBase::Mlp;
    std::optional<MlpModel> mlp;
    std::optional<BaggingModel> bagging;
    double threshold = 0.5;
    OneClassParams params;
};

/// Synthetic outliers drawn uniformly from the targets' bounding box,
/// expanded by `margin` of each feature's range. A constant feature of
/// value v expands to v +- margin * max(|v|, 1).
std::vector<std::vector<double>> generate_artificial_outliers(
    const std::vector<std::vector<double>>& targets, double ratio, double margin,
    std::uint64_t seed);

/// Trains the boundary from target rows only; real outliers never reach
/// the base model.
OneClassModel train_one_class(const std::vector<std::vector<double>>& targets,
                              OneClassBase base_kind, const std::string& target_class,
                              const OneClassParams& params, std::uint64_t seed);

/// P(target | x) under the base model.
double one_class_score(const OneClassModel& model, std::span<const double> x);

struct OneClassDecision {
    bool accept = false;
    double score = 0.0;
};

/// accept <=> score >= threshold (closed at the boundary).
OneClassDecision one_class_predict(const OneClassModel& model, std::span<const double> x);

/// Moves the threshold to maximize balanced accuracy over the given
/// labelled scores, but never above the calibration point: training-target
/// acceptance stays >= 1-rho. Outliers influence only the threshold, not
/// the base model.
void refine_threshold_with_outliers(OneClassModel& model,
                                    const std::vector<std::vector<double>>& targets,
                                    const std::vector<std::vector<double>>& outliers);

}  // namespace speechbio
