#include "speechbio/one_class.hpp"

#include <algorithm>
#include <cmath>

#include "speechbio/errors.hpp"
#include "speechbio/rng.hpp"

namespace speechbio {

OneClassBase one_class_base_from_string(const std::string& s) {
    if (s == "mlp") return OneClassBase::Mlp;
    if (s == "bagging") return OneClassBase::Bagging;
    throw ConfigError("unknown one-class base '" + s + "' (expected mlp or bagging)");
}

std::string one_class_base_to_string(OneClassBase base) {
    return base == OneClassBase::Mlp ? "mlp" : "bagging";
}

std::vector<std::vector<double>> generate_artificial_outliers(
    const std::vector<std::vector<double>>& targets, double ratio, double margin,
    std::uint64_t seed) {
    if (targets.size() < 2) throw TrainingError("generate_artificial_outliers: need >= 2 targets");
    const std::size_t n_features = targets[0].size();

    std::vector<double> lo(n_features), hi(n_features);
    for (std::size_t f = 0; f < n_features; ++f) {
        lo[f] = hi[f] = targets[0][f];
        for (const auto& row : targets) {
            lo[f] = std::min(lo[f], row[f]);
            hi[f] = std::max(hi[f], row[f]);
        }
        const double range = hi[f] - lo[f];
        if (range > 0.0) {
            lo[f] -= margin * range;
            hi[f] += margin * range;
        } else {
            const double spread = margin * std::max(std::abs(lo[f]), 1.0);
            lo[f] -= spread;
            hi[f] += spread;
        }
    }

    const auto n_art = static_cast<std::size_t>(
        std::llround(ratio * static_cast<double>(targets.size())));
    Rng rng(seed);
    std::vector<std::vector<double>> artificial(n_art, std::vector<double>(n_features));
    for (auto& row : artificial) {
        for (std::size_t f = 0; f < n_features; ++f) row[f] = rng.uniform(lo[f], hi[f]);
    }
    return artificial;
}

namespace {

/// Largest threshold accepting at least 1-rho of the given target scores.
double calibrate_threshold(std::vector<double> target_scores, double rho) {
    std::sort(target_scores.begin(), target_scores.end(), std::greater<>());
    const auto n = static_cast<double>(target_scores.size());
    auto keep = static_cast<std::size_t>(std::ceil((1.0 - rho) * n));
    keep = std::clamp<std::size_t>(keep, 1, target_scores.size());
    return target_scores[keep - 1];
}

}  // namespace

OneClassModel train_one_class(const std::vector<std::vector<double>>& targets,
                              OneClassBase base_kind, const std::string& target_class,
                              const OneClassParams& params, std::uint64_t seed) {
    if (targets.empty()) throw TrainingError("train_one_class: empty target set");
    if (targets.size() < 2) throw TrainingError("train_one_class: need >= 2 targets");

    const auto artificial = generate_artificial_outliers(
        targets, params.artificial_ratio, params.expansion_margin, derive_seed(seed, "artificial"));
    if (artificial.empty()) {
        throw TrainingError("train_one_class: artificial ratio produced no outliers");
    }

    std::vector<std::vector<double>> x = targets;
    x.insert(x.end(), artificial.begin(), artificial.end());
    std::vector<int> y(targets.size(), 0);
    y.resize(x.size(), 1);
    const std::vector<std::string> classes = {target_class, "ARTIFICIAL"};

    OneClassModel model;
    model.target_class = target_class;
    model.base_kind = base_kind;
    model.params = params;
    if (base_kind == OneClassBase::Mlp) {
        model.mlp = train_mlp(x, y, classes, derive_seed(seed, "base"), params.mlp);
    } else {
        model.bagging = train_bagging(x, y, classes, params.n_bags, derive_seed(seed, "base"));
    }

    std::vector<double> target_scores;
    target_scores.reserve(targets.size());
    for (const auto& row : targets) target_scores.push_back(one_class_score(model, row));
    model.threshold = calibrate_threshold(std::move(target_scores), params.rejection_budget);
    return model;
}

double one_class_score(const OneClassModel& model, std::span<const double> x) {
    if (model.base_kind == OneClassBase::Mlp) {
        return predict_mlp(*model.mlp, x)[0];  // class 0 is the target
    }
    return bagging_vote_shares(*model.bagging, x)[0];
}

OneClassDecision one_class_predict(const OneClassModel& model, std::span<const double> x) {
    OneClassDecision d;
    d.score = one_class_score(model, x);
    d.accept = d.score >= model.threshold;
    return d;
}

void refine_threshold_with_outliers(OneClassModel& model,
                                    const std::vector<std::vector<double>>& targets,
                                    const std::vector<std::vector<double>>& outliers) {
    if (outliers.empty()) return;

    std::vector<double> target_scores;
    target_scores.reserve(targets.size());
    for (const auto& row : targets) target_scores.push_back(one_class_score(model, row));
    std::vector<double> outlier_scores;
    outlier_scores.reserve(outliers.size());
    for (const auto& row : outliers) outlier_scores.push_back(one_class_score(model, row));

    // The calibration point is a ceiling: target acceptance must stay
    // >= 1-rho no matter what the outliers suggest.
    const double ceiling = calibrate_threshold(target_scores, model.params.rejection_budget);

    std::vector<double> candidates = target_scores;
    candidates.insert(candidates.end(), outlier_scores.begin(), outlier_scores.end());
    candidates.push_back(ceiling);
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    double best_tau = ceiling;
    double best_balanced = -1.0;
    for (double tau : candidates) {
        if (tau > ceiling) continue;
        std::size_t tp = 0;
        for (double s : target_scores) {
            if (s >= tau) ++tp;
        }
        std::size_t tn = 0;
        for (double s : outlier_scores) {
            if (s < tau) ++tn;
        }
        const double tpr = static_cast<double>(tp) / static_cast<double>(target_scores.size());
        const double tnr = static_cast<double>(tn) / static_cast<double>(outlier_scores.size());
        const double balanced = 0.5 * (tpr + tnr);
        // Prefer the higher threshold on ties: tighter boundary.
        if (balanced > best_balanced || (balanced == best_balanced && tau > best_tau)) {
            best_balanced = balanced;
            best_tau = tau;
        }
    }
    model.threshold = best_tau;
}

}  // namespace speechbio
