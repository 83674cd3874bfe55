#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "speechbio/dataset.hpp"
#include "speechbio/one_class.hpp"

namespace speechbio {

enum class Scheme { MulticlassMlp, OneClassMlp, OneClassBagging };

Scheme scheme_from_string(const std::string& s);
std::string scheme_to_string(Scheme s);
const std::vector<Scheme>& all_schemes();

/// One cell of the experiment grid. outliers_in_training controls whether
/// AD instances of the training folds reach training at all: one-class
/// schemes use them only to refine the threshold, and the multi-class
/// scheme without them degrades to the sole-class prior (flagged), which
/// is the imbalance failure the grid is built to expose.
struct ExperimentCell {
    Scheme scheme = Scheme::MulticlassMlp;
    FeatureSetId feature_set = FeatureSetId::SsfEfEtVhfd;
    bool outliers_in_training = true;
    int folds = 10;
    std::uint64_t seed = 1;
};

struct ConfusionMatrix {
    std::vector<std::string> classes;
    std::vector<std::vector<long long>> counts;  // counts[true][predicted]

    explicit ConfusionMatrix(std::vector<std::string> class_names = {});
    void add(std::size_t true_class, std::size_t predicted_class, long long n = 1);
    long long row_total(std::size_t true_class) const;
    long long total() const;
    long long errors() const;
};

struct EvalReport {
    ExperimentCell cell;
    ConfusionMatrix confusion;
    double global_cer_pct = 0.0;
    double global_acc_pct = 0.0;
    std::vector<double> per_class_cer_pct;
    std::vector<std::string> flags;
};

/// Seeded shuffle then round-robin per class; the fold cursor carries over
/// between classes so no fold is left empty whenever k <= instance count.
/// Per-class fold sizes differ by at most one.
std::vector<int> stratified_folds(const std::vector<int>& class_ids, int n_classes, int k,
                                  std::uint64_t seed);

/// CER/Acc bookkeeping from an accumulated confusion matrix.
EvalReport report_from_confusion(const ExperimentCell& cell, ConfusionMatrix confusion,
                                 std::vector<std::string> flags = {});

/// Runs one grid cell: stratified k-fold CV on the binary CR/AD task with
/// the cell's feature set, accumulating the confusion over held-out folds.
EvalReport run_cell(const ExperimentCell& cell, const std::vector<LabeledInstance>& instances);

/// Gaussian desk-scale corpus: CR at the origin, AD shifted by
/// `separation` in every dimension, stages assigned ES/IS/AS round-robin.
std::vector<LabeledInstance> synth_corpus(int n_target, int n_outlier, int dims,
                                          double separation, std::uint64_t seed);

/// Grid CSV, one row per report:
/// scheme,feature_set,outliers_in_training,global_cer,acc,cer_CR,cer_AD,flags
void emit_reports(std::span<const EvalReport> reports, const std::filesystem::path& out_path);

/// The full 3 schemes x 3 feature sets x 2 outlier modes grid.
std::vector<ExperimentCell> full_grid(int folds, std::uint64_t seed);

namespace eval_detail {

/// Per-fold binary predictor seam so the fold/confusion bookkeeping can be
/// exercised with stub classifiers.
struct FoldModel {
    virtual ~FoldModel() = default;
    virtual int predict(std::span<const double> x) const = 0;  // 0 = CR, 1 = AD
};

}  // namespace eval_detail

}  // namespace speechbio
