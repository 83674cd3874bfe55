#include "speechbio/evaluation.hpp"

#include <algorithm>
#include <fstream>
#include <memory>
#include <numeric>

#include "speechbio/csv.hpp"
#include "speechbio/errors.hpp"
#include "speechbio/rng.hpp"

namespace speechbio {

Scheme scheme_from_string(const std::string& s) {
    if (s == "multiclass_mlp") return Scheme::MulticlassMlp;
    if (s == "oneclass_mlp") return Scheme::OneClassMlp;
    if (s == "oneclass_bagging") return Scheme::OneClassBagging;
    throw ConfigError("unknown scheme '" + s +
                      "' (expected multiclass_mlp, oneclass_mlp or oneclass_bagging)");
}

std::string scheme_to_string(Scheme s) {
    switch (s) {
        case Scheme::MulticlassMlp: return "multiclass_mlp";
        case Scheme::OneClassMlp: return "oneclass_mlp";
        case Scheme::OneClassBagging: return "oneclass_bagging";
    }
    return "multiclass_mlp";
}

const std::vector<Scheme>& all_schemes() {
    static const std::vector<Scheme> schemes = {Scheme::MulticlassMlp, Scheme::OneClassMlp,
                                                Scheme::OneClassBagging};
    return schemes;
}

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> class_names)
    : classes(std::move(class_names)),
      counts(classes.size(), std::vector<long long>(classes.size(), 0)) {}

void ConfusionMatrix::add(std::size_t true_class, std::size_t predicted_class, long long n) {
    counts.at(true_class).at(predicted_class) += n;
}

long long ConfusionMatrix::row_total(std::size_t true_class) const {
    long long s = 0;
    for (long long c : counts.at(true_class)) s += c;
    return s;
}

long long ConfusionMatrix::total() const {
    long long s = 0;
    for (std::size_t r = 0; r < counts.size(); ++r) s += row_total(r);
    return s;
}

long long ConfusionMatrix::errors() const {
    long long e = 0;
    for (std::size_t r = 0; r < counts.size(); ++r) {
        for (std::size_t c = 0; c < counts[r].size(); ++c) {
            if (r != c) e += counts[r][c];
        }
    }
    return e;
}

std::vector<int> stratified_folds(const std::vector<int>& class_ids, int n_classes, int k,
                                  std::uint64_t seed) {
    if (k < 2) throw ConfigError("stratified_folds: k must be >= 2");
    if (static_cast<std::size_t>(k) > class_ids.size()) {
        throw ConfigError("stratified_folds: k exceeds instance count");
    }

    std::vector<int> fold_of(class_ids.size(), -1);
    int offset = 0;  // carries across classes so folds never end up empty
    for (int c = 0; c < n_classes; ++c) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < class_ids.size(); ++i) {
            if (class_ids[i] == c) members.push_back(i);
        }
        if (members.empty()) {
            throw ConfigError("stratified_folds: class " + std::to_string(c) + " has no instances");
        }
        Rng rng(derive_seed(seed, "class" + std::to_string(c)));
        rng.shuffle(members);
        for (std::size_t j = 0; j < members.size(); ++j) {
            fold_of[members[j]] = (offset + static_cast<int>(j % static_cast<std::size_t>(k))) % k;
        }
        offset = (offset + static_cast<int>(members.size() % static_cast<std::size_t>(k))) % k;
    }
    return fold_of;
}

EvalReport report_from_confusion(const ExperimentCell& cell, ConfusionMatrix confusion,
                                 std::vector<std::string> flags) {
    EvalReport report{cell, std::move(confusion), 0.0, 0.0, {}, std::move(flags)};
    const long long total = report.confusion.total();
    if (total == 0) throw ContractError("report_from_confusion: empty confusion matrix");
    report.global_cer_pct =
        100.0 * static_cast<double>(report.confusion.errors()) / static_cast<double>(total);
    report.global_acc_pct = 100.0 - report.global_cer_pct;  // same denominator, sums to 100 exactly
    report.per_class_cer_pct.resize(report.confusion.classes.size(), 0.0);
    for (std::size_t c = 0; c < report.confusion.classes.size(); ++c) {
        const long long row = report.confusion.row_total(c);
        if (row == 0) continue;
        const long long wrong = row - report.confusion.counts[c][c];
        report.per_class_cer_pct[c] = 100.0 * static_cast<double>(wrong) / static_cast<double>(row);
    }
    return report;
}

namespace {

using eval_detail::FoldModel;

struct MlpFoldModel final : FoldModel {
    MlpModel model;
    int predict(std::span<const double> x) const override {
        return argmax_class(predict_mlp(model, x));
    }
};

/// Constant predictor used when the multi-class scheme is denied the
/// outlier class: all it can ever answer is the class it saw.
struct PriorFoldModel final : FoldModel {
    int fixed_class = 0;
    int predict(std::span<const double>) const override { return fixed_class; }
};

struct OneClassFoldModel final : FoldModel {
    OneClassModel model;
    int predict(std::span<const double> x) const override {
        return one_class_predict(model, x).accept ? 0 : 1;
    }
};

struct TrainData {
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;          // 0 = CR, 1 = AD
    std::vector<std::vector<double>> cr_rows;
    std::vector<std::vector<double>> ad_rows;
};

std::unique_ptr<FoldModel> train_fold_model(const ExperimentCell& cell, const TrainData& train,
                                            std::uint64_t seed,
                                            std::vector<std::string>& flags) {
    static const std::vector<std::string> kBinaryClasses = {"CR", "AD"};
    auto flag_once = [&flags](const std::string& f) {
        if (std::find(flags.begin(), flags.end(), f) == flags.end()) flags.push_back(f);
    };

    switch (cell.scheme) {
        case Scheme::MulticlassMlp: {
            const bool have_both = !train.ad_rows.empty() && cell.outliers_in_training;
            if (!have_both) {
                // Degraded variant: without the outlier class the model
                // collapses to the sole-class prior.
                auto prior = std::make_unique<PriorFoldModel>();
                prior->fixed_class = 0;
                flag_once(cell.outliers_in_training ? "multiclass_no_outliers_in_fold"
                                                    : "multiclass_degraded_without_outliers");
                return prior;
            }
            auto m = std::make_unique<MlpFoldModel>();
            m->model = train_mlp(train.rows, train.labels, kBinaryClasses, seed);
            return m;
        }
        case Scheme::OneClassMlp:
        case Scheme::OneClassBagging: {
            const OneClassBase base = cell.scheme == Scheme::OneClassMlp ? OneClassBase::Mlp
                                                                         : OneClassBase::Bagging;
            auto m = std::make_unique<OneClassFoldModel>();
            m->model = train_one_class(train.cr_rows, base, "CR", OneClassParams{}, seed);
            if (cell.outliers_in_training && !train.ad_rows.empty()) {
                refine_threshold_with_outliers(m->model, train.cr_rows, train.ad_rows);
            }
            return m;
        }
    }
    throw ConfigError("run_cell: unknown scheme");
}

}  // namespace

EvalReport run_cell(const ExperimentCell& cell, const std::vector<LabeledInstance>& instances) {
    const auto selected = select_features(instances, cell.feature_set);
    if (selected.empty()) throw ConfigError("run_cell: no instances");

    std::vector<int> binary_ids;
    binary_ids.reserve(selected.size());
    std::size_t n_cr = 0, n_ad = 0;
    for (const LabeledInstance& inst : selected) {
        const bool ad = is_ad(inst.stage);
        binary_ids.push_back(ad ? 1 : 0);
        (ad ? n_ad : n_cr) += 1;
    }
    if (n_cr == 0 || n_ad == 0) {
        throw ConfigError("run_cell: both CR and AD instances are required");
    }

    const auto fold_of =
        stratified_folds(binary_ids, 2, cell.folds, derive_seed(cell.seed, "folds"));

    std::vector<std::string> flags;
    if (n_cr < static_cast<std::size_t>(cell.folds)) flags.push_back("class_CR_fewer_than_k");
    if (n_ad < static_cast<std::size_t>(cell.folds)) flags.push_back("class_AD_fewer_than_k");

    ConfusionMatrix confusion({"CR", "AD"});
    for (int f = 0; f < cell.folds; ++f) {
        TrainData train;
        for (std::size_t i = 0; i < selected.size(); ++i) {
            if (fold_of[i] == f) continue;
            train.rows.push_back(selected[i].vector.values);
            train.labels.push_back(binary_ids[i]);
            if (binary_ids[i] == 0) {
                train.cr_rows.push_back(selected[i].vector.values);
            } else {
                train.ad_rows.push_back(selected[i].vector.values);
            }
        }
        const auto model = train_fold_model(
            cell, train, derive_seed(cell.seed, "fold" + std::to_string(f)), flags);
        for (std::size_t i = 0; i < selected.size(); ++i) {
            if (fold_of[i] != f) continue;
            const int predicted = model->predict(selected[i].vector.values);
            confusion.add(static_cast<std::size_t>(binary_ids[i]),
                          static_cast<std::size_t>(predicted));
        }
    }
    return report_from_confusion(cell, std::move(confusion), std::move(flags));
}

std::vector<LabeledInstance> synth_corpus(int n_target, int n_outlier, int dims,
                                          double separation, std::uint64_t seed) {
    if (n_target < 0 || n_outlier < 0) throw ConfigError("synth_corpus: counts must be >= 0");
    if (dims < 1) throw ConfigError("synth_corpus: dims must be >= 1");

    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(dims));
    for (int d = 0; d < dims; ++d) {
        std::string num = std::to_string(d);
        if (num.size() < 2) num.insert(num.begin(), '0');
        names.push_back("synth_" + num);
    }

    Rng rng(derive_seed(seed, "synth_corpus"));
    std::vector<LabeledInstance> out;
    out.reserve(static_cast<std::size_t>(n_target + n_outlier));
    for (int i = 0; i < n_target; ++i) {
        LabeledInstance inst;
        inst.stage = Stage::CR;
        inst.vector.source_id = "synth_cr_" + std::to_string(i);
        inst.vector.names = names;
        for (int d = 0; d < dims; ++d) inst.vector.values.push_back(rng.normal());
        out.push_back(std::move(inst));
    }
    static const Stage kAdStages[] = {Stage::ES, Stage::IS, Stage::AS};
    for (int i = 0; i < n_outlier; ++i) {
        LabeledInstance inst;
        inst.stage = kAdStages[i % 3];
        inst.vector.source_id = "synth_ad_" + std::to_string(i);
        inst.vector.names = names;
        for (int d = 0; d < dims; ++d) inst.vector.values.push_back(separation + rng.normal());
        out.push_back(std::move(inst));
    }
    return out;
}

void emit_reports(std::span<const EvalReport> reports, const std::filesystem::path& out_path) {
    if (reports.empty()) throw ContractError("emit_reports: no reports");
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw IoError("cannot create " + out_path.string());

    out << "scheme,feature_set,outliers_in_training,global_cer,acc,cer_CR,cer_AD,flags\n";
    for (const EvalReport& r : reports) {
        std::string flags;
        for (std::size_t i = 0; i < r.flags.size(); ++i) {
            if (i) flags += ';';
            flags += r.flags[i];
        }
        out << scheme_to_string(r.cell.scheme) << ','
            << feature_set_to_string(r.cell.feature_set) << ','
            << (r.cell.outliers_in_training ? "true" : "false") << ','
            << format_double(r.global_cer_pct) << ',' << format_double(r.global_acc_pct) << ','
            << format_double(r.per_class_cer_pct.at(0)) << ','
            << format_double(r.per_class_cer_pct.at(1)) << ',' << flags << '\n';
    }
    if (!out) throw IoError("short write to " + out_path.string());
}

std::vector<ExperimentCell> full_grid(int folds, std::uint64_t seed) {
    std::vector<ExperimentCell> cells;
    cells.reserve(18);
    for (Scheme scheme : all_schemes()) {
        for (FeatureSetId set : all_feature_sets()) {
            for (bool outliers : {false, true}) {
                cells.push_back(ExperimentCell{scheme, set, outliers, folds, seed});
            }
        }
    }
    return cells;
}

}  // namespace speechbio
