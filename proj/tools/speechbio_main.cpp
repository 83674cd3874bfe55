#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "speechbio/csv.hpp"
#include "speechbio/errors.hpp"
#include "speechbio/model_io.hpp"
#include "speechbio/pipeline.hpp"

namespace fs = std::filesystem;
using namespace speechbio;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct CommonFlags {
    std::string config_path;
    std::string window;
    std::string featureset;
    std::string scheme;
    std::string with_outliers;
    std::string et_mode;
    std::string et_params;
    int folds = -1;
    long long seed = -1;
};

/// Flags win over the config file.
PipelineConfig resolve_config(const CommonFlags& flags) {
    PipelineConfig config;
    if (!flags.config_path.empty()) config = load_config_file(flags.config_path);
    if (!flags.window.empty()) config.window_points = static_cast<std::size_t>(std::stoul(flags.window));
    if (!flags.featureset.empty()) config.feature_sets = {flags.featureset};
    if (!flags.scheme.empty()) config.schemes = {flags.scheme};
    if (!flags.with_outliers.empty()) {
        if (flags.with_outliers != "true" && flags.with_outliers != "false") {
            throw ConfigError("--with-outliers expects true or false");
        }
        config.with_outliers = flags.with_outliers == "true";
    }
    if (!flags.et_mode.empty()) config.et_mode = flags.et_mode;
    if (!flags.et_params.empty()) {
        config.et_params_path = flags.et_params;
        if (flags.et_mode.empty()) config.et_mode = "load";
    }
    if (flags.folds >= 0) config.folds = flags.folds;
    if (flags.seed >= 0) config.seed = static_cast<std::uint64_t>(flags.seed);
    config.validate();
    return config;
}

int cmd_extract(const std::string& manifest_path, const std::string& out_dir,
                const CommonFlags& flags) {
    const PipelineConfig config = resolve_config(flags);
    const auto manifest = parse_manifest(manifest_path);
    fs::create_directories(out_dir);

    const ExtractOutcome outcome = extract_corpus(manifest, config, std::cerr);

    std::vector<std::string> names;
    for (const auto& def : canonical_features()) names.push_back(def.name);
    write_features((fs::path(out_dir) / "features.csv").string(), outcome.instances, names);
    if (config.et_mode == "fit" && !outcome.instances.empty()) {
        save_text_file((fs::path(out_dir) / "et_params.json").string(),
                       et_params_to_json(outcome.et_params));
    }
    save_text_file((fs::path(out_dir) / "config_used.txt").string(), render_config(config));

    std::cerr << "[extract] wrote " << outcome.instances.size() << " feature rows\n";
    if (!outcome.failures.empty()) {
        std::cerr << "[extract] " << outcome.failures.size() << " file(s) failed:\n";
        for (const auto& [path, reason] : outcome.failures) {
            std::cerr << "  " << path << ": " << reason << '\n';
        }
        return kExitRuntime;
    }
    return kExitOk;
}

int cmd_experiment(const std::string& features_path, const std::string& out_dir,
                   const CommonFlags& flags) {
    const PipelineConfig config = resolve_config(flags);
    const auto instances = read_features(features_path);
    fs::create_directories(out_dir);
    save_text_file((fs::path(out_dir) / "config_used.txt").string(), render_config(config));

    const auto reports = run_experiments(instances, config, out_dir, std::cerr);
    std::cerr << "[experiment] wrote " << reports.size() << " grid rows\n";
    return kExitOk;
}

int cmd_synth(const std::string& out_path, int n_target, int n_outlier, int dims,
              double separation, long long seed) {
    const auto instances = synth_corpus(n_target, n_outlier, dims, separation,
                                        seed >= 0 ? static_cast<std::uint64_t>(seed) : 1);
    std::vector<std::string> names;
    if (!instances.empty()) names = instances.front().vector.names;
    const fs::path out(out_path);
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    write_features(out_path, instances, names);
    std::cerr << "[synth] wrote " << instances.size() << " rows to " << out_path << '\n';
    return kExitOk;
}

int cmd_report(const std::string& grid_path) {
    std::cout << render_grid_table(grid_path);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"speechbio: speech biomarker extraction and imbalanced-classification experiments"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string manifest_path, out_path, features_path, grid_path;
    int n_target = 100, n_outlier = 5, dims = 10;
    double separation = 6.0;
    long long synth_seed = 1;

    auto add_config_flags = [&flags](CLI::App* cmd) {
        cmd->add_option("--config", flags.config_path, "key=value configuration file");
        cmd->add_option("--seed", flags.seed, "experiment seed");
    };

    CLI::App* extract = app.add_subcommand("extract", "manifest -> feature CSV");
    extract->add_option("--manifest", manifest_path, "corpus manifest (path,speaker,label)")
        ->required();
    extract->add_option("--out", out_path, "output directory")->required();
    extract->add_option("--window", flags.window, "HFD window points (160|320|1280)");
    extract->add_option("--et-mode", flags.et_mode, "fit | load");
    extract->add_option("--et-params", flags.et_params, "ET reference JSON (for load)");
    add_config_flags(extract);

    CLI::App* experiment = app.add_subcommand("experiment", "feature CSV -> grid CSV + models");
    experiment->add_option("--features", features_path, "feature CSV")->required();
    experiment->add_option("--out", out_path, "output directory")->required();
    experiment->add_option("--scheme", flags.scheme,
                           "multiclass_mlp | oneclass_mlp | oneclass_bagging");
    experiment->add_option("--featureset", flags.featureset,
                           "ssf_ef | ssf_ef_et | ssf_ef_et_vhfd");
    experiment->add_option("--with-outliers", flags.with_outliers, "true | false");
    experiment->add_option("--folds", flags.folds, "cross-validation folds (default 10)");
    add_config_flags(experiment);

    CLI::App* synth = app.add_subcommand("synth", "synthetic labelled feature CSV");
    synth->add_option("--out", out_path, "output CSV path")->required();
    synth->add_option("--n-target", n_target, "CR instance count");
    synth->add_option("--n-outlier", n_outlier, "AD instance count");
    synth->add_option("--dims", dims, "feature dimensions");
    synth->add_option("--separation", separation, "AD mean shift per dimension");
    synth->add_option("--seed", synth_seed, "corpus seed");

    CLI::App* report = app.add_subcommand("report", "re-render a grid CSV as a table");
    report->add_option("--grid", grid_path, "grid CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (app.got_subcommand(extract)) return cmd_extract(manifest_path, out_path, flags);
        if (app.got_subcommand(experiment)) return cmd_experiment(features_path, out_path, flags);
        if (app.got_subcommand(synth)) {
            return cmd_synth(out_path, n_target, n_outlier, dims, separation, synth_seed);
        }
        if (app.got_subcommand(report)) return cmd_report(grid_path);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitUsage;
}
