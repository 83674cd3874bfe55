#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "speechbio/dataset.hpp"
#include "speechbio/evaluation.hpp"
#include "speechbio/fractal.hpp"
#include "speechbio/vad.hpp"

namespace speechbio {

/// Resolved run configuration: file values overridden by flags, then
/// validated. The resolved form is copied into the output directory so a
/// run can be reproduced from its artifacts.
struct PipelineConfig {
    std::size_t window_points = 320;  // one of 160, 320, 1280
    std::size_t hop_points = 0;       // 0: half the window
    int k_max = 10;
    VadParams vad;
    PitchParams pitch;
    std::string et_mode = "fit";  // fit | load
    std::string et_params_path;
    std::vector<std::string> schemes;       // empty: all three
    std::vector<std::string> feature_sets;  // empty: all three
    std::optional<bool> with_outliers;      // unset: both modes
    int folds = 10;
    std::uint64_t seed = 1;

    void validate() const;
};

PipelineConfig load_config_file(const std::string& path);
std::string render_config(const PipelineConfig& config);

std::string et_params_to_json(const EtParams& params);
EtParams et_params_from_json(const std::string& text);

struct ExtractOutcome {
    std::vector<LabeledInstance> instances;
    std::vector<std::pair<std::string, std::string>> failures;  // path, reason
    EtParams et_params;
};

/// Decodes every manifest entry and computes its canonical feature vector.
/// Per-file failures are collected, not fatal; progress goes to `log`.
ExtractOutcome extract_corpus(const std::vector<ManifestEntry>& manifest,
                              const PipelineConfig& config, std::ostream& log);

/// Feature extraction for a single clip, without the ET score (which needs
/// corpus-level reference statistics).
struct RecordingAnalysis {
    RecordingFeatures features;  // et left empty
    ProsodyTrack prosody;
};
RecordingAnalysis analyze_recording(const AudioClip& clip, const PipelineConfig& config);

/// Cells selected by the config filters, in fixed grid order.
std::vector<ExperimentCell> configured_grid(const PipelineConfig& config);

/// Runs the configured grid over a feature table; writes grid.csv and one
/// serialized model per cell into out_dir.
std::vector<EvalReport> run_experiments(const std::vector<LabeledInstance>& instances,
                                        const PipelineConfig& config,
                                        const std::filesystem::path& out_dir, std::ostream& log);

/// Renders a grid CSV as an aligned text table.
std::string render_grid_table(const std::string& grid_csv_path);

}  // namespace speechbio
