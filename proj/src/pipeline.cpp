#include "speechbio/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "speechbio/audio.hpp"
#include "speechbio/csv.hpp"
#include "speechbio/errors.hpp"
#include "speechbio/linear_features.hpp"
#include "speechbio/model_io.hpp"

namespace speechbio {

using nlohmann::json;

void PipelineConfig::validate() const {
    if (!is_supported_hfd_window(window_points)) {
        throw ConfigError("window_points must be one of 160, 320, 1280");
    }
    if (k_max < 2 || static_cast<std::size_t>(k_max) >= window_points / 2) {
        throw ConfigError("k_max must satisfy 2 <= k_max < window_points/2");
    }
    if (folds < 2) throw ConfigError("folds must be >= 2");
    if (et_mode != "fit" && et_mode != "load") {
        throw ConfigError("et_mode must be 'fit' or 'load'");
    }
    if (et_mode == "load" && et_params_path.empty()) {
        throw ConfigError("et_mode=load requires et_params_path");
    }
    for (const std::string& s : schemes) scheme_from_string(s);
    for (const std::string& s : feature_sets) feature_set_from_string(s);
    vad_framing(vad, 16000);  // parameter sanity; rate itself is irrelevant here
    if (pitch.f_min_hz >= pitch.f_max_hz) throw ConfigError("pitch range: f_min must be below f_max");
}

namespace {

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

bool parse_bool(const std::string& value) {
    if (value == "true") return true;
    if (value == "false") return false;
    throw ConfigError("expected true or false, got '" + value + "'");
}

}  // namespace

PipelineConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);

    PipelineConfig config;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        // trim
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t");
        line = line.substr(first, last - first + 1);

        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
        }
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);
        try {
            if (key == "window_points") config.window_points = static_cast<std::size_t>(std::stoul(value));
            else if (key == "hop_points") config.hop_points = static_cast<std::size_t>(std::stoul(value));
            else if (key == "k_max") config.k_max = std::stoi(value);
            else if (key == "folds") config.folds = std::stoi(value);
            else if (key == "seed") config.seed = std::stoull(value);
            else if (key == "vad.frame_ms") config.vad.frame_ms = std::stod(value);
            else if (key == "vad.hop_ms") config.vad.hop_ms = std::stod(value);
            else if (key == "vad.energy_factor") config.vad.energy_factor = std::stod(value);
            else if (key == "vad.zcr_max") config.vad.zcr_max = std::stod(value);
            else if (key == "vad.min_segment_ms") config.vad.min_segment_ms = std::stod(value);
            else if (key == "pitch.f_min_hz") config.pitch.f_min_hz = std::stod(value);
            else if (key == "pitch.f_max_hz") config.pitch.f_max_hz = std::stod(value);
            else if (key == "pitch.voicing_threshold") config.pitch.voicing_threshold = std::stod(value);
            else if (key == "et_mode") config.et_mode = value;
            else if (key == "et_params_path") config.et_params_path = value;
            else if (key == "scheme") config.schemes = split_list(value);
            else if (key == "featureset") config.feature_sets = split_list(value);
            else if (key == "with_outliers") config.with_outliers = parse_bool(value);
            else throw ConfigError("unknown config key '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw ConfigError("config line " + std::to_string(line_no) + ": bad value for " + key);
        } catch (const std::out_of_range&) {
            throw ConfigError("config line " + std::to_string(line_no) + ": value out of range for " + key);
        }
    }
    return config;
}

std::string render_config(const PipelineConfig& config) {
    std::ostringstream out;
    out << "window_points=" << config.window_points << '\n';
    out << "hop_points=" << config.hop_points << '\n';
    out << "k_max=" << config.k_max << '\n';
    out << "folds=" << config.folds << '\n';
    out << "seed=" << config.seed << '\n';
    out << "vad.frame_ms=" << format_double(config.vad.frame_ms) << '\n';
    out << "vad.hop_ms=" << format_double(config.vad.hop_ms) << '\n';
    out << "vad.energy_factor=" << format_double(config.vad.energy_factor) << '\n';
    out << "vad.zcr_max=" << format_double(config.vad.zcr_max) << '\n';
    out << "vad.min_segment_ms=" << format_double(config.vad.min_segment_ms) << '\n';
    out << "pitch.f_min_hz=" << format_double(config.pitch.f_min_hz) << '\n';
    out << "pitch.f_max_hz=" << format_double(config.pitch.f_max_hz) << '\n';
    out << "pitch.voicing_threshold=" << format_double(config.pitch.voicing_threshold) << '\n';
    out << "et_mode=" << config.et_mode << '\n';
    if (!config.et_params_path.empty()) out << "et_params_path=" << config.et_params_path << '\n';
    if (!config.schemes.empty()) {
        out << "scheme=";
        for (std::size_t i = 0; i < config.schemes.size(); ++i) {
            if (i) out << ',';
            out << config.schemes[i];
        }
        out << '\n';
    }
    if (!config.feature_sets.empty()) {
        out << "featureset=";
        for (std::size_t i = 0; i < config.feature_sets.size(); ++i) {
            if (i) out << ',';
            out << config.feature_sets[i];
        }
        out << '\n';
    }
    if (config.with_outliers.has_value()) {
        out << "with_outliers=" << (*config.with_outliers ? "true" : "false") << '\n';
    }
    return out.str();
}

std::string et_params_to_json(const EtParams& params) {
    return json{{"type", "et_params"},
                {"note", "surrogate emotional-temperature reference"},
                {"ref_mean_pitch_slope", params.ref_mean_pitch_slope},
                {"ref_std_pitch_slope", params.ref_std_pitch_slope},
                {"ref_mean_energy_slope", params.ref_mean_energy_slope},
                {"ref_std_energy_slope", params.ref_std_energy_slope},
                {"weight_pitch", params.weight_pitch},
                {"weight_energy", params.weight_energy},
                {"std_floored", params.std_floored}}
        .dump(2);
}

EtParams et_params_from_json(const std::string& text) {
    const json j = json::parse(text);
    if (j.value("type", "") != "et_params") throw SchemaError("not an ET parameter file");
    EtParams p;
    p.ref_mean_pitch_slope = j.at("ref_mean_pitch_slope").get<double>();
    p.ref_std_pitch_slope = j.at("ref_std_pitch_slope").get<double>();
    p.ref_mean_energy_slope = j.at("ref_mean_energy_slope").get<double>();
    p.ref_std_energy_slope = j.at("ref_std_energy_slope").get<double>();
    p.weight_pitch = j.at("weight_pitch").get<double>();
    p.weight_energy = j.at("weight_energy").get<double>();
    p.std_floored = j.at("std_floored").get<bool>();
    if (p.ref_std_pitch_slope <= 0.0 || p.ref_std_energy_slope <= 0.0) {
        throw SchemaError("ET reference stds must be positive");
    }
    return p;
}

RecordingAnalysis analyze_recording(const AudioClip& clip, const PipelineConfig& config) {
    RecordingAnalysis out;

    const auto flags = classify_frames(clip, config.vad);
    const auto segments = segments_from_flags(flags, config.vad.hop_ms, config.vad.min_segment_ms);
    out.features.duration = duration_features(segments);

    const Framing framing = vad_framing(config.vad, clip.sample_rate_hz);
    out.features.rms = rms_amplitude(clip.samples);
    out.features.spectral_centroid_mean_hz = mean_spectral_centroid(clip, framing);

    out.prosody.pitch = pitch_track(clip, flags, config.vad, config.pitch);
    out.prosody.energy_db = intensity_db(frame_energies(clip, framing));

    out.features.acoustic = acoustic_features(clip, out.prosody.pitch, config.vad);
    out.features.quality = quality_features(out.prosody.pitch, clip, config.vad);
    out.features.breaks = break_features(out.prosody.pitch, segments);

    HfdParams hfd;
    hfd.k_max = config.k_max;
    hfd.window_points = config.window_points;
    hfd.hop_points = config.hop_points;
    const HfdSeries series = windowed_hfd(clip, hfd);
    out.features.vhfd = vhfd_summary(series);
    out.features.vhfd_all_degenerate =
        std::all_of(series.degenerate.begin(), series.degenerate.end(), [](bool b) { return b; });
    return out;
}

ExtractOutcome extract_corpus(const std::vector<ManifestEntry>& manifest,
                              const PipelineConfig& config, std::ostream& log) {
    ExtractOutcome outcome;

    struct Analyzed {
        const ManifestEntry* entry;
        RecordingAnalysis analysis;
    };
    std::vector<Analyzed> analyzed;
    analyzed.reserve(manifest.size());

    for (std::size_t i = 0; i < manifest.size(); ++i) {
        const ManifestEntry& entry = manifest[i];
        log << "[extract] (" << i + 1 << "/" << manifest.size() << ") " << entry.wav_path << '\n';
        try {
            const AudioClip clip = read_wav_file(entry.wav_path);
            analyzed.push_back(Analyzed{&entry, analyze_recording(clip, config)});
        } catch (const Error& e) {
            log << "[extract] FAILED " << entry.wav_path << ": " << e.what() << '\n';
            outcome.failures.emplace_back(entry.wav_path, e.what());
        }
    }

    if (analyzed.empty()) return outcome;

    if (config.et_mode == "load") {
        outcome.et_params = et_params_from_json(load_text_file(config.et_params_path));
    } else {
        std::vector<ProsodyTrack> tracks;
        tracks.reserve(analyzed.size());
        for (const Analyzed& a : analyzed) tracks.push_back(a.analysis.prosody);
        outcome.et_params = fit_et_reference(tracks);
    }

    for (Analyzed& a : analyzed) {
        RecordingFeatures features = a.analysis.features;
        features.et = emotional_temperature(a.analysis.prosody.pitch, a.analysis.prosody.energy_db,
                                            outcome.et_params);
        LabeledInstance inst;
        inst.vector = build_vector(a.entry->wav_path, features);
        inst.stage = a.entry->stage;
        outcome.instances.push_back(std::move(inst));
    }
    return outcome;
}

std::vector<ExperimentCell> configured_grid(const PipelineConfig& config) {
    std::vector<ExperimentCell> cells;
    for (const ExperimentCell& cell : full_grid(config.folds, config.seed)) {
        if (!config.schemes.empty()) {
            const std::string name = scheme_to_string(cell.scheme);
            if (std::find(config.schemes.begin(), config.schemes.end(), name) ==
                config.schemes.end()) {
                continue;
            }
        }
        if (!config.feature_sets.empty()) {
            const std::string name = feature_set_to_string(cell.feature_set);
            if (std::find(config.feature_sets.begin(), config.feature_sets.end(), name) ==
                config.feature_sets.end()) {
                continue;
            }
        }
        if (config.with_outliers.has_value() &&
            cell.outliers_in_training != *config.with_outliers) {
            continue;
        }
        cells.push_back(cell);
    }
    return cells;
}

namespace {

std::string cell_model_filename(const ExperimentCell& cell) {
    return "model_" + scheme_to_string(cell.scheme) + "_" +
           feature_set_to_string(cell.feature_set) + "_" +
           (cell.outliers_in_training ? "with_outliers" : "no_outliers") + ".json";
}

/// Final model on the full table with the same data policy as the CV run.
std::string train_cell_model_json(const ExperimentCell& cell,
                                  const std::vector<LabeledInstance>& instances) {
    const auto selected = select_features(instances, cell.feature_set);
    std::vector<std::vector<double>> rows, cr_rows, ad_rows;
    std::vector<int> labels;
    for (const LabeledInstance& inst : selected) {
        rows.push_back(inst.vector.values);
        labels.push_back(is_ad(inst.stage) ? 1 : 0);
        (is_ad(inst.stage) ? ad_rows : cr_rows).push_back(inst.vector.values);
    }
    const std::uint64_t seed = derive_seed(cell.seed, "final_model");

    if (cell.scheme == Scheme::MulticlassMlp) {
        if (!cell.outliers_in_training || ad_rows.empty()) {
            return json{{"type", "prior"},
                        {"feature_ordering", kFeatureOrderingVersion},
                        {"predicted_class", "CR"},
                        {"note", "multi-class scheme without outlier training data"}}
                .dump(2);
        }
        return mlp_to_json(train_mlp(rows, labels, {"CR", "AD"}, seed));
    }
    const OneClassBase base =
        cell.scheme == Scheme::OneClassMlp ? OneClassBase::Mlp : OneClassBase::Bagging;
    OneClassModel model = train_one_class(cr_rows, base, "CR", OneClassParams{}, seed);
    if (cell.outliers_in_training && !ad_rows.empty()) {
        refine_threshold_with_outliers(model, cr_rows, ad_rows);
    }
    return one_class_to_json(model);
}

}  // namespace

std::vector<EvalReport> run_experiments(const std::vector<LabeledInstance>& instances,
                                        const PipelineConfig& config,
                                        const std::filesystem::path& out_dir, std::ostream& log) {
    const auto cells = configured_grid(config);
    if (cells.empty()) throw ConfigError("experiment filters select no grid cells");

    std::vector<EvalReport> reports;
    std::vector<std::string> failed;
    for (const ExperimentCell& cell : cells) {
        const std::string label = scheme_to_string(cell.scheme) + "/" +
                                  feature_set_to_string(cell.feature_set) +
                                  (cell.outliers_in_training ? "/with_outliers" : "/no_outliers");
        try {
            log << "[experiment] " << label << '\n';
            reports.push_back(run_cell(cell, instances));
            save_text_file((out_dir / cell_model_filename(cell)).string(),
                           train_cell_model_json(cell, instances));
        } catch (const Error& e) {
            log << "[experiment] FAILED " << label << ": " << e.what() << '\n';
            failed.push_back(label + ": " + e.what());
        }
    }

    if (!reports.empty()) emit_reports(reports, out_dir / "grid.csv");
    if (!failed.empty()) {
        throw Error(std::to_string(failed.size()) + " experiment cell(s) failed; first: " +
                    failed.front());
    }
    return reports;
}

std::string render_grid_table(const std::string& grid_csv_path) {
    std::ifstream in(grid_csv_path);
    if (!in) throw IoError("cannot open grid " + grid_csv_path);

    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        rows.push_back(split_csv_line(line));
    }
    if (rows.empty()) throw SchemaError("grid file is empty");

    std::vector<std::size_t> widths;
    for (const auto& row : rows) {
        if (widths.size() < row.size()) widths.resize(row.size(), 0);
        for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
    }
    std::ostringstream out;
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << row[c];
            if (c + 1 < row.size()) out << std::string(widths[c] - row[c].size() + 2, ' ');
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace speechbio
