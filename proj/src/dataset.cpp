#include "speechbio/dataset.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <unordered_map>

#include "speechbio/csv.hpp"
#include "speechbio/errors.hpp"

namespace speechbio {

Stage stage_from_string(const std::string& s) {
    if (s == "CR") return Stage::CR;
    if (s == "ES") return Stage::ES;
    if (s == "IS") return Stage::IS;
    if (s == "AS") return Stage::AS;
    throw ConfigError("unknown stage label '" + s + "' (expected CR, ES, IS or AS)");
}

std::string stage_to_string(Stage s) {
    switch (s) {
        case Stage::CR: return "CR";
        case Stage::ES: return "ES";
        case Stage::IS: return "IS";
        case Stage::AS: return "AS";
    }
    return "CR";
}

namespace {

std::vector<FeatureDef> make_canonical() {
    std::vector<FeatureDef> defs;
    defs.reserve(49);
    auto add = [&defs](std::string name, Family f) { defs.push_back({std::move(name), f}); };

    // SSF: segment-duration histograms and stats plus the frame-level
    // energy/centroid aggregates (26 values).
    for (int i = 0; i < 10; ++i) add("ssf_dur_voiced_hist_" + std::string(i < 10 ? "0" : "") + std::to_string(i), Family::SSF);
    for (int i = 0; i < 10; ++i) add("ssf_dur_unvoiced_hist_" + std::string(i < 10 ? "0" : "") + std::to_string(i), Family::SSF);
    add("ssf_dur_voiced_mean_s", Family::SSF);
    add("ssf_dur_unvoiced_mean_s", Family::SSF);
    add("ssf_dur_voiced_var_s2", Family::SSF);
    add("ssf_dur_unvoiced_var_s2", Family::SSF);
    add("ssf_energy_rms", Family::SSF);
    add("ssf_spectral_centroid_mean_hz", Family::SSF);

    // EF: acoustic (10) + voice quality (5) + breaks (2).
    add("ef_pitch_mean_hz", Family::EF);
    add("ef_pitch_std_hz", Family::EF);
    add("ef_pitch_max_hz", Family::EF);
    add("ef_pitch_min_hz", Family::EF);
    add("ef_intensity_mean_db", Family::EF);
    add("ef_intensity_std_db", Family::EF);
    add("ef_intensity_max_db", Family::EF);
    add("ef_intensity_min_db", Family::EF);
    add("ef_period_mean_s", Family::EF);
    add("ef_period_std_s", Family::EF);
    add("ef_jitter_local_pct", Family::EF);
    add("ef_shimmer_local_pct", Family::EF);
    add("ef_nhr", Family::EF);
    add("ef_hnr_db", Family::EF);
    add("ef_mean_autocorr", Family::EF);
    add("ef_frac_voiceless_frames", Family::EF);
    add("ef_degree_voice_breaks_pct", Family::EF);

    add("et_emotional_temperature", Family::ET);

    add("vhfd_mean", Family::VHFD);
    add("vhfd_max", Family::VHFD);
    add("vhfd_min", Family::VHFD);
    add("vhfd_var", Family::VHFD);
    add("vhfd_std", Family::VHFD);
    return defs;
}

const std::unordered_map<std::string, std::size_t>& canonical_index() {
    static const std::unordered_map<std::string, std::size_t> index = [] {
        std::unordered_map<std::string, std::size_t> m;
        const auto& defs = canonical_features();
        for (std::size_t i = 0; i < defs.size(); ++i) m[defs[i].name] = i;
        return m;
    }();
    return index;
}

}  // namespace

const std::vector<FeatureDef>& canonical_features() {
    static const std::vector<FeatureDef> defs = make_canonical();
    return defs;
}

std::optional<Family> family_of(const std::string& feature_name) {
    const auto& index = canonical_index();
    auto it = index.find(feature_name);
    if (it == index.end()) return std::nullopt;
    return canonical_features()[it->second].family;
}

FeatureSetId feature_set_from_string(const std::string& s) {
    if (s == "ssf_ef") return FeatureSetId::SsfEf;
    if (s == "ssf_ef_et") return FeatureSetId::SsfEfEt;
    if (s == "ssf_ef_et_vhfd") return FeatureSetId::SsfEfEtVhfd;
    throw ConfigError("unknown feature set '" + s +
                      "' (expected ssf_ef, ssf_ef_et or ssf_ef_et_vhfd)");
}

std::string feature_set_to_string(FeatureSetId id) {
    switch (id) {
        case FeatureSetId::SsfEf: return "ssf_ef";
        case FeatureSetId::SsfEfEt: return "ssf_ef_et";
        case FeatureSetId::SsfEfEtVhfd: return "ssf_ef_et_vhfd";
    }
    return "ssf_ef";
}

const std::vector<FeatureSetId>& all_feature_sets() {
    static const std::vector<FeatureSetId> sets = {FeatureSetId::SsfEf, FeatureSetId::SsfEfEt,
                                                   FeatureSetId::SsfEfEtVhfd};
    return sets;
}

namespace {

bool family_selected(Family f, FeatureSetId id) {
    switch (f) {
        case Family::SSF:
        case Family::EF: return true;
        case Family::ET: return id != FeatureSetId::SsfEf;
        case Family::VHFD: return id == FeatureSetId::SsfEfEtVhfd;
    }
    return false;
}

}  // namespace

FeatureVector build_vector(const std::string& source_id, const RecordingFeatures& features) {
    auto require = [](bool present, const char* family) {
        if (!present) {
            throw ContractError(std::string("build_vector: missing inputs for family ") + family);
        }
    };
    require(features.duration.has_value() && features.rms.has_value() &&
                features.spectral_centroid_mean_hz.has_value(),
            "SSF");
    require(features.acoustic.has_value() && features.quality.has_value() &&
                features.breaks.has_value(),
            "EF");
    require(features.et.has_value(), "ET");
    require(features.vhfd.has_value(), "VHFD");

    const DurationStats& dur = *features.duration;
    const AcousticStats& ac = *features.acoustic;
    const QualityStats& q = *features.quality;
    const BreakStats& br = *features.breaks;
    const VhfdSummary& vh = *features.vhfd;

    FeatureVector vec;
    vec.source_id = source_id;
    vec.names.reserve(canonical_features().size());
    for (const FeatureDef& def : canonical_features()) vec.names.push_back(def.name);

    vec.values.reserve(vec.names.size());
    for (int i = 0; i < 10; ++i) vec.values.push_back(dur.voiced_hist[static_cast<std::size_t>(i)]);
    for (int i = 0; i < 10; ++i) vec.values.push_back(dur.unvoiced_hist[static_cast<std::size_t>(i)]);
    vec.values.push_back(dur.mean_voiced_s);
    vec.values.push_back(dur.mean_unvoiced_s);
    vec.values.push_back(dur.var_voiced_s2);
    vec.values.push_back(dur.var_unvoiced_s2);
    vec.values.push_back(*features.rms);
    vec.values.push_back(*features.spectral_centroid_mean_hz);

    vec.values.push_back(ac.pitch_mean_hz);
    vec.values.push_back(ac.pitch_std_hz);
    vec.values.push_back(ac.pitch_max_hz);
    vec.values.push_back(ac.pitch_min_hz);
    vec.values.push_back(ac.intensity_mean_db);
    vec.values.push_back(ac.intensity_std_db);
    vec.values.push_back(ac.intensity_max_db);
    vec.values.push_back(ac.intensity_min_db);
    vec.values.push_back(ac.period_mean_s);
    vec.values.push_back(ac.period_std_s);
    vec.values.push_back(q.jitter_local_pct);
    vec.values.push_back(q.shimmer_local_pct);
    vec.values.push_back(q.nhr);
    vec.values.push_back(q.hnr_db);
    vec.values.push_back(q.mean_autocorr);
    vec.values.push_back(br.frac_voiceless_frames);
    vec.values.push_back(br.degree_voice_breaks_pct);

    vec.values.push_back(features.et->value);

    vec.values.push_back(vh.mean);
    vec.values.push_back(vh.max);
    vec.values.push_back(vh.min);
    vec.values.push_back(vh.variance);
    vec.values.push_back(vh.std_dev);

    for (std::size_t i = 0; i < vec.values.size(); ++i) {
        if (!std::isfinite(vec.values[i])) {
            throw ContractError("build_vector: non-finite value for " + vec.names[i]);
        }
    }

    if (ac.no_voiced_frames) {
        for (const char* n : {"ef_pitch_mean_hz", "ef_pitch_std_hz", "ef_pitch_max_hz",
                              "ef_pitch_min_hz", "ef_period_mean_s", "ef_period_std_s"}) {
            vec.degenerate_flags.emplace_back(n);
        }
    }
    if (q.degenerate) {
        for (const char* n : {"ef_jitter_local_pct", "ef_shimmer_local_pct", "ef_nhr",
                              "ef_hnr_db", "ef_mean_autocorr"}) {
            vec.degenerate_flags.emplace_back(n);
        }
    }
    if (features.et->degenerate) vec.degenerate_flags.emplace_back("et_emotional_temperature");
    if (features.vhfd_all_degenerate) {
        for (const char* n : {"vhfd_mean", "vhfd_max", "vhfd_min", "vhfd_var", "vhfd_std"}) {
            vec.degenerate_flags.emplace_back(n);
        }
    }
    return vec;
}

std::vector<LabeledInstance> select_features(const std::vector<LabeledInstance>& instances,
                                             FeatureSetId id) {
    std::vector<LabeledInstance> out;
    out.reserve(instances.size());
    for (const LabeledInstance& inst : instances) {
        LabeledInstance sel;
        sel.stage = inst.stage;
        sel.vector.source_id = inst.vector.source_id;
        sel.vector.degenerate_flags = inst.vector.degenerate_flags;
        for (std::size_t i = 0; i < inst.vector.names.size(); ++i) {
            const auto fam = family_of(inst.vector.names[i]);
            if (!fam.has_value() || family_selected(*fam, id)) {
                sel.vector.names.push_back(inst.vector.names[i]);
                sel.vector.values.push_back(inst.vector.values[i]);
            }
        }
        out.push_back(std::move(sel));
    }
    return out;
}

std::vector<ManifestEntry> parse_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest " + path);

    std::string line;
    if (!std::getline(in, line)) throw ManifestError("manifest is empty: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "path,speaker,label") {
        throw ManifestError("manifest header must be 'path,speaker,label', got '" + line + "'");
    }

    std::vector<ManifestEntry> entries;
    std::set<std::string> seen_paths;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 3) {
            throw ManifestError("manifest row " + std::to_string(row) + ": expected 3 fields, got " +
                                std::to_string(fields.size()));
        }
        ManifestEntry entry;
        entry.wav_path = fields[0];
        entry.speaker_id = fields[1];
        try {
            entry.stage = stage_from_string(fields[2]);
        } catch (const ConfigError& e) {
            throw ManifestError("manifest row " + std::to_string(row) + ": " + e.what());
        }
        if (!seen_paths.insert(entry.wav_path).second) {
            throw ManifestError("manifest row " + std::to_string(row) + ": duplicate path '" +
                                entry.wav_path + "'");
        }
        entries.push_back(std::move(entry));
    }
    return entries;
}

void write_features(const std::string& path, const std::vector<LabeledInstance>& instances,
                    const std::vector<std::string>& feature_names) {
    std::ofstream out(path, std::ios::binary);  // binary: LF line endings everywhere
    if (!out) throw IoError("cannot create " + path);

    std::vector<std::string> header = feature_names;
    header.emplace_back("stage_label");
    out << join_csv(header) << '\n';

    for (const LabeledInstance& inst : instances) {
        if (inst.vector.names != feature_names) {
            throw SchemaError("write_features: instance '" + inst.vector.source_id +
                              "' does not match the shared column list");
        }
        std::vector<std::string> fields;
        fields.reserve(feature_names.size() + 1);
        for (double v : inst.vector.values) fields.push_back(format_double(v));
        fields.push_back(stage_to_string(inst.stage));
        out << join_csv(fields) << '\n';
    }
    if (!out) throw IoError("short write to " + path);
}

std::vector<LabeledInstance> read_features(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open features " + path);

    std::string line;
    if (!std::getline(in, line)) throw SchemaError("feature file is empty: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto header = split_csv_line(line);
    if (header.empty() || header.back() != "stage_label") {
        throw SchemaError("feature header must end with 'stage_label'");
    }
    header.pop_back();

    // Canonical columns must appear in canonical relative order.
    std::set<std::string> seen;
    std::size_t last_canonical = 0;
    bool any_canonical = false;
    const auto& defs = canonical_features();
    for (const std::string& name : header) {
        if (!seen.insert(name).second) throw SchemaError("duplicate column '" + name + "'");
        for (std::size_t i = 0; i < defs.size(); ++i) {
            if (defs[i].name == name) {
                if (any_canonical && i < last_canonical) {
                    throw SchemaError("column '" + name +
                                      "' out of canonical order (" + kFeatureOrderingVersion + ")");
                }
                last_canonical = i;
                any_canonical = true;
                break;
            }
        }
    }

    std::vector<LabeledInstance> instances;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size() + 1) {
            throw SchemaError("feature row " + std::to_string(row) + ": expected " +
                              std::to_string(header.size() + 1) + " fields, got " +
                              std::to_string(fields.size()));
        }
        LabeledInstance inst;
        inst.vector.source_id = "row" + std::to_string(row - 1);
        inst.vector.names = header;
        inst.vector.values.reserve(header.size());
        for (std::size_t i = 0; i < header.size(); ++i) {
            inst.vector.values.push_back(parse_double(fields[i]));
        }
        try {
            inst.stage = stage_from_string(fields.back());
        } catch (const ConfigError& e) {
            throw SchemaError("feature row " + std::to_string(row) + ": " + e.what());
        }
        instances.push_back(std::move(inst));
    }
    return instances;
}

}  // namespace speechbio
