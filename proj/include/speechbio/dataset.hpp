#pragma once

#include <optional>
#include <string>
#include <vector>

#include "speechbio/emotional_temperature.hpp"
#include "speechbio/fractal.hpp"
#include "speechbio/linear_features.hpp"

namespace speechbio {

enum class Family { SSF, EF, ET, VHFD };

enum class Stage { CR, ES, IS, AS };

Stage stage_from_string(const std::string& s);
std::string stage_to_string(Stage s);

/// Binary target: CR is the control class, everything else is AD.
inline bool is_ad(Stage s) { return s != Stage::CR; }
inline std::string binary_label(Stage s) { return is_ad(s) ? "AD" : "CR"; }

struct FeatureDef {
    std::string name;
    Family family;
};

/// The frozen feature ordering every file and model refers to:
/// 26 SSF + 17 EF + 1 ET + 5 VHFD = 49 columns.
const std::vector<FeatureDef>& canonical_features();
inline constexpr const char* kFeatureOrderingVersion = "speechbio-features-v1";

/// Family of a canonical feature name; nullopt for unknown (e.g.
/// synthetic placeholder) columns, which every feature-set selection keeps.
std::optional<Family> family_of(const std::string& feature_name);

struct FeatureVector {
    std::string source_id;
    std::vector<std::string> names;
    std::vector<double> values;
    std::vector<std::string> degenerate_flags;  // names computed under degeneracy conventions
};

struct LabeledInstance {
    FeatureVector vector;
    Stage stage = Stage::CR;
};

enum class FeatureSetId { SsfEf, SsfEfEt, SsfEfEtVhfd };

FeatureSetId feature_set_from_string(const std::string& s);
std::string feature_set_to_string(FeatureSetId id);
const std::vector<FeatureSetId>& all_feature_sets();

/// Everything build_vector needs for one recording. Each field maps to a
/// feature family; a missing field is reported as an assembly error naming
/// that family.
struct RecordingFeatures {
    std::optional<DurationStats> duration;
    std::optional<double> rms;
    std::optional<double> spectral_centroid_mean_hz;
    std::optional<AcousticStats> acoustic;
    std::optional<QualityStats> quality;
    std::optional<BreakStats> breaks;
    std::optional<EtScore> et;
    std::optional<VhfdSummary> vhfd;
    bool vhfd_all_degenerate = false;
};

/// Assembles the canonical 49-value vector, carrying over degeneracy flags.
FeatureVector build_vector(const std::string& source_id, const RecordingFeatures& features);

/// Restricts every instance to the requested family union; column order is
/// preserved and non-canonical columns are always kept.
std::vector<LabeledInstance> select_features(const std::vector<LabeledInstance>& instances,
                                             FeatureSetId id);

struct ManifestEntry {
    std::string wav_path;
    std::string speaker_id;
    Stage stage = Stage::CR;
};

/// Parses a `path,speaker,label` CSV. Unknown labels and duplicate paths
/// are manifest errors citing the row number; file existence is not
/// checked here.
std::vector<ManifestEntry> parse_manifest(const std::string& path);

/// Feature CSV: header = feature names + `stage_label`, one row per
/// recording, shortest-round-trip decimal values.
void write_features(const std::string& path, const std::vector<LabeledInstance>& instances,
                    const std::vector<std::string>& feature_names);
std::vector<LabeledInstance> read_features(const std::string& path);

}  // namespace speechbio
