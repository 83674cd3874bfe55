#pragma once

#include <span>
#include <vector>

#include "speechbio/linear_features.hpp"

namespace speechbio {

/// Reference statistics for the emotional-temperature score, fitted on a
/// training corpus. The score standardizes a recording's prosodic
/// dynamism against these and squashes it through a logistic; it is a
/// surrogate scalar, labelled as such in output metadata.
struct EtParams {
    double ref_mean_pitch_slope = 0.0;
    double ref_std_pitch_slope = 1.0;
    double ref_mean_energy_slope = 0.0;
    double ref_std_energy_slope = 1.0;
    double weight_pitch = 1.0;
    double weight_energy = 1.0;
    bool std_floored = false;  // a reference std collapsed and was floored
};

struct EtScore {
    double value = 0.0;  // in [0, 100]
    bool degenerate = false;
};

/// Pitch and frame-intensity tracks of one recording.
struct ProsodyTrack {
    PitchTrack pitch;
    std::vector<double> energy_db;
};

/// Mean absolute frame-to-frame f0 change over adjacent pitched pairs;
/// empty optional-like result is signalled by has_pairs = false.
struct SlopeStat {
    double value = 0.0;
    bool has_pairs = false;
};

SlopeStat mean_abs_pitch_slope(const PitchTrack& track);
SlopeStat mean_abs_energy_slope(std::span<const double> energy_db);

/// Fits reference mean/std of the per-recording slopes. Requires at least
/// two recordings and at least one with pitched content.
EtParams fit_et_reference(std::span<const ProsodyTrack> recordings);

EtScore emotional_temperature(const PitchTrack& track, std::span<const double> energy_db,
                              const EtParams& params);

}  // namespace speechbio
