#include "speechbio/emotional_temperature.hpp"

#include <cmath>

#include "speechbio/errors.hpp"
#include "speechbio/mathutil.hpp"

namespace speechbio {

namespace {
constexpr double kStdFloor = 1e-6;
}

SlopeStat mean_abs_pitch_slope(const PitchTrack& track) {
    SlopeStat stat;
    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 1; i < track.frames(); ++i) {
        if (track.f0_hz[i] > 0.0 && track.f0_hz[i - 1] > 0.0) {
            sum += std::abs(track.f0_hz[i] - track.f0_hz[i - 1]);
            ++pairs;
        }
    }
    if (pairs > 0) {
        stat.value = sum / static_cast<double>(pairs);
        stat.has_pairs = true;
    }
    return stat;
}

SlopeStat mean_abs_energy_slope(std::span<const double> energy_db) {
    SlopeStat stat;
    if (energy_db.size() < 2) return stat;
    double sum = 0.0;
    for (std::size_t i = 1; i < energy_db.size(); ++i) {
        sum += std::abs(energy_db[i] - energy_db[i - 1]);
    }
    stat.value = sum / static_cast<double>(energy_db.size() - 1);
    stat.has_pairs = true;
    return stat;
}

EtParams fit_et_reference(std::span<const ProsodyTrack> recordings) {
    if (recordings.size() < 2) {
        throw TrainingError("fit_et_reference: need at least two recordings");
    }
    std::vector<double> pitch_slopes;
    std::vector<double> energy_slopes;
    for (const ProsodyTrack& rec : recordings) {
        const SlopeStat p = mean_abs_pitch_slope(rec.pitch);
        if (p.has_pairs) pitch_slopes.push_back(p.value);
        const SlopeStat e = mean_abs_energy_slope(rec.energy_db);
        if (e.has_pairs) energy_slopes.push_back(e.value);
    }
    if (pitch_slopes.empty()) {
        throw TrainingError("fit_et_reference: no pitched content in any recording");
    }

    EtParams params;
    params.ref_mean_pitch_slope = mean(pitch_slopes);
    params.ref_std_pitch_slope = std::sqrt(population_variance(pitch_slopes));
    params.ref_mean_energy_slope = mean(energy_slopes);
    params.ref_std_energy_slope = std::sqrt(population_variance(energy_slopes));
    if (params.ref_std_pitch_slope < kStdFloor) {
        params.ref_std_pitch_slope = kStdFloor;
        params.std_floored = true;
    }
    if (params.ref_std_energy_slope < kStdFloor) {
        params.ref_std_energy_slope = kStdFloor;
        params.std_floored = true;
    }
    return params;
}

EtScore emotional_temperature(const PitchTrack& track, std::span<const double> energy_db,
                              const EtParams& params) {
    EtScore score;
    const SlopeStat p = mean_abs_pitch_slope(track);
    if (!p.has_pairs) {
        score.degenerate = true;  // no pitched content: coldest response
        return score;
    }
    const SlopeStat e = mean_abs_energy_slope(energy_db);
    const double z_p = (p.value - params.ref_mean_pitch_slope) / params.ref_std_pitch_slope;
    const double z_e =
        e.has_pairs ? (e.value - params.ref_mean_energy_slope) / params.ref_std_energy_slope : 0.0;
    score.value = 100.0 * logistic(params.weight_pitch * z_p + params.weight_energy * z_e);
    return score;
}

}  // namespace speechbio
