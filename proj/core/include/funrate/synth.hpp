#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "funrate/common.hpp"
#include "funrate/design.hpp"
#include "funrate/ingest.hpp"

namespace funrate::synth {

/// Ground-truth curve families. The *Int families are integer-valued at
/// every second, so rounding the generated differentials is lossless and
/// zero-noise fits recover the truth exactly; the continuous families are
/// for calibration studies where rounding acts as extra noise.
enum class BetaFamily { ConstantInt, LinearInt, PiecewiseLinear, Spline };

enum class AlphaMode { Zero, Shared, PerTeam };

enum class NoiseModel { None, IidGaussian, RandomWalk };

struct SynthConfig {
    int n_teams = 10;
    int games_per_team = 10;
    double neutral_fraction = 0.0;
    int regulation_s = 2400;

    BetaFamily beta_family = BetaFamily::ConstantInt;
    double beta_scale = 8.0;  // points

    AlphaMode alpha_mode = AlphaMode::Zero;
    double alpha_value = 3.0;  // shared value, or per-team draw scale

    NoiseModel noise = NoiseModel::None;
    double noise_sigma = 0.0;  // per-second sigma (Iid) or step sigma (RandomWalk)

    std::uint64_t seed = 0;

    /// Redraw the schedule until this model's design is identifiable
    /// (connected and rank p-1). Unset: connectivity only.
    std::optional<design::ModelKind> require_identifiable;
};

struct GroundTruth {
    design::ModelSpec spec;
    Eigen::MatrixXd theta;  // p x (T+1), teams then advantage rows
};

struct Season {
    std::vector<ingest::GameRecord> games;
    GroundTruth truth;
};

/// Deterministic per seed. Differential curves are X theta*(t) plus noise,
/// rounded to integers and split into monotone score paths (up-steps score
/// for the home side, down-steps for the away side).
Season generate_season(const SynthConfig& cfg);

void write_ground_truth_json(std::ostream& out, const GroundTruth& truth);

}  // namespace funrate::synth
