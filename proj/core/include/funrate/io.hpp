#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "funrate/common.hpp"
#include "funrate/ratings.hpp"
#include "funrate/solver.hpp"

namespace funrate::io {

/// Shortest round-trip decimal rendering of a double.
std::string format_double(double v);

/// "second,value" rows with a header.
void write_curve_csv(std::ostream& out, const CurveSeries& curve);
CurveSeries read_curve_csv(std::istream& in, const std::string& name = {});

/// {"name":..., "units":..., "values":[...]}.
void write_curve_json(std::ostream& out, const CurveSeries& curve);

/// "second,name1,name2,..." for plotting several aligned curves.
void write_curves_csv(std::ostream& out, const std::vector<CurveSeries>& curves);

/// Rankings table in the shape of the published tables:
/// team,scalar_rating,rank,end_of_game_rank.
void write_rankings_csv(std::ostream& out, const std::vector<ratings::RankEntry>& main,
                        const std::vector<ratings::RankEntry>& end_of_game);

/// team,scalar_sos,rank.
void write_sos_csv(std::ostream& out, const std::vector<ratings::RankEntry>& entries);

/// A fit directory: ratings.csv (teams x seconds), alpha.csv when the model
/// has advantage curves, and fit.json (model, constraint, rank, dof, SSE
/// curve, covariance diagonal).
void save_rating_set(const std::filesystem::path& dir, const solver::RatingSet& ratings);
solver::RatingSet load_rating_set(const std::filesystem::path& dir);

/// FNV-1a 64 digest of a file's bytes, hex-encoded; provenance only.
std::string file_digest_hex(const std::filesystem::path& path);

/// Writes `<target>.meta.json` recording how an output was produced.
/// Deterministic: no timestamps.
struct Provenance {
    std::string command;
    std::vector<std::pair<std::string, std::string>> inputs;  // path, digest
    std::map<std::string, std::string> extra;
};

void write_provenance(const std::filesystem::path& target, const Provenance& prov);

}  // namespace funrate::io
