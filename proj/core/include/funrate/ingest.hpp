#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "funrate/common.hpp"

namespace funrate::ingest {

/// One entry of a game's scoring summary: both teams' cumulative scores at
/// an elapsed-seconds timestamp.
struct ScoringEvent {
    int time_s = 0;
    int home_score = 0;
    int away_score = 0;

    friend bool operator==(const ScoringEvent&, const ScoringEvent&) = default;
};

/// One game's metadata plus its ordered scoring events.
struct GameRecord {
    std::string game_id;
    std::string date;  // ISO-8601, kept opaque
    std::string home_team;
    std::string away_team;
    bool neutral_site = false;
    int final_home = 0;
    int final_away = 0;
    int regulation_length_s = 2400;
    std::vector<ScoringEvent> events;

    friend bool operator==(const GameRecord&, const GameRecord&) = default;
};

/// Home-minus-away point differential at every second 0..T of regulation.
struct DifferentialTrack {
    std::string game_id;
    Eigen::VectorXi d;  // length regulation_length_s + 1
};

enum class IssueKind {
    MalformedRow,
    DuplicateGameId,
    DecreasingScore,
    BadValue,
    IrreparableFinal,
    OvertimeImbalance,
    SwingExceeded,
};

const char* issue_kind_name(IssueKind k);

/// A validation finding. `fatal` means the game was excluded (or, for row
/// level problems, never materialized).
struct Issue {
    IssueKind kind;
    std::string game_id;
    std::string file;
    int line = 0;
    std::string field;
    std::string detail;
    bool fatal = true;
};

struct ParseOptions {
    /// Keep games with decreasing event scores instead of excluding them.
    bool force = false;
    /// Warn when the differential moves more than this at one timestamp.
    /// 0 disables the check (six-point plays are legitimate).
    int max_swing = 0;
};

struct ParseResult {
    std::vector<GameRecord> games;
    std::vector<Issue> issues;

    bool ok() const {
        for (const auto& i : issues)
            if (i.fatal) return false;
        return true;
    }
};

/// Parse the JSONL game format: one object per line with fields game_id,
/// date, home, away, neutral, final_home, final_away, regulation_s,
/// events: [[time_s, home_score, away_score], ...].
ParseResult parse_games_jsonl(std::istream& in, const std::string& filename = "<stream>",
                              const ParseOptions& opts = {});

/// Parse the CSV pair: games.csv carries the metadata columns
/// game_id,date,home,away,neutral,final_home,final_away,regulation_s and
/// events.csv carries game_id,time_s,home_score,away_score.
ParseResult parse_games_csv(std::istream& games_csv, std::istream& events_csv,
                            const std::string& games_name = "games.csv",
                            const std::string& events_name = "events.csv",
                            const ParseOptions& opts = {});

/// Load from a path. *.jsonl dispatches to the JSONL parser; a games.csv
/// path (or a directory containing one) loads the CSV pair with a sibling
/// events.csv.
ParseResult load_games(const std::filesystem::path& path, const ParseOptions& opts = {});

void write_games_jsonl(std::ostream& out, std::span<const GameRecord> games);
void write_games_csv(std::ostream& games_csv, std::ostream& events_csv,
                     std::span<const GameRecord> games);

/// One applied repair, reported as {game_id, repair_kind, detail}.
struct Repair {
    std::string game_id;
    std::string repair_kind;
    std::string detail;
};

struct RepairReport {
    std::vector<Repair> repairs;
    std::vector<Issue> warnings;
};

void write_repair_report_jsonl(std::ostream& out, const RepairReport& report);

/// If the last event's scores differ from the reported final, append an
/// event carrying the reported final at regulation end (or at the max event
/// time if events run past it) and log the repair. Throws ParseError-like
/// Error when the summary overshoots the final (scores cannot decrease).
GameRecord reconcile_final(const GameRecord& game, RepairReport& report);

/// Drop events after regulation. If anything was dropped and the
/// regulation-end differential is not zero, emit an OvertimeImbalance
/// warning (overtime implies a regulation tie).
GameRecord truncate_overtime(const GameRecord& game, RepairReport& report);

/// Step-function resampling to the per-second grid: d[t] is home-minus-away
/// of the last event with time_s <= t; 0 before the first event; the last
/// of several events sharing a timestamp wins.
DifferentialTrack resample(const GameRecord& game);

/// Average per-team score at every second: sum of both teams' resampled
/// scores over all games divided by 2m. Used by the PinAverageScore
/// constraint.
Eigen::VectorXd mean_score_curve(std::span<const GameRecord> games);

/// reconcile + truncate + resample over a whole season. Games that cannot
/// be repaired are dropped and recorded as fatal issues in the report
/// warnings.
struct PreparedSeason {
    std::vector<GameRecord> games;
    std::vector<DifferentialTrack> tracks;
    RepairReport report;
};

PreparedSeason prepare(std::vector<GameRecord> games);

}  // namespace funrate::ingest
