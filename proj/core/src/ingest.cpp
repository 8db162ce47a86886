#include "funrate/ingest.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace funrate::ingest {

namespace {

using ordered_json = nlohmann::ordered_json;

bool events_sorted(const std::vector<ScoringEvent>& events) {
    for (size_t i = 1; i < events.size(); ++i)
        if (events[i].time_s < events[i - 1].time_s) return false;
    return true;
}

// Returns the index of the first component-wise decrease, or -1.
int first_decrease(const std::vector<ScoringEvent>& events) {
    for (size_t i = 1; i < events.size(); ++i) {
        if (events[i].home_score < events[i - 1].home_score ||
            events[i].away_score < events[i - 1].away_score)
            return static_cast<int>(i);
    }
    return -1;
}

// Shared validation for both input formats. Returns true if the game is
// admitted to the result.
bool validate_game(const GameRecord& g, const std::string& file, int line,
                   const ParseOptions& opts, std::vector<Issue>& issues) {
    if (g.game_id.empty()) {
        issues.push_back({IssueKind::BadValue, g.game_id, file, line, "game_id", "empty game_id", true});
        return false;
    }
    if (g.home_team.empty() || g.away_team.empty() || g.home_team == g.away_team) {
        issues.push_back({IssueKind::BadValue, g.game_id, file, line, "home/away",
                          "home and away must be distinct non-empty team ids", true});
        return false;
    }
    if (g.regulation_length_s <= 0) {
        issues.push_back({IssueKind::BadValue, g.game_id, file, line, "regulation_s",
                          "regulation length must be positive", true});
        return false;
    }
    if (g.final_home < 0 || g.final_away < 0) {
        issues.push_back({IssueKind::BadValue, g.game_id, file, line, "final",
                          "final scores must be non-negative", true});
        return false;
    }
    for (const auto& e : g.events) {
        if (e.time_s < 0 || e.home_score < 0 || e.away_score < 0) {
            issues.push_back({IssueKind::BadValue, g.game_id, file, line, "events",
                              "event times and scores must be non-negative", true});
            return false;
        }
    }
    if (!events_sorted(g.events)) {
        issues.push_back({IssueKind::BadValue, g.game_id, file, line, "events",
                          "events must be sorted by time_s ascending", true});
        return false;
    }
    if (int idx = first_decrease(g.events); idx >= 0) {
        Issue is{IssueKind::DecreasingScore, g.game_id, file, line, "events",
                 "score decreases at event index " + std::to_string(idx), !opts.force};
        issues.push_back(is);
        return opts.force;
    }
    if (opts.max_swing > 0) {
        // net differential change per distinct timestamp, last event winning
        int prev_d = 0;
        for (size_t i = 0; i < g.events.size(); ++i) {
            if (i + 1 < g.events.size() && g.events[i + 1].time_s == g.events[i].time_s) continue;
            const int d = g.events[i].home_score - g.events[i].away_score;
            if (std::abs(d - prev_d) > opts.max_swing)
                issues.push_back({IssueKind::SwingExceeded, g.game_id, file, line, "events",
                                  "differential swings by " + std::to_string(std::abs(d - prev_d)) +
                                      " at t=" + std::to_string(g.events[i].time_s),
                                  false});
            prev_d = d;
        }
    }
    return true;
}

int require_int(const ordered_json& j, const char* key, const std::string& file, int line) {
    if (!j.contains(key) || !j[key].is_number_integer())
        throw ParseError(file, line, key, "missing or non-integer");
    return j[key].get<int>();
}

std::string require_str(const ordered_json& j, const char* key, const std::string& file, int line) {
    if (!j.contains(key) || !j[key].is_string())
        throw ParseError(file, line, key, "missing or non-string");
    return j[key].get<std::string>();
}

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

int parse_int_field(const std::string& s, const std::string& file, int line, const char* field) {
    try {
        size_t pos = 0;
        int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ParseError(file, line, field, "not an integer: '" + s + "'");
    }
}

// Per-second cumulative scores under the step-function rule.
void step_scores(const GameRecord& g, Eigen::VectorXi& home, Eigen::VectorXi& away) {
    const int T = g.regulation_length_s;
    home.setZero(T + 1);
    away.setZero(T + 1);
    int h = 0, a = 0;
    size_t next = 0;
    for (int t = 0; t <= T; ++t) {
        while (next < g.events.size() && g.events[next].time_s <= t) {
            if (g.events[next].time_s >= 0) {
                h = g.events[next].home_score;
                a = g.events[next].away_score;
            }
            ++next;
        }
        home[t] = h;
        away[t] = a;
    }
}

}  // namespace

const char* issue_kind_name(IssueKind k) {
    switch (k) {
        case IssueKind::MalformedRow: return "malformed_row";
        case IssueKind::DuplicateGameId: return "duplicate_game_id";
        case IssueKind::DecreasingScore: return "decreasing_score";
        case IssueKind::BadValue: return "bad_value";
        case IssueKind::IrreparableFinal: return "irreparable_final";
        case IssueKind::OvertimeImbalance: return "overtime_imbalance";
        case IssueKind::SwingExceeded: return "swing_exceeded";
    }
    return "unknown";
}

ParseResult parse_games_jsonl(std::istream& in, const std::string& filename,
                              const ParseOptions& opts) {
    ParseResult result;
    std::unordered_set<std::string> seen;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        GameRecord g;
        try {
            ordered_json j = ordered_json::parse(line, nullptr, true);
            if (!j.is_object()) throw ParseError(filename, lineno, "<row>", "not a JSON object");
            g.game_id = require_str(j, "game_id", filename, lineno);
            g.date = require_str(j, "date", filename, lineno);
            g.home_team = require_str(j, "home", filename, lineno);
            g.away_team = require_str(j, "away", filename, lineno);
            if (!j.contains("neutral") || !j["neutral"].is_boolean())
                throw ParseError(filename, lineno, "neutral", "missing or non-boolean");
            g.neutral_site = j["neutral"].get<bool>();
            g.final_home = require_int(j, "final_home", filename, lineno);
            g.final_away = require_int(j, "final_away", filename, lineno);
            g.regulation_length_s = require_int(j, "regulation_s", filename, lineno);
            if (!j.contains("events") || !j["events"].is_array())
                throw ParseError(filename, lineno, "events", "missing or non-array");
            for (const auto& ev : j["events"]) {
                if (!ev.is_array() || ev.size() != 3 || !ev[0].is_number_integer() ||
                    !ev[1].is_number_integer() || !ev[2].is_number_integer())
                    throw ParseError(filename, lineno, "events",
                                     "each event must be [time_s, home_score, away_score]");
                g.events.push_back({ev[0].get<int>(), ev[1].get<int>(), ev[2].get<int>()});
            }
        } catch (const ParseError& e) {
            result.issues.push_back(
                {IssueKind::MalformedRow, g.game_id, e.file, e.line, e.field, e.what(), true});
            continue;
        } catch (const nlohmann::json::exception& e) {
            result.issues.push_back(
                {IssueKind::MalformedRow, "", filename, lineno, "<row>", e.what(), true});
            continue;
        }
        if (!seen.insert(g.game_id).second) {
            result.issues.push_back({IssueKind::DuplicateGameId, g.game_id, filename, lineno,
                                     "game_id", "duplicate game_id", true});
            continue;
        }
        if (validate_game(g, filename, lineno, opts, result.issues))
            result.games.push_back(std::move(g));
    }
    return result;
}

ParseResult parse_games_csv(std::istream& games_csv, std::istream& events_csv,
                            const std::string& games_name, const std::string& events_name,
                            const ParseOptions& opts) {
    ParseResult result;
    std::vector<GameRecord> games;
    std::unordered_map<std::string, size_t> index;
    std::unordered_map<std::string, int> game_line;

    std::string line;
    int lineno = 0;
    bool header = true;
    while (std::getline(games_csv, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (header) {
            header = false;
            continue;
        }
        auto cols = split_csv_row(line);
        if (cols.size() != 8) {
            result.issues.push_back({IssueKind::MalformedRow, "", games_name, lineno, "<row>",
                                     "expected 8 columns, got " + std::to_string(cols.size()),
                                     true});
            continue;
        }
        try {
            GameRecord g;
            g.game_id = cols[0];
            g.date = cols[1];
            g.home_team = cols[2];
            g.away_team = cols[3];
            if (cols[4] != "true" && cols[4] != "false")
                throw ParseError(games_name, lineno, "neutral", "expected true/false");
            g.neutral_site = cols[4] == "true";
            g.final_home = parse_int_field(cols[5], games_name, lineno, "final_home");
            g.final_away = parse_int_field(cols[6], games_name, lineno, "final_away");
            g.regulation_length_s = parse_int_field(cols[7], games_name, lineno, "regulation_s");
            if (index.count(g.game_id)) {
                result.issues.push_back({IssueKind::DuplicateGameId, g.game_id, games_name, lineno,
                                         "game_id", "duplicate game_id", true});
                continue;
            }
            index[g.game_id] = games.size();
            game_line[g.game_id] = lineno;
            games.push_back(std::move(g));
        } catch (const ParseError& e) {
            result.issues.push_back(
                {IssueKind::MalformedRow, cols.empty() ? "" : cols[0], e.file, e.line, e.field,
                 e.what(), true});
        }
    }

    lineno = 0;
    header = true;
    while (std::getline(events_csv, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (header) {
            header = false;
            continue;
        }
        auto cols = split_csv_row(line);
        if (cols.size() != 4) {
            result.issues.push_back({IssueKind::MalformedRow, "", events_name, lineno, "<row>",
                                     "expected 4 columns, got " + std::to_string(cols.size()),
                                     true});
            continue;
        }
        auto it = index.find(cols[0]);
        if (it == index.end()) {
            result.issues.push_back({IssueKind::MalformedRow, cols[0], events_name, lineno,
                                     "game_id", "event references unknown game_id", true});
            continue;
        }
        try {
            ScoringEvent e;
            e.time_s = parse_int_field(cols[1], events_name, lineno, "time_s");
            e.home_score = parse_int_field(cols[2], events_name, lineno, "home_score");
            e.away_score = parse_int_field(cols[3], events_name, lineno, "away_score");
            games[it->second].events.push_back(e);
        } catch (const ParseError& e) {
            result.issues.push_back({IssueKind::MalformedRow, cols[0], e.file, e.line, e.field,
                                     e.what(), true});
        }
    }

    for (auto& g : games) {
        if (validate_game(g, games_name, game_line[g.game_id], opts, result.issues))
            result.games.push_back(std::move(g));
    }
    return result;
}

ParseResult load_games(const std::filesystem::path& path, const ParseOptions& opts) {
    namespace fs = std::filesystem;
    fs::path games_path = path;
    if (fs::is_directory(path)) games_path = path / "games.csv";

    if (games_path.filename() == "games.csv") {
        fs::path events_path = games_path.parent_path() / "events.csv";
        std::ifstream gf(games_path), ef(events_path);
        if (!gf) throw Error("cannot open " + games_path.string());
        if (!ef) throw Error("cannot open " + events_path.string());
        return parse_games_csv(gf, ef, games_path.string(), events_path.string(), opts);
    }
    std::ifstream f(games_path);
    if (!f) throw Error("cannot open " + games_path.string());
    return parse_games_jsonl(f, games_path.string(), opts);
}

void write_games_jsonl(std::ostream& out, std::span<const GameRecord> games) {
    for (const auto& g : games) {
        ordered_json j;
        j["game_id"] = g.game_id;
        j["date"] = g.date;
        j["home"] = g.home_team;
        j["away"] = g.away_team;
        j["neutral"] = g.neutral_site;
        j["final_home"] = g.final_home;
        j["final_away"] = g.final_away;
        j["regulation_s"] = g.regulation_length_s;
        auto events = ordered_json::array();
        for (const auto& e : g.events)
            events.push_back(ordered_json::array({e.time_s, e.home_score, e.away_score}));
        j["events"] = std::move(events);
        out << j.dump() << '\n';
    }
}

void write_games_csv(std::ostream& games_csv, std::ostream& events_csv,
                     std::span<const GameRecord> games) {
    games_csv << "game_id,date,home,away,neutral,final_home,final_away,regulation_s\n";
    events_csv << "game_id,time_s,home_score,away_score\n";
    for (const auto& g : games) {
        games_csv << g.game_id << ',' << g.date << ',' << g.home_team << ',' << g.away_team << ','
                  << (g.neutral_site ? "true" : "false") << ',' << g.final_home << ','
                  << g.final_away << ',' << g.regulation_length_s << '\n';
        for (const auto& e : g.events)
            events_csv << g.game_id << ',' << e.time_s << ',' << e.home_score << ','
                       << e.away_score << '\n';
    }
}

void write_repair_report_jsonl(std::ostream& out, const RepairReport& report) {
    for (const auto& r : report.repairs) {
        ordered_json j;
        j["game_id"] = r.game_id;
        j["repair_kind"] = r.repair_kind;
        j["detail"] = r.detail;
        out << j.dump() << '\n';
    }
    for (const auto& w : report.warnings) {
        ordered_json j;
        j["game_id"] = w.game_id;
        j["repair_kind"] = std::string("warning:") + issue_kind_name(w.kind);
        j["detail"] = w.detail;
        out << j.dump() << '\n';
    }
}

GameRecord reconcile_final(const GameRecord& game, RepairReport& report) {
    const int last_home = game.events.empty() ? 0 : game.events.back().home_score;
    const int last_away = game.events.empty() ? 0 : game.events.back().away_score;
    if (last_home == game.final_home && last_away == game.final_away) return game;
    if (last_home > game.final_home || last_away > game.final_away)
        throw Error("game " + game.game_id + ": scoring summary (" + std::to_string(last_home) +
                    "," + std::to_string(last_away) + ") exceeds reported final (" +
                    std::to_string(game.final_home) + "," + std::to_string(game.final_away) + ")");

    GameRecord repaired = game;
    const int last_time = game.events.empty() ? 0 : game.events.back().time_s;
    const int at = std::max(game.regulation_length_s, last_time);
    repaired.events.push_back({at, game.final_home, game.final_away});
    report.repairs.push_back({game.game_id, "missing_final_appended",
                              "appended reported final (" + std::to_string(game.final_home) + "," +
                                  std::to_string(game.final_away) + ") at t=" +
                                  std::to_string(at)});
    return repaired;
}

GameRecord truncate_overtime(const GameRecord& game, RepairReport& report) {
    const int T = game.regulation_length_s;
    GameRecord out = game;
    auto cut = std::partition_point(out.events.begin(), out.events.end(),
                                    [T](const ScoringEvent& e) { return e.time_s <= T; });
    const auto dropped = static_cast<int>(std::distance(cut, out.events.end()));
    if (dropped == 0) return out;
    out.events.erase(cut, out.events.end());

    int d_end = 0;
    if (!out.events.empty())
        d_end = out.events.back().home_score - out.events.back().away_score;
    report.repairs.push_back({game.game_id, "overtime_truncated",
                              std::to_string(dropped) + " events after t=" + std::to_string(T)});
    if (d_end != 0) {
        report.warnings.push_back({IssueKind::OvertimeImbalance, game.game_id, "", 0, "events",
                                   "overtime events dropped but regulation ends " +
                                       std::to_string(d_end) + " apart (expected a tie)",
                                   false});
    }
    return out;
}

DifferentialTrack resample(const GameRecord& game) {
    Eigen::VectorXi home, away;
    step_scores(game, home, away);
    DifferentialTrack track;
    track.game_id = game.game_id;
    track.d = home - away;
    return track;
}

Eigen::VectorXd mean_score_curve(std::span<const GameRecord> games) {
    if (games.empty()) throw Error("mean_score_curve: no games");
    const int T = games.front().regulation_length_s;
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(T + 1);
    Eigen::VectorXi home, away;
    for (const auto& g : games) {
        if (g.regulation_length_s != T)
            throw DimensionError("mean_score_curve: games disagree on regulation length");
        step_scores(g, home, away);
        sum += (home + away).cast<double>();
    }
    return sum / (2.0 * static_cast<double>(games.size()));
}

PreparedSeason prepare(std::vector<GameRecord> games) {
    PreparedSeason season;
    season.games.reserve(games.size());
    season.tracks.reserve(games.size());
    for (auto& g : games) {
        try {
            GameRecord fixed = reconcile_final(g, season.report);
            fixed = truncate_overtime(fixed, season.report);
            season.tracks.push_back(resample(fixed));
            season.games.push_back(std::move(fixed));
        } catch (const Error& e) {
            season.report.warnings.push_back(
                {IssueKind::IrreparableFinal, g.game_id, "", 0, "final", e.what(), true});
        }
    }
    return season;
}

}  // namespace funrate::ingest
