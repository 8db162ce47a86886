// funrate CLI: validate, fit, anova, rank, sos, predict, smooth, synth.
// Every command is a pure function of its inputs and flags; file outputs
// carry a .meta.json provenance sidecar and re-runs are byte-identical.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "funrate/design.hpp"
#include "funrate/inference.hpp"
#include "funrate/ingest.hpp"
#include "funrate/io.hpp"
#include "funrate/ratings.hpp"
#include "funrate/solver.hpp"
#include "funrate/stats.hpp"
#include "funrate/synth.hpp"

namespace fs = std::filesystem;
using namespace funrate;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitIdentifiability = 3;
constexpr int kExitUsage = 4;

std::string join_args(int argc, char** argv) {
    std::string s;
    for (int i = 0; i < argc; ++i) {
        if (i) s += ' ';
        s += argv[i];
    }
    return s;
}

std::string digest_input(const std::string& path) {
    fs::path p(path);
    if (fs::is_directory(p)) p /= "games.csv";
    return io::file_digest_hex(p);
}

// Marks a partially written output tree if a command dies mid-write.
class OutputGuard {
  public:
    explicit OutputGuard(fs::path target) : target_(std::move(target)) {}
    ~OutputGuard() {
        if (!armed_) return;
        std::ofstream f(target_.string() + ".FAILED");
        f << "incomplete output: the producing command did not finish\n";
    }
    void arm() { armed_ = true; }
    void disarm() { armed_ = false; }

  private:
    fs::path target_;
    bool armed_ = false;
};

design::ModelKind parse_model(const std::string& s) {
    if (s == "1" || s == "basic") return design::ModelKind::Basic;
    if (s == "2" || s == "constant" || s == "constant_hca") return design::ModelKind::ConstantHca;
    if (s == "3" || s == "individual" || s == "individual_hca")
        return design::ModelKind::IndividualHca;
    throw CLI::ValidationError("--model", "expected 1|2|3 (basic|constant|individual)");
}

ratings::WeightSpec parse_weight(const std::string& s) {
    if (s.empty() || s == "uniform") return ratings::WeightSpec::uniform();
    if (s == "linear") return ratings::WeightSpec::linear_increasing();
    if (s == "end") return ratings::WeightSpec::end_of_game();
    if (s.starts_with("file:")) {
        std::ifstream f(s.substr(5));
        if (!f) throw Error("cannot open weight table " + s.substr(5));
        std::vector<std::pair<double, double>> table;
        std::string line;
        while (std::getline(f, line)) {
            if (line.empty()) continue;
            std::stringstream row(line);
            std::string a, b;
            if (!std::getline(row, a, ',') || !std::getline(row, b, ',')) continue;
            try {
                table.emplace_back(std::stod(a), std::stod(b));
            } catch (const std::exception&) {
                continue;  // header or comment row
            }
        }
        if (table.empty()) throw Error("weight table " + s.substr(5) + " has no numeric rows");
        return ratings::WeightSpec::custom(std::move(table));
    }
    throw CLI::ValidationError("--weight", "expected uniform|linear|end|file:PATH");
}

// Loads and prepares a season; exits with a validation failure when fatal
// issues remain.
ingest::PreparedSeason load_prepared(const std::string& path, bool force, int max_swing = 0) {
    ingest::ParseOptions opts;
    opts.force = force;
    opts.max_swing = max_swing;
    auto parsed = ingest::load_games(path, opts);
    for (const auto& issue : parsed.issues) {
        std::cerr << (issue.fatal ? "error: " : "warning: ") << issue.file;
        if (issue.line > 0) std::cerr << ':' << issue.line;
        std::cerr << ": [" << ingest::issue_kind_name(issue.kind) << "] " << issue.detail << '\n';
    }
    if (!parsed.ok()) throw Error("input failed validation; see report above");

    auto season = ingest::prepare(std::move(parsed.games));
    bool fatal = false;
    for (const auto& w : season.report.warnings) {
        std::cerr << (w.fatal ? "error: " : "warning: ") << "game " << w.game_id << ": ["
                  << ingest::issue_kind_name(w.kind) << "] " << w.detail << '\n';
        fatal = fatal || w.fatal;
    }
    if (fatal) throw Error("season contains irreparable games");
    return season;
}

int common_grid_seconds(std::span<const ingest::GameRecord> games) {
    const int T = games.front().regulation_length_s;
    for (const auto& g : games)
        if (g.regulation_length_s != T)
            throw Error("games disagree on regulation length; fit needs a single grid");
    return T;
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream f(path);
    if (!f) throw Error("cannot write " + path.string());
    body(f);
}

struct CommonState {
    std::string command_line;
};

int cmd_validate(const CommonState& state, const std::string& games_path, bool force,
                 int max_swing, const std::string& report_path) {
    ingest::ParseOptions opts;
    opts.force = force;
    opts.max_swing = max_swing;
    auto parsed = ingest::load_games(games_path, opts);
    auto season = ingest::prepare(std::move(parsed.games));

    int fatal = 0;
    for (const auto& i : parsed.issues) fatal += i.fatal ? 1 : 0;
    for (const auto& w : season.report.warnings) fatal += w.fatal ? 1 : 0;

    if (!report_path.empty()) {
        write_file(report_path, [&](std::ostream& out) {
            ingest::RepairReport merged = season.report;
            for (const auto& i : parsed.issues)
                merged.warnings.push_back(i);
            ingest::write_repair_report_jsonl(out, merged);
        });
        io::Provenance prov{state.command_line,
                            {{games_path, digest_input(games_path)}},
                            {}};
        io::write_provenance(report_path, prov);
    }

    std::cout << "games=" << season.games.size() << " repairs=" << season.report.repairs.size()
              << " warnings=" << season.report.warnings.size() << " errors=" << fatal << '\n';
    for (const auto& i : parsed.issues)
        std::cout << "issue: " << i.file << ':' << i.line << " ["
                  << ingest::issue_kind_name(i.kind) << "] game=" << i.game_id << " "
                  << i.detail << '\n';
    for (const auto& r : season.report.repairs)
        std::cout << "repair: game=" << r.game_id << " " << r.repair_kind << " " << r.detail
                  << '\n';
    for (const auto& w : season.report.warnings)
        std::cout << (w.fatal ? "error: " : "warning: ") << "game=" << w.game_id << " ["
                  << ingest::issue_kind_name(w.kind) << "] " << w.detail << '\n';

    return fatal == 0 ? kExitOk : kExitValidation;
}

int cmd_fit(const CommonState& state, const std::string& games_path,
            const std::string& model_str, const std::string& constraint_str,
            const std::string& out_dir, int threads, int block, bool per_component, bool force,
            const std::string& dump_design_path) {
    auto season = load_prepared(games_path, force);
    if (season.games.empty()) throw Error("no games to fit");
    common_grid_seconds(season.games);

    const auto kind = parse_model(model_str);
    const auto X = design::build_design(season.games, kind);
    if (!dump_design_path.empty())
        write_file(dump_design_path, [&](std::ostream& out) { X.write_matrix_market(out); });
    const auto D = solver::stack_tracks(X, season.tracks);

    solver::Constraint constraint;
    if (constraint_str.empty() || constraint_str == "sumzero") {
        constraint = solver::Constraint::sum_zero();
    } else if (constraint_str.starts_with("pin:")) {
        const std::string rest = constraint_str.substr(4);
        const auto eq = rest.find('=');
        if (eq == std::string::npos)
            constraint = solver::Constraint::pin_team(rest);
        else
            constraint = solver::Constraint::pin_team(rest.substr(0, eq),
                                                      std::stod(rest.substr(eq + 1)));
    } else if (constraint_str == "avgscore") {
        constraint = solver::Constraint::pin_average_score(ingest::mean_score_curve(season.games));
    } else {
        throw CLI::ValidationError("--constraint", "expected sumzero|pin:TEAM[=VALUE]|avgscore");
    }

    solver::FitOptions opts;
    opts.threads = threads;
    opts.block_cols = block;
    opts.allow_disconnected = per_component;

    OutputGuard guard(out_dir);
    guard.arm();
    const auto fit = solver::fit(X, D, constraint, opts);
    io::save_rating_set(out_dir, fit);
    io::Provenance prov{state.command_line,
                        {{games_path, digest_input(games_path)}},
                        {{"model", design::model_kind_name(kind)},
                         {"constraint", solver::constraint_kind_name(constraint.kind)}}};
    io::write_provenance(fs::path(out_dir) / "fit", prov);
    guard.disarm();

    std::cout << "model=" << design::model_kind_name(kind) << " teams=" << X.spec.n_teams
              << " games=" << X.m << " rank=" << fit.rank << " dof=" << fit.dof_resid
              << " total_sse=" << io::format_double(fit.sse.sum()) << '\n';
    if (!fit.unidentified.empty()) {
        std::cout << "unidentified:";
        for (const auto& u : fit.unidentified) std::cout << ' ' << u;
        std::cout << '\n';
    }
    std::cerr << "factor_s=" << fit.timers.factor_seconds
              << " solve_s=" << fit.timers.solve_seconds
              << " rhs_columns=" << fit.timers.rhs_columns << '\n';
    return kExitOk;
}

int cmd_anova(const CommonState& state, const std::string& fit_r_dir,
              const std::string& fit_f_dir, double threshold, const std::string& out_dir) {
    const auto reduced = io::load_rating_set(fit_r_dir);
    const auto full = io::load_rating_set(fit_f_dir);
    const auto result = inference::anova_nested(reduced, full);
    const auto summary = inference::summarize(result, threshold);

    OutputGuard guard(out_dir);
    guard.arm();
    write_file(fs::path(out_dir) / "p_curve.csv",
               [&](std::ostream& out) { io::write_curve_csv(out, result.p_curve); });
    write_file(fs::path(out_dir) / "f_curve.csv",
               [&](std::ostream& out) { io::write_curve_csv(out, result.f_curve); });
    write_file(fs::path(out_dir) / "p_curve.json",
               [&](std::ostream& out) { io::write_curve_json(out, result.p_curve); });
    write_file(fs::path(out_dir) / "anova.json", [&](std::ostream& out) {
        out << "{\n"
            << "  \"df_num\": " << summary.df_num << ",\n"
            << "  \"df_den\": " << summary.df_den << ",\n"
            << "  \"threshold\": " << io::format_double(summary.threshold) << ",\n"
            << "  \"frac_below_threshold\": " << io::format_double(summary.frac_below_threshold)
            << ",\n"
            << "  \"min_p\": " << io::format_double(summary.min_p) << ",\n"
            << "  \"argmin_p\": " << summary.argmin_p << ",\n"
            << "  \"first_below\": " << summary.first_below << ",\n"
            << "  \"last_below\": " << summary.last_below << ",\n"
            << "  \"degenerate_seconds\": " << summary.degenerate_count << "\n"
            << "}\n";
    });
    io::Provenance prov{state.command_line,
                        {{fit_r_dir, io::file_digest_hex(fs::path(fit_r_dir) / "fit.json")},
                         {fit_f_dir, io::file_digest_hex(fs::path(fit_f_dir) / "fit.json")}},
                        {}};
    io::write_provenance(fs::path(out_dir) / "anova", prov);
    guard.disarm();

    std::cout << "df_num=" << summary.df_num << " df_den=" << summary.df_den
              << " frac_below_" << io::format_double(threshold) << "="
              << io::format_double(summary.frac_below_threshold)
              << " min_p=" << io::format_double(summary.min_p) << "@" << summary.argmin_p
              << " first_below=" << summary.first_below << " last_below=" << summary.last_below
              << '\n';
    return kExitOk;
}

int cmd_rank(const CommonState& state, const std::string& fit_dir, const std::string& weight_str,
             const std::string& out_path) {
    const auto fit = io::load_rating_set(fit_dir);
    const auto weight = parse_weight(weight_str);
    const auto main_ranks = ratings::rank_teams(fit, weight);
    const auto eog_ranks = ratings::rank_teams(fit, ratings::WeightSpec::end_of_game());

    write_file(out_path,
               [&](std::ostream& out) { io::write_rankings_csv(out, main_ranks, eog_ranks); });
    io::Provenance prov{state.command_line,
                        {{fit_dir, io::file_digest_hex(fs::path(fit_dir) / "fit.json")}},
                        {}};
    io::write_provenance(out_path, prov);

    std::cout << "ranked " << main_ranks.size() << " teams -> " << out_path << '\n';
    return kExitOk;
}

int cmd_sos(const CommonState& state, const std::string& fit_dir, const std::string& games_path,
            const std::string& weight_str, const std::string& out_path, const std::string& team,
            const std::string& curves_path, bool force) {
    const auto fit = io::load_rating_set(fit_dir);
    auto season = load_prepared(games_path, force);
    common_grid_seconds(season.games);

    const auto X = design::build_design(season.games, fit.spec.kind);
    if (X.spec.teams != fit.spec.teams)
        throw Error("games do not match the fit's team set");
    const auto D = solver::stack_tracks(X, season.tracks);
    const auto weight = parse_weight(weight_str);

    std::vector<ratings::RankEntry> entries;
    entries.reserve(fit.spec.n_teams);
    for (const auto& t : fit.spec.teams) {
        const auto dec = ratings::decompose(fit, X, D, t);
        entries.push_back({t, ratings::scalar_rating(dec.sos, weight), 0, false});
    }
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        if (a.scalar != b.scalar) return a.scalar > b.scalar;
        return a.team < b.team;
    });
    for (size_t i = 0; i < entries.size(); ++i) entries[i].rank = static_cast<int>(i) + 1;

    write_file(out_path, [&](std::ostream& out) { io::write_sos_csv(out, entries); });
    io::Provenance prov{state.command_line,
                        {{fit_dir, io::file_digest_hex(fs::path(fit_dir) / "fit.json")},
                         {games_path, digest_input(games_path)}},
                        {}};
    io::write_provenance(out_path, prov);

    if (!team.empty() && !curves_path.empty()) {
        const auto dec = ratings::decompose(fit, X, D, team);
        CurveSeries rating{"rating:" + team, fit.team_curve(team).transpose(), "points"};
        write_file(curves_path, [&](std::ostream& out) {
            io::write_curves_csv(out, {rating, dec.avg_diff, dec.sos});
        });
        io::write_provenance(curves_path, prov);
    }

    std::cout << "wrote strength of schedule for " << entries.size() << " teams -> " << out_path
              << '\n';
    return kExitOk;
}

int cmd_predict(const CommonState& state, const std::string& fit_dir, const std::string& team_a,
                const std::string& team_b, const std::string& venue_str,
                const std::string& out_path) {
    const auto fit = io::load_rating_set(fit_dir);
    ratings::Venue venue;
    if (venue_str.empty() || venue_str == "neutral")
        venue = ratings::Venue::Neutral;
    else if (venue_str == "home")
        venue = ratings::Venue::HomeOfFirst;
    else
        throw CLI::ValidationError("--venue", "expected neutral|home");

    const auto curve = ratings::predict(fit, team_a, team_b, venue);
    write_file(out_path, [&](std::ostream& out) { io::write_curve_csv(out, curve); });
    io::Provenance prov{state.command_line,
                        {{fit_dir, io::file_digest_hex(fs::path(fit_dir) / "fit.json")}},
                        {}};
    io::write_provenance(out_path, prov);

    std::cout << curve.name << " end_of_game=" << io::format_double(curve.values.tail(1)[0])
              << " -> " << out_path << '\n';
    return kExitOk;
}

int cmd_smooth(const CommonState& state, const std::string& curve_path, int order, int knots,
               const std::string& out_path) {
    std::ifstream f(curve_path);
    if (!f) throw Error("cannot open " + curve_path);
    const auto curve = io::read_curve_csv(f);
    const auto smoothed = ratings::smooth(curve, order, knots);

    write_file(out_path, [&](std::ostream& out) { io::write_curve_csv(out, smoothed); });
    io::Provenance prov{state.command_line,
                        {{curve_path, io::file_digest_hex(curve_path)}},
                        {{"order", std::to_string(order)},
                         {"knot_spacing_s", std::to_string(knots)}}};
    io::write_provenance(out_path, prov);

    std::cout << "smoothed " << curve.grid_len() << " samples -> " << out_path << '\n';
    return kExitOk;
}

int cmd_synth(const CommonState& state, const synth::SynthConfig& cfg,
              const std::string& out_path, const std::string& truth_path) {
    const auto season = synth::generate_season(cfg);

    write_file(out_path,
               [&](std::ostream& out) { ingest::write_games_jsonl(out, season.games); });
    io::Provenance prov{state.command_line, {}, {{"seed", std::to_string(cfg.seed)}}};
    io::write_provenance(out_path, prov);
    if (!truth_path.empty()) {
        write_file(truth_path, [&](std::ostream& out) {
            synth::write_ground_truth_json(out, season.truth);
        });
        io::write_provenance(truth_path, prov);
    }

    std::cout << "generated " << season.games.size() << " games, "
              << season.truth.spec.n_teams << " teams, model="
              << design::model_kind_name(season.truth.spec.kind) << " -> " << out_path << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"functional team ratings from full in-game scoring data"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "read options from a key=value file (subcommand sections)");
    app.set_version_flag("--version", std::string("funrate ") + kVersion);

    CommonState state{join_args(argc, argv)};

    // validate
    auto* validate = app.add_subcommand("validate", "parse, repair and check a game file");
    std::string v_games, v_report;
    bool v_force = false;
    int v_max_swing = 0;
    validate->add_option("games", v_games, "game file (.jsonl or games.csv)")->required();
    validate->add_flag("--force", v_force, "keep games with decreasing event scores");
    validate->add_option("--max-swing", v_max_swing,
                         "warn when one timestamp moves the differential more than this (0 = off)");
    validate->add_option("--report", v_report, "write a JSONL repair/validation report");

    // fit
    auto* fit = app.add_subcommand("fit", "fit functional ratings");
    std::string f_games, f_model, f_constraint = "sumzero", f_out, f_dump_design;
    int f_threads = 0, f_block = 256;
    bool f_per_component = false, f_force = false;
    fit->add_option("games", f_games)->required();
    fit->add_option("--model", f_model, "1|2|3 (basic|constant|individual)")->required();
    fit->add_option("--constraint", f_constraint, "sumzero|pin:TEAM[=VALUE]|avgscore");
    fit->add_option("--out", f_out, "output fit directory")->required();
    fit->add_option("--threads", f_threads, "solver threads (0 = hardware)");
    fit->add_option("--block", f_block, "right-hand-side columns per solve block");
    fit->add_flag("--per-component", f_per_component, "fit disconnected schedules per component");
    fit->add_flag("--force", f_force, "keep games with decreasing event scores");
    fit->add_option("--dump-design", f_dump_design,
                    "also write the design matrix in MatrixMarket coordinate format");

    // anova
    auto* anova = app.add_subcommand("anova", "nested-model P-value curve");
    std::string a_fit_r, a_fit_f, a_out;
    double a_threshold = 0.1;
    anova->add_option("reduced", a_fit_r, "reduced-model fit directory")->required();
    anova->add_option("full", a_fit_f, "full-model fit directory")->required();
    anova->add_option("--threshold", a_threshold, "reporting threshold for P(t)");
    anova->add_option("--out", a_out, "output directory")->required();

    // rank
    auto* rank = app.add_subcommand("rank", "scalar ratings and rankings");
    std::string r_fit, r_weight = "uniform", r_out;
    rank->add_option("fit", r_fit)->required();
    rank->add_option("--weight", r_weight, "uniform|linear|end|file:PATH");
    rank->add_option("--out", r_out)->required();

    // sos
    auto* sos = app.add_subcommand("sos", "strength-of-schedule table");
    std::string s_fit, s_games, s_weight = "uniform", s_out, s_team, s_curves;
    bool s_force = false;
    sos->add_option("fit", s_fit)->required();
    sos->add_option("games", s_games)->required();
    sos->add_option("--weight", s_weight, "uniform|linear|end|file:PATH");
    sos->add_option("--out", s_out)->required();
    sos->add_option("--team", s_team, "also dump this team's decomposition curves");
    sos->add_option("--curves", s_curves, "decomposition curve CSV path (with --team)");
    sos->add_flag("--force", s_force);

    // predict
    auto* predict = app.add_subcommand("predict", "matchup point-differential curve");
    std::string p_fit, p_team_a, p_team_b, p_venue = "neutral", p_out;
    predict->add_option("fit", p_fit)->required();
    predict->add_option("team_a", p_team_a)->required();
    predict->add_option("team_b", p_team_b)->required();
    predict->add_option("--venue", p_venue, "neutral|home (home of team_a)");
    predict->add_option("--out", p_out)->required();

    // smooth
    auto* smooth = app.add_subcommand("smooth", "B-spline smoothing of a curve CSV");
    std::string m_curve, m_out;
    int m_order = 4, m_knots = 60;
    smooth->add_option("curve", m_curve)->required();
    smooth->add_option("--order", m_order, "spline order (4 = cubic)");
    smooth->add_option("--knots", m_knots, "knot spacing in seconds");
    smooth->add_option("--out", m_out)->required();

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic season");
    synth::SynthConfig cfg;
    std::string g_out, g_truth, g_beta = "constant-int", g_alpha = "zero", g_noise = "none",
                g_identifiable;
    synth_cmd->add_option("--teams", cfg.n_teams)->required();
    synth_cmd->add_option("--games-per-team", cfg.games_per_team)->required();
    synth_cmd->add_option("--neutral", cfg.neutral_fraction, "fraction of neutral-site games");
    synth_cmd->add_option("--T", cfg.regulation_s, "regulation length in seconds");
    synth_cmd->add_option("--beta-family", g_beta,
                          "constant-int|linear-int|piecewise|spline");
    synth_cmd->add_option("--beta-scale", cfg.beta_scale);
    synth_cmd->add_option("--alpha", g_alpha, "zero|shared|per-team");
    synth_cmd->add_option("--alpha-value", cfg.alpha_value);
    synth_cmd->add_option("--noise", g_noise, "none|iid|walk");
    synth_cmd->add_option("--sigma", cfg.noise_sigma);
    synth_cmd->add_option("--seed", cfg.seed);
    synth_cmd->add_option("--require-identifiable", g_identifiable,
                          "redraw schedule until this model is identifiable (1|2|3)");
    synth_cmd->add_option("--out", g_out)->required();
    synth_cmd->add_option("--truth", g_truth, "ground-truth JSON sidecar");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (validate->parsed())
            return cmd_validate(state, v_games, v_force, v_max_swing, v_report);
        if (fit->parsed())
            return cmd_fit(state, f_games, f_model, f_constraint, f_out, f_threads, f_block,
                           f_per_component, f_force, f_dump_design);
        if (anova->parsed()) return cmd_anova(state, a_fit_r, a_fit_f, a_threshold, a_out);
        if (rank->parsed()) return cmd_rank(state, r_fit, r_weight, r_out);
        if (sos->parsed())
            return cmd_sos(state, s_fit, s_games, s_weight, s_out, s_team, s_curves, s_force);
        if (predict->parsed())
            return cmd_predict(state, p_fit, p_team_a, p_team_b, p_venue, p_out);
        if (smooth->parsed()) return cmd_smooth(state, m_curve, m_order, m_knots, m_out);
        if (synth_cmd->parsed()) {
            if (g_beta == "constant-int")
                cfg.beta_family = synth::BetaFamily::ConstantInt;
            else if (g_beta == "linear-int")
                cfg.beta_family = synth::BetaFamily::LinearInt;
            else if (g_beta == "piecewise")
                cfg.beta_family = synth::BetaFamily::PiecewiseLinear;
            else if (g_beta == "spline")
                cfg.beta_family = synth::BetaFamily::Spline;
            else
                throw CLI::ValidationError("--beta-family", "unknown family");
            if (g_alpha == "zero")
                cfg.alpha_mode = synth::AlphaMode::Zero;
            else if (g_alpha == "shared")
                cfg.alpha_mode = synth::AlphaMode::Shared;
            else if (g_alpha == "per-team")
                cfg.alpha_mode = synth::AlphaMode::PerTeam;
            else
                throw CLI::ValidationError("--alpha", "expected zero|shared|per-team");
            if (g_noise == "none")
                cfg.noise = synth::NoiseModel::None;
            else if (g_noise == "iid")
                cfg.noise = synth::NoiseModel::IidGaussian;
            else if (g_noise == "walk")
                cfg.noise = synth::NoiseModel::RandomWalk;
            else
                throw CLI::ValidationError("--noise", "expected none|iid|walk");
            if (!g_identifiable.empty()) cfg.require_identifiable = parse_model(g_identifiable);
            return cmd_synth(state, cfg, g_out, g_truth);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const IdentifiabilityError& e) {
        std::cerr << "identifiability error: " << e.what() << '\n';
        return kExitIdentifiability;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    return kExitUsage;
}
