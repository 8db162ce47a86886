// End-to-end checks of the funrate binary: every subcommand, the documented
// exit codes, and byte-identical re-runs.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef FUNRATE_CLI
#error "FUNRATE_CLI must point at the funrate binary"
#endif

namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("funrate_cli_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

int run(const std::string& args) {
    const std::string cmd = std::string(FUNRATE_CLI) + " " + args + " >/dev/null 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    REQUIRE(f.good());
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("full pipeline: synth -> validate -> fit -> anova -> rank -> sos -> predict -> smooth") {
    TempDir tmp;
    const auto games = (tmp.path / "games.jsonl").string();
    const auto truth = (tmp.path / "truth.json").string();

    CHECK(run("synth --teams 12 --games-per-team 10 --T 300 --alpha shared --alpha-value 3 "
              "--noise iid --sigma 6 --seed 13 --out " + games + " --truth " + truth) == 0);
    CHECK(fs::exists(games));
    CHECK(fs::exists(truth));
    CHECK(fs::exists(games + ".meta.json"));

    CHECK(run("validate " + games) == 0);

    const auto fit1 = (tmp.path / "fit1").string();
    const auto fit2 = (tmp.path / "fit2").string();
    CHECK(run("fit " + games + " --model 1 --out " + fit1) == 0);
    CHECK(run("fit " + games + " --model 2 --out " + fit2) == 0);
    CHECK(fs::exists(fs::path(fit2) / "ratings.csv"));
    CHECK(fs::exists(fs::path(fit2) / "alpha.csv"));
    CHECK(fs::exists(fs::path(fit2) / "fit.json"));
    CHECK(fs::exists(fs::path(fit2) / "fit.meta.json"));

    const auto anova_dir = (tmp.path / "anova").string();
    CHECK(run("anova " + fit1 + " " + fit2 + " --out " + anova_dir) == 0);
    CHECK(fs::exists(fs::path(anova_dir) / "p_curve.csv"));
    CHECK(fs::exists(fs::path(anova_dir) / "p_curve.json"));
    CHECK(fs::exists(fs::path(anova_dir) / "f_curve.csv"));
    const auto summary = slurp(fs::path(anova_dir) / "anova.json");
    CHECK(summary.find("\"df_num\": 1") != std::string::npos);

    const auto rankings = (tmp.path / "rankings.csv").string();
    CHECK(run("rank " + fit2 + " --weight uniform --out " + rankings) == 0);
    const auto table = slurp(rankings);
    CHECK(table.find("team,scalar_rating,rank,end_of_game_rank") == 0);

    const auto sos_csv = (tmp.path / "sos.csv").string();
    const auto curves = (tmp.path / "decomp.csv").string();
    CHECK(run("sos " + fit2 + " " + games + " --out " + sos_csv +
              " --team T0001 --curves " + curves) == 0);
    CHECK(slurp(sos_csv).find("team,scalar_sos,rank") == 0);
    CHECK(slurp(curves).find("second,rating:T0001,avg_diff:T0001,sos:T0001") == 0);

    const auto pred = (tmp.path / "pred.csv").string();
    CHECK(run("predict " + fit2 + " T0001 T0002 --venue home --out " + pred) == 0);
    CHECK(slurp(pred).find("second,") == 0);

    const auto smoothed = (tmp.path / "smoothed.csv").string();
    CHECK(run("smooth " + pred + " --order 4 --knots 60 --out " + smoothed) == 0);
    CHECK(slurp(smoothed).find("second,") == 0);

    const auto mm = (tmp.path / "design.mtx").string();
    const auto fit3 = (tmp.path / "fit3").string();
    CHECK(run("fit " + games + " --model 3 --out " + fit3 + " --dump-design " + mm) == 0);
    CHECK(slurp(mm).find("%%MatrixMarket matrix coordinate real general") == 0);
}

TEST_CASE("re-running fit produces byte-identical artifacts") {
    TempDir tmp;
    const auto games = (tmp.path / "games.jsonl").string();
    REQUIRE(run("synth --teams 8 --games-per-team 6 --T 150 --alpha shared --noise walk "
                "--sigma 0.7 --seed 5 --out " + games) == 0);

    const auto fit_a = (tmp.path / "a").string();
    const auto fit_b = (tmp.path / "b").string();
    REQUIRE(run("fit " + games + " --model 2 --threads 1 --out " + fit_a) == 0);
    REQUIRE(run("fit " + games + " --model 2 --threads 1 --out " + fit_b) == 0);
    for (const char* name : {"ratings.csv", "alpha.csv", "fit.json"})
        CHECK(slurp(fs::path(fit_a) / name) == slurp(fs::path(fit_b) / name));
}

TEST_CASE("validate exit codes: repairs pass, corruption fails") {
    TempDir tmp;
    const auto good = tmp.path / "good.jsonl";
    std::ofstream(good)
        << R"({"game_id":"a","date":"2019-01-01","home":"X","away":"Y","neutral":false,)"
        << R"("final_home":5,"final_away":3,"regulation_s":60,"events":[[10,2,0],[30,4,3]]})"
        << "\n";
    // the missing final is repairable, so validation passes
    CHECK(run("validate " + good.string() + " --report " + (tmp.path / "rep.jsonl").string()) ==
          0);
    CHECK(slurp(tmp.path / "rep.jsonl").find("missing_final_appended") != std::string::npos);

    const auto decreasing = tmp.path / "bad.jsonl";
    std::ofstream(decreasing)
        << R"({"game_id":"a","date":"2019-01-01","home":"X","away":"Y","neutral":false,)"
        << R"("final_home":5,"final_away":3,"regulation_s":60,"events":[[10,4,0],[30,3,3]]})"
        << "\n";
    CHECK(run("validate " + decreasing.string()) == 2);
    CHECK(run("validate " + decreasing.string() + " --force") == 0);

    const auto malformed = tmp.path / "malformed.jsonl";
    std::ofstream(malformed) << "this is not json\n";
    CHECK(run("validate " + malformed.string()) == 2);
}

TEST_CASE("fit exit codes: disconnected graphs need --per-component") {
    TempDir tmp;
    const auto games = tmp.path / "split.jsonl";
    std::ofstream(games)
        << R"({"game_id":"a","date":"d","home":"A","away":"B","neutral":false,"final_home":5,)"
        << R"("final_away":3,"regulation_s":60,"events":[[10,5,3]]})" << "\n"
        << R"({"game_id":"b","date":"d","home":"C","away":"D","neutral":false,"final_home":2,)"
        << R"("final_away":9,"regulation_s":60,"events":[[20,2,9]]})" << "\n";

    const auto out = (tmp.path / "fit").string();
    CHECK(run("fit " + games.string() + " --model 1 --out " + out) == 3);
    CHECK(run("fit " + games.string() + " --model 1 --per-component --out " + out) == 0);
}

TEST_CASE("usage errors exit with 4") {
    CHECK(run("fit") == 4);
    CHECK(run("nonsense-subcommand") == 4);
    CHECK(run("rank") == 4);
    TempDir tmp;
    const auto games = (tmp.path / "g.jsonl").string();
    REQUIRE(run("synth --teams 4 --games-per-team 2 --T 30 --seed 1 --out " + games) == 0);
    CHECK(run("fit " + games + " --model 9 --out " + (tmp.path / "f").string()) == 4);
}

TEST_CASE("config file mirrors flags") {
    TempDir tmp;
    const auto games = (tmp.path / "g.jsonl").string();
    const auto cfg = tmp.path / "synth.cfg";
    std::ofstream(cfg) << "[synth]\nteams=6\ngames-per-team=4\nT=50\nseed=9\nout=" << games
                       << "\n";
    CHECK(run("--config " + cfg.string() + " synth") == 0);
    CHECK(fs::exists(games));
}
