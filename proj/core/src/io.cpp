#include "funrate/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace funrate::io {

namespace {

using ordered_json = nlohmann::ordered_json;

std::vector<std::string> split_row(const std::string& line) {
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

double parse_double(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str()) throw Error("expected a number, got '" + s + "'");
    return v;
}

void write_matrix_csv(std::ostream& out, const std::vector<std::string>& row_names,
                      const Eigen::MatrixXd& values, const char* key_header) {
    out << key_header;
    for (int t = 0; t < values.cols(); ++t) out << ',' << t;
    out << '\n';
    for (int r = 0; r < values.rows(); ++r) {
        out << row_names[r];
        for (int t = 0; t < values.cols(); ++t) out << ',' << format_double(values(r, t));
        out << '\n';
    }
}

Eigen::MatrixXd read_matrix_csv(std::istream& in, std::vector<std::string>& row_names) {
    std::string line;
    if (!std::getline(in, line)) throw Error("matrix csv: missing header");
    const auto header = split_row(line);
    const int cols = static_cast<int>(header.size()) - 1;
    if (cols < 1) throw Error("matrix csv: header has no value columns");

    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto fields = split_row(line);
        if (static_cast<int>(fields.size()) != cols + 1)
            throw Error("matrix csv: row width mismatch for '" + fields.front() + "'");
        row_names.push_back(fields[0]);
        std::vector<double> vals(cols);
        for (int t = 0; t < cols; ++t) vals[t] = parse_double(fields[t + 1]);
        rows.push_back(std::move(vals));
    }
    Eigen::MatrixXd M(static_cast<int>(rows.size()), cols);
    for (size_t r = 0; r < rows.size(); ++r)
        for (int t = 0; t < cols; ++t) M(static_cast<int>(r), t) = rows[r][t];
    return M;
}

std::vector<double> to_std(const Eigen::VectorXd& v) {
    return std::vector<double>(v.begin(), v.end());
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    // trim to the shortest representation that round-trips
    for (int prec = 1; prec < 17; ++prec) {
        char probe[40];
        std::snprintf(probe, sizeof probe, "%.*g", prec, v);
        if (std::strtod(probe, nullptr) == v) return probe;
    }
    return buf;
}

void write_curve_csv(std::ostream& out, const CurveSeries& curve) {
    out << "second," << (curve.name.empty() ? "value" : curve.name) << '\n';
    for (int t = 0; t < curve.grid_len(); ++t)
        out << t << ',' << format_double(curve.values[t]) << '\n';
}

CurveSeries read_curve_csv(std::istream& in, const std::string& name) {
    std::string line;
    if (!std::getline(in, line)) throw Error("curve csv: missing header");
    const auto header = split_row(line);
    CurveSeries curve;
    curve.name = !name.empty() ? name : (header.size() > 1 ? header[1] : "value");

    std::vector<double> vals;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_row(line);
        if (fields.size() < 2) throw Error("curve csv: expected second,value rows");
        vals.push_back(parse_double(fields[1]));
    }
    curve.values = Eigen::Map<const Eigen::VectorXd>(vals.data(),
                                                     static_cast<int>(vals.size()));
    return curve;
}

void write_curve_json(std::ostream& out, const CurveSeries& curve) {
    ordered_json j;
    j["name"] = curve.name;
    j["units"] = curve.units;
    j["values"] = to_std(curve.values);
    out << j.dump() << '\n';
}

void write_curves_csv(std::ostream& out, const std::vector<CurveSeries>& curves) {
    if (curves.empty()) throw Error("write_curves_csv: no curves");
    const int L = curves.front().grid_len();
    out << "second";
    for (const auto& c : curves) {
        if (c.grid_len() != L) throw DimensionError("write_curves_csv: grid mismatch");
        out << ',' << (c.name.empty() ? "value" : c.name);
    }
    out << '\n';
    for (int t = 0; t < L; ++t) {
        out << t;
        for (const auto& c : curves) out << ',' << format_double(c.values[t]);
        out << '\n';
    }
}

void write_rankings_csv(std::ostream& out, const std::vector<ratings::RankEntry>& main,
                        const std::vector<ratings::RankEntry>& end_of_game) {
    std::map<std::string, int> eog_rank;
    for (const auto& e : end_of_game) eog_rank[e.team] = e.rank;
    out << "team,scalar_rating,rank,end_of_game_rank\n";
    for (const auto& e : main) {
        out << e.team << ',' << format_double(e.scalar) << ',' << e.rank << ','
            << eog_rank[e.team] << '\n';
    }
}

void write_sos_csv(std::ostream& out, const std::vector<ratings::RankEntry>& entries) {
    out << "team,scalar_sos,rank\n";
    for (const auto& e : entries)
        out << e.team << ',' << format_double(e.scalar) << ',' << e.rank << '\n';
}

void save_rating_set(const std::filesystem::path& dir, const solver::RatingSet& ratings) {
    std::filesystem::create_directories(dir);

    {
        std::ofstream f(dir / "ratings.csv");
        if (!f) throw Error("cannot write " + (dir / "ratings.csv").string());
        write_matrix_csv(f, ratings.spec.teams, ratings.beta, "team");
    }
    if (ratings.alpha.rows() > 0) {
        std::vector<std::string> names;
        if (ratings.spec.kind == design::ModelKind::ConstantHca) {
            names.emplace_back("alpha");
        } else {
            for (const auto& t : ratings.spec.teams) names.push_back("alpha:" + t);
        }
        std::ofstream f(dir / "alpha.csv");
        if (!f) throw Error("cannot write " + (dir / "alpha.csv").string());
        write_matrix_csv(f, names, ratings.alpha, "param");
    }

    ordered_json j;
    j["version"] = kVersion;
    j["model"] = design::model_kind_name(ratings.spec.kind);
    j["constraint"]["kind"] = solver::constraint_kind_name(ratings.constraint.kind);
    if (ratings.constraint.kind == solver::ConstraintKind::PinTeam) {
        j["constraint"]["team"] = ratings.constraint.team;
        j["constraint"]["value"] = ratings.constraint.value;
    }
    if (ratings.constraint.kind == solver::ConstraintKind::PinAverageScore)
        j["constraint"]["mean_score_curve"] = to_std(ratings.constraint.mean_score_curve);
    j["teams"] = ratings.spec.teams;
    j["m"] = ratings.m;
    j["grid_len"] = ratings.grid_len;
    j["rank"] = ratings.rank;
    j["dof_resid"] = ratings.dof_resid;
    j["unidentified"] = ratings.unidentified;
    j["sse"] = to_std(ratings.sse);
    {
        // NaN marks pinned parameters; JSON has no NaN, so use null
        auto arr = ordered_json::array();
        for (int i = 0; i < ratings.param_var_unscaled.size(); ++i) {
            const double v = ratings.param_var_unscaled[i];
            if (std::isfinite(v))
                arr.push_back(v);
            else
                arr.push_back(nullptr);
        }
        j["param_var_unscaled"] = std::move(arr);
    }

    std::ofstream f(dir / "fit.json");
    if (!f) throw Error("cannot write " + (dir / "fit.json").string());
    f << j.dump(2) << '\n';
}

solver::RatingSet load_rating_set(const std::filesystem::path& dir) {
    std::ifstream jf(dir / "fit.json");
    if (!jf) throw Error("cannot read " + (dir / "fit.json").string());
    ordered_json j = ordered_json::parse(jf);

    solver::RatingSet r;
    const std::string model = j.at("model").get<std::string>();
    if (model == "basic")
        r.spec.kind = design::ModelKind::Basic;
    else if (model == "constant_hca")
        r.spec.kind = design::ModelKind::ConstantHca;
    else if (model == "individual_hca")
        r.spec.kind = design::ModelKind::IndividualHca;
    else
        throw Error("fit.json: unknown model '" + model + "'");

    r.spec.teams = j.at("teams").get<std::vector<std::string>>();
    r.spec.n_teams = static_cast<int>(r.spec.teams.size());
    for (int i = 0; i < r.spec.n_teams; ++i) r.spec.team_index[r.spec.teams[i]] = i;

    const std::string ckind = j.at("constraint").at("kind").get<std::string>();
    if (ckind == "sum_zero") {
        r.constraint = solver::Constraint::sum_zero();
    } else if (ckind == "pin_team") {
        r.constraint = solver::Constraint::pin_team(
            j.at("constraint").at("team").get<std::string>(),
            j.at("constraint").at("value").get<double>());
    } else if (ckind == "pin_average_score") {
        const auto curve = j.at("constraint").at("mean_score_curve").get<std::vector<double>>();
        r.constraint = solver::Constraint::pin_average_score(
            Eigen::Map<const Eigen::VectorXd>(curve.data(), static_cast<int>(curve.size())));
    } else {
        throw Error("fit.json: unknown constraint '" + ckind + "'");
    }

    r.m = j.at("m").get<int>();
    r.grid_len = j.at("grid_len").get<int>();
    r.rank = j.at("rank").get<int>();
    r.dof_resid = j.at("dof_resid").get<int>();
    r.unidentified = j.at("unidentified").get<std::vector<std::string>>();

    const auto sse = j.at("sse").get<std::vector<double>>();
    r.sse = Eigen::Map<const Eigen::VectorXd>(sse.data(), static_cast<int>(sse.size()));

    const auto& pv = j.at("param_var_unscaled");
    r.param_var_unscaled.resize(static_cast<int>(pv.size()));
    for (int i = 0; i < static_cast<int>(pv.size()); ++i)
        r.param_var_unscaled[i] = pv[i].is_null() ? std::numeric_limits<double>::quiet_NaN()
                                                  : pv[i].get<double>();

    {
        std::ifstream f(dir / "ratings.csv");
        if (!f) throw Error("cannot read " + (dir / "ratings.csv").string());
        std::vector<std::string> names;
        r.beta = read_matrix_csv(f, names);
        if (names != r.spec.teams) throw Error("ratings.csv team rows disagree with fit.json");
    }
    if (r.spec.kind != design::ModelKind::Basic) {
        std::ifstream f(dir / "alpha.csv");
        if (!f) throw Error("cannot read " + (dir / "alpha.csv").string());
        std::vector<std::string> names;
        r.alpha = read_matrix_csv(f, names);
    } else {
        r.alpha.resize(0, r.grid_len);
    }

    if (r.beta.cols() != r.grid_len || static_cast<int>(r.sse.size()) != r.grid_len)
        throw DimensionError("fit directory is internally inconsistent");
    return r;
}

std::string file_digest_hex(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot read " + path.string());
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[1 << 16];
    while (f) {
        f.read(buf, sizeof buf);
        for (std::streamsize i = 0; i < f.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
    }
    char out[20];
    std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
    return out;
}

void write_provenance(const std::filesystem::path& target, const Provenance& prov) {
    ordered_json j;
    j["tool"] = "funrate";
    j["version"] = kVersion;
    j["command"] = prov.command;
    auto inputs = ordered_json::array();
    for (const auto& [path, digest] : prov.inputs) {
        ordered_json e;
        e["path"] = path;
        e["fnv1a64"] = digest;
        inputs.push_back(std::move(e));
    }
    j["inputs"] = std::move(inputs);
    for (const auto& [k, v] : prov.extra) j[k] = v;

    std::ofstream f(target.string() + ".meta.json");
    if (!f) throw Error("cannot write " + target.string() + ".meta.json");
    f << j.dump(2) << '\n';
}

}  // namespace funrate::io
