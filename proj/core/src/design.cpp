#include "funrate/design.hpp"

#include <algorithm>
#include <ostream>
#include <set>

namespace funrate::design {

const char* model_kind_name(ModelKind k) {
    switch (k) {
        case ModelKind::Basic: return "basic";
        case ModelKind::ConstantHca: return "constant_hca";
        case ModelKind::IndividualHca: return "individual_hca";
    }
    return "unknown";
}

std::string ModelSpec::param_name(int col) const {
    if (col < 0 || col >= param_count()) throw DimensionError("param_name: column out of range");
    if (col < n_teams) return "beta:" + teams[col];
    if (kind == ModelKind::ConstantHca) return "alpha";
    return "alpha:" + teams[col - n_teams];
}

int ModelSpec::team_of(const std::string& id) const {
    auto it = team_index.find(id);
    if (it == team_index.end()) throw Error("unknown team '" + id + "'");
    return it->second;
}

DesignMatrix build_design(std::span<const ingest::GameRecord> games, ModelKind kind) {
    if (games.empty()) throw Error("build_design: zero games");

    std::set<std::string> names;
    for (const auto& g : games) {
        names.insert(g.home_team);
        names.insert(g.away_team);
    }

    DesignMatrix X;
    X.spec.kind = kind;
    X.spec.teams.assign(names.begin(), names.end());
    X.spec.n_teams = static_cast<int>(X.spec.teams.size());
    for (int i = 0; i < X.spec.n_teams; ++i) X.spec.team_index[X.spec.teams[i]] = i;

    const int n = X.spec.n_teams;
    X.m = static_cast<int>(games.size());
    X.entries.reserve(games.size() * 3);
    X.row_game.reserve(games.size());
    X.row_teams.reserve(games.size());
    X.row_neutral.reserve(games.size());

    int row = 0;
    for (const auto& g : games) {
        const int hi = X.spec.team_index.at(g.home_team);
        const int ai = X.spec.team_index.at(g.away_team);
        X.entries.emplace_back(row, hi, 1.0);
        X.entries.emplace_back(row, ai, -1.0);
        if (!g.neutral_site) {
            if (kind == ModelKind::ConstantHca)
                X.entries.emplace_back(row, n, 1.0);
            else if (kind == ModelKind::IndividualHca)
                X.entries.emplace_back(row, n + hi, 1.0);
        }
        X.row_game.push_back(g.game_id);
        X.row_teams.emplace_back(hi, ai);
        X.row_neutral.push_back(g.neutral_site);
        ++row;
    }
    return X;
}

Eigen::SparseMatrix<double> DesignMatrix::to_sparse() const {
    Eigen::SparseMatrix<double> S(m, spec.param_count());
    S.setFromTriplets(entries.begin(), entries.end());
    return S;
}

void DesignMatrix::write_matrix_market(std::ostream& out) const {
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << m << ' ' << spec.param_count() << ' ' << entries.size() << '\n';
    for (const auto& e : entries)
        out << e.row() + 1 << ' ' << e.col() + 1 << ' ' << e.value() << '\n';
}

ConnectivityReport check_connectivity(const DesignMatrix& X) {
    const int n = X.spec.n_teams;
    std::vector<std::vector<int>> adj(n);
    for (const auto& [h, a] : X.row_teams) {
        adj[h].push_back(a);
        adj[a].push_back(h);
    }

    ConnectivityReport report;
    report.component_of_team.assign(n, -1);
    for (int start = 0; start < n; ++start) {
        if (report.component_of_team[start] != -1) continue;
        const int comp = report.n_components++;
        std::vector<int> stack{start};
        report.component_of_team[start] = comp;
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            for (int v : adj[u]) {
                if (report.component_of_team[v] == -1) {
                    report.component_of_team[v] = comp;
                    stack.push_back(v);
                }
            }
        }
    }
    report.components.resize(report.n_components);
    for (int i = 0; i < n; ++i)
        report.components[report.component_of_team[i]].push_back(X.spec.teams[i]);
    return report;
}

}  // namespace funrate::design
