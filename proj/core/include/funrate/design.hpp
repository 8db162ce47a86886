#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/SparseCore>

#include "funrate/common.hpp"
#include "funrate/ingest.hpp"

namespace funrate::design {

enum class ModelKind {
    Basic,          // beta_i - beta_j = d
    ConstantHca,    // + shared alpha on non-neutral games
    IndividualHca,  // + per-host alpha_i
};

const char* model_kind_name(ModelKind k);

/// Which model, how many teams, and the team id <-> column bijection.
struct ModelSpec {
    ModelKind kind = ModelKind::Basic;
    int n_teams = 0;
    std::vector<std::string> teams;  // column index -> team id
    std::unordered_map<std::string, int> team_index;

    int param_count() const {
        switch (kind) {
            case ModelKind::Basic: return n_teams;
            case ModelKind::ConstantHca: return n_teams + 1;
            case ModelKind::IndividualHca: return 2 * n_teams;
        }
        return 0;
    }

    /// "beta:<team>", "alpha" or "alpha:<team>".
    std::string param_name(int col) const;

    int team_of(const std::string& id) const;  // throws on unknown team
};

/// Sparse m x p coefficient matrix in coordinate-list form, one row per
/// game. Each row has one +1 and one -1 in the team block; home-advantage
/// columns carry a single 1 on non-neutral rows.
struct DesignMatrix {
    ModelSpec spec;
    int m = 0;
    std::vector<Eigen::Triplet<double>> entries;
    std::vector<std::string> row_game;
    std::vector<std::pair<int, int>> row_teams;  // (home index, away index)
    std::vector<bool> row_neutral;

    Eigen::SparseMatrix<double> to_sparse() const;
    void write_matrix_market(std::ostream& out) const;
};

/// Assemble the design matrix for the given model. Row order matches the
/// input game order; for neutral games the listed home team takes the +1.
DesignMatrix build_design(std::span<const ingest::GameRecord> games, ModelKind kind);

/// Connected components of the graph with teams as vertices and games as
/// edges. A rating comparing all teams is valid only when connected.
struct ConnectivityReport {
    int n_components = 0;
    std::vector<int> component_of_team;
    std::vector<std::vector<std::string>> components;

    bool is_connected() const { return n_components == 1; }
};

ConnectivityReport check_connectivity(const DesignMatrix& X);

}  // namespace funrate::design
