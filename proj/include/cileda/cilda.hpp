#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cileda/dataio.hpp"
#include "cileda/linalg.hpp"
#include "cileda/scn.hpp"

namespace cileda {

enum class CildaVariant { CILDA1, CILDA2 };

struct CildaConfig : ScnConfig {
    double C_S = 1.0;     // source residual weight
    double C_T = 100.0;   // target residual weight
    double lambda = 10.0; // distribution alignment weight
    CildaVariant variant = CildaVariant::CILDA2;

    void validate() const;
};

// Residuals on both domains; row i is sample i, column q is output q.
struct ResidualState {
    Matrix e_S;
    Matrix e_T;
};

// Alignment matrix d ((m+1) x L). Row 0 compares domain means of each hidden
// output; row c+1 compares class-c centroids and is zero whenever class c is
// empty on either side.
struct MmdState {
    Matrix d;
    std::vector<std::vector<int>> rows_S;  // per-class sample indices, source
    std::vector<std::vector<int>> rows_T;

    static MmdState init(const DomainDataset& source, const DomainDataset& target);
    Vector column(const Vector& h_S, const Vector& h_T) const;
    void append_column(const Vector& col);
};

// Standalone column builder used by the oracle tests; MmdState::column caches
// the class index sets instead of rebuilding them.
Vector mmd_column(const Vector& h_S, const Vector& h_T, const std::vector<int>& labels_S,
                  const std::vector<int>& labels_T, int m);

struct CandidateScore {
    Vector sigma;  // acceptance value per output; gate is min over outputs
    Vector E;      // cross-domain numerators
    double G = 0.0;
};

CandidateScore candidate_score(const ResidualState& residuals, const Vector& h_S, const Vector& h_T,
                               const Matrix& d_prev, const Vector& d_L, const Matrix& beta_prev,
                               const CildaConfig& cfg, double gamma, double mu);

// Incremental output weights E_q / G of the accepted node.
Vector cilda1_beta(const ResidualState& residuals, const Vector& h_S, const Vector& h_T,
                   const Matrix& d_prev, const Vector& d_L, const Matrix& beta_prev,
                   const CildaConfig& cfg);

// Global re-solve: (I + C_S Hs'Hs + C_T Ht'Ht + lambda d'd) beta = C_S Hs'Ys + C_T Ht'Yt.
Matrix cilda2_solve(const Matrix& H_S, const Matrix& H_T, const Matrix& Y_S, const Matrix& Y_T,
                    const Matrix& d, const CildaConfig& cfg);

struct NodeDiagnostics {
    double gamma = 0.0;  // contraction parameter the node was accepted under
    double mu = 0.0;
    int relax_rounds = 0;
    double score_sum = 0.0;
};

struct CildaModel {
    CildaVariant variant = CildaVariant::CILDA2;
    int p = 0;
    int m = 0;
    std::string activation = "sigmoid";
    std::vector<HiddenNode> nodes;
    Matrix beta;  // L x m
    CildaConfig config;
    std::string source_id;
    std::string target_id;

    // ||e_T||_F after each accepted node; trace[0] is the initial residual.
    std::vector<double> trace;
    std::vector<NodeDiagnostics> diagnostics;  // not serialized
    bool converged = false;
    bool search_exhausted = false;

    Eigen::Index node_count() const { return static_cast<Eigen::Index>(nodes.size()); }
};

struct ConfigureResult {
    bool found = false;
    HiddenNode node;
    CandidateScore score;
    double gamma_used = 0.0;
    double mu_used = 0.0;
    int relax_rounds = 0;
};

// Candidate sweep for node L under the cross-domain gate min_q sigma_q >= 0,
// relaxing gamma on total failure; see detail::search_node for determinism.
ConfigureResult configure_node(const ResidualState& residuals, const DomainDataset& source,
                               const DomainDataset& target, const MmdState& mmd,
                               const Matrix& beta_prev, const CildaConfig& cfg, int L);

CildaModel cilda_train(const DomainDataset& source, const DomainDataset& target,
                       const CildaConfig& cfg);

std::vector<int> cilda_predict(const CildaModel& model, const Matrix& X);

}  // namespace cileda
