#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cileda/dataio.hpp"
#include "cileda/linalg.hpp"

namespace cileda {

enum class ScnVariant { SC1, SC3 };

struct ScnConfig {
    int L_max = 200;
    double eps = 0.1;
    int T_max = 100;
    std::vector<double> scale_set = {0.5, 1, 3, 5, 7, 10, 25, 50, 100, 150, 200};
    double contraction_init = 0.9;  // gamma; relaxed towards 1 when a node search stalls
    int max_relax = 50;             // relaxation rounds per node before giving up
    std::uint64_t seed = 0;

    void validate() const;
};

// Random hidden node; `scale` records the range radius it was drawn from.
struct HiddenNode {
    Vector w;
    double b = 0.0;
    double scale = 0.0;
};

struct ScnModel {
    ScnVariant variant = ScnVariant::SC3;
    int p = 0;
    int m = 0;
    std::string activation = "sigmoid";
    std::vector<HiddenNode> nodes;
    Matrix beta;  // L x m
    ScnConfig config;

    // ||e||_F after each accepted node; trace[0] is the initial residual.
    std::vector<double> trace;
    bool converged = false;         // reached eps
    bool search_exhausted = false;  // stopped early: no candidate passed the gate

    Eigen::Index node_count() const { return static_cast<Eigen::Index>(nodes.size()); }
};

// Sigmoid with the argument clamped against exp overflow.
double activation_sigmoid(double z);

// Elementwise g(X w + b) over the rows of X.
Vector hidden_output(const HiddenNode& node, const Matrix& X);

// Supervisory inequality value for one output column:
//   <e,h>^2/<h,h> - (1 - r - mu) <e,e>.
double xi_constraint(const Vector& e_col, const Vector& h, double r, double mu);

// Incremental output weight of SC-I: <e,g>/||g||^2.
double sc1_beta(const Vector& e_col, const Vector& g);

// Minimum-norm least-squares weights via SVD pseudoinverse (singular values
// below 1e-12 * sigma_max truncated).
Matrix sc3_solve(const Matrix& H, const Matrix& Y);

ScnModel scn_train(const DomainDataset& data, const ScnConfig& cfg, ScnVariant variant);

// Raw scores H_L * beta for rows of X (zero when the model is empty).
Matrix model_scores(const std::vector<HiddenNode>& nodes, const Matrix& beta, const Matrix& X);

std::vector<int> scn_predict(const ScnModel& model, const Matrix& X);

// argmax per row; class 0 wins all-equal rows (covers the empty model).
std::vector<int> argmax_labels(const Matrix& scores);

}  // namespace cileda
