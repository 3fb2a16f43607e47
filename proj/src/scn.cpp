#include "cileda/scn.hpp"

#include <cmath>
#include <limits>

#include "cileda/detail/search.hpp"
#include "cileda/errors.hpp"

namespace cileda {

namespace {
constexpr std::uint64_t kScnSearchTag = 0x53434E31;
}

void ScnConfig::validate() const {
    if (L_max < 1) throw InvalidConfig("L_max must be positive");
    if (!(eps > 0.0)) throw InvalidConfig("eps must be positive");
    if (T_max < 1) throw InvalidConfig("T_max must be positive");
    if (scale_set.empty()) throw InvalidConfig("scale_set must be non-empty");
    for (double s : scale_set)
        if (!(s > 0.0)) throw InvalidConfig("scale_set entries must be positive");
    if (!(contraction_init > 0.0 && contraction_init < 1.0))
        throw InvalidConfig("contraction_init must lie in (0,1)");
    if (max_relax < 0) throw InvalidConfig("max_relax must be non-negative");
}

double activation_sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double ez = std::exp(z);
    return ez / (1.0 + ez);
}

Vector hidden_output(const HiddenNode& node, const Matrix& X) {
    if (X.cols() != node.w.size()) throw ShapeMismatch("hidden node width does not match feature dim");
    Vector h = X * node.w;
    for (Eigen::Index i = 0; i < h.size(); ++i) h[i] = activation_sigmoid(h[i] + node.b);
    return h;
}

double xi_constraint(const Vector& e_col, const Vector& h, double r, double mu) {
    const double hh = h.squaredNorm();
    if (hh == 0.0) throw ZeroCandidate("candidate output is identically zero");
    const double eh = e_col.dot(h);
    return eh * eh / hh - (1.0 - r - mu) * e_col.squaredNorm();
}

double sc1_beta(const Vector& e_col, const Vector& g) {
    const double gg = g.squaredNorm();
    if (gg == 0.0) throw ZeroCandidate("candidate output is identically zero");
    return e_col.dot(g) / gg;
}

Matrix sc3_solve(const Matrix& H, const Matrix& Y) {
    if (H.rows() != Y.rows()) throw ShapeMismatch("H and Y row counts differ");
    if (!all_finite(H) || !all_finite(Y)) throw NonFinite("non-finite entries in least-squares inputs");
    if (H.cols() == 0) return Matrix::Zero(0, Y.cols());
    Eigen::BDCSVD<Matrix> svd(H, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-12);
    return svd.solve(Y);
}

Matrix model_scores(const std::vector<HiddenNode>& nodes, const Matrix& beta, const Matrix& X) {
    Matrix scores = Matrix::Zero(X.rows(), beta.cols());
    for (std::size_t j = 0; j < nodes.size(); ++j)
        scores.noalias() += hidden_output(nodes[j], X) * beta.row(static_cast<Eigen::Index>(j));
    return scores;
}

std::vector<int> argmax_labels(const Matrix& scores) {
    std::vector<int> labels(static_cast<std::size_t>(scores.rows()));
    for (Eigen::Index i = 0; i < scores.rows(); ++i) {
        Eigen::Index best = 0;
        for (Eigen::Index q = 1; q < scores.cols(); ++q)
            if (scores(i, q) > scores(i, best)) best = q;
        labels[static_cast<std::size_t>(i)] = static_cast<int>(best);
    }
    return labels;
}

std::vector<int> scn_predict(const ScnModel& model, const Matrix& X) {
    if (X.cols() != model.p) throw ShapeMismatch("feature dim does not match model input width");
    if (model.nodes.empty()) return std::vector<int>(static_cast<std::size_t>(X.rows()), 0);
    return argmax_labels(model_scores(model.nodes, model.beta, X));
}

ScnModel scn_train(const DomainDataset& data, const ScnConfig& cfg, ScnVariant variant) {
    cfg.validate();
    data.validate();

    const Matrix& X = data.features;
    const Matrix& Y = data.labels_onehot;
    const Eigen::Index n = X.rows();
    const int m = static_cast<int>(Y.cols());

    ScnModel model;
    model.variant = variant;
    model.p = static_cast<int>(X.cols());
    model.m = m;
    model.config = cfg;

    Matrix e = Y;
    Matrix H(n, 0);
    model.beta = Matrix(0, m);
    model.trace.push_back(e.norm());

    auto score_candidate = [&](const HiddenNode& cand, double gamma, double mu) -> double {
        const Vector h = hidden_output(cand, X);
        if (h.squaredNorm() == 0.0) return std::numeric_limits<double>::quiet_NaN();
        double total = 0.0;
        for (int q = 0; q < m; ++q) {
            const double xi = xi_constraint(e.col(q), h, gamma, mu);
            if (xi < 0.0) return std::numeric_limits<double>::quiet_NaN();
            total += xi;
        }
        return total;
    };

    for (int L = 1; L <= cfg.L_max && model.trace.back() > cfg.eps; ++L) {
        detail::SearchOutcome hit = detail::search_node(model.p, cfg, kScnSearchTag, L, score_candidate);
        if (!hit.found) {
            model.search_exhausted = true;
            break;
        }
        const Vector h = hidden_output(hit.node, X);
        H.conservativeResize(Eigen::NoChange, L);
        H.col(L - 1) = h;
        model.nodes.push_back(hit.node);
        if (variant == ScnVariant::SC1) {
            model.beta.conservativeResize(L, Eigen::NoChange);
            for (int q = 0; q < m; ++q) model.beta(L - 1, q) = sc1_beta(e.col(q), h);
            e.noalias() -= h * model.beta.row(L - 1);
        } else {
            model.beta = sc3_solve(H, Y);
            e = Y - H * model.beta;
        }
        model.trace.push_back(e.norm());
    }
    model.converged = model.trace.back() <= cfg.eps;
    return model;
}

}  // namespace cileda
