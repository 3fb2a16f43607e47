#include "cileda/cilda.hpp"

#include <cmath>
#include <limits>

#include "cileda/detail/search.hpp"
#include "cileda/errors.hpp"

namespace cileda {

namespace {

constexpr std::uint64_t kCildaSearchTag = 0x43494C44;

std::vector<std::vector<int>> class_rows(const DomainDataset& d) {
    std::vector<std::vector<int>> rows(static_cast<std::size_t>(d.m()));
    for (Eigen::Index i = 0; i < d.n(); ++i)
        rows[static_cast<std::size_t>(d.label_of(i))].push_back(static_cast<int>(i));
    return rows;
}

double subset_mean(const Vector& h, const std::vector<int>& idx) {
    double s = 0.0;
    for (int i : idx) s += h[i];
    return s / static_cast<double>(idx.size());
}

Vector column_from_rows(const Vector& h_S, const Vector& h_T,
                        const std::vector<std::vector<int>>& rows_S,
                        const std::vector<std::vector<int>>& rows_T) {
    const std::size_t m = rows_S.size();
    Vector col(static_cast<Eigen::Index>(m) + 1);
    col[0] = h_S.mean() - h_T.mean();
    for (std::size_t c = 0; c < m; ++c) {
        if (rows_S[c].empty() || rows_T[c].empty())
            col[static_cast<Eigen::Index>(c) + 1] = 0.0;
        else
            col[static_cast<Eigen::Index>(c) + 1] =
                subset_mean(h_S, rows_S[c]) - subset_mean(h_T, rows_T[c]);
    }
    return col;
}

struct CrossTerms {
    Vector E;
    double G = 0.0;
    double hT_sq = 0.0;
};

CrossTerms cross_terms(const ResidualState& res, const Vector& h_S, const Vector& h_T,
                       const Matrix& d_prev, const Vector& d_L, const Matrix& beta_prev,
                       const CildaConfig& cfg) {
    const int m = static_cast<int>(res.e_T.cols());
    const double ratio = cfg.C_S / cfg.C_T;
    const double align = cfg.lambda / cfg.C_T;

    Vector coupling = Vector::Zero(beta_prev.rows());
    if (d_prev.cols() > 0) coupling = d_prev.transpose() * d_L;

    CrossTerms t;
    t.hT_sq = h_T.squaredNorm();
    t.E.resize(m);
    for (int q = 0; q < m; ++q) {
        double e_q = ratio * res.e_S.col(q).dot(h_S) + res.e_T.col(q).dot(h_T);
        if (coupling.size() > 0) e_q -= align * coupling.dot(beta_prev.col(q));
        t.E[q] = e_q;
    }
    t.G = 1.0 / cfg.C_T + ratio * h_S.squaredNorm() + t.hT_sq + align * d_L.squaredNorm();
    return t;
}

}  // namespace

void CildaConfig::validate() const {
    ScnConfig::validate();
    if (!(C_S >= 0.0)) throw InvalidConfig("C_S must be non-negative");
    if (!(C_T > 0.0)) throw InvalidConfig("C_T must be positive");
    if (!(lambda >= 0.0)) throw InvalidConfig("lambda must be non-negative");
}

MmdState MmdState::init(const DomainDataset& source, const DomainDataset& target) {
    if (source.m() != target.m()) throw ShapeMismatch("domains disagree on class count");
    MmdState s;
    s.rows_S = class_rows(source);
    s.rows_T = class_rows(target);
    s.d = Matrix(source.m() + 1, 0);
    return s;
}

Vector MmdState::column(const Vector& h_S, const Vector& h_T) const {
    return column_from_rows(h_S, h_T, rows_S, rows_T);
}

void MmdState::append_column(const Vector& col) {
    if (col.size() != d.rows()) throw ShapeMismatch("alignment column has wrong height");
    d.conservativeResize(Eigen::NoChange, d.cols() + 1);
    d.col(d.cols() - 1) = col;
}

Vector mmd_column(const Vector& h_S, const Vector& h_T, const std::vector<int>& labels_S,
                  const std::vector<int>& labels_T, int m) {
    if (static_cast<Eigen::Index>(labels_S.size()) != h_S.size() ||
        static_cast<Eigen::Index>(labels_T.size()) != h_T.size())
        throw ShapeMismatch("label count does not match hidden output length");
    std::vector<std::vector<int>> rows_S(static_cast<std::size_t>(m)), rows_T(static_cast<std::size_t>(m));
    for (std::size_t i = 0; i < labels_S.size(); ++i) {
        if (labels_S[i] < 0 || labels_S[i] >= m) throw ShapeMismatch("label out of range");
        rows_S[static_cast<std::size_t>(labels_S[i])].push_back(static_cast<int>(i));
    }
    for (std::size_t i = 0; i < labels_T.size(); ++i) {
        if (labels_T[i] < 0 || labels_T[i] >= m) throw ShapeMismatch("label out of range");
        rows_T[static_cast<std::size_t>(labels_T[i])].push_back(static_cast<int>(i));
    }
    return column_from_rows(h_S, h_T, rows_S, rows_T);
}

CandidateScore candidate_score(const ResidualState& residuals, const Vector& h_S, const Vector& h_T,
                               const Matrix& d_prev, const Vector& d_L, const Matrix& beta_prev,
                               const CildaConfig& cfg, double gamma, double mu) {
    const CrossTerms t = cross_terms(residuals, h_S, h_T, d_prev, d_L, beta_prev, cfg);
    const int m = static_cast<int>(residuals.e_T.cols());
    CandidateScore s;
    s.E = t.E;
    s.G = t.G;
    s.sigma.resize(m);
    const double slack = 1.0 - gamma - mu;
    for (int q = 0; q < m; ++q) {
        const double et_h = residuals.e_T.col(q).dot(h_T);
        const double gain = (2.0 * t.G * et_h * t.E[q] - t.E[q] * t.E[q] * t.hT_sq) / (t.G * t.G);
        s.sigma[q] = gain - slack * residuals.e_T.col(q).squaredNorm();
    }
    return s;
}

Vector cilda1_beta(const ResidualState& residuals, const Vector& h_S, const Vector& h_T,
                   const Matrix& d_prev, const Vector& d_L, const Matrix& beta_prev,
                   const CildaConfig& cfg) {
    const CrossTerms t = cross_terms(residuals, h_S, h_T, d_prev, d_L, beta_prev, cfg);
    return t.E / t.G;
}

Matrix cilda2_solve(const Matrix& H_S, const Matrix& H_T, const Matrix& Y_S, const Matrix& Y_T,
                    const Matrix& d, const CildaConfig& cfg) {
    if (H_S.cols() != H_T.cols() || H_S.cols() != d.cols())
        throw ShapeMismatch("hidden matrices and alignment matrix disagree on width");
    if (H_S.rows() != Y_S.rows() || H_T.rows() != Y_T.rows() || Y_S.cols() != Y_T.cols())
        throw ShapeMismatch("hidden and label matrices disagree on rows");
    if (!all_finite(H_S) || !all_finite(H_T) || !all_finite(Y_S) || !all_finite(Y_T) || !all_finite(d))
        throw NonFinite("non-finite entries in global solve inputs");
    const Eigen::Index L = H_S.cols();
    if (L == 0) return Matrix::Zero(0, Y_T.cols());
    Matrix A = Matrix::Identity(L, L);
    A.noalias() += cfg.C_S * (H_S.transpose() * H_S);
    A.noalias() += cfg.C_T * (H_T.transpose() * H_T);
    A.noalias() += cfg.lambda * (d.transpose() * d);
    Matrix rhs = cfg.C_S * (H_S.transpose() * Y_S) + cfg.C_T * (H_T.transpose() * Y_T);
    Matrix beta = A.llt().solve(rhs);
    if (!all_finite(beta)) throw NonFinite("global solve produced non-finite weights");
    return beta;
}

ConfigureResult configure_node(const ResidualState& residuals, const DomainDataset& source,
                               const DomainDataset& target, const MmdState& mmd,
                               const Matrix& beta_prev, const CildaConfig& cfg, int L) {
    const int p = static_cast<int>(target.p());
    const int m = static_cast<int>(target.m());
    const double nan = std::numeric_limits<double>::quiet_NaN();

    auto score = [&](const HiddenNode& cand, double gamma, double mu) -> double {
        const Vector h_S = hidden_output(cand, source.features);
        const Vector h_T = hidden_output(cand, target.features);
        if (h_S.squaredNorm() == 0.0 || h_T.squaredNorm() == 0.0) return nan;
        const Vector d_L = mmd.column(h_S, h_T);
        const CandidateScore s =
            candidate_score(residuals, h_S, h_T, mmd.d, d_L, beta_prev, cfg, gamma, mu);
        double total = 0.0;
        for (int q = 0; q < m; ++q) {
            if (s.sigma[q] < 0.0) return nan;
            total += s.sigma[q];
        }
        return total;
    };

    detail::SearchOutcome hit = detail::search_node(p, cfg, kCildaSearchTag, L, score);
    ConfigureResult r;
    r.found = hit.found;
    r.gamma_used = hit.gamma_used;
    r.mu_used = hit.mu_used;
    r.relax_rounds = hit.relax_rounds;
    if (hit.found) {
        r.node = hit.node;
        const Vector h_S = hidden_output(r.node, source.features);
        const Vector h_T = hidden_output(r.node, target.features);
        const Vector d_L = mmd.column(h_S, h_T);
        r.score = candidate_score(residuals, h_S, h_T, mmd.d, d_L, beta_prev, cfg,
                                  hit.gamma_used, hit.mu_used);
    }
    return r;
}

CildaModel cilda_train(const DomainDataset& source, const DomainDataset& target,
                       const CildaConfig& cfg) {
    cfg.validate();
    source.validate();
    target.validate();
    if (source.p() != target.p()) throw ShapeMismatch("domains disagree on feature dim");
    if (source.m() != target.m()) throw ShapeMismatch("domains disagree on class count");

    const Matrix& Y_S = source.labels_onehot;
    const Matrix& Y_T = target.labels_onehot;
    const int m = static_cast<int>(Y_T.cols());

    CildaModel model;
    model.variant = cfg.variant;
    model.p = static_cast<int>(target.p());
    model.m = m;
    model.config = cfg;
    model.source_id = source.domain_id;
    model.target_id = target.domain_id;
    model.beta = Matrix(0, m);

    ResidualState res{Y_S, Y_T};
    MmdState mmd = MmdState::init(source, target);
    Matrix H_S(source.n(), 0), H_T(target.n(), 0);
    model.trace.push_back(res.e_T.norm());

    for (int L = 1; L <= cfg.L_max && model.trace.back() > cfg.eps; ++L) {
        ConfigureResult hit = configure_node(res, source, target, mmd, model.beta, cfg, L);
        if (!hit.found) {
            model.search_exhausted = true;
            break;
        }
        const Vector h_S = hidden_output(hit.node, source.features);
        const Vector h_T = hidden_output(hit.node, target.features);
        const Vector d_L = mmd.column(h_S, h_T);

        if (cfg.variant == CildaVariant::CILDA1) {
            const Vector b_L = cilda1_beta(res, h_S, h_T, mmd.d, d_L, model.beta, cfg);
            model.beta.conservativeResize(L, Eigen::NoChange);
            model.beta.row(L - 1) = b_L.transpose();
            res.e_S.noalias() -= h_S * b_L.transpose();
            res.e_T.noalias() -= h_T * b_L.transpose();
        }
        mmd.append_column(d_L);
        H_S.conservativeResize(Eigen::NoChange, L);
        H_T.conservativeResize(Eigen::NoChange, L);
        H_S.col(L - 1) = h_S;
        H_T.col(L - 1) = h_T;
        model.nodes.push_back(hit.node);
        if (cfg.variant == CildaVariant::CILDA2) {
            model.beta = cilda2_solve(H_S, H_T, Y_S, Y_T, mmd.d, cfg);
            res.e_S = Y_S - H_S * model.beta;
            res.e_T = Y_T - H_T * model.beta;
        }
        model.trace.push_back(res.e_T.norm());
        model.diagnostics.push_back({hit.gamma_used, hit.mu_used, hit.relax_rounds,
                                     hit.found ? hit.score.sigma.sum() : 0.0});
    }
    model.converged = model.trace.back() <= cfg.eps;
    return model;
}

std::vector<int> cilda_predict(const CildaModel& model, const Matrix& X) {
    if (X.cols() != model.p) throw ShapeMismatch("feature dim does not match model input width");
    if (model.nodes.empty()) return std::vector<int>(static_cast<std::size_t>(X.rows()), 0);
    return argmax_labels(model_scores(model.nodes, model.beta, X));
}

}  // namespace cileda
