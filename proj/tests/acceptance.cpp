// Acceptance gate: one [PASS]/[FAIL] line per criterion, nonzero exit when a
// gating criterion fails. Each check prints the evidence it gathered so a
// failure is diagnosable from the log alone.
//
// Environment:
//   CILEDA_CLI            path to the CLI binary (file-determinism criterion)
//   CILEDA_CWRU_MANIFEST  optional recordings manifest for the non-gating
//                         real-data report
#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "cileda/cilda.hpp"
#include "cileda/cloudfeat.hpp"
#include "cileda/dataio.hpp"
#include "cileda/ensemble.hpp"
#include "cileda/harness.hpp"
#include "cileda/rng.hpp"
#include "cileda/scn.hpp"
#include "cileda/serialize.hpp"
#include "cileda/wpd.hpp"
#include "oracles.hpp"

using namespace cileda;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void verdict(bool pass, int index, const std::string& what) {
    std::printf("[%s] %d. %s\n", pass ? "PASS" : "FAIL", index, what.c_str());
    if (!pass) ++failures;
}

void info(const char* fmt, ...) {
    va_list args;
    va_start(args, fmt);
    std::printf("       ");
    std::vfprintf(stdout, fmt, args);
    std::printf("\n");
    va_end(args);
}

Matrix random_matrix(Eigen::Index r, Eigen::Index c, rng::Stream& gen) {
    Matrix M(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < c; ++j) M(i, j) = gen.normal();
    return M;
}

// Random two-domain problem within the gate's size box: m <= 4 classes,
// p <= 10 features, at most 100 samples per domain.
std::vector<DomainDataset> random_pair(rng::Stream& gen) {
    SynthSpec sp;
    sp.n_classes = 2 + static_cast<int>(gen.below(3));
    sp.dim = 2 + static_cast<int>(gen.below(9));
    const int cap = 100 / sp.n_classes;
    const int per_class = 3 + static_cast<int>(gen.below(static_cast<std::uint64_t>(cap - 2)));
    sp.samples_per_class.assign(static_cast<std::size_t>(sp.n_classes), per_class);
    sp.domains = {{"S", gen.uniform(0.5, 2.5), gen.uniform(0.0, 0.4)},
                  {"T", 0.0, 0.0}};
    sp.noise_sigma = gen.uniform(0.2, 0.8);
    sp.seed = gen.next_u64();
    return synth_domains(sp);
}

CildaConfig contraction_config(std::uint64_t seed, CildaVariant variant) {
    CildaConfig cfg;
    cfg.L_max = 25;
    cfg.eps = 1e-6;  // effectively: run the full node budget
    cfg.T_max = 15;
    cfg.scale_set = {0.5, 1, 3, 5, 10};
    cfg.seed = seed;
    cfg.variant = variant;
    return cfg;
}

// ---------------------------------------------------------------- criterion 1
void criterion_contraction() {
    rng::Stream meta(0xC1);
    const double slack = 1e-9;

    // Incremental variant: the per-node bound is a theorem and must hold.
    long long nodes_inc = 0, bad_inc = 0, trace_up_inc = 0;
    for (int run = 0; run < 100; ++run) {
        const auto domains = random_pair(meta);
        const CildaModel model =
            cilda_train(domains[0], domains[1], contraction_config(meta.next_u64(), CildaVariant::CILDA1));
        for (std::size_t i = 1; i < model.trace.size(); ++i) {
            ++nodes_inc;
            const double prev_sq = model.trace[i - 1] * model.trace[i - 1];
            const double cur_sq = model.trace[i] * model.trace[i];
            const auto& diag = model.diagnostics[i - 1];
            if (cur_sq > (diag.gamma + diag.mu) * prev_sq + slack) ++bad_inc;
            if (model.trace[i] > model.trace[i - 1] + 1e-12) ++trace_up_inc;
        }
    }
    info("incremental variant: %lld nodes, %lld bound violations, %lld trace increases",
         nodes_inc, bad_inc, trace_up_inc);

    // Re-solve variant, replayed step by step so the intermediate quantities
    // are visible. The incremental half-step provably contracts (measured
    // here as a control); the post-re-solve residual is what this criterion
    // gates on, and it is measured as found.
    long long nodes_re = 0, bad_re = 0, trace_up_re = 0, bad_half = 0;
    int runs_bad = 0;
    double worst_excess = 0.0, worst_stationarity = 0.0;
    for (int run = 0; run < 100; ++run) {
        const auto domains = random_pair(meta);
        const DomainDataset& src = domains[0];
        const DomainDataset& tgt = domains[1];
        const CildaConfig cfg = contraction_config(meta.next_u64(), CildaVariant::CILDA2);

        ResidualState res{src.labels_onehot, tgt.labels_onehot};
        MmdState mmd = MmdState::init(src, tgt);
        Matrix H_S(src.n(), 0), H_T(tgt.n(), 0);
        Matrix beta(0, tgt.m());
        double prev = res.e_T.norm();
        bool run_bad = false;

        for (int L = 1; L <= cfg.L_max && prev > cfg.eps; ++L) {
            const ConfigureResult hit = configure_node(res, src, tgt, mmd, beta, cfg, L);
            if (!hit.found) break;
            const Vector h_S = hidden_output(hit.node, src.features);
            const Vector h_T = hidden_output(hit.node, tgt.features);
            const Vector d_L = mmd.column(h_S, h_T);

            const Vector b_inc = cilda1_beta(res, h_S, h_T, mmd.d, d_L, beta, cfg);
            const double half_sq = (res.e_T - h_T * b_inc.transpose()).squaredNorm();
            if (half_sq > (hit.gamma_used + hit.mu_used) * prev * prev + slack) ++bad_half;

            mmd.append_column(d_L);
            H_S.conservativeResize(Eigen::NoChange, L);
            H_T.conservativeResize(Eigen::NoChange, L);
            H_S.col(L - 1) = h_S;
            H_T.col(L - 1) = h_T;
            beta = cilda2_solve(H_S, H_T, src.labels_onehot, tgt.labels_onehot, mmd.d, cfg);

            const Matrix grad = beta + cfg.C_S * H_S.transpose() * (H_S * beta - src.labels_onehot) +
                                cfg.C_T * H_T.transpose() * (H_T * beta - tgt.labels_onehot) +
                                cfg.lambda * mmd.d.transpose() * (mmd.d * beta);
            worst_stationarity = std::max(worst_stationarity, grad.norm());

            res.e_S = src.labels_onehot - H_S * beta;
            res.e_T = tgt.labels_onehot - H_T * beta;
            const double cur = res.e_T.norm();

            ++nodes_re;
            const double bound = (hit.gamma_used + hit.mu_used) * prev * prev + slack;
            if (cur * cur > bound) {
                ++bad_re;
                run_bad = true;
                worst_excess = std::max(worst_excess, cur * cur - bound);
            }
            if (cur > prev + 1e-12) ++trace_up_re;
            prev = cur;
        }
        runs_bad += run_bad;
    }
    info("re-solve variant: %lld nodes, %lld bound violations in %d/100 runs, worst excess %.3e",
         nodes_re, bad_re, runs_bad, worst_excess);
    info("re-solve variant: %lld trace increases; incremental half-step violations %lld; "
         "worst re-solve gradient %.3e",
         trace_up_re, bad_half, worst_stationarity);
    if (bad_re > 0)
        info("note: the acceptance gate passes only at the half-step; the global re-solve "
             "optimizes a weighted three-term objective, not the target residual alone, "
             "so its residual may exceed the per-node bound (measured, not masked)");

    verdict(bad_inc == 0 && trace_up_inc == 0 && bad_re == 0 && trace_up_re == 0, 1,
            "per-node contraction bound and non-increasing residual trace, 200 randomized runs");
}

// ---------------------------------------------------------------- criterion 2
void criterion_stationarity() {
    rng::Stream gen(0xC2);
    const std::vector<double> cs_grid{0.01, 0.1, 1.0, 10.0, 100.0};
    const std::vector<double> ct_grid{1.0, 10.0, 100.0};
    const std::vector<double> lam_grid{0.1, 0.5, 1.0, 2.0, 10.0, 20.0, 50.0};

    double worst_node_grad = 0.0, worst_node_rel = 0.0;
    double worst_glob_grad = 0.0, worst_glob_rel = 0.0;
    bool pass = true;

    for (int trial = 0; trial < 100; ++trial) {
        const int m = 2 + static_cast<int>(gen.below(3));
        const int n_S = 5 + static_cast<int>(gen.below(26));
        const int n_T = 5 + static_cast<int>(gen.below(26));
        const int L_prev = static_cast<int>(gen.below(6));
        const int L = 1 + static_cast<int>(gen.below(6));

        CildaConfig cfg;
        cfg.C_S = cs_grid[gen.below(cs_grid.size())];
        cfg.C_T = ct_grid[gen.below(ct_grid.size())];
        cfg.lambda = lam_grid[gen.below(lam_grid.size())];

        // node-level: incremental weight vs its own objective
        ResidualState res;
        res.e_S = random_matrix(n_S, m, gen);
        res.e_T = random_matrix(n_T, m, gen);
        const Vector h_S = random_matrix(n_S, 1, gen);
        const Vector h_T = random_matrix(n_T, 1, gen);
        const Matrix d_prev = random_matrix(m + 1, L_prev, gen);
        const Matrix beta_prev = random_matrix(L_prev, m, gen);
        const Vector d_L = random_matrix(m + 1, 1, gen);

        const Vector b = cilda1_beta(res, h_S, h_T, d_prev, d_L, beta_prev, cfg);
        Vector b_oracle(m);
        for (int q = 0; q < m; ++q) {
            const Vector align_base =
                L_prev > 0 ? Vector(d_prev * beta_prev.col(q)) : Vector(Vector::Zero(m + 1));
            const auto f = [&](double x) {
                return x * x + cfg.C_S * (res.e_S.col(q) - x * h_S).squaredNorm() +
                       cfg.C_T * (res.e_T.col(q) - x * h_T).squaredNorm() +
                       cfg.lambda * (align_base + x * d_L).squaredNorm();
            };
            // analytic gradient of f at the closed-form weight
            const double grad =
                2.0 * (b[q] + cfg.C_S * (h_S.squaredNorm() * b[q] - res.e_S.col(q).dot(h_S)) +
                       cfg.C_T * (h_T.squaredNorm() * b[q] - res.e_T.col(q).dot(h_T)) +
                       cfg.lambda * (align_base.dot(d_L) + d_L.squaredNorm() * b[q]));
            worst_node_grad = std::max(worst_node_grad, std::abs(grad));
            b_oracle[q] = oracles::golden_min(f, b[q] - 2.0, b[q] + 2.0);
        }
        // agreement of the weight vectors, norm-relative (same metric as the
        // global check; a comparison-based line search localizes each
        // coordinate to ~sqrt(machine eps) absolute)
        worst_node_rel =
            std::max(worst_node_rel, (b - b_oracle).norm() / std::max(1e-6, b.norm()));

        // model-level: global re-solve vs the full objective
        const Matrix H_S = random_matrix(n_S, L, gen);
        const Matrix H_Tm = random_matrix(n_T, L, gen);
        const Matrix Y_S = random_matrix(n_S, m, gen);
        const Matrix Y_T = random_matrix(n_T, m, gen);
        const Matrix d = random_matrix(m + 1, L, gen);
        const Matrix B = cilda2_solve(H_S, H_Tm, Y_S, Y_T, d, cfg);

        const Matrix grad_B = B + cfg.C_S * H_S.transpose() * (H_S * B - Y_S) +
                              cfg.C_T * H_Tm.transpose() * (H_Tm * B - Y_T) +
                              cfg.lambda * d.transpose() * (d * B);
        worst_glob_grad = std::max(worst_glob_grad, 2.0 * grad_B.norm());

        const auto grad_fn = [&](const Matrix& X) {
            return Matrix(X + cfg.C_S * H_S.transpose() * (H_S * X - Y_S) +
                          cfg.C_T * H_Tm.transpose() * (H_Tm * X - Y_T) +
                          cfg.lambda * d.transpose() * (d * X));
        };
        const Matrix B_cg = oracles::cg_min_quadratic(grad_fn, L, m);
        const double rel = (B_cg - B).norm() / std::max(1e-6, B.norm());
        worst_glob_rel = std::max(worst_glob_rel, rel);
    }

    pass = worst_node_grad <= 1e-8 && worst_glob_grad <= 1e-8 && worst_node_rel <= 1e-5 &&
           worst_glob_rel <= 1e-5;
    info("node weights: worst |objective gradient| %.3e (<= 1e-8), worst minimizer gap %.3e rel (<= 1e-5)",
         worst_node_grad, worst_node_rel);
    info("global weights: worst gradient norm %.3e (<= 1e-8), worst conjugate-gradient gap %.3e rel (<= 1e-5)",
         worst_glob_grad, worst_glob_rel);
    verdict(pass, 2, "closed-form output weights are stationary points of their objectives, 100 instances");
}

// ---------------------------------------------------------------- criterion 3
void criterion_parseval() {
    rng::Stream gen(0xC3);
    const WaveletSpec w = WaveletSpec::db4();
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        const int level = 1 + static_cast<int>(gen.below(5));
        const int blocks = 1 + static_cast<int>(gen.below(16));
        const int len = blocks * (1 << level);
        const double scale = std::exp(gen.uniform(-2.3, 2.3));
        Segment seg(static_cast<std::size_t>(len));
        for (auto& v : seg) v = scale * gen.normal();

        const WpTree tree = wpd_decompose(seg, level, w);
        double e0 = 0.0;
        for (double v : seg) e0 += v * v;
        for (int lvl = 0; lvl <= level; ++lvl) {
            const double rel = std::abs(node_energy(tree, lvl) - e0) / e0;
            worst = std::max(worst, rel);
        }
    }
    info("100 random segments, depths 1..5: worst level-energy error %.3e rel (<= 1e-8)", worst);
    verdict(worst <= 1e-8, 3, "packet decomposition preserves signal energy at every level");
}

// ---------------------------------------------------------------- criterion 4
void criterion_cloud() {
    // fixture derived by hand from the estimator's definition
    const CloudDescriptor fx = backward_cloud({0.0, 2.0});
    const bool fixture_ok = std::abs(fx.Ex - 1.0) <= 1e-4 && std::abs(fx.En - 1.25331) <= 1e-4 &&
                            std::abs(fx.He - 0.65514) <= 1e-4;
    info("two-point fixture: Ex %.6f En %.6f He %.6f (targets 1, 1.25331, 0.65514; tol 1e-4)",
         fx.Ex, fx.En, fx.He);

    // tolerances pre-registered from an independent 200-batch oracle run
    // (worst |Ex-mu| 0.0161, worst |En-sigma| 0.0163; pinned at twice that)
    const double ex_tol = 0.033, en_tol = 0.033;
    const double mu = 1.5, sigma = 2.0;
    const int n = 100000;
    double worst_ex = 0.0, worst_en = 0.0;
    for (int batch = 0; batch < 20; ++batch) {
        rng::Stream gen(9000 + static_cast<std::uint64_t>(batch));
        std::vector<double> x(static_cast<std::size_t>(n));
        for (auto& v : x) v = mu + sigma * gen.normal();
        const CloudDescriptor c = backward_cloud(x);
        worst_ex = std::max(worst_ex, std::abs(c.Ex - mu));
        worst_en = std::max(worst_en, std::abs(c.En - sigma));
    }
    info("20 batches of 1e5 draws from N(1.5, 2^2): worst |Ex-mu| %.4f (<= %.3f), "
         "worst |En-sigma| %.4f (<= %.3f)",
         worst_ex, ex_tol, worst_en, en_tol);
    verdict(fixture_ok && worst_ex <= ex_tol && worst_en <= en_tol, 4,
            "cloud descriptors recover Gaussian parameters and the hand-computed fixture");
}

// ---------------------------------------------------------------- criterion 5
void criterion_vote() {
    long long patterns = 0, mismatches = 0;
    for (int m = 2; m <= 4; ++m) {
        for (int size = 1; size <= 5; ++size) {
            std::vector<int> preds(static_cast<std::size_t>(size), 0);
            long long total = 1;
            for (int i = 0; i < size; ++i) total *= m;
            for (long long code = 0; code < total; ++code) {
                long long rest = code;
                for (int i = 0; i < size; ++i) {
                    preds[static_cast<std::size_t>(i)] = static_cast<int>(rest % m);
                    rest /= m;
                }
                ++patterns;
                const int got = majority_vote(preds, "self-then-lowest", preds[0], m);
                if (got != oracles::vote_by_enumeration(preds, preds[0], m)) ++mismatches;
            }
        }
    }
    info("exhaustive ballots, 1..5 members x 2..4 classes: %lld patterns, %lld mismatches",
         patterns, mismatches);

    // end-to-end: a trained ensemble's output equals the vote over its members
    SynthSpec sp;
    sp.n_classes = 3;
    sp.dim = 5;
    sp.samples_per_class = {12, 12, 12};
    sp.domains = {{"A", 1.0, 0.1}, {"B", 0.0, 0.0}, {"C", 2.0, 0.3}};
    sp.noise_sigma = 0.6;
    sp.seed = 0xC5;
    std::map<std::string, DomainDataset> datasets;
    for (auto& d : synth_domains(sp)) datasets.emplace(d.domain_id, std::move(d));
    CildaConfig cfg;
    cfg.L_max = 10;
    cfg.eps = 0.05;
    cfg.T_max = 10;
    cfg.scale_set = {1, 3, 5};
    cfg.seed = 3;
    const EnsembleModel ens = train_ensemble(datasets, "B", cfg);
    const Matrix& X = datasets.at("B").features;
    const auto voted = ensemble_predict(ens, X);
    std::vector<std::vector<int>> member_preds;
    for (const auto& mem : ens.members) member_preds.push_back(cilda_predict(mem, X));
    long long live_mismatch = 0;
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        std::vector<int> ballot;
        for (const auto& preds : member_preds) ballot.push_back(preds[static_cast<std::size_t>(i)]);
        if (voted[static_cast<std::size_t>(i)] !=
            oracles::vote_by_enumeration(ballot, ballot[0], ens.m()))
            ++live_mismatch;
    }
    info("trained 3-member ensemble, %lld samples: %lld vote mismatches",
         static_cast<long long>(X.rows()), live_mismatch);
    verdict(mismatches == 0 && live_mismatch == 0, 5,
            "ensemble voting matches brute-force ballot counting, exhaustively and end to end");
}

// ---------------------------------------------------------------- criterion 6
void criterion_benchmark() {
    SynthBenchConfig cfg;  // 20 repetitions, seed 1
    const SynthBenchResult r = run_synth_bench(cfg);
    const double lift_da = r.mean_cilda - r.mean_scn;
    const double lift_vote = r.mean_ensemble - r.mean_self;
    info("means over %zu seeds: target-only %.4f, adapted %.4f, vote %.4f, self member %.4f",
         r.runs.size(), r.mean_scn, r.mean_cilda, r.mean_ensemble, r.mean_self);
    info("adaptation lift %.4f (> 0.06 pinned by pilot), vote lift %.4f (>= 0.04 pinned by pilot)",
         lift_da, lift_vote);
    verdict(lift_da > 0.06 && lift_vote >= 0.04, 6,
            "cross-domain training and voting beat their baselines on the built-in benchmark");
}

// ---------------------------------------------------------------- criterion 7
struct CliRunner {
    std::string cli;
    fs::path dir;

    int run(const std::string& args, int threads) const {
        const std::string cmd = "CILEDA_THREADS=" + std::to_string(threads) + " " + cli + " " +
                                args + " > /dev/null 2>&1";
        const int status = std::system(cmd.c_str());
        return status < 0 ? status : WEXITSTATUS(status);
    }
    std::string file(const std::string& name) const { return (dir / name).string(); }
};

bool same_bytes(const std::string& a, const std::string& b, const char* label) {
    const bool ok = load_text(a) == load_text(b);
    if (!ok) info("MISMATCH: %s differs between thread counts", label);
    return ok;
}

void criterion_determinism() {
    const char* env = std::getenv("CILEDA_CLI");
    const std::string cli = env != nullptr ? env : "./cileda";
    if (!fs::exists(cli)) {
        info("CLI binary not found at '%s' (set CILEDA_CLI)", cli.c_str());
        verdict(false, 7, "same seed gives byte-identical model and report files at 1 and 8 threads");
        return;
    }

    const fs::path dir = fs::temp_directory_path() / "cileda_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const CliRunner cr{cli, dir};

    // datasets for the CLI to chew on
    SynthSpec sp;
    sp.n_classes = 3;
    sp.dim = 6;
    sp.samples_per_class = {30, 30, 30};
    sp.domains = {{"S", 1.2, 0.2}, {"T", 0.0, 0.0}};
    sp.noise_sigma = 0.5;
    sp.seed = 0xC7;
    const auto domains = synth_domains(sp);
    const std::map<int, int> tr{{0, 20}, {1, 20}, {2, 20}};
    const std::map<int, int> te{{0, 10}, {1, 10}, {2, 10}};
    const auto [t_train, t_test] = split(domains[1], tr, te, 11);
    save_dataset_csv(domains[0], cr.file("source.csv"));
    save_dataset_csv(t_train, cr.file("target.csv"));
    save_dataset_csv(t_test, cr.file("test.csv"));

    bool pass = true;
    const std::string hyper = " --seed 7 --l-max 15 --t-max 10 --eps 0.02 --scales 0.5 1 3 5";
    for (int threads : {1, 8}) {
        const std::string tag = "_t" + std::to_string(threads);
        int rc = 0;
        rc |= cr.run("train --variant cilda2 --source " + cr.file("source.csv") + " --target " +
                         cr.file("target.csv") + " --model " + cr.file("model" + tag + ".json") +
                         hyper,
                     threads);
        rc |= cr.run("evaluate --model " + cr.file("model" + tag + ".json") + " --test " +
                         cr.file("test.csv") + " --report " + cr.file("report" + tag + ".json"),
                     threads);
        rc |= cr.run("ensemble --target " + cr.file("target.csv") + " --sources " +
                         cr.file("source.csv") + " --out " + cr.file("ens" + tag + ".json") + hyper,
                     threads);
        rc |= cr.run("synth-bench --seeds 3 --seed 5 --out " + cr.file("bench" + tag + ".json"),
                     threads);
        if (rc != 0) {
            info("a CLI invocation failed at %d threads (exit %d)", threads, rc);
            pass = false;
        }
    }

    pass = pass && same_bytes(cr.file("model_t1.json"), cr.file("model_t8.json"), "trained model");
    pass = pass && same_bytes(cr.file("report_t1.json"), cr.file("report_t8.json"), "report JSON");
    pass = pass && same_bytes(cr.file("report_t1.csv"), cr.file("report_t8.csv"), "report CSV");
    pass = pass && same_bytes(cr.file("ens_t1.json"), cr.file("ens_t8.json"), "ensemble model");
    pass = pass && same_bytes(cr.file("bench_t1.json"), cr.file("bench_t8.json"), "benchmark JSON");
    pass = pass && same_bytes(cr.file("bench_t1.csv"), cr.file("bench_t8.csv"), "benchmark CSV");

    // repeat at the same thread count: the whole pipeline is a pure function
    // of its inputs
    int rc = cr.run("train --variant cilda2 --source " + cr.file("source.csv") + " --target " +
                        cr.file("target.csv") + " --model " + cr.file("model_again.json") + hyper,
                    1);
    pass = pass && rc == 0 &&
           same_bytes(cr.file("model_t1.json"), cr.file("model_again.json"), "repeat run");
    if (pass) info("train, evaluate, ensemble and benchmark outputs are byte-identical at 1 and 8 threads");
    verdict(pass, 7, "same seed gives byte-identical model and report files at 1 and 8 threads");
    fs::remove_all(dir);
}

// ---------------------------------------------------------------- criterion 8
void criterion_real_data() {
    const char* manifest = std::getenv("CILEDA_CWRU_MANIFEST");
    if (manifest == nullptr) {
        info("no recordings manifest supplied (set CILEDA_CWRU_MANIFEST); skipping");
        verdict(true, 8, "real-recording cross-domain accuracy (best effort, reported only)");
        return;
    }
    try {
        const auto metas = load_manifest(manifest, 10);
        std::map<std::string, std::vector<RecordingMeta>> by_domain;
        for (const auto& meta : metas) by_domain[meta.domain_id].push_back(meta);
        if (by_domain.size() < 2) {
            info("manifest holds %zu domain(s); need at least two", by_domain.size());
            verdict(true, 8, "real-recording cross-domain accuracy (best effort, reported only)");
            return;
        }
        FeatureConfig fc;  // defaults: depth-3 packets on denoised 1024-sample windows
        auto it = by_domain.begin();
        const DomainDataset source = featurize_dataset(it->second, fc);
        ++it;
        const DomainDataset target_all = featurize_dataset(it->second, fc);

        std::map<int, int> tr, te;
        for (int c = 0; c < static_cast<int>(target_all.m()); ++c) {
            const int have = target_all.class_counts[static_cast<std::size_t>(c)];
            tr[c] = have / 2;
            te[c] = have - have / 2;
        }
        const auto [t_train, t_test] = split(target_all, tr, te, 1);

        CildaConfig cfg;
        cfg.L_max = 100;
        cfg.T_max = 50;
        cfg.seed = 1;
        const CildaModel model = cilda_train(source, t_train, cfg);
        const auto pred = cilda_predict(model, t_test.features);
        const double acc = accuracy_of(confusion(pred, t_test.labels(), static_cast<int>(t_test.m())));
        info("%s -> %s: accuracy %.4f on %lld held-out windows (reference neighborhood ~0.9547)",
             source.domain_id.c_str(), target_all.domain_id.c_str(), acc,
             static_cast<long long>(t_test.n()));
    } catch (const std::exception& e) {
        info("real-data run failed: %s", e.what());
    }
    verdict(true, 8, "real-recording cross-domain accuracy (best effort, reported only)");
}

}  // namespace

int main() {
    std::printf("acceptance gate\n");
    criterion_contraction();
    criterion_stationarity();
    criterion_parseval();
    criterion_cloud();
    criterion_vote();
    criterion_benchmark();
    criterion_determinism();
    criterion_real_data();
    if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
