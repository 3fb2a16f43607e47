#include "cileda/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cileda/errors.hpp"
#include "cileda/parallel.hpp"
#include "cileda/scn.hpp"
#include "cileda/serialize.hpp"

namespace cileda {

using nlohmann::json;

namespace {

std::pair<double, double> mean_std(const std::vector<double>& v) {
    if (v.empty()) return {0.0, 0.0};
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    var /= static_cast<double>(v.size());
    return {mean, std::sqrt(var)};
}

json confusion_to_json(const ConfusionMatrix& c) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < c.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < c.cols(); ++j) row.push_back(c(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string csv_sibling(const std::string& json_path) {
    const std::string suffix = ".json";
    if (json_path.size() >= suffix.size() &&
        json_path.compare(json_path.size() - suffix.size(), suffix.size(), suffix) == 0)
        return json_path.substr(0, json_path.size() - suffix.size()) + ".csv";
    return json_path + ".csv";
}

}  // namespace

ConfusionMatrix confusion(const std::vector<int>& pred, const std::vector<int>& truth, int m) {
    if (pred.size() != truth.size()) throw ShapeMismatch("prediction and truth lengths differ");
    ConfusionMatrix c = ConfusionMatrix::Zero(m, m);
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (truth[i] < 0 || truth[i] >= m || pred[i] < 0 || pred[i] >= m)
            throw ShapeMismatch("label outside class range");
        ++c(truth[i], pred[i]);
    }
    return c;
}

double accuracy_of(const ConfusionMatrix& c) {
    const long long total = c.sum();
    if (total == 0) return 0.0;
    return static_cast<double>(c.diagonal().sum()) / static_cast<double>(total);
}

std::vector<double> precision_of(const ConfusionMatrix& c) {
    std::vector<double> out(static_cast<std::size_t>(c.cols()), 0.0);
    for (Eigen::Index j = 0; j < c.cols(); ++j) {
        const long long col = c.col(j).sum();
        if (col > 0) out[static_cast<std::size_t>(j)] = static_cast<double>(c(j, j)) / static_cast<double>(col);
    }
    return out;
}

std::vector<double> recall_of(const ConfusionMatrix& c) {
    std::vector<double> out(static_cast<std::size_t>(c.rows()), 0.0);
    for (Eigen::Index i = 0; i < c.rows(); ++i) {
        const long long row = c.row(i).sum();
        if (row > 0) out[static_cast<std::size_t>(i)] = static_cast<double>(c(i, i)) / static_cast<double>(row);
    }
    return out;
}

void Report::finalize() {
    std::tie(mean_accuracy, std_accuracy) = mean_std(per_run_accuracy);
    precision = precision_of(confusion_total);
    recall = recall_of(confusion_total);
}

std::string report_to_json(const Report& r, bool with_timing) {
    json j;
    j["seeds"] = r.seeds;
    j["per_run_accuracy"] = r.per_run_accuracy;
    j["mean_accuracy"] = r.mean_accuracy;
    j["std_accuracy"] = r.std_accuracy;
    j["confusion"] = confusion_to_json(r.confusion_total);
    j["precision"] = r.precision;
    j["recall"] = r.recall;
    if (with_timing) j["wall_seconds"] = r.wall_seconds;
    return j.dump(2) + "\n";
}

std::string report_to_csv(const Report& r) {
    std::ostringstream out;
    out << "run,seed,accuracy\n";
    for (std::size_t k = 0; k < r.per_run_accuracy.size(); ++k)
        out << k << "," << r.seeds[k] << "," << format_double(r.per_run_accuracy[k]) << "\n";
    return out.str();
}

void write_report(const Report& r, const std::string& json_path, bool with_timing) {
    save_text(json_path, report_to_json(r, with_timing));
    save_text(csv_sibling(json_path), report_to_csv(r));
}

Report run_train_eval(const TrainEvalSpec& spec) {
    if (spec.target == nullptr || spec.test == nullptr)
        throw InvalidConfig("experiment needs training and test datasets");
    const bool cross = spec.method == Method::CILDA1 || spec.method == Method::CILDA2;
    if (cross && spec.source == nullptr)
        throw InvalidConfig("cross-domain training needs a source dataset");
    if (spec.repetitions < 1) throw InvalidConfig("repetitions must be >= 1");

    const auto t0 = std::chrono::steady_clock::now();
    const int m = static_cast<int>(spec.target->m());
    const std::size_t reps = static_cast<std::size_t>(spec.repetitions);
    const std::vector<int> truth = spec.test->labels();

    std::vector<double> acc(reps);
    std::vector<ConfusionMatrix> mats(reps);
    std::vector<std::uint64_t> seeds(reps);

    parallel_for(reps, [&](std::size_t k) {
        CildaConfig cfg = spec.cfg;
        cfg.seed = spec.seed + k;
        seeds[k] = cfg.seed;
        std::vector<int> pred;
        switch (spec.method) {
            case Method::SC1:
                pred = scn_predict(scn_train(*spec.target, cfg, ScnVariant::SC1), spec.test->features);
                break;
            case Method::SC3:
                pred = scn_predict(scn_train(*spec.target, cfg, ScnVariant::SC3), spec.test->features);
                break;
            case Method::CILDA1:
            case Method::CILDA2:
                cfg.variant = spec.method == Method::CILDA1 ? CildaVariant::CILDA1
                                                            : CildaVariant::CILDA2;
                pred = cilda_predict(cilda_train(*spec.source, *spec.target, cfg),
                                     spec.test->features);
                break;
        }
        mats[k] = confusion(pred, truth, m);
        acc[k] = accuracy_of(mats[k]);
    });

    Report r;
    r.seeds = std::move(seeds);
    r.per_run_accuracy = std::move(acc);
    r.confusion_total = ConfusionMatrix::Zero(m, m);
    for (const ConfusionMatrix& c : mats) r.confusion_total += c;
    r.finalize();
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

void set_cilda_param(CildaConfig& cfg, const std::string& name, double value) {
    if (name == "cs" || name == "C_S")
        cfg.C_S = value;
    else if (name == "ct" || name == "C_T")
        cfg.C_T = value;
    else if (name == "lambda")
        cfg.lambda = value;
    else
        throw UnknownParameter("'" + name + "' is not a sweepable parameter (cs, ct, lambda)");
}

namespace {
std::vector<double> dedup_keep_first(const std::vector<double>& values) {
    std::vector<double> out;
    for (double v : values)
        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    return out;
}
}  // namespace

std::vector<SensitivityCell> sensitivity_grid(const DomainDataset& source,
                                              const DomainDataset& target,
                                              const DomainDataset& test, const CildaConfig& base,
                                              const std::string& param1,
                                              const std::vector<double>& values1,
                                              const std::string& param2,
                                              const std::vector<double>& values2,
                                              int repetitions, std::uint64_t seed) {
    if (param1 == param2) throw UnknownParameter("sweep parameters must differ");
    if (values1.empty() || values2.empty()) throw InvalidConfig("sweep value lists must be non-empty");
    {
        CildaConfig probe = base;  // rejects unknown names before any training
        set_cilda_param(probe, param1, 1.0);
        set_cilda_param(probe, param2, 1.0);
    }
    const std::vector<double> v1 = dedup_keep_first(values1);
    const std::vector<double> v2 = dedup_keep_first(values2);

    std::vector<SensitivityCell> cells;
    cells.reserve(v1.size() * v2.size());
    for (double a : v1) {
        for (double b : v2) {
            CildaConfig cfg = base;
            set_cilda_param(cfg, param1, a);
            set_cilda_param(cfg, param2, b);
            TrainEvalSpec spec;
            spec.method = cfg.variant == CildaVariant::CILDA1 ? Method::CILDA1 : Method::CILDA2;
            spec.source = &source;
            spec.target = &target;
            spec.test = &test;
            spec.cfg = cfg;
            spec.repetitions = repetitions;
            spec.seed = seed;
            const Report r = run_train_eval(spec);
            cells.push_back({a, b, r.mean_accuracy, r.std_accuracy});
        }
    }
    return cells;
}

std::string sensitivity_to_csv(const std::string& param1, const std::string& param2,
                               const std::vector<SensitivityCell>& cells) {
    std::ostringstream out;
    out << param1 << "," << param2 << ",mean_acc,std_acc\n";
    for (const SensitivityCell& c : cells)
        out << format_double(c.v1) << "," << format_double(c.v2) << ","
            << format_double(c.mean_acc) << "," << format_double(c.std_acc) << "\n";
    return out.str();
}

SynthBenchResult run_synth_bench(const SynthBenchConfig& cfg) {
    if (cfg.repetitions < 1) throw InvalidConfig("repetitions must be >= 1");
    const auto t0 = std::chrono::steady_clock::now();

    std::vector<DomainShift> domains = cfg.domains;
    if (domains.empty())
        domains = {{"A", 0.0, 0.0}, {"B", 1.2, 0.15}, {"C", 2.4, 0.3}, {"D", 3.6, 0.45}};
    bool target_known = false;
    for (const DomainShift& d : domains) target_known |= d.domain_id == cfg.target_id;
    if (!target_known) throw InvalidConfig("target domain is not among the benchmark domains");

    const std::size_t reps = static_cast<std::size_t>(cfg.repetitions);
    std::vector<SynthBenchRun> runs(reps);

    parallel_for(reps, [&](std::size_t k) {
        const std::uint64_t run_seed = cfg.seed + k;

        SynthSpec sp;
        sp.n_classes = cfg.n_classes;
        sp.dim = cfg.dim;
        sp.samples_per_class.assign(static_cast<std::size_t>(cfg.n_classes),
                                    cfg.train_per_fault + cfg.test_per_class);
        sp.samples_per_class.back() = cfg.train_normal + cfg.test_per_class;
        sp.domains = domains;
        sp.noise_sigma = cfg.noise_sigma;
        sp.class_sep = cfg.class_sep;
        sp.seed = run_seed;

        std::map<int, int> train_counts, test_counts;
        for (int c = 0; c < cfg.n_classes; ++c) {
            train_counts[c] = c == cfg.n_classes - 1 ? cfg.train_normal : cfg.train_per_fault;
            test_counts[c] = cfg.test_per_class;
        }

        std::map<std::string, DomainDataset> train_map;
        DomainDataset target_test;
        std::vector<std::string> source_ids;
        for (const DomainDataset& pool : synth_domains(sp)) {
            auto [train, test] = split(pool, train_counts, test_counts, run_seed);
            if (pool.domain_id == cfg.target_id) target_test = std::move(test);
            else source_ids.push_back(pool.domain_id);
            train_map.emplace(pool.domain_id, std::move(train));
        }
        std::sort(source_ids.begin(), source_ids.end());
        const DomainDataset& target_train = train_map.at(cfg.target_id);

        CildaConfig run_cfg = cfg.cilda;
        run_cfg.seed = run_seed;
        run_cfg.variant = CildaVariant::CILDA2;

        const std::vector<int> truth = target_test.labels();
        const int m = cfg.n_classes;
        SynthBenchRun& row = runs[k];
        row.seed = run_seed;

        const ScnModel scn = scn_train(target_train, run_cfg, ScnVariant::SC3);
        row.acc_scn = accuracy_of(confusion(scn_predict(scn, target_test.features), truth, m));

        const CildaModel da =
            cilda_train(train_map.at(source_ids.front()), target_train, run_cfg);
        row.acc_cilda = accuracy_of(confusion(cilda_predict(da, target_test.features), truth, m));

        const EnsembleModel ens = train_ensemble(train_map, cfg.target_id, run_cfg);
        row.acc_ensemble =
            accuracy_of(confusion(ensemble_predict(ens, target_test.features), truth, m));
        row.acc_self = accuracy_of(
            confusion(cilda_predict(ens.members.front(), target_test.features), truth, m));
    });

    SynthBenchResult r;
    r.runs = std::move(runs);
    std::vector<double> a, b, c, d;
    for (const SynthBenchRun& run : r.runs) {
        a.push_back(run.acc_scn);
        b.push_back(run.acc_cilda);
        c.push_back(run.acc_ensemble);
        d.push_back(run.acc_self);
    }
    std::tie(r.mean_scn, r.std_scn) = mean_std(a);
    std::tie(r.mean_cilda, r.std_cilda) = mean_std(b);
    std::tie(r.mean_ensemble, r.std_ensemble) = mean_std(c);
    std::tie(r.mean_self, r.std_self) = mean_std(d);
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

std::string synth_bench_to_json(const SynthBenchResult& r, bool with_timing) {
    json j;
    json runs = json::array();
    for (const SynthBenchRun& run : r.runs)
        runs.push_back({{"seed", run.seed},
                        {"scn_target_only", run.acc_scn},
                        {"cilda2", run.acc_cilda},
                        {"cileda_vote", run.acc_ensemble},
                        {"self_member", run.acc_self}});
    j["runs"] = std::move(runs);
    j["mean"] = {{"scn_target_only", r.mean_scn},
                 {"cilda2", r.mean_cilda},
                 {"cileda_vote", r.mean_ensemble},
                 {"self_member", r.mean_self}};
    j["std"] = {{"scn_target_only", r.std_scn},
                {"cilda2", r.std_cilda},
                {"cileda_vote", r.std_ensemble},
                {"self_member", r.std_self}};
    if (with_timing) j["wall_seconds"] = r.wall_seconds;
    return j.dump(2) + "\n";
}

std::string synth_bench_to_csv(const SynthBenchResult& r) {
    std::ostringstream out;
    out << "seed,scn_target_only,cilda2,cileda_vote,self_member\n";
    for (const SynthBenchRun& run : r.runs)
        out << run.seed << "," << format_double(run.acc_scn) << "," << format_double(run.acc_cilda)
            << "," << format_double(run.acc_ensemble) << "," << format_double(run.acc_self)
            << "\n";
    return out.str();
}

}  // namespace cileda
