#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cileda/cilda.hpp"
#include "cileda/dataio.hpp"
#include "cileda/ensemble.hpp"
#include "cileda/linalg.hpp"

namespace cileda {

using ConfusionMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

// Entry (t, p) counts samples of truth t predicted as p.
ConfusionMatrix confusion(const std::vector<int>& pred, const std::vector<int>& truth, int m);

double accuracy_of(const ConfusionMatrix& c);
std::vector<double> precision_of(const ConfusionMatrix& c);  // 0 for never-predicted classes
std::vector<double> recall_of(const ConfusionMatrix& c);     // 0 for empty truth classes

struct Report {
    std::vector<std::uint64_t> seeds;
    std::vector<double> per_run_accuracy;
    double mean_accuracy = 0.0;
    double std_accuracy = 0.0;  // population std; 0 for a single run
    ConfusionMatrix confusion_total;  // aggregated over runs
    std::vector<double> precision;
    std::vector<double> recall;
    double wall_seconds = 0.0;  // volatile; written only on request

    // Fills the aggregate fields from seeds/per_run_accuracy/confusion_total.
    void finalize();
};

// Report files: JSON carries everything, the CSV is the per-run accuracy
// series (`run,seed,accuracy`). Timing stays out of both unless asked for,
// so equal seeds give byte-identical files.
std::string report_to_json(const Report& r, bool with_timing);
std::string report_to_csv(const Report& r);
void write_report(const Report& r, const std::string& json_path, bool with_timing);

enum class Method { SC1, SC3, CILDA1, CILDA2 };

// One train/evaluate experiment, repeated with seeds seed..seed+reps-1.
// `source` may be null for the target-only baselines.
struct TrainEvalSpec {
    Method method = Method::CILDA2;
    const DomainDataset* source = nullptr;
    const DomainDataset* target = nullptr;  // training data
    const DomainDataset* test = nullptr;
    CildaConfig cfg;
    int repetitions = 1;
    std::uint64_t seed = 1;
};

Report run_train_eval(const TrainEvalSpec& spec);

// Sensitivity sweep over two of {C_S, C_T, lambda} with the third fixed.
struct SensitivityCell {
    double v1 = 0.0;
    double v2 = 0.0;
    double mean_acc = 0.0;
    double std_acc = 0.0;
};

// `name` is "cs" | "ct" | "lambda" (also accepts "C_S" | "C_T").
void set_cilda_param(CildaConfig& cfg, const std::string& name, double value);

std::vector<SensitivityCell> sensitivity_grid(const DomainDataset& source,
                                              const DomainDataset& target,
                                              const DomainDataset& test, const CildaConfig& base,
                                              const std::string& param1,
                                              const std::vector<double>& values1,
                                              const std::string& param2,
                                              const std::vector<double>& values2,
                                              int repetitions, std::uint64_t seed);

std::string sensitivity_to_csv(const std::string& param1, const std::string& param2,
                               const std::vector<SensitivityCell>& cells);

// Built-in synthetic shift benchmark: Gaussian class clusters shared by four
// domains, displaced and rotated per domain, with the training split skewed
// to a handful of labeled fault samples against a larger normal class.
struct SynthBenchConfig {
    // The benchmark trains ~6 models per repetition, so it runs under a
    // lighter search budget than the CildaConfig defaults.
    SynthBenchConfig() {
        cilda.L_max = 60;
        cilda.T_max = 30;
        cilda.eps = 0.05;
        cilda.scale_set = {0.5, 1, 3, 5, 10, 25, 50};
    }

    int repetitions = 20;
    std::uint64_t seed = 1;
    CildaConfig cilda;  // shared hyperparameters for every trained model
    int n_classes = 4;
    int dim = 10;
    int train_per_fault = 5;
    int train_normal = 25;  // class n_classes-1 plays the normal state
    int test_per_class = 30;
    double noise_sigma = 2.0;
    double class_sep = 3.0;
    std::vector<DomainShift> domains;  // defaults filled when empty
    std::string target_id = "B";
};

struct SynthBenchRun {
    std::uint64_t seed = 0;
    double acc_scn = 0.0;       // target-only SC-III baseline
    double acc_cilda = 0.0;     // CILDA-II, first source to target
    double acc_ensemble = 0.0;  // majority vote over all pairs
    double acc_self = 0.0;      // the ensemble's self-pair member alone
};

struct SynthBenchResult {
    std::vector<SynthBenchRun> runs;
    double mean_scn = 0.0, std_scn = 0.0;
    double mean_cilda = 0.0, std_cilda = 0.0;
    double mean_ensemble = 0.0, std_ensemble = 0.0;
    double mean_self = 0.0, std_self = 0.0;
    double wall_seconds = 0.0;
};

SynthBenchResult run_synth_bench(const SynthBenchConfig& cfg);
std::string synth_bench_to_json(const SynthBenchResult& r, bool with_timing);
std::string synth_bench_to_csv(const SynthBenchResult& r);

}  // namespace cileda
