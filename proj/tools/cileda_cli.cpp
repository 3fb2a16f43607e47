// Command-line front end: feature extraction, training, evaluation, the
// voting ensemble, sensitivity grids and the synthetic benchmark.
//
// Exit codes: 0 success, 2 validation/input error, 3 training failure.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cileda/cilda.hpp"
#include "cileda/cloudfeat.hpp"
#include "cileda/dataio.hpp"
#include "cileda/ensemble.hpp"
#include "cileda/errors.hpp"
#include "cileda/harness.hpp"
#include "cileda/scn.hpp"
#include "cileda/serialize.hpp"
#include "cileda/wpd.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 2;
constexpr int kTraining = 3;

// Training-stage failures map to exit code 3; everything else is a
// validation/input problem (2).
struct TrainingFailure {
    std::string detail;
};

template <class Fn>
auto training_stage(Fn&& fn) {
    try {
        return fn();
    } catch (const cileda::Error& e) {
        throw TrainingFailure{e.what()};
    } catch (const std::exception& e) {
        throw TrainingFailure{e.what()};
    }
}

struct HyperOpts {
    double cs = 1.0;
    double ct = 100.0;
    double lambda = 10.0;
    std::uint64_t seed = 1;
    int l_max = 200;
    double eps = 0.1;
    int t_max = 100;
    double contraction = 0.9;
    int max_relax = 50;
    std::vector<double> scales = {0.5, 1, 3, 5, 7, 10, 25, 50, 100, 150, 200};

    cileda::CildaConfig to_config() const {
        cileda::CildaConfig cfg;
        cfg.C_S = cs;
        cfg.C_T = ct;
        cfg.lambda = lambda;
        cfg.seed = seed;
        cfg.L_max = l_max;
        cfg.eps = eps;
        cfg.T_max = t_max;
        cfg.contraction_init = contraction;
        cfg.max_relax = max_relax;
        cfg.scale_set = scales;
        return cfg;
    }
};

void add_hyper_flags(CLI::App* cmd, HyperOpts& o) {
    cmd->add_option("--cs", o.cs, "Source residual weight");
    cmd->add_option("--ct", o.ct, "Target residual weight");
    cmd->add_option("--lambda", o.lambda, "Alignment weight");
    cmd->add_option("--seed", o.seed, "Random seed");
    cmd->add_option("--l-max", o.l_max, "Hidden node budget");
    cmd->add_option("--eps", o.eps, "Residual tolerance");
    cmd->add_option("--t-max", o.t_max, "Candidates per scale");
    cmd->add_option("--contraction", o.contraction, "Initial contraction parameter in (0,1)");
    cmd->add_option("--max-relax", o.max_relax, "Relaxation rounds before giving up");
    cmd->add_option("--scales", o.scales, "Weight range radii")->delimiter(',');
}

void print_train_summary(const std::string& kind, std::size_t nodes, double residual,
                         bool converged, bool exhausted, double seconds) {
    std::cout << kind << ": " << nodes << " nodes, final residual " << residual
              << (converged ? " (converged)" : " (budget reached)") << ", " << seconds << "s\n";
    if (exhausted)
        std::cerr << "note: node search exhausted its relaxation budget; model kept as built\n";
}

int cmd_extract(const std::string& manifest, const std::string& out_dir, int level,
                int denoise_level, const std::string& wavelet, int window, int step,
                int n_classes) {
    cileda::FeatureConfig cfg;
    cfg.wpd_level = level;
    cfg.denoise_level = denoise_level;
    cfg.window = window;
    cfg.step = step;
    cfg.n_classes = n_classes;
    cfg.wavelet = cileda::WaveletSpec::by_name(wavelet);

    const std::vector<cileda::RecordingMeta> recs = cileda::load_manifest(manifest, n_classes);
    std::map<std::string, std::vector<cileda::RecordingMeta>> by_domain;
    for (const cileda::RecordingMeta& r : recs) by_domain[r.domain_id].push_back(r);

    std::filesystem::create_directories(out_dir);
    for (const auto& [domain, metas] : by_domain) {
        const cileda::DomainDataset ds = cileda::featurize_dataset(metas, cfg);
        const std::string path = (std::filesystem::path(out_dir) / (domain + ".csv")).string();
        cileda::save_dataset_csv(ds, path);
        std::cout << domain << ": " << ds.n() << " samples x " << ds.p() << " features -> "
                  << path << "\n";
    }
    return kOk;
}

int cmd_train(const std::string& variant, const std::string& source_path,
              const std::string& target_path, const std::string& model_path,
              const HyperOpts& hyper, int n_classes) {
    const cileda::DomainDataset target = cileda::load_dataset_csv(target_path, n_classes);
    cileda::CildaConfig cfg = hyper.to_config();

    const auto t0 = std::chrono::steady_clock::now();
    std::string text;
    if (variant == "sc1" || variant == "sc3") {
        const auto kind = variant == "sc1" ? cileda::ScnVariant::SC1 : cileda::ScnVariant::SC3;
        const cileda::ScnModel model =
            training_stage([&] { return cileda::scn_train(target, cfg, kind); });
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        print_train_summary(variant, model.nodes.size(), model.trace.back(), model.converged,
                            model.search_exhausted, secs);
        text = cileda::scn_to_json(model);
    } else {
        if (source_path.empty())
            throw cileda::InvalidConfig("--source is required for cross-domain variants");
        const cileda::DomainDataset source = cileda::load_dataset_csv(source_path, n_classes);
        cfg.variant =
            variant == "cilda1" ? cileda::CildaVariant::CILDA1 : cileda::CildaVariant::CILDA2;
        const cileda::CildaModel model =
            training_stage([&] { return cileda::cilda_train(source, target, cfg); });
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        print_train_summary(variant, model.nodes.size(), model.trace.back(), model.converged,
                            model.search_exhausted, secs);
        text = cileda::cilda_to_json(model);
    }
    cileda::save_text(model_path, text);
    std::cout << "model written to " << model_path << "\n";
    return kOk;
}

int cmd_evaluate(const std::string& model_path, const std::string& test_path,
                 const std::string& report_path, bool with_timing) {
    const cileda::AnyModel any = cileda::load_model(model_path);

    int m = 0;
    std::uint64_t seed = 0;
    if (any.kind == "scn") {
        m = any.scn.m;
        seed = any.scn.config.seed;
    } else if (any.kind == "cilda") {
        m = any.cilda.m;
        seed = any.cilda.config.seed;
    } else {
        m = any.ensemble.m();
    }
    const cileda::DomainDataset test = cileda::load_dataset_csv(test_path, m);

    const auto t0 = std::chrono::steady_clock::now();
    std::vector<int> pred;
    if (any.kind == "scn")
        pred = cileda::scn_predict(any.scn, test.features);
    else if (any.kind == "cilda")
        pred = cileda::cilda_predict(any.cilda, test.features);
    else
        pred = cileda::ensemble_predict(any.ensemble, test.features);

    cileda::Report report;
    report.seeds = {seed};
    report.confusion_total = cileda::confusion(pred, test.labels(), m);
    report.per_run_accuracy = {cileda::accuracy_of(report.confusion_total)};
    report.finalize();
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    cileda::write_report(report, report_path, with_timing);
    std::cout << "accuracy " << report.mean_accuracy << ", report written to " << report_path
              << "\n";
    return kOk;
}

int cmd_ensemble(const std::string& target_path, const std::vector<std::string>& source_paths,
                 const std::string& out_path, const HyperOpts& hyper, int n_classes) {
    const cileda::DomainDataset target = cileda::load_dataset_csv(target_path, n_classes);
    std::map<std::string, cileda::DomainDataset> datasets;
    datasets.emplace(target.domain_id, target);
    for (const std::string& path : source_paths) {
        cileda::DomainDataset ds = cileda::load_dataset_csv(path, n_classes);
        if (ds.domain_id == target.domain_id)
            throw cileda::DuplicateDomain("source '" + path + "' has the target's domain id");
        if (!datasets.emplace(ds.domain_id, std::move(ds)).second)
            throw cileda::DuplicateDomain("domain '" + path + "' listed twice");
    }

    cileda::CildaConfig cfg = hyper.to_config();
    const auto t0 = std::chrono::steady_clock::now();
    const cileda::EnsembleModel model =
        training_stage([&] { return cileda::train_ensemble(datasets, target.domain_id, cfg); });
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "ensemble of " << model.members.size() << " members trained in " << secs
              << "s\n";
    cileda::save_text(out_path, cileda::ensemble_to_json(model));
    std::cout << "model written to " << out_path << "\n";
    return kOk;
}

std::vector<double> default_sweep_values(const std::string& name) {
    if (name == "lambda") return {0.1, 0.5, 1, 2, 10, 20, 50};
    return {1e-3, 1e-2, 1e-1, 1, 1e1, 1e2, 1e3};
}

int cmd_sensitivity(const std::string& source_path, const std::string& target_path,
                    const std::string& test_path, const std::string& sweep,
                    const std::string& fixed, std::vector<double> values1,
                    std::vector<double> values2, int reps, std::uint64_t seed,
                    const std::string& out_path, const std::string& variant, int n_classes) {
    const auto comma = sweep.find(',');
    if (comma == std::string::npos)
        throw cileda::UnknownParameter("--sweep expects two comma-separated names");
    const std::string p1 = sweep.substr(0, comma);
    const std::string p2 = sweep.substr(comma + 1);

    cileda::CildaConfig base;
    base.variant =
        variant == "cilda1" ? cileda::CildaVariant::CILDA1 : cileda::CildaVariant::CILDA2;
    {  // validate names before loading anything
        cileda::CildaConfig probe = base;
        cileda::set_cilda_param(probe, p1, 1.0);
        cileda::set_cilda_param(probe, p2, 1.0);
    }
    if (!fixed.empty()) {
        const auto eq = fixed.find('=');
        if (eq == std::string::npos)
            throw cileda::UnknownParameter("--fixed expects name=value");
        cileda::set_cilda_param(base, fixed.substr(0, eq), std::stod(fixed.substr(eq + 1)));
    }
    if (values1.empty()) values1 = default_sweep_values(p1);
    if (values2.empty()) values2 = default_sweep_values(p2);

    const cileda::DomainDataset source = cileda::load_dataset_csv(source_path, n_classes);
    const cileda::DomainDataset target = cileda::load_dataset_csv(target_path, n_classes);
    const cileda::DomainDataset test = cileda::load_dataset_csv(test_path, n_classes);

    const std::vector<cileda::SensitivityCell> cells = training_stage([&] {
        return cileda::sensitivity_grid(source, target, test, base, p1, values1, p2, values2,
                                        reps, seed);
    });
    cileda::save_text(out_path, cileda::sensitivity_to_csv(p1, p2, cells));
    std::cout << cells.size() << " grid cells written to " << out_path << "\n";
    return kOk;
}

int cmd_synth_bench(int reps, std::uint64_t seed, const std::string& out_path,
                    std::string csv_path, bool with_timing, double noise_sigma) {
    cileda::SynthBenchConfig cfg;
    cfg.repetitions = reps;
    cfg.seed = seed;
    cfg.noise_sigma = noise_sigma;

    const cileda::SynthBenchResult result =
        training_stage([&] { return cileda::run_synth_bench(cfg); });
    std::cout << "mean accuracy over " << reps << " trials: target-only sc3 " << result.mean_scn
              << ", cilda2 " << result.mean_cilda << ", ensemble vote " << result.mean_ensemble
              << ", self member " << result.mean_self << " (" << result.wall_seconds << "s)\n";
    if (!out_path.empty()) {
        cileda::save_text(out_path, cileda::synth_bench_to_json(result, with_timing));
        if (csv_path.empty()) {
            csv_path = out_path;
            const std::string suffix = ".json";
            if (csv_path.size() >= suffix.size() &&
                csv_path.compare(csv_path.size() - suffix.size(), suffix.size(), suffix) == 0)
                csv_path = csv_path.substr(0, csv_path.size() - suffix.size());
            csv_path += ".csv";
        }
        cileda::save_text(csv_path, cileda::synth_bench_to_csv(result));
        std::cout << "reports written to " << out_path << " and " << csv_path << "\n";
    }
    return kOk;
}

int cmd_wpd_dump(const std::string& input, const std::string& format, double rate, int level,
                 const std::string& wavelet, int window, int index, const std::string& out_path) {
    cileda::RecordingMeta meta;
    meta.path = input;
    meta.format = format;
    meta.sample_rate_hz = rate;
    const cileda::Signal sig = cileda::read_signal(meta);

    cileda::Segment seg;
    if (window > 0) {
        const std::vector<cileda::Segment> segs = cileda::segment(sig, window, window);
        if (index < 0 || static_cast<std::size_t>(index) >= segs.size())
            throw cileda::InvalidConfig("segment index out of range");
        seg = segs[static_cast<std::size_t>(index)];
    } else {
        seg = sig.samples;
    }
    const cileda::WpTree tree =
        cileda::wpd_decompose(seg, level, cileda::WaveletSpec::by_name(wavelet));
    cileda::save_text(out_path, cileda::wptree_to_json(tree));
    std::cout << "packet tree written to " << out_path << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cross-domain fault diagnosis: feature extraction, constructive training, "
                 "ensemble voting and benchmarks"};
    app.require_subcommand(1);
    int rc = kOk;

    // extract
    std::string manifest, out_dir = "features";
    int level = 3, denoise_level = 3, window = 1024, step = 1024, classes = 10;
    std::string wavelet = "db4";
    CLI::App* extract = app.add_subcommand("extract", "Featurize manifest recordings to CSV");
    extract->add_option("--manifest", manifest, "Recording manifest (JSON)")->required();
    extract->add_option("--out", out_dir, "Output directory");
    extract->add_option("--level", level, "Packet decomposition depth");
    extract->add_option("--denoise-level", denoise_level, "Denoising depth");
    extract->add_option("--wavelet", wavelet, "db1 | db2 | db4");
    extract->add_option("--window", window, "Segment length");
    extract->add_option("--step", step, "Segment hop");
    extract->add_option("--classes", classes, "Number of classes");
    extract->callback([&] {
        rc = cmd_extract(manifest, out_dir, level, denoise_level, wavelet, window, step, classes);
    });

    // train
    std::string variant = "cilda2", source_path, target_path, model_path = "model.json";
    int train_classes = 0;
    HyperOpts train_hyper;
    CLI::App* train = app.add_subcommand("train", "Train one model");
    train->add_option("--variant", variant, "cilda1 | cilda2 | sc1 | sc3")
        ->check(CLI::IsMember({"cilda1", "cilda2", "sc1", "sc3"}));
    train->add_option("--source", source_path, "Source dataset CSV (cross-domain variants)");
    train->add_option("--target", target_path, "Training dataset CSV")->required();
    train->add_option("--model", model_path, "Output model path");
    train->add_option("--classes", train_classes, "Class count (0 = infer)");
    add_hyper_flags(train, train_hyper);
    train->callback([&] {
        rc = cmd_train(variant, source_path, target_path, model_path, train_hyper, train_classes);
    });

    // evaluate
    std::string eval_model, eval_test, eval_report = "report.json";
    bool eval_timing = false;
    CLI::App* evaluate = app.add_subcommand("evaluate", "Score a model on a test CSV");
    evaluate->add_option("--model", eval_model, "Model JSON")->required();
    evaluate->add_option("--test", eval_test, "Test dataset CSV")->required();
    evaluate->add_option("--report", eval_report, "Report path (JSON; CSV written next to it)");
    evaluate->add_flag("--with-timing", eval_timing, "Include wall-clock seconds in the report");
    evaluate->callback([&] { rc = cmd_evaluate(eval_model, eval_test, eval_report, eval_timing); });

    // ensemble
    std::string ens_target, ens_out = "ensemble.json";
    std::vector<std::string> ens_sources;
    int ens_classes = 0;
    HyperOpts ens_hyper;
    CLI::App* ensemble = app.add_subcommand("ensemble", "Train the voting ensemble");
    ensemble->add_option("--target", ens_target, "Target dataset CSV")->required();
    ensemble->add_option("--sources", ens_sources, "Source dataset CSVs")
        ->required()
        ->delimiter(',');
    ensemble->add_option("--out", ens_out, "Output model path");
    ensemble->add_option("--classes", ens_classes, "Class count (0 = infer)");
    add_hyper_flags(ensemble, ens_hyper);
    ensemble->callback(
        [&] { rc = cmd_ensemble(ens_target, ens_sources, ens_out, ens_hyper, ens_classes); });

    // sensitivity
    std::string sens_source, sens_target, sens_test, sweep = "cs,ct", fixed;
    std::string sens_out = "grid.csv", sens_variant = "cilda2";
    std::vector<double> values1, values2;
    int sens_reps = 3, sens_classes = 0;
    std::uint64_t sens_seed = 1;
    CLI::App* sensitivity =
        app.add_subcommand("sensitivity", "Mean-accuracy grid over two hyperparameters");
    sensitivity->add_option("--source", sens_source, "Source dataset CSV")->required();
    sensitivity->add_option("--target", sens_target, "Target training CSV")->required();
    sensitivity->add_option("--test", sens_test, "Target test CSV")->required();
    sensitivity->add_option("--sweep", sweep, "Two of cs,ct,lambda (comma-separated)");
    sensitivity->add_option("--fixed", fixed, "Remaining parameter as name=value");
    sensitivity->add_option("--values1", values1, "Grid values for the first parameter")
        ->delimiter(',');
    sensitivity->add_option("--values2", values2, "Grid values for the second parameter")
        ->delimiter(',');
    sensitivity->add_option("--reps", sens_reps, "Repetitions per cell");
    sensitivity->add_option("--seed", sens_seed, "Base seed");
    sensitivity->add_option("--out", sens_out, "Output CSV path");
    sensitivity->add_option("--variant", sens_variant, "cilda1 | cilda2")
        ->check(CLI::IsMember({"cilda1", "cilda2"}));
    sensitivity->add_option("--classes", sens_classes, "Class count (0 = infer)");
    sensitivity->callback([&] {
        rc = cmd_sensitivity(sens_source, sens_target, sens_test, sweep, fixed, values1, values2,
                             sens_reps, sens_seed, sens_out, sens_variant, sens_classes);
    });

    // synth-bench
    int bench_reps = 20;
    std::uint64_t bench_seed = 1;
    std::string bench_out = "bench.json", bench_csv;
    bool bench_timing = false;
    double bench_noise = cileda::SynthBenchConfig().noise_sigma;
    CLI::App* bench = app.add_subcommand("synth-bench", "Built-in synthetic shift benchmark");
    bench->add_option("--seeds", bench_reps, "Number of trials");
    bench->add_option("--seed", bench_seed, "Base seed");
    bench->add_option("--out", bench_out, "Report JSON path");
    bench->add_option("--csv", bench_csv, "Report CSV path (default: next to --out)");
    bench->add_option("--noise-sigma", bench_noise, "Cluster noise scale");
    bench->add_flag("--with-timing", bench_timing, "Include wall-clock seconds in the report");
    bench->callback([&] {
        rc = cmd_synth_bench(bench_reps, bench_seed, bench_out, bench_csv, bench_timing,
                             bench_noise);
    });

    // wpd-dump
    std::string dump_input, dump_format = "csv", dump_out = "tree.json", dump_wavelet = "db4";
    double dump_rate = 12000.0;
    int dump_level = 3, dump_window = 0, dump_index = 0;
    CLI::App* dump = app.add_subcommand("wpd-dump", "Dump a packet tree as JSON (debugging)");
    dump->add_option("--input", dump_input, "Signal file")->required();
    dump->add_option("--format", dump_format, "csv | f64le");
    dump->add_option("--rate", dump_rate, "Sample rate in Hz");
    dump->add_option("--level", dump_level, "Decomposition depth");
    dump->add_option("--wavelet", dump_wavelet, "db1 | db2 | db4");
    dump->add_option("--window", dump_window, "Segment length (0 = whole signal)");
    dump->add_option("--index", dump_index, "Segment index");
    dump->add_option("--out", dump_out, "Output path");
    dump->callback([&] {
        rc = cmd_wpd_dump(dump_input, dump_format, dump_rate, dump_level, dump_wavelet,
                          dump_window, dump_index, dump_out);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kValidation;
    } catch (const TrainingFailure& e) {
        std::cerr << "training failed: " << e.detail << "\n";
        return kTraining;
    } catch (const cileda::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidation;
    }
    return rc;
}
