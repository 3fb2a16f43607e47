#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cileda/errors.hpp"
#include "cileda/linalg.hpp"

namespace cileda {

// One recording in a manifest. `label` is the class index, `domain_id` the
// working condition the recording was captured under.
struct RecordingMeta {
    std::string path;
    std::string domain_id;
    int label = 0;
    std::optional<double> fault_diameter_mils;  // absent for the normal state
    int load_hp = 0;
    double rpm = 0.0;
    double sample_rate_hz = 0.0;
    std::string format = "csv";  // "csv" | "f64le"
};

struct Signal {
    std::vector<double> samples;
    double sample_rate_hz = 0.0;
};

// Fixed-length window cut from a signal.
using Segment = std::vector<double>;

// Featurized samples of a single domain. Rows of `features` align with rows
// of `labels_onehot`; `class_counts[c]` is the number of rows of class c.
struct DomainDataset {
    std::string domain_id;
    Matrix features;       // n x p
    Matrix labels_onehot;  // n x m, one 1 per row
    std::vector<int> class_counts;

    Eigen::Index n() const { return features.rows(); }
    Eigen::Index p() const { return features.cols(); }
    Eigen::Index m() const { return labels_onehot.cols(); }

    // argmax decode of one row of labels_onehot
    int label_of(Eigen::Index row) const;
    std::vector<int> labels() const;

    // Recomputes class_counts and checks the row invariants.
    void validate() const;
};

DomainDataset make_dataset(std::string domain_id, Matrix features,
                           const std::vector<int>& labels, int n_classes);

// Per-domain placement of the synthetic Gaussian clusters: a translation of
// every class centroid plus a rotation in the first two feature dimensions.
struct DomainShift {
    std::string domain_id;
    double mean_shift = 0.0;    // translation magnitude (direction is seeded)
    double rotation_rad = 0.0;  // planar rotation, dims 0 and 1
};

struct SynthSpec {
    int n_classes = 4;
    int dim = 10;
    std::vector<int> samples_per_class;  // pool size per class, before splitting
    std::vector<DomainShift> domains;
    double noise_sigma = 0.3;
    double class_sep = 3.0;  // scale of the shared class centroids
    std::uint64_t seed = 0;

    void validate() const;
};

// Min-max normalization to [0, 1] (per recording).
Signal normalize(const Signal& signal);

// Sliding-window segmentation; count = floor((len - window)/step) + 1.
std::vector<Segment> segment(const Signal& signal, int window, int step);

// Draws per-class train/test subsets without replacement, deterministically
// for a given seed. Classes absent from a map get count 0.
std::pair<DomainDataset, DomainDataset> split(const DomainDataset& dataset,
                                              const std::map<int, int>& per_class_train,
                                              const std::map<int, int>& per_class_test,
                                              std::uint64_t seed);

// Gaussian class clusters shared across domains, displaced per DomainShift.
std::vector<DomainDataset> synth_domains(const SynthSpec& spec);

// Manifest (JSON array of RecordingMeta) and raw signal ingestion. Relative
// recording paths are resolved against the manifest's directory.
std::vector<RecordingMeta> load_manifest(const std::string& path, int n_classes = 10);
Signal read_signal(const RecordingMeta& meta);

// Dataset cache CSV: header f0,...,f{p-1},label,domain; 17 significant digits.
void save_dataset_csv(const DomainDataset& dataset, const std::string& path);
DomainDataset load_dataset_csv(const std::string& path, int n_classes = 0);  // 0 = infer

// Locale-independent float formatting used by every CSV writer.
std::string format_double(double v);

}  // namespace cileda
