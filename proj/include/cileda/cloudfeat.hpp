#pragma once

#include <vector>

#include "cileda/dataio.hpp"
#include "cileda/wpd.hpp"

namespace cileda {

// Cloud-model intension of a coefficient sample: expectation, entropy and
// hyper entropy.
struct CloudDescriptor {
    double Ex = 0.0;
    double En = 0.0;
    double He = 0.0;
};

// Backward cloud generator:
//   Ex = mean(x)
//   En = sqrt(pi/2) * mean(|x - Ex|)
//   He = sqrt(|S^2 - En^2|), S^2 the unbiased sample variance.
CloudDescriptor backward_cloud(const std::vector<double>& x);

struct FeatureConfig {
    int wpd_level = 3;
    int denoise_level = 3;
    int window = 1024;
    int step = 1024;
    int n_classes = 10;
    WaveletSpec wavelet = WaveletSpec::db4();

    // Feature width: sum over levels 0..N of 3 * 2^i.
    int feature_dim() const { return 3 * ((1 << (wpd_level + 1)) - 1); }
};

// (Ex, En, He) of every packet node, level-major, node-index order within a
// level; node (0,0) is the raw segment. Length 3 * (2^(N+1) - 1).
std::vector<double> multilevel_features(const Segment& seg, int level, const WaveletSpec& w);

// Full per-domain pipeline: denoise -> normalize -> segment -> features.
DomainDataset featurize_dataset(const std::vector<RecordingMeta>& recordings,
                                const FeatureConfig& cfg);

// Same pipeline over already-loaded signals (one label per signal).
DomainDataset featurize_signals(const std::vector<Signal>& signals,
                                const std::vector<int>& labels,
                                const std::string& domain_id, const FeatureConfig& cfg);

}  // namespace cileda
