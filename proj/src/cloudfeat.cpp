#include "cileda/cloudfeat.hpp"

#include <cmath>

#include "cileda/errors.hpp"

namespace cileda {

CloudDescriptor backward_cloud(const std::vector<double>& x) {
    const std::size_t n = x.size();
    if (n < 2) throw TooFewSamples("backward_cloud needs n >= 2, got " + std::to_string(n));

    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);

    double abs_dev = 0.0, sq_dev = 0.0;
    for (double v : x) {
        const double d = v - mean;
        abs_dev += std::abs(d);
        sq_dev += d * d;
    }
    abs_dev /= static_cast<double>(n);
    const double var_unbiased = sq_dev / static_cast<double>(n - 1);

    CloudDescriptor c;
    c.Ex = mean;
    c.En = std::sqrt(M_PI / 2.0) * abs_dev;
    c.He = std::sqrt(std::abs(var_unbiased - c.En * c.En));
    return c;
}

std::vector<double> multilevel_features(const Segment& seg, int level, const WaveletSpec& w) {
    const WpTree tree = wpd_decompose(seg, level, w);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(3 * ((1 << (level + 1)) - 1)));
    for (int i = 0; i <= level; ++i) {
        for (const auto& node : tree.nodes[static_cast<std::size_t>(i)]) {
            const CloudDescriptor c = backward_cloud(node);
            out.push_back(c.Ex);
            out.push_back(c.En);
            out.push_back(c.He);
        }
    }
    return out;
}

DomainDataset featurize_signals(const std::vector<Signal>& signals,
                                const std::vector<int>& labels,
                                const std::string& domain_id, const FeatureConfig& cfg) {
    if (signals.size() != labels.size())
        throw ShapeMismatch("featurize: one label per signal required");

    std::vector<std::vector<double>> rows;
    std::vector<int> row_labels;
    for (std::size_t r = 0; r < signals.size(); ++r) {
        const Signal clean = normalize(denoise(signals[r], cfg.wavelet, cfg.denoise_level));
        for (const Segment& seg : segment(clean, cfg.window, cfg.step)) {
            rows.push_back(multilevel_features(seg, cfg.wpd_level, cfg.wavelet));
            row_labels.push_back(labels[r]);
        }
    }

    const Eigen::Index p = cfg.feature_dim();
    Matrix features(static_cast<Eigen::Index>(rows.size()), p);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (Eigen::Index j = 0; j < p; ++j)
            features(static_cast<Eigen::Index>(i), j) = rows[i][static_cast<std::size_t>(j)];
    return make_dataset(domain_id, std::move(features), row_labels, cfg.n_classes);
}

DomainDataset featurize_dataset(const std::vector<RecordingMeta>& recordings,
                                const FeatureConfig& cfg) {
    std::string domain_id = recordings.empty() ? std::string{} : recordings.front().domain_id;
    std::vector<Signal> signals;
    std::vector<int> labels;
    signals.reserve(recordings.size());
    for (const RecordingMeta& meta : recordings) {
        if (meta.domain_id != domain_id)
            throw MixedDomains("recordings mix domains '" + domain_id + "' and '" +
                               meta.domain_id + "'");
        signals.push_back(read_signal(meta));
        labels.push_back(meta.label);
    }
    return featurize_signals(signals, labels, domain_id, cfg);
}

}  // namespace cileda
