#include "cileda/wpd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "cileda/errors.hpp"

namespace cileda {

WaveletSpec WaveletSpec::from_lowpass(std::string name, std::vector<double> lo) {
    WaveletSpec w;
    w.name = std::move(name);
    w.lo = std::move(lo);
    const std::size_t len = w.lo.size();
    w.hi.resize(len);
    for (std::size_t k = 0; k < len; ++k)
        w.hi[k] = (k % 2 == 0 ? 1.0 : -1.0) * w.lo[len - 1 - k];
    w.validate();
    return w;
}

WaveletSpec WaveletSpec::db4() {
    // Daubechies 4 analysis low-pass (8 taps, reversed scaling filter).
    return from_lowpass("db4", {-0.010597401784997278, 0.032883011666982945,
                                0.030841381835986965, -0.18703481171888114,
                                -0.02798376941698385, 0.6308807679295904,
                                0.7148465705525415, 0.23037781330885523});
}

WaveletSpec WaveletSpec::by_name(const std::string& name) {
    if (name == "db4") return db4();
    if (name == "db1" || name == "haar") {
        const double s = 1.0 / std::sqrt(2.0);
        return from_lowpass("db1", {s, s});
    }
    if (name == "db2") {
        return from_lowpass("db2", {-0.12940952255092145, 0.22414386804185735,
                                    0.8365163037378079, 0.48296291314469025});
    }
    throw InvalidConfig("unknown wavelet: " + name);
}

void WaveletSpec::validate() const {
    if (lo.size() != hi.size() || lo.empty() || lo.size() % 2 != 0)
        throw InvalidConfig("wavelet filters must be non-empty, even-length, equal-sized");
    double sq = 0.0, hi_sum = 0.0;
    for (double v : lo) sq += v * v;
    for (double v : hi) hi_sum += v;
    if (std::abs(sq - 1.0) > 1e-10)
        throw InvalidConfig("wavelet low-pass not orthonormal: sum lo^2 = " + std::to_string(sq));
    if (std::abs(hi_sum) > 1e-10)
        throw InvalidConfig("wavelet high-pass does not sum to 0");
    const std::size_t len = lo.size();
    for (std::size_t k = 0; k < len; ++k) {
        const double expect = (k % 2 == 0 ? 1.0 : -1.0) * lo[len - 1 - k];
        if (std::abs(hi[k] - expect) > 1e-10)
            throw InvalidConfig("wavelet high-pass is not the quadrature mirror of low-pass");
    }
}

std::pair<std::vector<double>, std::vector<double>> analysis_step(
    const std::vector<double>& x, const WaveletSpec& w) {
    const std::size_t n = x.size();
    if (n < 2 || n % 2 != 0) throw BadLength("analysis step needs even length, got " + std::to_string(n));
    const std::size_t half = n / 2;
    const std::size_t taps = w.lo.size();
    std::vector<double> a(half, 0.0), d(half, 0.0);
    for (std::size_t k = 0; k < half; ++k) {
        double ak = 0.0, dk = 0.0;
        for (std::size_t t = 0; t < taps; ++t) {
            const double v = x[(2 * k + t) % n];
            ak += v * w.lo[t];
            dk += v * w.hi[t];
        }
        a[k] = ak;
        d[k] = dk;
    }
    return {std::move(a), std::move(d)};
}

std::vector<double> synthesis_step(const std::vector<double>& a,
                                   const std::vector<double>& d, const WaveletSpec& w) {
    if (a.size() != d.size()) throw ShapeMismatch("synthesis: approx/detail size mismatch");
    const std::size_t half = a.size();
    const std::size_t n = 2 * half;
    const std::size_t taps = w.lo.size();
    std::vector<double> x(n, 0.0);
    for (std::size_t k = 0; k < half; ++k) {
        for (std::size_t t = 0; t < taps; ++t) {
            x[(2 * k + t) % n] += a[k] * w.lo[t] + d[k] * w.hi[t];
        }
    }
    return x;
}

WpTree wpd_decompose(const Segment& seg, int level, const WaveletSpec& w) {
    if (level < 0) throw InvalidConfig("wpd level must be >= 0");
    const std::size_t len = seg.size();
    if (len == 0 || (len % (std::size_t{1} << level)) != 0)
        throw BadLength("segment length " + std::to_string(len) + " not divisible by 2^" +
                        std::to_string(level));
    WpTree tree;
    tree.level = level;
    tree.nodes.resize(static_cast<std::size_t>(level) + 1);
    tree.nodes[0].push_back(seg);
    for (int i = 0; i < level; ++i) {
        auto& next = tree.nodes[static_cast<std::size_t>(i) + 1];
        next.reserve(tree.nodes[static_cast<std::size_t>(i)].size() * 2);
        for (const auto& parent : tree.nodes[static_cast<std::size_t>(i)]) {
            auto [a, d] = analysis_step(parent, w);
            next.push_back(std::move(a));
            next.push_back(std::move(d));
        }
    }
    return tree;
}

namespace {

double median_abs(std::vector<double> v) {
    for (double& x : v) x = std::abs(x);
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    double hi = v[mid];
    if (v.size() % 2 == 0) {
        const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
        return 0.5 * (lo + hi);
    }
    return hi;
}

double soft_threshold(double x, double t) {
    if (x > t) return x - t;
    if (x < -t) return x + t;
    return 0.0;
}

}  // namespace

Signal denoise(const Signal& signal, const WaveletSpec& w, int level) {
    const std::size_t n = signal.samples.size();
    if (n < w.lo.size())
        throw SignalTooShort("signal length " + std::to_string(n) + " < filter length " +
                             std::to_string(w.lo.size()));
    if (level < 1) throw InvalidConfig("denoise level must be >= 1");

    // DWT down the approximation chain, stopping where the length turns odd.
    std::vector<std::vector<double>> details;
    std::vector<double> approx = signal.samples;
    for (int i = 0; i < level && approx.size() >= 2 && approx.size() % 2 == 0; ++i) {
        auto [a, d] = analysis_step(approx, w);
        details.push_back(std::move(d));
        approx = std::move(a);
    }
    if (details.empty()) throw SignalTooShort("signal too short for one decomposition level");

    const double sigma_hat = median_abs(details.front()) / 0.6745;
    const double threshold = sigma_hat * std::sqrt(2.0 * std::log(static_cast<double>(n)));

    for (auto& d : details)
        for (double& x : d) x = soft_threshold(x, threshold);

    for (auto it = details.rbegin(); it != details.rend(); ++it)
        approx = synthesis_step(approx, *it, w);

    Signal out;
    out.sample_rate_hz = signal.sample_rate_hz;
    out.samples = std::move(approx);
    return out;
}

double node_energy(const WpTree& tree, int level) {
    if (level < 0 || level > tree.level) throw InvalidConfig("node_energy: level out of range");
    double e = 0.0;
    for (const auto& node : tree.nodes[static_cast<std::size_t>(level)])
        for (double v : node) e += v * v;
    return e;
}

std::string wptree_to_json(const WpTree& tree) {
    nlohmann::json doc;
    doc["level"] = tree.level;
    auto& nodes = doc["nodes"];
    for (int i = 0; i <= tree.level; ++i)
        for (std::size_t j = 0; j < tree.nodes[static_cast<std::size_t>(i)].size(); ++j)
            nodes[std::to_string(i) + "," + std::to_string(j)] =
                tree.nodes[static_cast<std::size_t>(i)][j];
    return doc.dump();
}

}  // namespace cileda
