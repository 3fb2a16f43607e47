#include "cileda/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cileda/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace cileda {

int DomainDataset::label_of(Eigen::Index row) const {
    Eigen::Index best = 0;
    labels_onehot.row(row).maxCoeff(&best);
    return static_cast<int>(best);
}

std::vector<int> DomainDataset::labels() const {
    std::vector<int> out(static_cast<std::size_t>(n()));
    for (Eigen::Index i = 0; i < n(); ++i) out[static_cast<std::size_t>(i)] = label_of(i);
    return out;
}

void DomainDataset::validate() const {
    if (features.rows() != labels_onehot.rows())
        throw ShapeMismatch("feature rows != label rows");
    if (static_cast<Eigen::Index>(class_counts.size()) != m())
        throw ShapeMismatch("class_counts size != m");
    std::vector<int> counts(static_cast<std::size_t>(m()), 0);
    for (Eigen::Index i = 0; i < n(); ++i) {
        double sum = 0.0;
        for (Eigen::Index j = 0; j < m(); ++j) {
            const double v = labels_onehot(i, j);
            if (v != 0.0 && v != 1.0) throw ShapeMismatch("labels_onehot entry not in {0,1}");
            sum += v;
        }
        if (sum != 1.0) throw ShapeMismatch("labels_onehot row does not sum to 1");
        ++counts[static_cast<std::size_t>(label_of(i))];
    }
    for (Eigen::Index c = 0; c < m(); ++c) {
        if (counts[static_cast<std::size_t>(c)] != class_counts[static_cast<std::size_t>(c)])
            throw ShapeMismatch("class_counts inconsistent with labels");
    }
}

DomainDataset make_dataset(std::string domain_id, Matrix features,
                           const std::vector<int>& labels, int n_classes) {
    if (features.rows() != static_cast<Eigen::Index>(labels.size()))
        throw ShapeMismatch("feature rows != label count");
    DomainDataset ds;
    ds.domain_id = std::move(domain_id);
    ds.features = std::move(features);
    ds.labels_onehot = Matrix::Zero(ds.features.rows(), n_classes);
    ds.class_counts.assign(static_cast<std::size_t>(n_classes), 0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const int lab = labels[i];
        if (lab < 0 || lab >= n_classes)
            throw ShapeMismatch("label " + std::to_string(lab) + " out of range [0," +
                                std::to_string(n_classes) + ")");
        ds.labels_onehot(static_cast<Eigen::Index>(i), lab) = 1.0;
        ++ds.class_counts[static_cast<std::size_t>(lab)];
    }
    return ds;
}

void SynthSpec::validate() const {
    if (n_classes < 2) throw InvalidConfig("synth: n_classes must be >= 2");
    if (dim < 1) throw InvalidConfig("synth: dim must be >= 1");
    if (noise_sigma < 0.0) throw InvalidConfig("synth: noise_sigma must be >= 0");
    if (samples_per_class.size() != static_cast<std::size_t>(n_classes))
        throw InvalidConfig("synth: samples_per_class must list every class");
    for (int c : samples_per_class)
        if (c < 0) throw InvalidConfig("synth: negative sample count");
    if (domains.empty()) throw InvalidConfig("synth: at least one domain required");
}

Signal normalize(const Signal& signal) {
    if (signal.samples.empty()) throw DegenerateSignal("empty signal");
    const auto [mn_it, mx_it] = std::minmax_element(signal.samples.begin(), signal.samples.end());
    const double mn = *mn_it, mx = *mx_it;
    if (!(mx > mn)) throw DegenerateSignal("constant recording (max == min)");
    Signal out;
    out.sample_rate_hz = signal.sample_rate_hz;
    out.samples.resize(signal.samples.size());
    const double range = mx - mn;
    for (std::size_t i = 0; i < signal.samples.size(); ++i)
        out.samples[i] = (signal.samples[i] - mn) / range;
    return out;
}

std::vector<Segment> segment(const Signal& signal, int window, int step) {
    const auto len = signal.samples.size();
    if (window < 1) throw InvalidConfig("segment: window must be >= 1");
    if (step < 1) throw InvalidConfig("segment: step must be >= 1");
    if (len < static_cast<std::size_t>(window))
        throw SignalTooShort("signal length " + std::to_string(len) + " < window " +
                             std::to_string(window));
    const std::size_t count = (len - static_cast<std::size_t>(window)) / static_cast<std::size_t>(step) + 1;
    std::vector<Segment> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        const auto begin = signal.samples.begin() + static_cast<std::ptrdiff_t>(k * static_cast<std::size_t>(step));
        out.emplace_back(begin, begin + window);
    }
    return out;
}

std::pair<DomainDataset, DomainDataset> split(const DomainDataset& dataset,
                                              const std::map<int, int>& per_class_train,
                                              const std::map<int, int>& per_class_test,
                                              std::uint64_t seed) {
    const int m = static_cast<int>(dataset.m());
    std::vector<std::vector<int>> by_class(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < dataset.n(); ++i)
        by_class[static_cast<std::size_t>(dataset.label_of(i))].push_back(static_cast<int>(i));

    auto requested = [](const std::map<int, int>& table, int label) {
        const auto it = table.find(label);
        return it == table.end() ? 0 : it->second;
    };

    std::vector<int> train_rows, test_rows;
    for (int c = 0; c < m; ++c) {
        const int want_train = requested(per_class_train, c);
        const int want_test = requested(per_class_test, c);
        auto& idx = by_class[static_cast<std::size_t>(c)];
        if (want_train + want_test > static_cast<int>(idx.size()))
            throw InsufficientSamples("class " + std::to_string(c) + ": requested " +
                                      std::to_string(want_train + want_test) + ", have " +
                                      std::to_string(idx.size()));
        auto stream = rng::substream(seed, {0x5B171ULL, static_cast<std::uint64_t>(c)});
        stream.shuffle(idx);
        train_rows.insert(train_rows.end(), idx.begin(), idx.begin() + want_train);
        test_rows.insert(test_rows.end(), idx.begin() + want_train, idx.begin() + want_train + want_test);
    }

    auto take = [&](const std::vector<int>& rows) {
        DomainDataset out;
        out.domain_id = dataset.domain_id;
        out.features = Matrix(static_cast<Eigen::Index>(rows.size()), dataset.p());
        out.labels_onehot = Matrix(static_cast<Eigen::Index>(rows.size()), dataset.m());
        out.class_counts.assign(static_cast<std::size_t>(m), 0);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            out.features.row(static_cast<Eigen::Index>(i)) = dataset.features.row(rows[i]);
            out.labels_onehot.row(static_cast<Eigen::Index>(i)) = dataset.labels_onehot.row(rows[i]);
            ++out.class_counts[static_cast<std::size_t>(dataset.label_of(rows[i]))];
        }
        return out;
    };
    return {take(train_rows), take(test_rows)};
}

std::vector<DomainDataset> synth_domains(const SynthSpec& spec) {
    spec.validate();
    const int p = spec.dim;

    // Class centroids shared by all domains, drawn once from the seed.
    auto centroid_stream = rng::substream(spec.seed, {0xCE27ULL});
    Matrix centroids(spec.n_classes, p);
    for (int c = 0; c < spec.n_classes; ++c)
        for (int j = 0; j < p; ++j) centroids(c, j) = spec.class_sep * centroid_stream.normal();

    std::vector<DomainDataset> out;
    out.reserve(spec.domains.size());
    for (std::size_t k = 0; k < spec.domains.size(); ++k) {
        const DomainShift& shift = spec.domains[k];

        // Unit translation direction per domain; zero magnitude keeps centroids shared.
        auto dir_stream = rng::substream(spec.seed, {0xD12ULL, static_cast<std::uint64_t>(k)});
        Vector direction = Vector::Zero(p);
        for (int j = 0; j < p; ++j) direction(j) = dir_stream.normal();
        const double norm = direction.norm();
        if (norm > 0.0) direction /= norm;

        const double cr = std::cos(shift.rotation_rad);
        const double sr = std::sin(shift.rotation_rad);

        int total = 0;
        for (int c : spec.samples_per_class) total += c;
        Matrix features(total, p);
        std::vector<int> labels;
        labels.reserve(static_cast<std::size_t>(total));

        Eigen::Index row = 0;
        for (int c = 0; c < spec.n_classes; ++c) {
            auto sample_stream =
                rng::substream(spec.seed, {0x5A3ULL, static_cast<std::uint64_t>(k),
                                           static_cast<std::uint64_t>(c)});
            for (int i = 0; i < spec.samples_per_class[static_cast<std::size_t>(c)]; ++i) {
                Vector x(p);
                for (int j = 0; j < p; ++j)
                    x(j) = centroids(c, j) + spec.noise_sigma * sample_stream.normal();
                if (p >= 2 && shift.rotation_rad != 0.0) {
                    const double x0 = x(0), x1 = x(1);
                    x(0) = cr * x0 - sr * x1;
                    x(1) = sr * x0 + cr * x1;
                }
                x += shift.mean_shift * direction;
                features.row(row++) = x.transpose();
                labels.push_back(c);
            }
        }
        out.push_back(make_dataset(shift.domain_id, std::move(features), labels, spec.n_classes));
    }
    return out;
}

std::vector<RecordingMeta> load_manifest(const std::string& path, int n_classes) {
    std::ifstream in(path);
    if (!in) throw FileMissing("manifest not found: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ManifestParse(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_array()) throw ManifestParse("manifest must be a JSON array");

    const fs::path base = fs::path(path).parent_path();
    std::vector<RecordingMeta> out;
    out.reserve(doc.size());
    for (const auto& entry : doc) {
        RecordingMeta meta;
        try {
            meta.path = entry.at("path").get<std::string>();
            meta.domain_id = entry.at("domain_id").get<std::string>();
            meta.label = entry.at("label").get<int>();
            if (!entry.at("fault_diameter_mils").is_null())
                meta.fault_diameter_mils = entry.at("fault_diameter_mils").get<double>();
            meta.load_hp = entry.at("load_hp").get<int>();
            meta.rpm = entry.at("rpm").get<double>();
            meta.sample_rate_hz = entry.at("sample_rate_hz").get<double>();
            meta.format = entry.at("format").get<std::string>();
        } catch (const json::exception& e) {
            throw ManifestParse(std::string("bad manifest entry: ") + e.what());
        }
        if (meta.label < 0 || meta.label >= n_classes)
            throw ManifestParse("label " + std::to_string(meta.label) + " out of range [0," +
                                std::to_string(n_classes) + ")");
        if (!(meta.sample_rate_hz > 0.0)) throw ManifestParse("sample_rate_hz must be > 0");
        if (meta.format != "csv" && meta.format != "f64le")
            throw ManifestParse("unknown format: " + meta.format);
        if (fs::path(meta.path).is_relative()) meta.path = (base / meta.path).string();
        out.push_back(std::move(meta));
    }
    return out;
}

Signal read_signal(const RecordingMeta& meta) {
    Signal sig;
    sig.sample_rate_hz = meta.sample_rate_hz;
    if (meta.format == "csv") {
        std::ifstream in(meta.path);
        if (!in) throw FileMissing("recording not found: " + meta.path);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            double v = 0.0;
            const auto* first = line.data();
            const auto* last = line.data() + line.size();
            const auto res = std::from_chars(first, last, v);
            if (res.ec != std::errc{})
                throw ManifestParse("bad float in " + meta.path + ": '" + line + "'");
            sig.samples.push_back(v);
        }
    } else {
        std::ifstream in(meta.path, std::ios::binary);
        if (!in) throw FileMissing("recording not found: " + meta.path);
        double v = 0.0;
        while (in.read(reinterpret_cast<char*>(&v), sizeof(v))) sig.samples.push_back(v);
    }
    for (double v : sig.samples)
        if (!std::isfinite(v)) throw NonFiniteSample("non-finite sample in " + meta.path);
    return sig;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void save_dataset_csv(const DomainDataset& dataset, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw FileMissing("cannot open for write: " + path);
    for (Eigen::Index j = 0; j < dataset.p(); ++j) out << 'f' << j << ',';
    out << "label,domain\n";
    for (Eigen::Index i = 0; i < dataset.n(); ++i) {
        for (Eigen::Index j = 0; j < dataset.p(); ++j)
            out << format_double(dataset.features(i, j)) << ',';
        out << dataset.label_of(i) << ',' << dataset.domain_id << '\n';
    }
}

DomainDataset load_dataset_csv(const std::string& path, int n_classes) {
    std::ifstream in(path);
    if (!in) throw FileMissing("dataset not found: " + path);
    std::string header;
    if (!std::getline(in, header)) throw ManifestParse("empty dataset file: " + path);

    std::vector<std::string> cols;
    {
        std::stringstream ss(header);
        std::string tok;
        while (std::getline(ss, tok, ',')) cols.push_back(tok);
    }
    if (cols.size() < 3 || cols[cols.size() - 2] != "label" || cols.back() != "domain")
        throw ManifestParse("dataset header must end with label,domain: " + path);
    const std::size_t p = cols.size() - 2;

    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    std::string domain_id;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string tok;
        std::vector<std::string> fields;
        while (std::getline(ss, tok, ',')) fields.push_back(tok);
        if (fields.size() != cols.size())
            throw ManifestParse("row width mismatch in " + path);
        std::vector<double> feat(p);
        for (std::size_t j = 0; j < p; ++j) {
            const auto res = std::from_chars(fields[j].data(), fields[j].data() + fields[j].size(), feat[j]);
            if (res.ec != std::errc{}) throw ManifestParse("bad float in " + path);
        }
        labels.push_back(std::stoi(fields[p]));
        if (domain_id.empty()) {
            domain_id = fields[p + 1];
        } else if (domain_id != fields[p + 1]) {
            throw MixedDomains("dataset file mixes domains: " + path);
        }
        rows.push_back(std::move(feat));
    }

    int m = n_classes;
    if (m == 0) {
        for (int lab : labels) m = std::max(m, lab + 1);
        m = std::max(m, 1);
    }
    Matrix features(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(p));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < p; ++j)
            features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return make_dataset(domain_id, std::move(features), labels, m);
}

}  // namespace cileda
