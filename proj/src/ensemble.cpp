#include "cileda/ensemble.hpp"

#include <set>

#include "cileda/errors.hpp"
#include "cileda/rng.hpp"

namespace cileda {

std::vector<DomainPair> build_pairs(const std::string& target_id,
                                    const std::vector<std::string>& source_ids) {
    std::vector<DomainPair> pairs;
    pairs.push_back({target_id, target_id});
    std::set<std::string> seen;
    for (const std::string& s : source_ids) {
        if (s == target_id) throw DuplicateDomain("source '" + s + "' equals the target domain");
        if (!seen.insert(s).second) throw DuplicateDomain("source '" + s + "' listed twice");
        pairs.push_back({s, target_id});
    }
    return pairs;
}

std::vector<int> vote_tally(const std::vector<int>& preds, int m) {
    std::vector<int> counts(static_cast<std::size_t>(m), 0);
    for (int p : preds) {
        if (p < 0 || p >= m) throw ShapeMismatch("vote outside class range");
        ++counts[static_cast<std::size_t>(p)];
    }
    return counts;
}

int majority_vote(const std::vector<int>& preds, const std::string& tie_policy, int self_pred,
                  int m) {
    if (tie_policy != "self-then-lowest")
        throw InvalidConfig("unknown tie policy '" + tie_policy + "'");
    const std::vector<int> counts = vote_tally(preds, m);
    int top = 0;
    for (int c = 1; c < m; ++c)
        if (counts[static_cast<std::size_t>(c)] > counts[static_cast<std::size_t>(top)]) top = c;
    const int top_count = counts[static_cast<std::size_t>(top)];
    if (self_pred >= 0 && self_pred < m && counts[static_cast<std::size_t>(self_pred)] == top_count)
        return self_pred;
    return top;  // lowest label among the tied maxima
}

EnsembleModel train_ensemble(const std::map<std::string, DomainDataset>& datasets,
                             const std::string& target_id, const CildaConfig& cfg) {
    const auto target_it = datasets.find(target_id);
    if (target_it == datasets.end()) throw InvalidConfig("target domain '" + target_id + "' missing");

    std::vector<std::string> sources;
    for (const auto& [id, ds] : datasets) {
        if (id != ds.domain_id) throw DuplicateDomain("dataset keyed under foreign id '" + id + "'");
        if (id != target_id) sources.push_back(id);
    }

    EnsembleModel model;
    model.target_id = target_id;
    const std::vector<DomainPair> pairs = build_pairs(target_id, sources);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        CildaConfig member_cfg = cfg;
        member_cfg.seed = rng::mix(rng::mix(cfg.seed) ^ static_cast<std::uint64_t>(k));
        model.members.push_back(
            cilda_train(datasets.at(pairs[k].source_id), target_it->second, member_cfg));
    }
    return model;
}

std::vector<int> ensemble_predict(const EnsembleModel& model, const Matrix& X) {
    if (model.members.empty()) throw InvalidConfig("ensemble has no members");
    const int m = model.m();
    std::vector<std::vector<int>> member_preds;
    member_preds.reserve(model.members.size());
    for (const CildaModel& member : model.members) member_preds.push_back(cilda_predict(member, X));

    std::vector<int> out(static_cast<std::size_t>(X.rows()));
    std::vector<int> ballot(model.members.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        for (std::size_t k = 0; k < member_preds.size(); ++k) ballot[k] = member_preds[k][i];
        out[i] = majority_vote(ballot, model.tie_policy, ballot[0], m);
    }
    return out;
}

}  // namespace cileda
