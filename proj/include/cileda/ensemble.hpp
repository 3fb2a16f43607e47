#pragma once

#include <map>
#include <string>
#include <vector>

#include "cileda/cilda.hpp"
#include "cileda/dataio.hpp"

namespace cileda {

struct DomainPair {
    std::string source_id;
    std::string target_id;
};

// (target,target) self-pair first, then one pair per source in the given
// order. Throws DuplicateDomain when a source repeats or equals the target.
std::vector<DomainPair> build_pairs(const std::string& target_id,
                                    const std::vector<std::string>& source_ids);

struct EnsembleModel {
    std::string target_id;
    std::vector<CildaModel> members;  // members[0] is the self-pair
    std::string tie_policy = "self-then-lowest";

    int m() const { return members.empty() ? 0 : members.front().m; }
};

// Per-class ballot counts over one sample's member predictions.
std::vector<int> vote_tally(const std::vector<int>& preds, int m);

// Majority label; ties resolved by `tie_policy`. "self-then-lowest" keeps the
// self-pair prediction when it is among the tied labels, otherwise the lowest
// tied label.
int majority_vote(const std::vector<int>& preds, const std::string& tie_policy, int self_pred,
                  int m);

// Trains one member per pair; member k trains under a seed derived from
// (cfg.seed, k) so the ensemble is reproducible end to end.
EnsembleModel train_ensemble(const std::map<std::string, DomainDataset>& datasets,
                             const std::string& target_id, const CildaConfig& cfg);

std::vector<int> ensemble_predict(const EnsembleModel& model, const Matrix& X);

}  // namespace cileda
