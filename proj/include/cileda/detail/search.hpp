#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "cileda/linalg.hpp"
#include "cileda/parallel.hpp"
#include "cileda/rng.hpp"
#include "cileda/scn.hpp"

namespace cileda::detail {

struct SearchOutcome {
    bool found = false;
    HiddenNode node;
    double score = 0.0;       // selection key of the winner
    double gamma_used = 0.0;  // contraction parameter the winner passed under
    double mu_used = 0.0;
    int relax_rounds = 0;
};

// Pooled candidate sweep for one hidden node. Draws T_max trials per scale,
// scores each with `fn(node, gamma, mu) -> double` (NaN marks a rejected
// candidate), and keeps the highest finite score; ties go to the lowest trial
// index. When every candidate fails, gamma is relaxed towards 1 by a seeded
// step and the sweep repeats, up to cfg.max_relax rounds.
//
// Candidate k of round r draws from substream(seed, {tag, L, r, k}) so the
// result is byte-identical at any thread count. `fn` must be safe to call
// concurrently.
template <class ScoreFn>
SearchOutcome search_node(int p, const ScnConfig& cfg, std::uint64_t tag, int L, ScoreFn&& fn) {
    const std::size_t n_scales = cfg.scale_set.size();
    const std::size_t n_cand = n_scales * static_cast<std::size_t>(cfg.T_max);
    const double nan = std::numeric_limits<double>::quiet_NaN();

    SearchOutcome out;
    double gamma = cfg.contraction_init;
    std::vector<double> scores(n_cand);
    std::vector<HiddenNode> drawn(n_cand);

    for (int round = 0; round <= cfg.max_relax; ++round) {
        const double mu = (1.0 - gamma) / (L + 1.0);
        parallel_for(n_cand, [&](std::size_t k) {
            const double theta = cfg.scale_set[k / static_cast<std::size_t>(cfg.T_max)];
            rng::Stream s = rng::substream(
                cfg.seed, {tag, static_cast<std::uint64_t>(L), static_cast<std::uint64_t>(round), k});
            HiddenNode& cand = drawn[k];
            cand.w.resize(p);
            for (int j = 0; j < p; ++j) cand.w[j] = s.uniform(-theta, theta);
            cand.b = s.uniform(-theta, theta);
            cand.scale = theta;
            const double sc = fn(static_cast<const HiddenNode&>(cand), gamma, mu);
            scores[k] = std::isfinite(sc) ? sc : nan;
        });

        std::size_t best = n_cand;
        for (std::size_t k = 0; k < n_cand; ++k) {
            if (std::isnan(scores[k])) continue;
            if (best == n_cand || scores[k] > scores[best]) best = k;
        }
        if (best != n_cand) {
            out.found = true;
            out.node = drawn[best];
            out.score = scores[best];
            out.gamma_used = gamma;
            out.mu_used = mu;
            out.relax_rounds = round;
            return out;
        }
        rng::Stream relax = rng::substream(
            cfg.seed, {tag ^ 0x52454C41u, static_cast<std::uint64_t>(L), static_cast<std::uint64_t>(round)});
        gamma += relax.uniform(0.0, 1.0 - gamma);
    }
    out.relax_rounds = cfg.max_relax;
    return out;
}

}  // namespace cileda::detail
