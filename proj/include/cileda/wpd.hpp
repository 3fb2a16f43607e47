#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cileda/dataio.hpp"

namespace cileda {

// Orthonormal analysis filter pair. `hi` is the quadrature mirror of `lo`:
// hi[k] = (-1)^k * lo[len-1-k].
struct WaveletSpec {
    std::string name;
    std::vector<double> lo;
    std::vector<double> hi;

    static WaveletSpec from_lowpass(std::string name, std::vector<double> lo);
    static WaveletSpec db4();
    static WaveletSpec by_name(const std::string& name);  // db1 | db2 | db4

    // Checks sum(lo^2)==1, sum(hi)==0 and the mirror relation (1e-10).
    void validate() const;
};

// Full wavelet packet tree: nodes[i][j] for level i in [0,N], j in [0,2^i).
// Node (0,0) is the input segment.
struct WpTree {
    int level = 0;
    std::vector<std::vector<std::vector<double>>> nodes;

    const std::vector<double>& node(int i, int j) const { return nodes[i][j]; }
};

// One analysis step with periodic extension:
//   a[k] = sum_t x[(2k+t) mod n] * lo[t],  d[k] likewise with hi.
std::pair<std::vector<double>, std::vector<double>> analysis_step(
    const std::vector<double>& x, const WaveletSpec& w);

// Exact inverse of analysis_step (the transform is orthogonal).
std::vector<double> synthesis_step(const std::vector<double>& a,
                                   const std::vector<double>& d, const WaveletSpec& w);

// Full packet decomposition to level N; requires len(seg) divisible by 2^N.
WpTree wpd_decompose(const Segment& seg, int level, const WaveletSpec& w);

// Soft-threshold wavelet denoising at the universal threshold
// sigma_hat * sqrt(2 ln n), sigma_hat = median(|finest details|) / 0.6745.
// The effective depth is capped where halving would hit an odd length.
Signal denoise(const Signal& signal, const WaveletSpec& w, int level);

// Sum of squared coefficients over all nodes of one level.
double node_energy(const WpTree& tree, int level);

// Debug dump: {"level":N,"nodes":{"i,j":[...]}}.
std::string wptree_to_json(const WpTree& tree);

}  // namespace cileda
