#pragma once

#include <Eigen/Dense>
#include <vector>

#include "isolab/arith.hpp"
#include "isolab/rng.hpp"
#include "isolab/spectral.hpp"

namespace isolab {

struct WalkReport {
    u64 h = 0;
    u64 S_size = 0;
    double k = 0;
    double c = 0;       // nontrivial spectral radius used for the length bound
    u64 r = 0;          // walk length
    u64 trials = 0;
    u64 hits = 0;
    double empirical_prob = 0;
    double bound_prob = 0; // |S| / (2h)
};

/// ceil( log(2h / sqrt(|S|)) / log(k / c) ), the mixing length bound.
u64 walk_length_bound(u64 h, u64 S_size, double k, double c);

/// `trials` independent uniform edge-slot walks of length exactly r from x;
/// counts endpoint-in-S events.  Deterministic in (seed, trial index).
WalkReport simulate_hits(const Eigen::MatrixXi &adjacency, u64 start, const std::vector<u64> &S,
                         u64 r, u64 trials, u64 seed, int threads = 1);

/// Samples S of the given fraction, derives r from the measured spectral
/// report, and checks the hit-rate lower bound with a 3-sigma allowance.
std::pair<bool, WalkReport> verify_mixing(const Eigen::MatrixXi &adjacency,
                                          const SpectralReport &spec, double S_fraction,
                                          u64 trials, u64 seed, int threads = 1);

/// Exact endpoint distribution of the length-r walk from x (transition-matrix
/// power); the independent oracle for the simulator.
Eigen::VectorXd exact_walk_distribution(const Eigen::MatrixXi &adjacency, u64 start, u64 r);

} // namespace isolab
