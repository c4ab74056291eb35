#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "isolab/curve.hpp"
#include "isolab/isogeny.hpp"

namespace isolab {

enum class EdgeDirection { Up, Down, Horizontal };

struct VolcanoProbe {
    u64 ell = 0;
    int depth_below = 0;      // distance to the floor
    int v_ell_cpi = 0;        // valuation of ell in c_pi
    int v_ell_cE = 0;         // valuation of ell in c_E (the level)
    bool on_surface = true;
    std::vector<std::pair<u64, EdgeDirection>> neighbors; // (j, direction)
};

/// Classifies the ell-isogeny neighbors of an ordinary curve by walking the
/// component down to the floor (vertices with a single ell-neighbor).
VolcanoProbe volcano_depth(const Curve<PrimeField> &E, u64 ell);

/// Moves `steps` vertical ell-isogenies in the requested direction.
Curve<PrimeField> navigate_vertical(const Curve<PrimeField> &E, u64 ell, EdgeDirection dir,
                                    int steps);

struct CpiSample {
    u64 q = 0, a = 0, b = 0;
    i64 t = 0;
    i64 d_pi = 0;
    u64 c_pi = 0;
    u64 P_c_pi = 0;
    std::string status; // ok | supersingular | factor_timeout
};

struct CpiReport {
    u64 samples = 0;
    u64 ok = 0, supersingular = 0, factor_timeout = 0;
    double frac_c_pi_one = 0;
    double frac_squarefree_dpi = 0;
    std::map<u64, double> prob_P_exceeds; // beta -> empirical Pr[P(c_pi) > beta]
    std::vector<CpiSample> rows;          // CSV payload
};

/// Samples random curves over random primes in [q_min, q_max] and reports the
/// conductor statistics.
CpiReport cpi_distribution_experiment(u64 q_min, u64 q_max, u64 sample_count, u64 seed,
                                      u64 factor_budget = 1000000, int threads = 1);

std::string cpi_csv(const CpiReport &report);

/// Explicit isogeny graph of a level: closure of the curve under horizontal
/// edges of the given prime degrees (each coprime to c_pi, so no probing is
/// required), with per-kernel edge multiplicities.
struct LevelGraph {
    std::vector<u64> j_invariants; // vertex labels, in discovery order
    Eigen::MatrixXi adjacency;
    u64 degree = 0;
    std::vector<u64> primes;
};

LevelGraph build_level_graph(const Curve<PrimeField> &E, const std::vector<u64> &primes,
                             u64 max_vertices = 5000);

} // namespace isolab
