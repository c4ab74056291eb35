#pragma once

#include <Eigen/Dense>
#include <vector>

#include "isolab/curve.hpp"
#include "isolab/modular_poly.hpp"
#include "isolab/spectral.hpp"

namespace isolab {

/// Directed ell-isogeny multigraph on the supersingular j-invariants over
/// F_{p^2}; adjacency entries are root multiplicities of the specialized
/// modular polynomial.
struct SSGraph {
    u64 p = 0;
    u64 ell = 0;
    std::vector<Fp2> vertices;   // sorted canonically
    Eigen::MatrixXi adjacency;   // rows sum to ell + 1
    std::vector<int> e_weights;  // 6 at j = 0, 4 at j = 1728, else 2
};

/// Some supersingular j in F_p, found by scanning j upward with point counts.
u64 find_supersingular_seed(u64 p);

/// Whether the curve with this j-invariant over F_{p^2} is supersingular.
bool is_supersingular_j(const QuadExtField &F, Fp2 j);

/// All supersingular j-invariants over F_{p^2}: closure of a seed under
/// 2-isogeny neighbors.
std::vector<Fp2> enumerate_supersingular(u64 p);

SSGraph build_ss_graph(u64 p, u64 ell);

struct SSVerdict {
    SpectralReport report;
    bool symmetric = false;       // adjacency equal to its transpose
    double symmetrization_residual = 0;
    bool ramanujan = false;       // nontrivial |lambda| <= 2 sqrt(ell) + 1e-6
};

/// Spectrum of the (weighted-symmetrized, when needed) adjacency and the
/// Ramanujan-bound verdict.
SSVerdict ss_spectral_check(const SSGraph &G);

} // namespace isolab
