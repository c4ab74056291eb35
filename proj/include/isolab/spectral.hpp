#pragma once

#include <Eigen/Dense>

#include "isolab/arith.hpp"
#include "isolab/errors.hpp"

namespace isolab {

struct SpectralReport {
    double k = 0;                      // trivial eigenvalue (degree)
    Eigen::VectorXd eigenvalues;       // sorted descending
    double lambda_max_nontrivial = 0;  // max |lambda| excluding one k per component
    double ramanujan_bound = 0;        // 2 sqrt(k-1)
    double additive_gap = 0;           // k - lambda_max_nontrivial
    int components = 1;
    bool connected = true;
    bool bipartite = false;
};

/// Full spectrum of a dense symmetric matrix by cyclic Jacobi rotations.
/// Deterministic sweep order; converges to off-diagonal Frobenius norm
/// below 1e-12 * ||A||.  Dimension capped at 5000.
Eigen::VectorXd eigenvalues_symmetric(Eigen::MatrixXd A);

/// Spectral summary of a k-regular multigraph adjacency matrix.
SpectralReport spectral_report(const Eigen::MatrixXd &adjacency);
SpectralReport spectral_report(const Eigen::MatrixXi &adjacency);

/// Report assembled from a precomputed spectrum (used by the symmetrized
/// directed path, where row-regularity holds for the original matrix only).
SpectralReport report_from_spectrum(Eigen::VectorXd sorted_desc, double k);

/// lambda_max_nontrivial <= C * k^beta.
bool nearly_ramanujan_verdict(const SpectralReport &r, double beta, double C);

} // namespace isolab
