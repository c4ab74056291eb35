#include "isolab/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace isolab {

Eigen::VectorXd eigenvalues_symmetric(Eigen::MatrixXd A) {
    const int n = int(A.rows());
    require(A.cols() == n, Errc::NotSymmetric, "matrix must be square");
    require(n <= 5000, Errc::DimensionTooLarge, "dimension exceeds 5000");
    if (n == 0)
        return Eigen::VectorXd();
    double scale = A.norm();
    require((A - A.transpose().eval()).norm() <= 1e-12 * std::max(scale, 1.0),
            Errc::NotSymmetric, "matrix is not symmetric");
    const double input_trace = A.trace();
    const double tol = 1e-12 * std::max(scale, 1e-300);
    auto offdiag = [&] {
        double s = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                s += 2 * A(i, j) * A(i, j);
        return std::sqrt(s);
    };
    for (int sweep = 0; sweep < 64 && offdiag() > tol; ++sweep) {
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q) {
                double apq = A(p, q);
                if (std::abs(apq) == 0.0)
                    continue;
                double app = A(p, p), aqq = A(q, q);
                double theta = (aqq - app) / (2 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (int i = 0; i < n; ++i) {
                    double aip = A(i, p), aiq = A(i, q);
                    A(i, p) = c * aip - s * aiq;
                    A(i, q) = s * aip + c * aiq;
                }
                for (int i = 0; i < n; ++i) {
                    double api = A(p, i), aqi = A(q, i);
                    A(p, i) = c * api - s * aqi;
                    A(q, i) = s * api + c * aqi;
                }
            }
    }
    Eigen::VectorXd ev(n);
    for (int i = 0; i < n; ++i)
        ev[i] = A(i, i);
    std::sort(ev.data(), ev.data() + n, std::greater<double>());
    // trace preservation is asserted on every call
    require(std::abs(ev.sum() - input_trace) <= 1e-8 * std::max(1.0, std::abs(input_trace)),
            Errc::BadInput, "eigenvalue sum drifted from the trace");
    return ev;
}

SpectralReport report_from_spectrum(Eigen::VectorXd ev, double k) {
    SpectralReport r;
    r.k = k;
    r.eigenvalues = std::move(ev);
    const int n = int(r.eigenvalues.size());
    const double tol = 1e-8 * std::max(1.0, std::abs(k));
    int mult_k = 0;
    for (int i = 0; i < n; ++i)
        if (std::abs(r.eigenvalues[i] - k) <= tol)
            ++mult_k;
    r.components = std::max(1, mult_k);
    r.connected = mult_k <= 1;
    r.bipartite = false;
    for (int i = 0; i < n; ++i)
        if (std::abs(r.eigenvalues[i] + k) <= tol)
            r.bipartite = true;
    // drop one copy of k per component, take max |lambda| of the rest
    int dropped = 0;
    double lmax = 0;
    for (int i = 0; i < n; ++i) {
        if (dropped < r.components && std::abs(r.eigenvalues[i] - k) <= tol) {
            ++dropped;
            continue;
        }
        lmax = std::max(lmax, std::abs(r.eigenvalues[i]));
    }
    r.lambda_max_nontrivial = lmax;
    r.ramanujan_bound = k >= 1 ? 2 * std::sqrt(k - 1) : 0;
    r.additive_gap = k - lmax;
    return r;
}

SpectralReport spectral_report(const Eigen::MatrixXd &adjacency) {
    const int n = int(adjacency.rows());
    require(n > 0, Errc::BadInput, "empty graph");
    double k = adjacency.row(0).sum();
    for (int i = 0; i < n; ++i)
        require(std::abs(adjacency.row(i).sum() - k) <= 1e-9 * std::max(1.0, k),
                Errc::NotRegular, "graph is not regular");
    return report_from_spectrum(eigenvalues_symmetric(adjacency), k);
}

SpectralReport spectral_report(const Eigen::MatrixXi &adjacency) {
    return spectral_report(Eigen::MatrixXd(adjacency.cast<double>()));
}

bool nearly_ramanujan_verdict(const SpectralReport &r, double beta, double C) {
    return r.lambda_max_nontrivial <= C * std::pow(r.k, beta);
}

} // namespace isolab
