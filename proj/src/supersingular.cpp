#include "isolab/supersingular.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>

namespace isolab {

u64 find_supersingular_seed(u64 p) {
    require(p > 3 && p <= 5000 && is_prime_u64(p), Errc::BadInput,
            "seed search supports primes in (3, 5000]");
    PrimeField F(p);
    for (u64 j = 0; j < p; ++j) {
        auto C = curve_from_j(F, j);
        if (count_points(C).trace % i64(p) == 0)
            return j;
    }
    fail(Errc::SeedNotFound, "no supersingular j-invariant found");
}

bool is_supersingular_j(const QuadExtField &F, Fp2 j) {
    u64 p = F.characteristic();
    auto C = curve_from_j(F, j);
    // fast filter: a random point killed by (p+1)^2 or (p-1)^2
    Rng rng(F.hash(j) ^ 0x55aa55aaULL);
    u64 np = (p + 1) * (p + 1), nm = (p - 1) * (p - 1);
    auto P = random_point(C, rng);
    if (!scalar_mul(C, i128(np), P).inf && !scalar_mul(C, i128(nm), P).inf)
        return false;
    // confirm with an exact count
    auto pc = count_points(C);
    return pc.trace % i64(p) == 0;
}

std::vector<Fp2> enumerate_supersingular(u64 p) {
    u64 seed = find_supersingular_seed(p);
    PrimeField Fp_(p);
    QuadExtField F(Fp_);
    const auto &db = ModPolyDB::bundled();
    auto cmp = [&](const Fp2 &a, const Fp2 &b) { return F.hash(a) < F.hash(b); };
    std::vector<Fp2> verts;
    std::deque<Fp2> queue;
    auto seen = [&](const Fp2 &j) {
        return std::any_of(verts.begin(), verts.end(), [&](const Fp2 &v) { return F.eq(v, j); });
    };
    queue.push_back(F.embed(seed));
    verts.push_back(F.embed(seed));
    while (!queue.empty()) {
        Fp2 j = queue.front();
        queue.pop_front();
        for (auto &jn : modular_neighbors(F, j, 2, db)) {
            if (!seen(jn)) {
                verts.push_back(jn);
                queue.push_back(jn);
            }
        }
    }
    std::sort(verts.begin(), verts.end(), cmp);
    return verts;
}

SSGraph build_ss_graph(u64 p, u64 ell) {
    require(ell != p, Errc::BadInput, "ell must differ from the characteristic");
    const auto &db = ModPolyDB::bundled();
    require(db.has(ell), Errc::UnsupportedLevel, "no bundled modular polynomial for ell");
    SSGraph G;
    G.p = p;
    G.ell = ell;
    G.vertices = enumerate_supersingular(p);
    PrimeField Fp_(p);
    QuadExtField F(Fp_);
    int n = int(G.vertices.size());
    G.adjacency = Eigen::MatrixXi::Zero(n, n);
    auto index_of = [&](const Fp2 &j) {
        for (int i = 0; i < n; ++i)
            if (F.eq(G.vertices[i], j))
                return i;
        fail(Errc::BadInput, "neighbor outside the supersingular vertex set");
    };
    for (int i = 0; i < n; ++i) {
        auto nb = modular_neighbors(F, G.vertices[i], ell, db);
        require(nb.size() == ell + 1, Errc::BadInput,
                "modular polynomial does not split over F_{p^2}");
        for (auto &jn : nb)
            G.adjacency(i, index_of(jn)) += 1;
    }
    u64 j1728 = 1728 % p;
    for (auto &v : G.vertices) {
        bool is0 = F.is_zero(v);
        bool is1728 = (v.b == 0 && v.a == j1728);
        G.e_weights.push_back(is0 ? 6 : is1728 ? 4 : 2);
    }
    for (int i = 0; i < n; ++i)
        require(G.adjacency.row(i).sum() == int(ell) + 1, Errc::BadInput,
                "row regularity violated");
    return G;
}

SSVerdict ss_spectral_check(const SSGraph &G) {
    SSVerdict v;
    int n = int(G.vertices.size());
    Eigen::MatrixXd A = G.adjacency.cast<double>();
    v.symmetric = (G.adjacency - Eigen::MatrixXi(G.adjacency.transpose())).cwiseAbs().maxCoeff() == 0;
    Eigen::MatrixXd S = A;
    if (!v.symmetric) {
        // similarity transform with diagonal weights sqrt(e_j): restores
        // symmetry because e_j A_ij = e_i A_ji for these multiplicities
        Eigen::VectorXd w(n);
        for (int i = 0; i < n; ++i)
            w[i] = std::sqrt(double(G.e_weights[i]));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                S(i, j) = A(i, j) * w[j] / w[i];
    }
    v.symmetrization_residual = (S - S.transpose().eval()).cwiseAbs().maxCoeff();
    require(v.symmetrization_residual <= 1e-9, Errc::NotSymmetric,
            "weighted symmetrization failed");
    Eigen::MatrixXd Ssym = 0.5 * (S + S.transpose().eval());
    auto ev = eigenvalues_symmetric(Ssym);
    v.report = report_from_spectrum(ev, double(G.ell + 1));
    v.ramanujan = v.report.lambda_max_nontrivial <= 2 * std::sqrt(double(G.ell)) + 1e-6;
    return v;
}

} // namespace isolab
