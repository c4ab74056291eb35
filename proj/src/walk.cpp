#include "isolab/walk.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "isolab/errors.hpp"

namespace isolab {

u64 walk_length_bound(u64 h, u64 S_size, double k, double c) {
    require(S_size >= 1 && S_size <= h, Errc::BadInput, "subset size out of range");
    require(c < k, Errc::SpectralGapZero, "no spectral gap: c >= k");
    double num = std::log(2.0 * double(h) / std::sqrt(double(S_size)));
    double den = std::log(k / std::max(c, 1e-300));
    u64 r = u64(std::max(1.0, std::ceil(num / den)));
    return r;
}

namespace {

struct SlotTable {
    // per vertex: cumulative slot counts and targets
    std::vector<std::vector<std::pair<int, u64>>> rows; // (target, cumulative)
    u64 k = 0;
};

SlotTable build_slots(const Eigen::MatrixXi &A) {
    SlotTable t;
    int n = int(A.rows());
    t.rows.resize(n);
    for (int i = 0; i < n; ++i) {
        u64 cum = 0;
        for (int j = 0; j < n; ++j) {
            int w = A(i, j);
            if (w > 0) {
                cum += u64(w);
                t.rows[i].push_back({j, cum});
            }
        }
        if (i == 0)
            t.k = cum;
        else
            require(cum == t.k, Errc::NotRegular, "walk requires a regular multigraph");
    }
    return t;
}

u64 walk_once(const SlotTable &t, u64 start, u64 r, Rng rng) {
    u64 v = start;
    for (u64 step = 0; step < r; ++step) {
        u64 slot = rng.below(t.k);
        const auto &row = t.rows[v];
        // binary search the cumulative slot table
        size_t lo = 0, hi = row.size() - 1;
        while (lo < hi) {
            size_t mid = (lo + hi) / 2;
            if (row[mid].second > slot)
                hi = mid;
            else
                lo = mid + 1;
        }
        v = u64(row[lo].first);
    }
    return v;
}

} // namespace

WalkReport simulate_hits(const Eigen::MatrixXi &adjacency, u64 start, const std::vector<u64> &S,
                         u64 r, u64 trials, u64 seed, int threads) {
    const u64 h = u64(adjacency.rows());
    require(start < h, Errc::VertexOutOfRange, "start vertex out of range");
    for (u64 v : S)
        require(v < h, Errc::VertexOutOfRange, "subset vertex out of range");
    auto slots = build_slots(adjacency);
    std::vector<char> inS(h, 0);
    for (u64 v : S)
        inS[v] = 1;
    Rng base(seed);
    u64 hits = 0;
    int nthreads = std::max(1, threads);
    if (nthreads == 1 || trials < 1000) {
        for (u64 t = 0; t < trials; ++t)
            hits += inS[walk_once(slots, start, r, base.split(t))];
    } else {
        std::vector<u64> partial(nthreads, 0);
        std::vector<std::thread> pool;
        u64 chunk = (trials + nthreads - 1) / nthreads;
        for (int w = 0; w < nthreads; ++w) {
            pool.emplace_back([&, w] {
                u64 lo = u64(w) * chunk, hi = std::min(trials, lo + chunk);
                u64 acc = 0;
                for (u64 t = lo; t < hi; ++t)
                    acc += inS[walk_once(slots, start, r, base.split(t))];
                partial[w] = acc;
            });
        }
        for (auto &th : pool)
            th.join();
        for (u64 p : partial)
            hits += p; // deterministic merge order
    }
    WalkReport rep;
    rep.h = h;
    rep.S_size = S.size();
    rep.k = double(slots.k);
    rep.r = r;
    rep.trials = trials;
    rep.hits = hits;
    rep.empirical_prob = trials ? double(hits) / double(trials) : 0.0;
    rep.bound_prob = double(S.size()) / (2.0 * double(h));
    return rep;
}

std::pair<bool, WalkReport> verify_mixing(const Eigen::MatrixXi &adjacency,
                                          const SpectralReport &spec, double S_fraction,
                                          u64 trials, u64 seed, int threads) {
    const u64 h = u64(adjacency.rows());
    require(spec.connected, Errc::SpectralGapZero, "mixing check requires a connected graph");
    double c = spec.lambda_max_nontrivial;
    require(c < spec.k, Errc::SpectralGapZero, "no spectral gap: c >= k");
    u64 S_size = std::min<u64>(h, std::max<u64>(1, u64(std::llround(S_fraction * double(h)))));
    Rng rng = Rng::derive(seed, 0x5e7ec7ULL);
    // uniform subset sample without replacement
    std::vector<u64> idx(h);
    for (u64 i = 0; i < h; ++i)
        idx[i] = i;
    for (u64 i = 0; i < S_size; ++i)
        std::swap(idx[i], idx[i + rng.below(h - i)]);
    std::vector<u64> S(idx.begin(), idx.begin() + S_size);
    u64 start = rng.below(h);
    u64 r = walk_length_bound(h, S_size, spec.k, c);
    auto rep = simulate_hits(adjacency, start, S, r, trials, seed, threads);
    rep.c = c;
    double sigma = std::sqrt(rep.bound_prob * (1.0 - rep.bound_prob) / double(trials));
    bool pass = rep.empirical_prob >= rep.bound_prob - 3.0 * sigma;
    return {pass, rep};
}

Eigen::VectorXd exact_walk_distribution(const Eigen::MatrixXi &adjacency, u64 start, u64 r) {
    const int n = int(adjacency.rows());
    require(start < u64(n), Errc::VertexOutOfRange, "start vertex out of range");
    double k = adjacency.row(0).sum();
    Eigen::MatrixXd T = adjacency.cast<double>().transpose() / k; // column-stochastic
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    v[int(start)] = 1.0;
    for (u64 i = 0; i < r; ++i)
        v = T * v;
    return v;
}

} // namespace isolab
