#include "isolab/level.hpp"

#include <atomic>
#include <deque>
#include <sstream>
#include <thread>

namespace isolab {

namespace {

int valuation(u64 n, u64 p) {
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

/// Component explorer for the ell-isogeny graph: caches, per j-invariant, the
/// distinct neighbor j's and the floor distance.
struct Component {
    const PrimeField &F;
    u64 ell;
    std::map<u64, std::vector<u64>> neighbors; // j -> distinct neighbor j's
    std::map<u64, int> dist;                   // j -> distance to the floor

    std::vector<u64> neighbor_js(const Curve<PrimeField> &E) {
        u64 j = j_invariant(E);
        auto it = neighbors.find(j);
        if (it != neighbors.end())
            return it->second;
        std::vector<u64> out;
        for (auto &h : kernel_polynomials(E, ell)) {
            auto phi = velu(E, h, ell);
            out.push_back(j_invariant(phi.codomain));
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        neighbors[j] = out;
        return out;
    }

    u64 edge_count(const Curve<PrimeField> &E) {
        return kernel_polynomials(E, ell).size();
    }
};

Curve<PrimeField> curve_for_j(const PrimeField &F, u64 j, u64 order_hint) {
    auto C = curve_from_j(F, j);
    // pick the twist in the same isogeny class
    if (count_points(C).order != order_hint) {
        C = curve_from_j(F, j, true);
        require(count_points(C).order == order_hint, Errc::BadInput,
                "neither twist matches the isogeny class");
    }
    return C;
}

} // namespace

VolcanoProbe volcano_depth(const Curve<PrimeField> &E, u64 ell) {
    const PrimeField &F = E.field;
    auto inv = curve_invariants(E);
    VolcanoProbe probe;
    probe.ell = ell;
    probe.v_ell_cpi = valuation(inv.c_pi, ell);
    u64 N = count_points(E).order;
    Component comp{F, ell, {}, {}};
    auto self_neighbors = comp.neighbor_js(E);
    if (probe.v_ell_cpi == 0) {
        // single-level in the ell-direction: every edge is horizontal
        probe.depth_below = 0;
        probe.v_ell_cE = 0;
        probe.on_surface = true;
        for (u64 j : self_neighbors)
            probe.neighbors.push_back({j, EdgeDirection::Horizontal});
        return probe;
    }
    // explore the whole ell-component over curves of this point count,
    // tracking per-vertex edge counts; floor vertices have exactly one edge
    std::map<u64, u64> edge_counts;
    std::deque<u64> queue;
    u64 j0 = j_invariant(E);
    queue.push_back(j0);
    std::map<u64, char> seen;
    seen[j0] = 1;
    while (!queue.empty()) {
        u64 j = queue.front();
        queue.pop_front();
        auto C = curve_for_j(F, j, N);
        edge_counts[j] = comp.edge_count(C);
        for (u64 jn : comp.neighbor_js(C))
            if (!seen.count(jn)) {
                seen[jn] = 1;
                queue.push_back(jn);
            }
    }
    // multi-source BFS from the floor
    std::deque<u64> bfs;
    for (auto &[j, cnt] : edge_counts)
        if (cnt == 1) {
            comp.dist[j] = 0;
            bfs.push_back(j);
        }
    require(!bfs.empty(), Errc::BadInput, "volcano component has no floor vertex");
    while (!bfs.empty()) {
        u64 j = bfs.front();
        bfs.pop_front();
        for (u64 jn : comp.neighbors[j])
            if (!comp.dist.count(jn)) {
                comp.dist[jn] = comp.dist[j] + 1;
                bfs.push_back(jn);
            }
    }
    int d = comp.dist.at(j0);
    probe.depth_below = d;
    probe.v_ell_cE = probe.v_ell_cpi - d;
    probe.on_surface = (probe.v_ell_cE == 0);
    for (u64 jn : self_neighbors) {
        int dn = comp.dist.at(jn);
        EdgeDirection dir = dn == d - 1   ? EdgeDirection::Down
                            : dn == d + 1 ? EdgeDirection::Up
                                          : EdgeDirection::Horizontal;
        probe.neighbors.push_back({jn, dir});
    }
    return probe;
}

Curve<PrimeField> navigate_vertical(const Curve<PrimeField> &E, u64 ell, EdgeDirection dir,
                                    int steps) {
    require(dir != EdgeDirection::Horizontal, Errc::BadInput,
            "vertical navigation needs an up or down direction");
    Curve<PrimeField> cur = E;
    for (int s = 0; s < steps; ++s) {
        auto probe = volcano_depth(cur, ell);
        if (dir == EdgeDirection::Down)
            require(probe.depth_below > 0, Errc::AtFloor, "already at the floor");
        else
            require(!probe.on_surface, Errc::AtSurface, "already on the surface");
        bool moved = false;
        for (auto &h : kernel_polynomials(cur, ell)) {
            auto phi = velu(cur, h, ell);
            u64 jn = j_invariant(phi.codomain);
            for (auto &[j, d] : probe.neighbors)
                if (j == jn && d == dir) {
                    phi.codomain.cached_count = cur.cached_count;
                    cur = phi.codomain;
                    moved = true;
                    break;
                }
            if (moved)
                break;
        }
        require(moved, Errc::BadInput, "no vertical edge found despite probe");
    }
    return cur;
}

CpiReport cpi_distribution_experiment(u64 q_min, u64 q_max, u64 sample_count, u64 seed,
                                      u64 factor_budget, int threads) {
    require(q_min >= 5 && q_max >= q_min && q_max <= 1000000000ULL, Errc::BadInput,
            "prime range out of bounds");
    CpiReport rep;
    rep.samples = sample_count;
    rep.rows.resize(sample_count);
    auto run_one = [&](u64 i) {
        Rng rng = Rng::derive(seed, i);
        CpiSample s;
        // random prime in range, then a random curve over it
        for (;;) {
            u64 q = q_min + rng.below(q_max - q_min + 1);
            if (q <= 3 || !is_prime_u64(q))
                continue;
            s.q = q;
            break;
        }
        PrimeField F(s.q);
        auto C = random_curve(F, rng);
        s.a = C.a;
        s.b = C.b;
        auto pc = count_points(C);
        s.t = pc.trace;
        if (pc.trace % i64(s.q) == 0) {
            s.status = "supersingular";
            rep.rows[i] = s;
            return;
        }
        i128 dpi = i128(pc.trace) * pc.trace - i128(4) * s.q;
        s.d_pi = i64(dpi);
        try {
            auto inv = curve_invariants(C, factor_budget);
            s.c_pi = inv.c_pi;
            auto fac = factor_int(inv.c_pi, factor_budget);
            s.P_c_pi = u64(largest_prime_factor(fac));
            s.status = "ok";
        } catch (const Error &e) {
            if (e.code() != Errc::FactorizationTimeout)
                throw;
            s.status = "factor_timeout";
        }
        rep.rows[i] = s;
    };
    int nthreads = std::max(1, threads);
    if (nthreads == 1 || sample_count < 64) {
        for (u64 i = 0; i < sample_count; ++i)
            run_one(i);
    } else {
        std::vector<std::thread> pool;
        std::atomic<u64> next{0};
        for (int w = 0; w < nthreads; ++w)
            pool.emplace_back([&] {
                for (u64 i = next.fetch_add(1); i < sample_count; i = next.fetch_add(1))
                    run_one(i);
            });
        for (auto &th : pool)
            th.join();
    }
    u64 c1 = 0, sf = 0;
    std::map<u64, u64> exceed;
    std::vector<u64> betas = {2, 3, 5, 10, 20, 50};
    for (auto &s : rep.rows) {
        if (s.status == "supersingular") {
            ++rep.supersingular;
            continue;
        }
        if (s.status == "factor_timeout") {
            ++rep.factor_timeout;
            continue;
        }
        ++rep.ok;
        if (s.c_pi == 1)
            ++c1;
        // squarefree d_pi means the full square part of |d_pi| is trivial
        if (s.c_pi == 1 && (((s.d_pi % 4) + 4) % 4) == 1)
            ++sf;
        for (u64 beta : betas)
            if (s.P_c_pi > beta)
                ++exceed[beta];
    }
    if (rep.ok) {
        rep.frac_c_pi_one = double(c1) / double(rep.ok);
        rep.frac_squarefree_dpi = double(sf) / double(rep.ok);
        for (u64 beta : betas)
            rep.prob_P_exceeds[beta] = double(exceed[beta]) / double(rep.ok);
    }
    return rep;
}

LevelGraph build_level_graph(const Curve<PrimeField> &E, const std::vector<u64> &primes,
                             u64 max_vertices) {
    const PrimeField &F = E.field;
    auto inv = curve_invariants(E);
    for (u64 ell : primes)
        require(inv.c_pi % ell != 0 && ell != F.modulus(), Errc::BadInput,
                "level graph primes must be coprime to c_pi and the characteristic");
    LevelGraph G;
    G.primes = primes;
    std::map<u64, size_t> index;
    std::vector<Curve<PrimeField>> reps;
    auto add_vertex = [&](const Curve<PrimeField> &C) {
        u64 j = j_invariant(C);
        auto it = index.find(j);
        if (it != index.end())
            return it->second;
        size_t idx = G.j_invariants.size();
        index[j] = idx;
        G.j_invariants.push_back(j);
        reps.push_back(C);
        require(G.j_invariants.size() <= max_vertices, Errc::ClassNumberTooLarge,
                "level closure exceeded the vertex cap");
        return idx;
    };
    add_vertex(E);
    std::vector<std::map<size_t, int>> edges;
    for (size_t i = 0; i < reps.size(); ++i) {
        auto C = reps[i];
        C.cached_count = E.cached_count;
        edges.push_back({});
        for (u64 ell : primes) {
            for (auto &h : kernel_polynomials(C, ell)) {
                auto phi = velu(C, h, ell);
                phi.codomain.cached_count = C.cached_count;
                size_t t = add_vertex(phi.codomain);
                edges[i][t] += 1;
            }
        }
    }
    size_t n = G.j_invariants.size();
    G.adjacency = Eigen::MatrixXi::Zero(int(n), int(n));
    for (size_t i = 0; i < n; ++i)
        for (auto &[t, w] : edges[i])
            G.adjacency(int(i), int(t)) = w;
    for (size_t i = 0; i < n; ++i) {
        if (i == 0)
            G.degree = u64(G.adjacency.row(0).sum());
        require(u64(G.adjacency.row(int(i)).sum()) == G.degree, Errc::BadInput,
                "level graph is not regular");
    }
    require((G.adjacency - Eigen::MatrixXi(G.adjacency.transpose())).cwiseAbs().maxCoeff() == 0,
            Errc::BadInput, "level graph adjacency must be symmetric");
    return G;
}

std::string cpi_csv(const CpiReport &report) {
    std::ostringstream os;
    os << "q,a,b,t,d_pi,c_pi,P_c_pi,status\n";
    for (auto &s : report.rows)
        os << s.q << ',' << s.a << ',' << s.b << ',' << s.t << ',' << s.d_pi << ',' << s.c_pi
           << ',' << s.P_c_pi << ',' << s.status << '\n';
    return os.str();
}

} // namespace isolab
