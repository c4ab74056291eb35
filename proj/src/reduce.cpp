#include "isolab/reduce.hpp"

#include <cmath>
#include <unordered_map>

#include "isolab/level.hpp"
#include "isolab/walk.hpp"

namespace isolab {

std::optional<u64> Oracle::query(const DlogInstance &inst) {
    ++queries;
    if (!accepts(j_invariant(inst.curve)))
        return std::nullopt;
    return dlog_bsgs(inst);
}

u64 dlog_bsgs(const DlogInstance &inst) {
    const auto &C = inst.curve;
    const PrimeField &F = C.field;
    require(inst.n >= 1 && inst.n <= 1000000000000ULL, Errc::BadInput,
            "group order out of solver range");
    require(is_on_curve(C, inst.P) && is_on_curve(C, inst.Q), Errc::PointNotOnCurve,
            "instance points must lie on the curve");
    if (inst.Q.inf)
        return 0;
    u64 m = u64(std::ceil(std::sqrt(double(inst.n))));
    std::unordered_map<u64, std::vector<std::pair<u64, Point<PrimeField>>>> baby;
    Point<PrimeField> bj = Point<PrimeField>::infinity();
    for (u64 j = 0; j < m; ++j) {
        baby[bj.inf ? ~u64(0) : F.hash(bj.x)].push_back({j, bj});
        bj = point_add(C, bj, inst.P);
    }
    Point<PrimeField> giant = point_neg(C, scalar_mul(C, i128(m), inst.P));
    Point<PrimeField> cur = inst.Q;
    for (u64 i = 0; i * m < inst.n + m; ++i) {
        auto it = baby.find(cur.inf ? ~u64(0) : F.hash(cur.x));
        if (it != baby.end()) {
            for (auto &[j, B] : it->second) {
                bool match = cur.inf ? B.inf
                                     : (!B.inf && F.eq(B.x, cur.x) && F.eq(B.y, cur.y));
                if (match) {
                    u64 x = (i * m + j) % inst.n;
                    auto check = scalar_mul(C, i128(x), inst.P);
                    if (!check.inf && !inst.Q.inf && F.eq(check.x, inst.Q.x) &&
                        F.eq(check.y, inst.Q.y))
                        return x;
                    if (check.inf && inst.Q.inf)
                        return x;
                }
            }
        }
        cur = point_add(C, cur, giant);
    }
    fail(Errc::NotInSubgroup, "target not in the subgroup generated by P");
}

DlogInstance transport(const Isogeny<PrimeField> &phi, const DlogInstance &inst) {
    require(inst.n % phi.ell != 0, Errc::KernelMeetsSubgroup,
            "isogeny degree divides the instance order");
    DlogInstance out{phi.codomain, push_point(phi, inst.P), push_point(phi, inst.Q), inst.n};
    out.curve.cached_count = inst.curve.cached_count;
    return out;
}

DlogInstance make_instance(const Curve<PrimeField> &C, Rng &rng) {
    auto N = count_points(C).order;
    auto P = random_point(C, rng);
    u64 n = point_order(C, P, N);
    u64 x = rng.below(n);
    return {C, P, scalar_mul(C, i128(x), P), n};
}

namespace {

u64 fnv_hash_poly(const PrimeField &F, const Poly<PrimeField> &h) {
    u64 acc = 1469598103934665603ULL;
    for (auto c : h.c) {
        acc ^= F.hash(c);
        acc *= 1099511628211ULL;
    }
    return acc;
}

} // namespace

ReductionTranscript random_reduce(const DlogInstance &inst, Oracle &oracle, u64 m,
                                  u64 max_queries, u64 seed) {
    const PrimeField &F = inst.curve.field;
    auto inv = curve_invariants(inst.curve);
    // level discriminant: probe the conductor valuations at primes of c_pi
    i64 cE = 1;
    {
        auto fac = factor_int(inv.c_pi);
        for (auto [p, e] : fac.factors) {
            auto probe = volcano_depth(inst.curve, u64(p));
            for (int t = 0; t < probe.v_ell_cE; ++t)
                cE *= i64(u64(p));
        }
    }
    i64 D_level = inv.d_K * cE * cE;
    auto G = ClassGroup::enumerate(D_level);
    // admissible walk primes: split, coprime to both the instance order and
    // c_pi (so every chosen edge is horizontal without extra probing)
    std::vector<u64> walk_primes;
    for (u64 ell : primes_up_to(m)) {
        if (inst.n % ell == 0 || inv.c_pi % ell == 0)
            continue;
        if (ell == F.modulus())
            continue;
        if (kronecker(D_level, ell) != 1)
            continue;
        walk_primes.push_back(ell);
    }
    require(!walk_primes.empty(), Errc::BadInput, "no admissible walk primes below m");
    // mixing length from the class-group model with the same generator set
    Eigen::MatrixXi A = Eigen::MatrixXi::Zero(int(G.order()), int(G.order()));
    u64 k = 0;
    for (u64 ell : walk_primes) {
        auto gen = prime_form(D_level, ell);
        require(gen.has_value() && gen->paired, Errc::BadInput, "split prime without a form");
        size_t gi = G.index_of(gen->form);
        for (size_t v = 0; v < G.order(); ++v) {
            A(int(v), int(G.mul(v, gi))) += 1;
            A(int(v), int(G.mul(v, G.inv(gi)))) += 1;
        }
        k += 2;
    }
    auto spec = spectral_report(A);
    require(spec.connected, Errc::SpectralGapZero, "level graph disconnected for these primes");
    double c = spec.lambda_max_nontrivial;
    require(c < spec.k, Errc::SpectralGapZero, "no spectral gap on the level graph");
    u64 S_size = std::max<u64>(1, G.order() / 4);
    u64 walk_len = walk_length_bound(G.order(), S_size, spec.k, c);
    ReductionTranscript tr;
    tr.walk_length = walk_len;
    tr.level_h = G.order();
    tr.level_c = c;
    tr.level_k = spec.k;
    Rng rng(seed);
    for (u64 attempt = 0; attempt < max_queries; ++attempt) {
        DlogInstance cur = inst;
        std::vector<WalkStep> steps;
        if (attempt > 0) {
            // fresh random walk from the original curve
            for (u64 s = 0; s < walk_len; ++s) {
                u64 ell = walk_primes[rng.below(walk_primes.size())];
                auto kernels = kernel_polynomials(cur.curve, ell);
                require(kernels.size() == 2, Errc::BadInput,
                        "split horizontal prime must give exactly two kernels");
                auto &h = kernels[rng.below(2)];
                auto phi = velu(cur.curve, h, ell);
                cur = transport(phi, cur);
                steps.push_back({ell, fnv_hash_poly(F, h), j_invariant(cur.curve)});
            }
        }
        auto ans = oracle.query(cur);
        tr.queries = oracle.queries;
        if (ans) {
            // verify against the original instance; transport preserves x
            u64 x = *ans % inst.n;
            auto chk = scalar_mul(inst.curve, i128(x), inst.P);
            bool ok = chk.inf ? inst.Q.inf
                              : (!inst.Q.inf && F.eq(chk.x, inst.Q.x) && F.eq(chk.y, inst.Q.y));
            require(ok, Errc::BadInput, "oracle answer failed verification");
            tr.success = true;
            tr.recovered_x = x;
            tr.walk = std::move(steps);
            return tr;
        }
    }
    fail(Errc::QueryBudgetExhausted, "oracle query budget exhausted");
}

} // namespace isolab
