#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "isolab/level.hpp"

using namespace isolab;

namespace {

int val(u64 n, u64 p) {
    int v = 0;
    while (n % p == 0 && n > 0) {
        n /= p;
        ++v;
    }
    return v;
}

u64 theorem_total(i64 D_level, u64 ell, int v_cE, int v_cpi) {
    // direction-classification totals for the ell-isogeny count
    if (v_cE == 0) {
        u64 horiz = u64(1 + kronecker(D_level, ell));
        return horiz + ((v_cpi > 0) ? (ell - kronecker(D_level, ell)) : 0);
    }
    return 1 + ((v_cE < v_cpi) ? ell : 0);
}

} // namespace

TEST_CASE("single-level probes: every edge horizontal, count 1 + (D/ell)") {
    Rng rng(61);
    PrimeField F(10007);
    int done = 0;
    while (done < 25) {
        auto C = random_curve(F, rng);
        if (count_points(C).trace == 0)
            continue;
        auto inv = curve_invariants(C);
        for (u64 ell : {2ULL, 3ULL, 5ULL}) {
            if (inv.c_pi % ell == 0)
                continue;
            auto probe = volcano_depth(C, ell);
            CHECK(probe.depth_below == 0);
            CHECK(probe.v_ell_cE == 0);
            CHECK(probe.on_surface);
            for (auto &[j, dir] : probe.neighbors)
                CHECK(dir == EdgeDirection::Horizontal);
            // ell coprime to c_pi: the symbol against d_pi decides the count
            u64 expected = u64(1 + kronecker(inv.d_pi, ell));
            CHECK(kernel_polynomials(C, ell).size() == expected);
        }
        ++done;
    }
}

TEST_CASE("probe totals match the direction classification") {
    Rng rng(62);
    for (u64 q : {10007ULL, 40009ULL}) {
        PrimeField F(q);
        int done = 0;
        while (done < 40) {
            auto C = random_curve(F, rng);
            if (count_points(C).trace == 0)
                continue;
            auto inv = curve_invariants(C);
            u64 j = j_invariant(C);
            if (j == 0 || j == F.from_int(1728))
                continue;
            for (u64 ell : {2ULL, 3ULL}) {
                auto probe = volcano_depth(C, ell);
                int v_cpi = val(inv.c_pi, ell);
                CHECK(probe.v_ell_cpi == v_cpi);
                CHECK(probe.depth_below == v_cpi - probe.v_ell_cE);
                // level discriminant: d_K * c_E^2 where only the ell-part of
                // c_E matters for the symbol
                i64 cE_ell = 1;
                for (int t = 0; t < probe.v_ell_cE; ++t)
                    cE_ell *= i64(ell);
                i64 D_level = inv.d_K * cE_ell * cE_ell;
                u64 total = kernel_polynomials(C, ell).size();
                CHECK(total == theorem_total(D_level, ell, probe.v_ell_cE, v_cpi));
            }
            ++done;
        }
    }
}

TEST_CASE("navigation: down to the floor then up restores the level") {
    Rng rng(63);
    PrimeField F(10007);
    int done = 0;
    while (done < 6) {
        auto C = random_curve(F, rng);
        if (count_points(C).trace == 0)
            continue;
        auto inv = curve_invariants(C);
        u64 ell = 2;
        if (inv.c_pi % ell != 0)
            continue;
        auto probe = volcano_depth(C, ell);
        if (probe.depth_below == 0) {
            // at the floor already: descending raises
            CHECK_THROWS_AS(navigate_vertical(C, ell, EdgeDirection::Down, 1), Error);
        } else {
            auto floor = navigate_vertical(C, ell, EdgeDirection::Down, probe.depth_below);
            auto fprobe = volcano_depth(floor, ell);
            CHECK(fprobe.depth_below == 0);
            CHECK_THROWS_AS(navigate_vertical(floor, ell, EdgeDirection::Down, 1), Error);
            auto up = navigate_vertical(floor, ell, EdgeDirection::Up, probe.depth_below);
            auto uprobe = volcano_depth(up, ell);
            CHECK(uprobe.v_ell_cE == probe.v_ell_cE); // same level, j may differ
            CHECK(uprobe.on_surface == probe.on_surface);
            if (uprobe.on_surface)
                CHECK_THROWS_AS(navigate_vertical(up, ell, EdgeDirection::Up, 1), Error);
        }
        ++done;
    }
    // steps = 0 is the identity
    auto C = random_curve(F, rng);
    while (count_points(C).trace == 0)
        C = random_curve(F, rng);
    auto same = navigate_vertical(C, 3, EdgeDirection::Down, 0);
    CHECK(j_invariant(same) == j_invariant(C));
}

TEST_CASE("horizontal edges preserve the level valuations") {
    Rng rng(64);
    PrimeField F(10007);
    int done = 0;
    while (done < 10) {
        auto C = random_curve(F, rng);
        if (count_points(C).trace == 0)
            continue;
        auto inv = curve_invariants(C);
        for (u64 ell : {3ULL, 5ULL}) {
            if (inv.c_pi % ell == 0 || kronecker(inv.d_pi, ell) != 1)
                continue;
            for (auto &h : kernel_polynomials(C, ell)) {
                auto phi = velu(C, h, ell);
                phi.codomain.cached_count = C.cached_count;
                for (u64 ell2 : {2ULL, 3ULL}) {
                    if (inv.c_pi % ell2 != 0)
                        continue;
                    auto p1 = volcano_depth(C, ell2);
                    auto p2 = volcano_depth(phi.codomain, ell2);
                    CHECK(p1.v_ell_cE == p2.v_ell_cE);
                }
            }
        }
        ++done;
    }
}

TEST_CASE("cpi distribution experiment: degenerate and small runs") {
    auto rep0 = cpi_distribution_experiment(1000, 2000, 0, 5);
    CHECK(rep0.samples == 0);
    CHECK(rep0.rows.empty());

    auto rep = cpi_distribution_experiment(10000, 50000, 300, 7, 1000000, 2);
    CHECK(rep.ok + rep.supersingular + rep.factor_timeout == 300);
    CHECK(rep.ok > 250);
    // every ok row satisfies the defining identities
    for (auto &s : rep.rows) {
        if (s.status != "ok")
            continue;
        CHECK(i128(s.t) * s.t - i128(4) * s.q == i128(s.d_pi));
        u64 P = s.P_c_pi;
        if (s.c_pi == 1)
            CHECK(P == 1);
        else
            CHECK(s.c_pi % P == 0);
    }
    // determinism
    auto rep2 = cpi_distribution_experiment(10000, 50000, 300, 7, 1000000, 4);
    CHECK(cpi_csv(rep) == cpi_csv(rep2));
}
