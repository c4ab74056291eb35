#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "isolab/classgroup.hpp"

using namespace isolab;

TEST_CASE("reduction and composition fixed examples for D = -23") {
    QuadForm f{1, 1, 6};
    CHECK(reduce_form(f) == f);
    QuadForm g{2, 1, 3}, ginv{2, -1, 3};
    CHECK(compose(g, ginv) == QuadForm{1, 1, 6});
    CHECK(compose(principal_form(-23), g) == reduce_form(g));
    CHECK(inverse_form(g) == ginv);
}

TEST_CASE("enumeration fixed examples") {
    auto G23 = ClassGroup::enumerate(-23);
    CHECK(G23.order() == 3);
    REQUIRE(G23.elements().size() == 3);
    CHECK(G23.element(0) == QuadForm{1, 1, 6});
    CHECK(G23.element(1) == QuadForm{2, -1, 3});
    CHECK(G23.element(2) == QuadForm{2, 1, 3});
    CHECK(G23.unit_count() == 2);

    auto G4 = ClassGroup::enumerate(-4);
    CHECK(G4.order() == 1);
    CHECK(G4.element(0) == QuadForm{1, 0, 1});
    CHECK(G4.unit_count() == 4);

    auto G3 = ClassGroup::enumerate(-3);
    CHECK(G3.order() == 1);
    CHECK(G3.element(0) == QuadForm{1, 1, 1});
    CHECK(G3.unit_count() == 6);
}

TEST_CASE("composition closure and associativity, exhaustive |D| <= 500") {
    for (i64 D = -3; D >= -500; --D) {
        if ((((D % 4) + 4) % 4) > 1)
            continue;
        auto G = ClassGroup::enumerate(D);
        size_t h = G.order();
        for (size_t i = 0; i < h; ++i) {
            CHECK(G.mul(i, G.identity_index()) == i);
            CHECK(G.mul(i, G.inv(i)) == G.identity_index());
            for (size_t j = 0; j < h; ++j) {
                size_t ij = G.mul(i, j);
                CHECK(ij < h); // closure
                CHECK(G.mul(j, i) == ij);
                for (size_t k = 0; k < h; ++k)
                    CHECK(G.mul(ij, k) == G.mul(i, G.mul(j, k)));
            }
        }
        i64 prod = 1;
        for (i64 d : G.factor_orders())
            prod *= d;
        CHECK(u64(prod) == h);
    }
}

TEST_CASE("characters: triviality, values, orthogonality") {
    auto G = ClassGroup::enumerate(-23);
    auto chars = characters(G);
    REQUIRE(chars.size() == 3);
    CHECK(chars[0].is_trivial());
    for (size_t i = 0; i < 3; ++i)
        CHECK(std::abs(chars[0].value(i) - std::complex<double>(1, 0)) < 1e-12);
    // nontrivial character takes a primitive cube root of unity on (2,1,3)
    size_t gidx = G.index_of(QuadForm{2, 1, 3});
    for (size_t c = 1; c < 3; ++c) {
        auto v = chars[c].value(gidx);
        CHECK(std::abs(v - std::complex<double>(1, 0)) > 0.5);
        CHECK(std::abs(std::pow(v, 3) - std::complex<double>(1, 0)) < 1e-9);
    }
    for (i64 D : {-23LL, -47LL, -84LL, -163LL, -231LL, -407LL}) {
        auto Gd = ClassGroup::enumerate(D);
        auto ch = characters(Gd);
        size_t h = Gd.order();
        for (size_t a = 0; a < h; ++a)
            for (size_t b = 0; b < h; ++b) {
                std::complex<double> s = 0;
                for (size_t i = 0; i < h; ++i)
                    s += ch[a].value(i) * std::conj(ch[b].value(i));
                double want = (a == b) ? double(h) : 0.0;
                CHECK(std::abs(s - want) < 1e-9);
            }
        for (size_t a = 0; a < std::min<size_t>(h, 4); ++a)
            for (size_t i = 0; i < h; ++i)
                for (size_t j = 0; j < h; ++j) {
                    auto lhs = ch[a].value(Gd.mul(i, j));
                    auto rhs = ch[a].value(i) * ch[a].value(j);
                    CHECK(std::abs(lhs - rhs) < 1e-9);
                }
    }
}

TEST_CASE("prime forms") {
    auto g2 = prime_form(-23, 2);
    REQUIRE(g2.has_value());
    CHECK(g2->paired);
    bool is_either = g2->form == QuadForm{2, 1, 3} || g2->form == QuadForm{2, -1, 3};
    CHECK(is_either);
    auto g5 = prime_form(-23, 5);
    CHECK(g5.has_value() == (kronecker(-23, 5) != -1));
    // ramified prime not dividing the conductor: one self-paired generator
    auto g3 = prime_form(-15, 3);
    REQUIRE(g3.has_value());
    CHECK(!g3->paired);
    CHECK(compose(g3->form, g3->form) == principal_form(-15));
    // conductor primes excluded: D = -12 = 2^2 * (-3)
    CHECK(!prime_form(-12, 2).has_value());
    // inert prime: absent
    CHECK(!prime_form(-23, 7).has_value());
    CHECK(kronecker(-23, 7) == -1);
}

TEST_CASE("theta coefficients for D = -23") {
    auto G = ClassGroup::enumerate(-23);
    CHECK(theta_coefficient(G, QuadForm{1, 1, 6}, 0) == 0);
    CHECK(theta_coefficient(G, QuadForm{1, 1, 6}, 2) == 0);
    CHECK(theta_coefficient(G, QuadForm{2, 1, 3}, 2) == 1);
    CHECK(theta_coefficient(G, QuadForm{1, 1, 6}, 1) == 1);
    // totals across classes match a brute lattice scan
    for (u64 n = 1; n <= 50; ++n) {
        u64 total = 0;
        for (auto &f : G.elements())
            total += theta_coefficient(G, f, n);
        u64 brute = 0;
        for (i64 x = -60; x <= 60; ++x)
            for (i64 y = -60; y <= 60; ++y)
                for (auto &f : G.elements()) {
                    i128 v = i128(f.a) * x * x + i128(f.b) * x * y + i128(f.c) * y * y;
                    if (v == i128(n))
                        brute++;
                }
        CHECK(total == brute / 2); // e = 2
    }
}

TEST_CASE("cayley graph fixed examples") {
    auto G = ClassGroup::enumerate(-23);
    auto C = build_cayley_graph(G, 2);
    CHECK(C.adjacency.rows() == 3);
    CHECK(C.degree == 2);
    for (int i = 0; i < 3; ++i) {
        CHECK(C.adjacency.row(i).sum() == 2);
        CHECK(C.adjacency(i, i) == 0);
    }
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j)
                CHECK(C.adjacency(i, j) == 1);

    auto C1 = build_cayley_graph(G, 1);
    CHECK(C1.degree == 0);
    CHECK(C1.adjacency.cwiseAbs().sum() == 0);

    auto G4 = ClassGroup::enumerate(-4);
    auto C4 = build_cayley_graph(G4, 10);
    CHECK(C4.adjacency.rows() == 1);
    CHECK(u64(C4.adjacency(0, 0)) == C4.degree); // every generator slot loops
}

TEST_CASE("cayley adjacency equals the sum of prime theta matrices") {
    Rng rng(31);
    int sampled = 0;
    for (i64 D = -15; D >= -400 && sampled < 20; --D) {
        if ((((D % 4) + 4) % 4) > 1)
            continue;
        u64 m = 2 + rng.below(40);
        auto G = ClassGroup::enumerate(D);
        auto C = build_cayley_graph(G, m);
        size_t h = G.order();
        Eigen::MatrixXi sum = Eigen::MatrixXi::Zero(int(h), int(h));
        for (u64 ell : primes_up_to(m))
            for (size_t i = 0; i < h; ++i)
                for (size_t j = 0; j < h; ++j) {
                    size_t ratio = G.mul(G.inv(i), j);
                    sum(int(i), int(j)) += int(theta_coefficient(G, G.element(ratio), ell));
                }
        CHECK((C.adjacency - sum).cwiseAbs().maxCoeff() == 0);
        ++sampled;
    }
    CHECK(sampled == 20);
}

TEST_CASE("class number formula cross-check on sampled discriminants") {
    // Dirichlet: for fundamental D < -4,  h = |sum_{0<k<|D|} chi_D(k) k| / |D|
    int checked = 0;
    for (i64 D = -7; D >= -2500 && checked < 50; --D) {
        if ((((D % 4) + 4) % 4) > 1)
            continue;
        auto G = ClassGroup::enumerate(D);
        if (G.conductor() != 1 || D >= -4)
            continue;
        i128 s = 0;
        for (i64 k = 1; k < -D; ++k)
            s += i128(k) * kronecker(D, u64(k));
        i64 hf = i64((s < 0 ? -s : s) / (-i128(D)));
        CHECK(u64(hf) == G.order());
        ++checked;
    }
    CHECK(checked == 50);
    // non-maximal orders: h(c^2 dK) = h(dK) c prod_{p | c} (1 - (dK/p)/p)
    for (i64 dK : {-7LL, -8LL, -23LL, -47LL}) {
        for (i64 c : {2LL, 3LL, 5LL, 6LL}) {
            i64 D = dK * c * c;
            auto G = ClassGroup::enumerate(D);
            auto GK = ClassGroup::enumerate(dK);
            double expect = double(GK.order()) * double(c);
            for (i64 p : {2LL, 3LL, 5LL})
                if (c % p == 0)
                    expect *= 1.0 - double(kronecker(dK, u64(p))) / double(p);
            CHECK(double(G.order()) == doctest::Approx(expect).epsilon(1e-9));
        }
    }
}

TEST_CASE("errors: mismatched discriminants and oversized class numbers") {
    CHECK_THROWS_AS(compose(QuadForm{1, 1, 6}, QuadForm{1, 0, 1}), Error);
    CHECK_THROWS_AS(ClassGroup::enumerate(-100003, 2), Error);
}
